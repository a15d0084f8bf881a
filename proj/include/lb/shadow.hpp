// Copyright 2026 The latblossom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LB_SHADOW_HPP
#define LB_SHADOW_HPP

#include <cstdint>
#include <vector>

#include "lb/lattice.hpp"

namespace lb {

enum class ShadowClass : uint8_t { Unshadowed, Shadowed, DeeplyShadowed };

/// Point (row, col) in the check-coordinate plane; may lie outside the grid.
struct PlanePoint {
    int row = 0;
    int col = 0;
};

inline int manhattan(PlanePoint a, PlanePoint b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

// A point x is in shadow from viewpoint v iff some vertex u (u != v, u != x)
// lies on a minimum-length path from v to x. In the L1 metric that is exactly
// membership of u in the axis-aligned bounding box of {v, x}, which turns the
// existence test into a rectangle count over the vertex set.
class ShadowOracle {
  public:
    ShadowOracle(const std::vector<CheckCoord>& vertices, int d)
        : d_(d), rows_(d - 1), cols_(d), prefix_((rows_ + 1) * (cols_ + 1), 0) {
        for (CheckCoord c : vertices) prefix_[(c.row + 1) * (cols_ + 1) + (c.col + 1)] += 1;
        for (int i = 1; i <= rows_; ++i)
            for (int j = 1; j <= cols_; ++j)
                prefix_[i * (cols_ + 1) + j] += prefix_[(i - 1) * (cols_ + 1) + j] +
                                                prefix_[i * (cols_ + 1) + (j - 1)] -
                                                prefix_[(i - 1) * (cols_ + 1) + (j - 1)];
    }

    bool is_vertex(PlanePoint p) const {
        if (p.row < 0 || p.row >= rows_ || p.col < 0 || p.col >= cols_) return false;
        return box_count(p.row, p.col, p.row, p.col) > 0;
    }

    bool in_shadow(PlanePoint view, PlanePoint x) const {
        int r0 = std::min(view.row, x.row), r1 = std::max(view.row, x.row);
        int c0 = std::min(view.col, x.col), c1 = std::max(view.col, x.col);
        int count = box_count(r0, c0, r1, c1);
        if (is_vertex(view)) count -= 1;
        if (is_vertex(x)) count -= 1;
        return count > 0;
    }

    ShadowClass classify(PlanePoint view, PlanePoint target) const {
        if (!in_shadow(view, target)) return ShadowClass::Unshadowed;
        static constexpr int dr[4] = {-1, 1, 0, 0};
        static constexpr int dc[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k)
            if (!in_shadow(view, {target.row + dr[k], target.col + dc[k]}))
                return ShadowClass::Shadowed;
        return ShadowClass::DeeplyShadowed;
    }

  private:
    int box_count(int r0, int c0, int r1, int c1) const {
        r0 = std::max(r0, 0);
        c0 = std::max(c0, 0);
        r1 = std::min(r1, rows_ - 1);
        c1 = std::min(c1, cols_ - 1);
        if (r0 > r1 || c0 > c1) return 0;
        return prefix_[(r1 + 1) * (cols_ + 1) + (c1 + 1)] -
               prefix_[r0 * (cols_ + 1) + (c1 + 1)] - prefix_[(r1 + 1) * (cols_ + 1) + c0] +
               prefix_[r0 * (cols_ + 1) + c0];
    }

    int d_;
    int rows_;
    int cols_;
    std::vector<int32_t> prefix_;
};

/// Classify every vertex of `others` as seen from `view`.
inline std::vector<ShadowClass> shadow_classify(CheckCoord view,
                                                const std::vector<CheckCoord>& others, int d) {
    std::vector<CheckCoord> all(others);
    all.push_back(view);
    ShadowOracle oracle(all, d);
    std::vector<ShadowClass> out;
    out.reserve(others.size());
    for (CheckCoord c : others)
        out.push_back(oracle.classify({view.row, view.col}, {c.row, c.col}));
    return out;
}

}  // namespace lb

#endif

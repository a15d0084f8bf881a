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

#include "lb/shadow.hpp"

#include <vector>

#include "gtest/gtest.h"
#include "lb/rng.hpp"

using namespace lb;

namespace {

// Independent shadow rasterizer: test membership by direct evaluation of the
// distance identity against every vertex, no rectangle counting.
bool raster_in_shadow(PlanePoint view, PlanePoint x, const std::vector<CheckCoord>& vertices) {
    for (const CheckCoord& u : vertices) {
        PlanePoint pu{u.row, u.col};
        if (pu.row == view.row && pu.col == view.col) continue;
        if (pu.row == x.row && pu.col == x.col) continue;
        if (manhattan(view, pu) + manhattan(pu, x) == manhattan(view, x)) return true;
    }
    return false;
}

ShadowClass raster_classify(PlanePoint view, PlanePoint target,
                            const std::vector<CheckCoord>& vertices) {
    if (!raster_in_shadow(view, target, vertices)) return ShadowClass::Unshadowed;
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k)
        if (!raster_in_shadow(view, {target.row + dr[k], target.col + dc[k]}, vertices))
            return ShadowClass::Shadowed;
    return ShadowClass::DeeplyShadowed;
}

}  // namespace

TEST(Shadow, LoneNeighborIsUnshadowed) {
    std::vector<CheckCoord> others{{1, 1}};
    auto classes = shadow_classify({0, 0}, others, 25);
    ASSERT_EQ(classes.size(), 1u);
    EXPECT_EQ(classes[0], ShadowClass::Unshadowed);
}

TEST(Shadow, CollinearFarVertexIsDeeplyShadowed) {
    std::vector<CheckCoord> others{{2, 0}, {4, 0}};
    auto classes = shadow_classify({0, 0}, others, 25);
    ASSERT_EQ(classes.size(), 2u);
    EXPECT_EQ(classes[0], ShadowClass::Unshadowed);   // (2,0): nothing between
    EXPECT_EQ(classes[1], ShadowClass::DeeplyShadowed);  // (4,0): behind (2,0)
}

TEST(Shadow, PartialCoverIsShadowedNotDeep) {
    std::vector<CheckCoord> others{{2, 1}, {2, 2}};
    auto classes = shadow_classify({0, 0}, others, 25);
    ASSERT_EQ(classes.size(), 2u);
    EXPECT_EQ(classes[0], ShadowClass::Unshadowed);
    EXPECT_EQ(classes[1], ShadowClass::Shadowed);
}

TEST(Shadow, MatchesRasterOracleOnRandomSets) {
    const int d = 13;
    CounterRng rng(CounterRng::derive_key(31337, 0));
    for (int rep = 0; rep < 500; ++rep) {
        int k = 2 + static_cast<int>(rng.next_below(10));
        std::vector<CheckCoord> vertices;
        for (int i = 0; i < k; ++i) {
            CheckCoord c{static_cast<int16_t>(rng.next_below(d - 1)),
                         static_cast<int16_t>(rng.next_below(d))};
            bool dup = false;
            for (const CheckCoord& v : vertices) dup |= v == c;
            if (!dup) vertices.push_back(c);
        }
        for (size_t vi = 0; vi < vertices.size(); ++vi) {
            std::vector<CheckCoord> others;
            for (size_t oi = 0; oi < vertices.size(); ++oi)
                if (oi != vi) others.push_back(vertices[oi]);
            if (others.empty()) continue;
            auto classes = shadow_classify(vertices[vi], others, d);
            PlanePoint view{vertices[vi].row, vertices[vi].col};
            for (size_t oi = 0; oi < others.size(); ++oi) {
                ShadowClass expected =
                    raster_classify(view, {others[oi].row, others[oi].col}, vertices);
                EXPECT_EQ(classes[oi], expected)
                    << "view " << view.row << "," << view.col << " target " << others[oi].row
                    << "," << others[oi].col;
            }
        }
    }
}

TEST(Shadow, ClassificationIsTranslationInvariant) {
    std::vector<CheckCoord> base{{1, 1}, {3, 1}, {5, 1}, {2, 4}};
    auto classes0 = shadow_classify({1, 1}, {{3, 1}, {5, 1}, {2, 4}}, 25);
    std::vector<CheckCoord> moved{{4, 6}, {6, 6}, {8, 6}, {5, 9}};
    auto classes1 = shadow_classify({4, 6}, {{6, 6}, {8, 6}, {5, 9}}, 25);
    EXPECT_EQ(classes0, classes1);
}

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

#ifndef LB_GRAPH_HPP
#define LB_GRAPH_HPP

#include <cstdint>
#include <cstdlib>
#include <istream>
#include <string>
#include <vector>

#include "lb/common.hpp"
#include "lb/lattice.hpp"
#include "lb/shadow.hpp"

namespace lb {

inline int manhattan(CheckCoord a, CheckCoord b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

inline int manhattan(SpaceTimeEvent a, SpaceTimeEvent b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) + std::abs(a.round - b.round);
}

enum class Boundary : uint8_t { Top, Bottom };

struct BoundaryDistance {
    Boundary side;
    int distance;
};

/// Nearest syndrome-graph boundary for a vertex at check row `row`. The top
/// boundary sits one step above row 0, the bottom one step below row d-2.
/// Ties break toward the top.
inline BoundaryDistance nearest_boundary(int row, int d) {
    int top = row + 1;
    int bottom = (d - 1) - row;
    if (top <= bottom) return {Boundary::Top, top};
    return {Boundary::Bottom, bottom};
}

enum class Pruning : uint8_t { Complete, Shadowed };

/// Weighted matching graph built from a syndrome. Weights are stored doubled
/// (one unit = half a Manhattan step) so that blossom dual updates stay
/// integral; outer-outer edges force half-steps otherwise.
struct SyndromeGraph {
    struct Edge {
        int32_t u;
        int32_t v;
        int64_t w;  // doubled
    };
    struct BoundaryEdge {
        int32_t v;
        Boundary side;
        int64_t w;  // doubled
    };

    int d = 0;
    std::vector<CheckCoord> vertices;  // sorted (row, col); index = vertex id
    std::vector<Edge> edges;
    std::vector<BoundaryEdge> boundary_edges;  // at most one per vertex
};

/// Build the matching graph. Complete keeps every vertex pair plus one
/// nearest-boundary edge per vertex. Shadowed omits a pair edge when the two
/// vertices are deeply shadowed when viewed from one another, and omits a
/// boundary edge when every minimal path to the nearest boundary is blocked
/// by the shadow of another vertex; for the straight-up (or straight-down)
/// minimal path that reduces to another vertex sitting strictly between the
/// vertex and that boundary in the same column.
inline SyndromeGraph build_graph(const Syndrome& syndrome, const LatticeConfig& cfg,
                                 Pruning pruning) {
    SyndromeGraph g;
    g.d = cfg.d;
    g.vertices = syndrome.vertices;
    const int k = static_cast<int>(g.vertices.size());
    if (k == 0) return g;

    if (pruning == Pruning::Complete) {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                g.edges.push_back({a, b, 2 * manhattan(g.vertices[a], g.vertices[b])});
        for (int a = 0; a < k; ++a) {
            BoundaryDistance nb = nearest_boundary(g.vertices[a].row, cfg.d);
            g.boundary_edges.push_back({a, nb.side, 2 * nb.distance});
        }
        return g;
    }

    ShadowOracle oracle(g.vertices, cfg.d);
    for (int a = 0; a < k; ++a) {
        PlanePoint pa{g.vertices[a].row, g.vertices[a].col};
        for (int b = a + 1; b < k; ++b) {
            PlanePoint pb{g.vertices[b].row, g.vertices[b].col};
            bool drop = oracle.classify(pa, pb) == ShadowClass::DeeplyShadowed &&
                        oracle.classify(pb, pa) == ShadowClass::DeeplyShadowed;
            if (!drop) g.edges.push_back({a, b, 2 * manhattan(g.vertices[a], g.vertices[b])});
        }
    }

    // Per-column row extents, for the blocked-path test.
    std::vector<int> min_row(cfg.d, cfg.d), max_row(cfg.d, -1);
    for (const CheckCoord& c : g.vertices) {
        min_row[c.col] = std::min(min_row[c.col], static_cast<int>(c.row));
        max_row[c.col] = std::max(max_row[c.col], static_cast<int>(c.row));
    }
    for (int a = 0; a < k; ++a) {
        const CheckCoord& c = g.vertices[a];
        BoundaryDistance nb = nearest_boundary(c.row, cfg.d);
        bool blocked = nb.side == Boundary::Top ? min_row[c.col] < c.row : max_row[c.col] > c.row;
        if (!blocked) g.boundary_edges.push_back({a, nb.side, 2 * nb.distance});
    }
    return g;
}

// ---------------------------------------------------------------------------
// Syndrome text format: one vertex per line, `row col` (2-D) or
// `row col round` (3-D), ASCII decimal, `#` starts a comment.
// ---------------------------------------------------------------------------

struct ParsedSyndrome {
    bool three_d = false;
    std::vector<CheckCoord> vertices_2d;
    std::vector<SpaceTimeEvent> vertices_3d;
};

inline ParsedSyndrome parse_syndrome_text(std::istream& in) {
    ParsedSyndrome out;
    std::string line;
    int lineno = 0;
    bool saw_any = false;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::vector<long> fields;
        const char* p = line.c_str();
        while (*p) {
            while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
            if (!*p) break;
            char* end = nullptr;
            long v = std::strtol(p, &end, 10);
            if (end == p)
                throw Error(ErrorCode::BadInput,
                            "syndrome parse error at line " + std::to_string(lineno) +
                                ": expected integer");
            p = end;
            fields.push_back(v);
        }
        if (fields.empty()) continue;
        if (fields.size() != 2 && fields.size() != 3)
            throw Error(ErrorCode::BadInput, "syndrome parse error at line " +
                                                 std::to_string(lineno) +
                                                 ": expected 2 or 3 fields");
        bool is3 = fields.size() == 3;
        if (saw_any && is3 != out.three_d)
            throw Error(ErrorCode::BadInput, "syndrome parse error at line " +
                                                 std::to_string(lineno) +
                                                 ": mixed 2-D and 3-D vertices");
        out.three_d = is3;
        saw_any = true;
        if (is3)
            out.vertices_3d.push_back({static_cast<int16_t>(fields[0]),
                                       static_cast<int16_t>(fields[1]),
                                       static_cast<int32_t>(fields[2])});
        else
            out.vertices_2d.push_back(
                {static_cast<int16_t>(fields[0]), static_cast<int16_t>(fields[1])});
    }
    return out;
}

inline void validate_syndrome_bounds(const ParsedSyndrome& s, const LatticeConfig& cfg) {
    if (!s.three_d) {
        for (const CheckCoord& c : s.vertices_2d)
            if (c.row < 0 || c.row > cfg.d - 2 || c.col < 0 || c.col > cfg.d - 1)
                throw Error(ErrorCode::BadInput, "syndrome vertex out of lattice bounds");
    } else {
        for (const SpaceTimeEvent& e : s.vertices_3d)
            if (e.row < 0 || e.row > cfg.d - 2 || e.col < 0 || e.col > cfg.d - 1 || e.round < 0)
                throw Error(ErrorCode::BadInput, "syndrome vertex out of lattice bounds");
    }
}

}  // namespace lb

#endif

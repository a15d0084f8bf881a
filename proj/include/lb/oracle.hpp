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

#ifndef LB_ORACLE_HPP
#define LB_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "lb/blossom.hpp"
#include "lb/common.hpp"
#include "lb/graph.hpp"

namespace lb {

constexpr int kOracleVertexCap = 14;

struct OracleResult {
    Weight total_doubled = 0;
    std::vector<VertexMatch> witness;  // one optimal matching

    Weight weight() const { return total_doubled / 2; }
};

/// Exact minimum-weight perfect matching with boundaries by exhaustive
/// enumeration: pick the lowest unassigned vertex, branch on pairing it with
/// every unassigned neighbor and on each of its boundary edges. Every perfect
/// matching is visited exactly once; branches that already exceed the best
/// weight are cut.
inline OracleResult brute_force_mwpm(const SyndromeGraph& g) {
    const int k = static_cast<int>(g.vertices.size());
    if (k > kOracleVertexCap)
        throw Error(ErrorCode::TooLarge, "oracle handles at most 14 vertices");
    OracleResult best;
    if (k == 0) return best;

    // adjacency with doubled weights; boundary edges per vertex
    std::vector<std::vector<std::pair<int, Weight>>> adj(k);
    for (const SyndromeGraph::Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({static_cast<int>(e.u), e.w});
    }
    std::vector<int32_t> bnd_target(k, kNoId);
    std::vector<Weight> bnd_weight(k, 0);
    for (const SyndromeGraph::BoundaryEdge& b : g.boundary_edges) {
        bnd_target[b.v] = b.side == Boundary::Top ? kBoundaryTopId : kBoundaryBottomId;
        bnd_weight[b.v] = b.w;
    }

    std::vector<int32_t> assigned(k, kNoId);  // partner vertex, boundary id, or kNoId
    std::vector<VertexMatch> current;
    Weight best_w = kInfWeight;
    std::vector<VertexMatch> best_witness;

    auto recurse = [&](auto&& self, int from, Weight acc) -> void {
        if (acc >= best_w) return;
        int u = -1;
        for (int i = from; i < k; ++i)
            if (assigned[i] == kNoId) {
                u = i;
                break;
            }
        if (u < 0) {
            best_w = acc;
            best_witness = current;
            return;
        }
        assigned[u] = -100;  // temporarily taken
        for (const auto& [v, w] : adj[u]) {
            if (assigned[v] != kNoId) continue;
            assigned[v] = u;
            current.push_back({u, v, kNoId});
            self(self, u + 1, acc + w);
            current.pop_back();
            assigned[v] = kNoId;
        }
        if (bnd_target[u] != kNoId) {
            current.push_back({u, bnd_target[u], kNoId});
            self(self, u + 1, acc + bnd_weight[u]);
            current.pop_back();
        }
        assigned[u] = kNoId;
    };
    recurse(recurse, 0, 0);
    if (best_w >= kInfWeight)
        throw Error(ErrorCode::GraphInfeasible, "no perfect matching exists");
    best.total_doubled = best_w;
    best.witness = best_witness;
    return best;
}

}  // namespace lb

#endif

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

#include "lb/oracle.hpp"

#include "gtest/gtest.h"
#include "lb/rng.hpp"

using namespace lb;

namespace {

SyndromeGraph random_graph(CounterRng& rng, int d, int k) {
    Syndrome s;
    while (static_cast<int>(s.vertices.size()) < k) {
        CheckCoord c{static_cast<int16_t>(rng.next_below(d - 1)),
                     static_cast<int16_t>(rng.next_below(d))};
        bool dup = false;
        for (const CheckCoord& v : s.vertices) dup |= v == c;
        if (!dup) s.vertices.push_back(c);
    }
    std::sort(s.vertices.begin(), s.vertices.end());
    return build_graph(s, {d, SimMode::TwoD}, Pruning::Complete);
}

}  // namespace

TEST(Oracle, EmptyGraphHasWeightZero) {
    SyndromeGraph g;
    OracleResult r = brute_force_mwpm(g);
    EXPECT_EQ(r.total_doubled, 0);
    EXPECT_TRUE(r.witness.empty());
}

TEST(Oracle, PrefersCheapPairOverBoundaries) {
    // two vertices, edge weight 2, boundary weights 3 and 3
    LatticeConfig cfg{7, SimMode::TwoD};
    Syndrome s;
    s.vertices = {{2, 1}, {2, 3}};
    SyndromeGraph g = build_graph(s, cfg, Pruning::Complete);
    OracleResult r = brute_force_mwpm(g);
    EXPECT_EQ(r.weight(), 2);
    ASSERT_EQ(r.witness.size(), 1u);
    EXPECT_EQ(r.witness[0].u, 0);
    EXPECT_EQ(r.witness[0].v, 1);
}

TEST(Oracle, OddClusterUsesOneBoundary) {
    LatticeConfig cfg{9, SimMode::TwoD};
    Syndrome s;
    s.vertices = {{0, 0}, {0, 2}, {1, 1}};  // boundary distances 1, 1, 2
    SyndromeGraph g = build_graph(s, cfg, Pruning::Complete);
    OracleResult r = brute_force_mwpm(g);
    EXPECT_EQ(r.weight(), 3);
}

TEST(Oracle, RejectsOversizedInput) {
    CounterRng rng(CounterRng::derive_key(1, 1));
    SyndromeGraph g = random_graph(rng, 15, 15);
    try {
        brute_force_mwpm(g);
        FAIL() << "expected TooLarge";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLarge);
    }
}

TEST(Oracle, IsDeterministic) {
    CounterRng rng(CounterRng::derive_key(2, 2));
    SyndromeGraph g = random_graph(rng, 11, 8);
    OracleResult a = brute_force_mwpm(g);
    OracleResult b = brute_force_mwpm(g);
    EXPECT_EQ(a.total_doubled, b.total_doubled);
    ASSERT_EQ(a.witness.size(), b.witness.size());
    for (size_t i = 0; i < a.witness.size(); ++i) {
        EXPECT_EQ(a.witness[i].u, b.witness[i].u);
        EXPECT_EQ(a.witness[i].v, b.witness[i].v);
    }
}

// The oracle's minimum can never exceed the weight of an explicitly
// constructed valid matching.
TEST(Oracle, MinimumBoundsRandomValidMatchings) {
    CounterRng rng(CounterRng::derive_key(3, 3));
    for (int rep = 0; rep < 300; ++rep) {
        int k = 2 + 2 * static_cast<int>(rng.next_below(5));  // even count
        SyndromeGraph g = random_graph(rng, 13, k);
        OracleResult best = brute_force_mwpm(g);
        // random pairing: shuffle ids, pair consecutive
        std::vector<int> ids(k);
        for (int i = 0; i < k; ++i) ids[i] = i;
        for (int i = k - 1; i > 0; --i)
            std::swap(ids[i], ids[rng.next_below(static_cast<uint64_t>(i) + 1)]);
        Weight total = 0;
        for (int i = 0; i < k; i += 2)
            total += 2 * manhattan(g.vertices[ids[i]], g.vertices[ids[i + 1]]);
        EXPECT_LE(best.total_doubled, total);
        // all-boundary assignment is also a valid matching
        Weight all_boundary = 0;
        for (const SyndromeGraph::BoundaryEdge& b : g.boundary_edges) all_boundary += b.w;
        EXPECT_LE(best.total_doubled, all_boundary);
    }
}

TEST(Oracle, WitnessWeightMatchesReportedTotal) {
    CounterRng rng(CounterRng::derive_key(4, 4));
    for (int rep = 0; rep < 100; ++rep) {
        int k = 3 + static_cast<int>(rng.next_below(8));
        SyndromeGraph g = random_graph(rng, 13, k);
        OracleResult r = brute_force_mwpm(g);
        Weight total = 0;
        std::vector<int> deg(k, 0);
        for (const VertexMatch& m : r.witness) {
            deg[m.u] += 1;
            if (is_boundary_id(m.v)) {
                for (const SyndromeGraph::BoundaryEdge& b : g.boundary_edges)
                    if (b.v == m.u) total += b.w;
            } else {
                deg[m.v] += 1;
                total += 2 * manhattan(g.vertices[m.u], g.vertices[m.v]);
            }
        }
        for (int i = 0; i < k; ++i) EXPECT_EQ(deg[i], 1);
        EXPECT_EQ(total, r.total_doubled);
    }
}

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

#include "lb/graph.hpp"

#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "lb/rng.hpp"

using namespace lb;

TEST(Manhattan, DirectEvaluation) {
    EXPECT_EQ(manhattan(CheckCoord{1, 2}, CheckCoord{4, 6}), 7);
    EXPECT_EQ(manhattan(CheckCoord{3, 3}, CheckCoord{3, 3}), 0);
    EXPECT_EQ(manhattan(SpaceTimeEvent{0, 0, 0}, SpaceTimeEvent{1, 1, 2}), 4);
}

TEST(Manhattan, SymmetryAndTriangleInequality) {
    CounterRng rng(CounterRng::derive_key(5, 5));
    for (int rep = 0; rep < 1000; ++rep) {
        CheckCoord a{static_cast<int16_t>(rng.next_below(20)),
                     static_cast<int16_t>(rng.next_below(20))};
        CheckCoord b{static_cast<int16_t>(rng.next_below(20)),
                     static_cast<int16_t>(rng.next_below(20))};
        CheckCoord c{static_cast<int16_t>(rng.next_below(20)),
                     static_cast<int16_t>(rng.next_below(20))};
        EXPECT_EQ(manhattan(a, b), manhattan(b, a));
        EXPECT_LE(manhattan(a, c), manhattan(a, b) + manhattan(b, c));
    }
}

TEST(NearestBoundary, GeometryAndTieBreak) {
    EXPECT_EQ(nearest_boundary(0, 5).side, Boundary::Top);
    EXPECT_EQ(nearest_boundary(0, 5).distance, 1);
    EXPECT_EQ(nearest_boundary(3, 5).side, Boundary::Bottom);
    EXPECT_EQ(nearest_boundary(3, 5).distance, 1);
    // equidistant: row 2 of d=5 has top distance 3 and bottom distance 3 ->
    // ties break toward the top
    EXPECT_EQ(nearest_boundary(2, 5).side, Boundary::Top);
    EXPECT_EQ(nearest_boundary(2, 5).distance, 3);
}

TEST(BuildGraph, EmptySyndromeGivesEmptyGraph) {
    LatticeConfig cfg{5, SimMode::TwoD};
    SyndromeGraph g = build_graph({}, cfg, Pruning::Shadowed);
    EXPECT_TRUE(g.vertices.empty());
    EXPECT_TRUE(g.edges.empty());
    EXPECT_TRUE(g.boundary_edges.empty());
}

TEST(BuildGraph, CompleteGraphHasAllPairsAndBoundaries) {
    LatticeConfig cfg{7, SimMode::TwoD};
    Syndrome s;
    s.vertices = {{0, 0}, {2, 3}, {4, 1}, {5, 5}};
    SyndromeGraph g = build_graph(s, cfg, Pruning::Complete);
    EXPECT_EQ(g.edges.size(), 6u);
    EXPECT_EQ(g.boundary_edges.size(), 4u);
    for (const SyndromeGraph::Edge& e : g.edges)
        EXPECT_EQ(e.w, 2 * manhattan(g.vertices[e.u], g.vertices[e.v]));
}

TEST(BuildGraph, NothingToPruneFarFromEverything) {
    LatticeConfig cfg{25, SimMode::TwoD};
    Syndrome s;
    s.vertices = {{10, 10}, {12, 13}};
    SyndromeGraph complete = build_graph(s, cfg, Pruning::Complete);
    SyndromeGraph shadowed = build_graph(s, cfg, Pruning::Shadowed);
    EXPECT_EQ(complete.edges.size(), shadowed.edges.size());
    EXPECT_EQ(complete.boundary_edges.size(), shadowed.boundary_edges.size());
}

TEST(BuildGraph, MutuallyDeeplyShadowedPairLosesItsEdge) {
    LatticeConfig cfg{25, SimMode::TwoD};
    Syndrome s;  // three vertices on one column: the end pair is mutually deep
    s.vertices = {{8, 10}, {10, 10}, {12, 10}};
    SyndromeGraph g = build_graph(s, cfg, Pruning::Shadowed);
    std::set<std::pair<int, int>> edges;
    for (const SyndromeGraph::Edge& e : g.edges) edges.insert({e.u, e.v});
    EXPECT_TRUE(edges.count({0, 1}));
    EXPECT_TRUE(edges.count({1, 2}));
    EXPECT_FALSE(edges.count({0, 2}));
}

TEST(BuildGraph, ShadowedIsSubgraphWithSameVertices) {
    LatticeConfig cfg{15, SimMode::TwoD};
    CounterRng rng(CounterRng::derive_key(77, 0));
    for (int rep = 0; rep < 200; ++rep) {
        std::set<std::pair<int, int>> coords;
        int k = 2 + static_cast<int>(rng.next_below(12));
        for (int i = 0; i < k; ++i)
            coords.insert({static_cast<int>(rng.next_below(cfg.d - 1)),
                           static_cast<int>(rng.next_below(cfg.d))});
        Syndrome s;
        for (auto [r, c] : coords)
            s.vertices.push_back({static_cast<int16_t>(r), static_cast<int16_t>(c)});
        SyndromeGraph complete = build_graph(s, cfg, Pruning::Complete);
        SyndromeGraph shadowed = build_graph(s, cfg, Pruning::Shadowed);
        EXPECT_TRUE(complete.vertices == shadowed.vertices);
        std::set<std::pair<int, int>> complete_edges;
        for (const SyndromeGraph::Edge& e : complete.edges) complete_edges.insert({e.u, e.v});
        for (const SyndromeGraph::Edge& e : shadowed.edges)
            EXPECT_TRUE(complete_edges.count({e.u, e.v}));
        EXPECT_LE(shadowed.boundary_edges.size(), complete.boundary_edges.size());
    }
}

TEST(BuildGraph, BoundaryEdgePrunedOnlyWhenColumnBlocked) {
    LatticeConfig cfg{9, SimMode::TwoD};
    Syndrome s;
    s.vertices = {{1, 4}, {3, 4}};  // both nearest to top; (3,4) blocked by (1,4)
    SyndromeGraph g = build_graph(s, cfg, Pruning::Shadowed);
    ASSERT_EQ(g.boundary_edges.size(), 1u);
    EXPECT_EQ(g.boundary_edges[0].v, 0);
    EXPECT_EQ(g.boundary_edges[0].side, Boundary::Top);
}

TEST(SyndromeText, ParsesTwoAndThreeColumnForms) {
    std::istringstream in2("# comment\n1 2\n0 3  # trailing\n\n");
    ParsedSyndrome p2 = parse_syndrome_text(in2);
    EXPECT_FALSE(p2.three_d);
    ASSERT_EQ(p2.vertices_2d.size(), 2u);
    EXPECT_EQ(p2.vertices_2d[0], (CheckCoord{1, 2}));

    std::istringstream in3("1 2 0\n1 2 1\n");
    ParsedSyndrome p3 = parse_syndrome_text(in3);
    EXPECT_TRUE(p3.three_d);
    ASSERT_EQ(p3.vertices_3d.size(), 2u);
    EXPECT_EQ(p3.vertices_3d[1].round, 1);
}

TEST(SyndromeText, RejectsMalformedInput) {
    std::istringstream bad("2 x\n");
    EXPECT_THROW(parse_syndrome_text(bad), Error);
    std::istringstream mixed("1 2\n1 2 3\n");
    EXPECT_THROW(parse_syndrome_text(mixed), Error);
    std::istringstream toomany("1 2 3 4\n");
    EXPECT_THROW(parse_syndrome_text(toomany), Error);
}

TEST(SyndromeText, BoundsChecked) {
    LatticeConfig cfg{3, SimMode::TwoD};
    std::istringstream in("2 0\n");  // row must be <= d-2 = 1
    ParsedSyndrome p = parse_syndrome_text(in);
    EXPECT_THROW(validate_syndrome_bounds(p, cfg), Error);
}

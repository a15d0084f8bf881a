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

#include "lb/lattice.hpp"

#include <cmath>

#include "gtest/gtest.h"

using namespace lb;

TEST(LatticeConfig, ValidatesDistance) {
    EXPECT_THROW((LatticeConfig{2, SimMode::TwoD}.validate()), Error);
    EXPECT_THROW((LatticeConfig{4, SimMode::TwoD}.validate()), Error);
    EXPECT_NO_THROW((LatticeConfig{3, SimMode::TwoD}.validate()));
    LatticeConfig c{5, SimMode::TwoD};
    EXPECT_EQ(c.n(), 9);
    EXPECT_EQ(c.data_qubit_count(), 25 + 16);
    EXPECT_EQ(c.check_count(), 4 * 5);
}

TEST(ApplyBitFlips, ZeroProbabilityLeavesStateUnchanged) {
    LatticeConfig cfg{5, SimMode::TwoD};
    ErrorState state(cfg);
    state.toggle_vertical(2, 2);
    ErrorState before = state;
    CounterRng rng(CounterRng::derive_key(7, 0));
    apply_bit_flips(state, {0.0, 0.0}, rng);
    EXPECT_TRUE(state == before);
}

TEST(ApplyBitFlips, CertainProbabilityFlipsEveryQubit) {
    LatticeConfig cfg{3, SimMode::TwoD};
    ErrorState state(cfg);
    CounterRng rng(CounterRng::derive_key(7, 1));
    apply_bit_flips(state, {1.0, 0.0}, rng);
    EXPECT_EQ(static_cast<int>(state.flipped().size()), cfg.data_qubit_count());
}

TEST(ApplyBitFlips, TogglingTwiceCancels) {
    LatticeConfig cfg{5, SimMode::TwoD};
    ErrorState state(cfg);
    CounterRng rng1(CounterRng::derive_key(42, 3));
    CounterRng rng2(CounterRng::derive_key(42, 3));
    apply_bit_flips(state, {0.3, 0.0}, rng1);
    apply_bit_flips(state, {0.3, 0.0}, rng2);
    EXPECT_FALSE(state.any());
}

// Binomial check: empirical mean flip count over many trials stays within
// three standard errors of n*p.
TEST(ApplyBitFlips, EmpiricalMeanMatchesBinomial) {
    LatticeConfig cfg{5, SimMode::TwoD};
    const double p = 0.1;
    const int trials = 100000;
    const int n = cfg.data_qubit_count();
    int64_t total = 0;
    for (int t = 0; t < trials; ++t) {
        ErrorState state(cfg);
        CounterRng rng(CounterRng::derive_key(2026, t));
        apply_bit_flips(state, {p, 0.0}, rng);
        total += static_cast<int64_t>(state.flipped().size());
    }
    double mean = static_cast<double>(total) / trials;
    double expect = n * p;
    double sigma = std::sqrt(n * p * (1 - p) / trials);
    EXPECT_NEAR(mean, expect, 3 * sigma);
}

TEST(MeasureZ, NoFlipsGivesEmptySyndrome) {
    LatticeConfig cfg{5, SimMode::TwoD};
    EXPECT_TRUE(measure_z_stabilizers(ErrorState(cfg)).empty());
}

TEST(MeasureZ, InteriorVerticalFlipHasTwoAdjacentChecks) {
    LatticeConfig cfg{3, SimMode::TwoD};
    ErrorState state(cfg);
    state.toggle_vertical(1, 1);  // grid (2, 2)
    Syndrome s = measure_z_stabilizers(state);
    ASSERT_EQ(s.vertices.size(), 2u);
    EXPECT_EQ(s.vertices[0], (CheckCoord{0, 1}));
    EXPECT_EQ(s.vertices[1], (CheckCoord{1, 1}));
}

TEST(MeasureZ, TopRowFlipTerminatesOnSmoothBoundary) {
    LatticeConfig cfg{3, SimMode::TwoD};
    ErrorState state(cfg);
    state.toggle_vertical(0, 2);
    Syndrome s = measure_z_stabilizers(state);
    ASSERT_EQ(s.vertices.size(), 1u);
    EXPECT_EQ(s.vertices[0], (CheckCoord{0, 2}));
}

TEST(MeasureZ, HorizontalFlipPairsAcrossColumns) {
    LatticeConfig cfg{3, SimMode::TwoD};
    ErrorState state(cfg);
    state.toggle_horizontal(0, 0);  // grid (1, 1), between checks (0,0) and (0,1)
    Syndrome s = measure_z_stabilizers(state);
    ASSERT_EQ(s.vertices.size(), 2u);
    EXPECT_EQ(s.vertices[0], (CheckCoord{0, 0}));
    EXPECT_EQ(s.vertices[1], (CheckCoord{0, 1}));
}

TEST(MeasureZ, EverySingleFlipYieldsOneOrTwoVertices) {
    LatticeConfig cfg{5, SimMode::TwoD};
    for (int i = 0; i < cfg.d; ++i)
        for (int j = 0; j < cfg.d; ++j) {
            ErrorState state(cfg);
            state.toggle_vertical(i, j);
            size_t k = measure_z_stabilizers(state).vertices.size();
            size_t expected = (i == 0 || i == cfg.d - 1) ? 1 : 2;
            EXPECT_EQ(k, expected) << "vertical " << i << "," << j;
        }
    for (int i = 0; i < cfg.d - 1; ++i)
        for (int j = 0; j < cfg.d - 1; ++j) {
            ErrorState state(cfg);
            state.toggle_horizontal(i, j);
            EXPECT_EQ(measure_z_stabilizers(state).vertices.size(), 2u)
                << "horizontal " << i << "," << j;
        }
}

TEST(MeasureZ, SyndromeIsLinearOverFlipSets) {
    LatticeConfig cfg{7, SimMode::TwoD};
    CounterRng rng(CounterRng::derive_key(11, 0));
    for (int rep = 0; rep < 200; ++rep) {
        ErrorState a(cfg), b(cfg);
        apply_bit_flips(a, {0.2, 0.0}, rng);
        apply_bit_flips(b, {0.2, 0.0}, rng);
        ErrorState ab = a;
        ab.xor_with(b);
        std::vector<uint8_t> sa = z_check_bits(a);
        std::vector<uint8_t> sb = z_check_bits(b);
        std::vector<uint8_t> sc = z_check_bits(ab);
        for (size_t i = 0; i < sa.size(); ++i) EXPECT_EQ(sc[i], sa[i] ^ sb[i]);
    }
}

TEST(MeasureZ, MeasurementIsIdempotent) {
    LatticeConfig cfg{5, SimMode::TwoD};
    ErrorState state(cfg);
    CounterRng rng(CounterRng::derive_key(12, 0));
    apply_bit_flips(state, {0.15, 0.0}, rng);
    Syndrome s1 = measure_z_stabilizers(state);
    Syndrome s2 = measure_z_stabilizers(state);
    EXPECT_TRUE(s1.vertices == s2.vertices);
}

TEST(LogicalParity, EmptyStateHasParityZero) {
    LatticeConfig cfg{3, SimMode::TwoD};
    EXPECT_EQ(logical_x_parity(ErrorState(cfg)), 0);
}

TEST(LogicalParity, FullColumnIsLogicalError) {
    LatticeConfig cfg{3, SimMode::TwoD};
    ErrorState state(cfg);
    for (int i = 0; i < cfg.d; ++i) state.toggle_vertical(i, 1);
    EXPECT_TRUE(measure_z_stabilizers(state).empty());
    EXPECT_EQ(logical_x_parity(state), 1);
}

TEST(LogicalParity, StabilizerLoopIsTrivial) {
    // flips around one X check: two vertical qubits side by side plus the
    // horizontal qubits above and below
    LatticeConfig cfg{5, SimMode::TwoD};
    ErrorState state(cfg);
    state.toggle_vertical(1, 1);
    state.toggle_vertical(1, 2);
    state.toggle_horizontal(0, 1);
    state.toggle_horizontal(1, 1);
    EXPECT_TRUE(measure_z_stabilizers(state).empty());
    EXPECT_EQ(logical_x_parity(state), 0);
}

TEST(LogicalParity, TopRowStabilizerLoopIsTrivial) {
    LatticeConfig cfg{5, SimMode::TwoD};
    ErrorState state(cfg);
    state.toggle_vertical(0, 2);
    state.toggle_vertical(0, 3);
    state.toggle_horizontal(0, 2);
    EXPECT_TRUE(measure_z_stabilizers(state).empty());
    EXPECT_EQ(logical_x_parity(state), 0);
}

TEST(LogicalParity, RejectsNonEmptySyndrome) {
    LatticeConfig cfg{3, SimMode::TwoD};
    ErrorState state(cfg);
    state.toggle_vertical(1, 1);
    try {
        logical_x_parity(state);
        FAIL() << "expected NonEmptySyndrome";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonEmptySyndrome);
    }
}

TEST(Record, IsolatedMeasurementFlipYieldsTwoStackedEvents) {
    LatticeConfig cfg{3, SimMode::ThreeD};
    std::vector<RoundData> rounds(4);
    rounds[1].meas_flips.push_back({0, 1});
    PhenomenologicalRecord rec = PhenomenologicalRecord::from_rounds(cfg, rounds);
    EXPECT_TRUE(rec.events_at(0).empty());
    ASSERT_EQ(rec.events_at(1).size(), 1u);
    EXPECT_EQ(rec.events_at(1)[0], (CheckCoord{0, 1}));
    ASSERT_EQ(rec.events_at(2).size(), 1u);
    EXPECT_EQ(rec.events_at(2)[0], (CheckCoord{0, 1}));
    EXPECT_TRUE(rec.events_at(3).empty());
    EXPECT_TRUE(rec.closure_events().empty());
    EXPECT_FALSE(rec.final_state().any());
}

TEST(Record, DataFlipYieldsSpatialPairAtItsRound) {
    LatticeConfig cfg{3, SimMode::ThreeD};
    std::vector<RoundData> rounds(3);
    rounds[1].data_flips.push_back({2, 2});  // vertical (1,1)
    PhenomenologicalRecord rec = PhenomenologicalRecord::from_rounds(cfg, rounds);
    EXPECT_TRUE(rec.events_at(0).empty());
    EXPECT_EQ(rec.events_at(1).size(), 2u);
    EXPECT_TRUE(rec.events_at(2).empty());
    // the flip persists: the closing perfect round sees the same syndrome
    EXPECT_TRUE(rec.closure_events().empty());
}

// Telescoping: per site, the parity of all detection events (closure
// included) equals the true final syndrome bit.
TEST(Record, EventParityTelescopesToFinalSyndrome) {
    LatticeConfig cfg{5, SimMode::ThreeD};
    CounterRng rng(CounterRng::derive_key(99, 5));
    PhenomenologicalRecord rec = PhenomenologicalRecord::generate(cfg, {0.05, 0.05}, 40, rng);
    std::vector<int> parity(cfg.check_count(), 0);
    for (int t = 0; t < rec.rounds(); ++t)
        for (CheckCoord c : rec.events_at(t)) parity[c.row * cfg.d + c.col] ^= 1;
    for (CheckCoord c : rec.closure_events()) parity[c.row * cfg.d + c.col] ^= 1;
    std::vector<uint8_t> truth = rec.true_final_bits();
    for (int i = 0; i < cfg.check_count(); ++i) EXPECT_EQ(parity[i], truth[i]);
}

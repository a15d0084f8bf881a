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

#ifndef LB_LATTICE_HPP
#define LB_LATTICE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lb/common.hpp"
#include "lb/rng.hpp"

namespace lb {

enum class SimMode : uint8_t { TwoD, ThreeD };

// Planar surface code, smooth boundaries top and bottom, rough left and
// right. Everything lives on an n x n grid with n = 2d-1:
//
//   data qubits        grid (r, c) with r + c even
//     "vertical"       (2i, 2j)       i in [0, d-1], j in [0, d-1]
//     "horizontal"     (2i+1, 2j+1)   i in [0, d-2], j in [0, d-2]
//   Z checks           grid (2i+1, 2j), exposed as check coordinate (i, j),
//                      i in [0, d-2], j in [0, d-1]
//
// A vertical qubit sits between the two Z checks above/below it (or between
// a check and the smooth boundary); a horizontal qubit sits between the two
// Z checks left/right of it. Bit flips on either kind are detected by the
// adjacent Z checks, so X-error chains move freely in both grid directions
// and chain length is the Manhattan metric on check coordinates.
//
// The logical X operator is a full column of vertical qubits; logical
// failure is read off as the flip parity of the top row of vertical qubits.
struct LatticeConfig {
    int d = 3;
    SimMode mode = SimMode::TwoD;

    int n() const { return 2 * d - 1; }
    int vertical_count() const { return d * d; }
    int horizontal_count() const { return (d - 1) * (d - 1); }
    int data_qubit_count() const { return vertical_count() + horizontal_count(); }
    int check_rows() const { return d - 1; }
    int check_cols() const { return d; }
    int check_count() const { return check_rows() * check_cols(); }

    void validate() const {
        if (d < 3 || d % 2 == 0)
            throw Error(ErrorCode::BadInput, "code distance must be an odd integer >= 3");
    }
};

/// Data qubit address in n x n grid coordinates (row + col even).
struct DataQubit {
    int16_t row = 0;
    int16_t col = 0;

    bool is_vertical() const { return row % 2 == 0; }
    friend bool operator==(const DataQubit& a, const DataQubit& b) {
        return a.row == b.row && a.col == b.col;
    }
    friend bool operator<(const DataQubit& a, const DataQubit& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
};

/// Z-check coordinate: row in [0, d-2], col in [0, d-1].
struct CheckCoord {
    int16_t row = 0;
    int16_t col = 0;

    friend bool operator==(const CheckCoord& a, const CheckCoord& b) {
        return a.row == b.row && a.col == b.col;
    }
    friend bool operator<(const CheckCoord& a, const CheckCoord& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
};

struct Syndrome {
    std::vector<CheckCoord> vertices;  // sorted (row, col)

    bool empty() const { return vertices.empty(); }
};

struct NoiseParams {
    double p = 0.0;  // data-qubit flip probability per qubit per round
    double q = 0.0;  // measurement flip probability per check per round (3-D only)

    void validate(const LatticeConfig& cfg) const {
        if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
            throw Error(ErrorCode::BadInput, "flip probabilities must lie in [0, 1]");
        if (cfg.mode == SimMode::TwoD && q != 0.0)
            throw Error(ErrorCode::BadInput, "measurement flips require 3-D mode");
    }
};

/// Set of currently flipped data qubits, stored mod 2.
class ErrorState {
  public:
    ErrorState() = default;
    explicit ErrorState(const LatticeConfig& cfg)
        : d_(cfg.d), vert_(cfg.vertical_count(), 0), horiz_(cfg.horizontal_count(), 0) {}

    int d() const { return d_; }

    bool test(DataQubit q) const {
        return q.is_vertical() ? vert_[vert_index(q)] != 0 : horiz_[horiz_index(q)] != 0;
    }

    void toggle(DataQubit q) {
        if (q.is_vertical())
            vert_[vert_index(q)] ^= 1;
        else
            horiz_[horiz_index(q)] ^= 1;
    }

    void toggle_vertical(int i, int j) { vert_[i * d_ + j] ^= 1; }
    void toggle_horizontal(int i, int j) { horiz_[i * (d_ - 1) + j] ^= 1; }
    bool vertical(int i, int j) const { return vert_[i * d_ + j] != 0; }
    bool horizontal(int i, int j) const { return horiz_[i * (d_ - 1) + j] != 0; }

    void xor_with(const ErrorState& other) {
        for (size_t k = 0; k < vert_.size(); ++k) vert_[k] ^= other.vert_[k];
        for (size_t k = 0; k < horiz_.size(); ++k) horiz_[k] ^= other.horiz_[k];
    }

    void clear() {
        std::fill(vert_.begin(), vert_.end(), 0);
        std::fill(horiz_.begin(), horiz_.end(), 0);
    }

    bool any() const {
        for (uint8_t b : vert_)
            if (b) return true;
        for (uint8_t b : horiz_)
            if (b) return true;
        return false;
    }

    std::vector<DataQubit> flipped() const {
        std::vector<DataQubit> out;
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                if (vert_[i * d_ + j])
                    out.push_back({static_cast<int16_t>(2 * i), static_cast<int16_t>(2 * j)});
        for (int i = 0; i < d_ - 1; ++i)
            for (int j = 0; j < d_ - 1; ++j)
                if (horiz_[i * (d_ - 1) + j])
                    out.push_back({static_cast<int16_t>(2 * i + 1), static_cast<int16_t>(2 * j + 1)});
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const ErrorState& a, const ErrorState& b) {
        return a.d_ == b.d_ && a.vert_ == b.vert_ && a.horiz_ == b.horiz_;
    }

  private:
    size_t vert_index(DataQubit q) const { return (q.row / 2) * d_ + q.col / 2; }
    size_t horiz_index(DataQubit q) const { return (q.row / 2) * (d_ - 1) + q.col / 2; }

    int d_ = 0;
    std::vector<uint8_t> vert_;
    std::vector<uint8_t> horiz_;
};

/// Toggle each data qubit independently with probability p. Toggles are
/// mod 2, so flipping a qubit twice restores it.
inline void apply_bit_flips(ErrorState& state, const NoiseParams& params, CounterRng& rng) {
    const int d = state.d();
    if (params.p <= 0.0) return;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (rng.bernoulli(params.p)) state.toggle_vertical(i, j);
    for (int i = 0; i < d - 1; ++i)
        for (int j = 0; j < d - 1; ++j)
            if (rng.bernoulli(params.p)) state.toggle_horizontal(i, j);
}

/// Z-check bit vector for a state: bit (i, j) set iff an odd number of the
/// check's adjacent data qubits are flipped. Check (i, j) touches vertical
/// qubits (i, j) and (i+1, j) plus horizontal qubits (i, j-1) and (i, j).
inline std::vector<uint8_t> z_check_bits(const ErrorState& state) {
    const int d = state.d();
    std::vector<uint8_t> bits((d - 1) * d, 0);
    auto flip = [&](int i, int j) { bits[i * d + j] ^= 1; };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (state.vertical(i, j)) {
                if (i >= 1) flip(i - 1, j);
                if (i <= d - 2) flip(i, j);
            }
    for (int i = 0; i < d - 1; ++i)
        for (int j = 0; j < d - 1; ++j)
            if (state.horizontal(i, j)) {
                flip(i, j);
                flip(i, j + 1);
            }
    return bits;
}

inline Syndrome syndrome_from_bits(const std::vector<uint8_t>& bits, int d) {
    Syndrome s;
    for (int i = 0; i < d - 1; ++i)
        for (int j = 0; j < d; ++j)
            if (bits[i * d + j])
                s.vertices.push_back({static_cast<int16_t>(i), static_cast<int16_t>(j)});
    return s;
}

inline Syndrome measure_z_stabilizers(const ErrorState& state) {
    return syndrome_from_bits(z_check_bits(state), state.d());
}

/// Flip parity of the top row of vertical qubits. Parity 1 means a chain of
/// flips connects the top boundary to the bottom: a logical X error.
inline int logical_x_parity(const ErrorState& state) {
    if (!measure_z_stabilizers(state).empty())
        throw Error(ErrorCode::NonEmptySyndrome,
                    "logical parity is only defined for states with an empty syndrome");
    int parity = 0;
    for (int j = 0; j < state.d(); ++j) parity ^= state.vertical(0, j) ? 1 : 0;
    return parity;
}

// ---------------------------------------------------------------------------
// 3-D phenomenological model: per round, every data qubit flips with
// probability p and every Z-check measurement result flips with probability
// q. Reported detection events are XORs of consecutive rounds' measured
// results (round -1 reads as all zero), so an isolated measurement flip at
// round t yields events at t and t+1 while a data flip yields a spatial
// event pair at the round it occurred.
// ---------------------------------------------------------------------------

struct RoundData {
    std::vector<DataQubit> data_flips;
    std::vector<CheckCoord> meas_flips;
};

struct SpaceTimeEvent {
    int16_t row = 0;
    int16_t col = 0;
    int32_t round = 0;

    friend bool operator==(const SpaceTimeEvent& a, const SpaceTimeEvent& b) {
        return a.row == b.row && a.col == b.col && a.round == b.round;
    }
    friend bool operator<(const SpaceTimeEvent& a, const SpaceTimeEvent& b) {
        if (a.round != b.round) return a.round < b.round;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    }
};

/// Full record of a finite 3-D experiment: noisy rounds 0..R-1 plus the
/// noiseless closing round used for logical readout.
class PhenomenologicalRecord {
  public:
    PhenomenologicalRecord(const LatticeConfig& cfg, int rounds) : cfg_(cfg), rounds_(rounds) {
        per_round_.resize(rounds);
        measured_.assign(rounds, std::vector<uint8_t>(cfg.check_count(), 0));
    }

    static PhenomenologicalRecord generate(const LatticeConfig& cfg, const NoiseParams& params,
                                           int rounds, CounterRng& rng) {
        std::vector<RoundData> data(rounds);
        for (int t = 0; t < rounds; ++t) {
            RoundData& rd = data[t];
            for (int i = 0; i < cfg.d; ++i)
                for (int j = 0; j < cfg.d; ++j)
                    if (rng.bernoulli(params.p))
                        rd.data_flips.push_back(
                            {static_cast<int16_t>(2 * i), static_cast<int16_t>(2 * j)});
            for (int i = 0; i < cfg.d - 1; ++i)
                for (int j = 0; j < cfg.d - 1; ++j)
                    if (rng.bernoulli(params.p))
                        rd.data_flips.push_back(
                            {static_cast<int16_t>(2 * i + 1), static_cast<int16_t>(2 * j + 1)});
            for (int i = 0; i < cfg.d - 1; ++i)
                for (int j = 0; j < cfg.d; ++j)
                    if (rng.bernoulli(params.q))
                        rd.meas_flips.push_back({static_cast<int16_t>(i), static_cast<int16_t>(j)});
        }
        return from_rounds(cfg, std::move(data));
    }

    static PhenomenologicalRecord from_rounds(const LatticeConfig& cfg,
                                              std::vector<RoundData> data) {
        PhenomenologicalRecord rec(cfg, static_cast<int>(data.size()));
        ErrorState cum(cfg);
        for (size_t t = 0; t < data.size(); ++t) {
            for (DataQubit q : data[t].data_flips) cum.toggle(q);
            rec.measured_[t] = z_check_bits(cum);
            for (CheckCoord c : data[t].meas_flips) rec.measured_[t][c.row * cfg.d + c.col] ^= 1;
        }
        rec.per_round_ = std::move(data);
        rec.final_state_ = cum;
        return rec;
    }

    const LatticeConfig& config() const { return cfg_; }
    int rounds() const { return rounds_; }
    const RoundData& round_data(int t) const { return per_round_[t]; }
    const std::vector<uint8_t>& measured_bits(int t) const { return measured_[t]; }
    const ErrorState& final_state() const { return final_state_; }

    std::vector<uint8_t> true_final_bits() const { return z_check_bits(final_state_); }

    /// Detection events reported at round t (measured XOR previous measured).
    std::vector<CheckCoord> events_at(int t) const {
        std::vector<CheckCoord> out;
        const std::vector<uint8_t>& cur = measured_[t];
        const int d = cfg_.d;
        for (int i = 0; i < d - 1; ++i)
            for (int j = 0; j < d; ++j) {
                uint8_t prev = t > 0 ? measured_[t - 1][i * d + j] : 0;
                if (cur[i * d + j] ^ prev)
                    out.push_back({static_cast<int16_t>(i), static_cast<int16_t>(j)});
            }
        return out;
    }

    /// Events of the noiseless closing round: true syndrome XOR the last
    /// noisy measurement.
    std::vector<CheckCoord> closure_events() const {
        std::vector<CheckCoord> out;
        std::vector<uint8_t> truth = true_final_bits();
        const int d = cfg_.d;
        for (int i = 0; i < d - 1; ++i)
            for (int j = 0; j < d; ++j) {
                uint8_t prev = rounds_ > 0 ? measured_[rounds_ - 1][i * d + j] : 0;
                if (truth[i * d + j] ^ prev)
                    out.push_back({static_cast<int16_t>(i), static_cast<int16_t>(j)});
            }
        return out;
    }

  private:
    LatticeConfig cfg_;
    int rounds_;
    std::vector<RoundData> per_round_;
    std::vector<std::vector<uint8_t>> measured_;
    ErrorState final_state_;
};

}  // namespace lb

#endif

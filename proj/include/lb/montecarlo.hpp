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

#ifndef LB_MONTECARLO_HPP
#define LB_MONTECARLO_HPP

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "lb/decoder.hpp"
#include "lb/rng.hpp"

namespace lb {

struct StopRule {
    enum class Kind { FixedTrials, FixedFailures };
    Kind kind = Kind::FixedTrials;
    uint64_t value = 10000;
};

struct TrialStats {
    SimMode mode = SimMode::TwoD;
    int d = 3;
    double p = 0.0;
    double q = 0.0;
    Pruning pruning = Pruning::Shadowed;
    uint64_t trials = 0;
    uint64_t rounds = 0;
    uint64_t failures = 0;
    double p_l = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    uint64_t seed = 0;
};

/// 95% Wilson score interval for failures out of n.
inline std::pair<double, double> wilson_interval(uint64_t failures, uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double phat = static_cast<double>(failures) / static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / static_cast<double>(n);
    double center = phat + z2 / (2.0 * static_cast<double>(n));
    double half = z * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n) +
                                z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n)));
    return {(center - half) / denom, (center + half) / denom};
}

inline uint64_t point_tag(SimMode mode, int d, double p, double q, Pruning pruning) {
    uint64_t pb, qb;
    static_assert(sizeof(double) == sizeof(uint64_t));
    __builtin_memcpy(&pb, &p, 8);
    __builtin_memcpy(&qb, &q, 8);
    uint64_t t = splitmix64(static_cast<uint64_t>(d) * 2 + (mode == SimMode::ThreeD ? 1 : 0));
    t = splitmix64(t ^ pb);
    t = splitmix64(t ^ qb);
    t = splitmix64(t ^ (pruning == Pruning::Shadowed ? 0x5badULL : 0xc0deULL));
    return t;
}

/// One 2-D trial: fresh errors, decode, logical-failure bit. Corrections
/// touch the top row of vertical qubits only through top-boundary paths, so
/// the failure bit is the error parity on that row XOR the parity of matched
/// top-boundary edges.
inline int run_trial_2d(const LatticeConfig& cfg, const NoiseParams& params, Pruning pruning,
                        CounterRng& rng, MatcherOptions mopts) {
    ErrorState state(cfg);
    apply_bit_flips(state, params, rng);
    Syndrome syndrome = measure_z_stabilizers(state);
    int err_parity = 0;
    for (int j = 0; j < cfg.d; ++j) err_parity ^= state.vertical(0, j) ? 1 : 0;
    if (syndrome.empty()) return err_parity;
    SyndromeGraph g = build_graph(syndrome, cfg, pruning);
    BlossomMatcher matcher(mopts);
    matcher.load(g);
    MatchResult res = matcher.run_all();
    int top_matches = 0;
    for (const VertexMatch& m : res.pairs)
        if (m.v == kBoundaryTopId) top_matches ^= 1;
    return err_parity ^ top_matches;
}

namespace detail {

template <class Fn>
inline void parallel_for(uint64_t begin, uint64_t end, int threads, Fn&& fn) {
    if (threads <= 1 || end - begin <= 1) {
        for (uint64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<uint64_t> next(begin);
    auto worker = [&]() {
        while (true) {
            uint64_t i = next.fetch_add(1);
            if (i >= end) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<int>(threads, static_cast<int>(end - begin));
    pool.reserve(spawn);
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace detail

constexpr uint64_t kTrialBlock = 2048;
constexpr int kStreams3D = 8;
constexpr uint64_t kFailureStopCap = uint64_t{1} << 32;

/// Run one (d, p[, q]) point. Trials are decomposed into fixed blocks (2-D)
/// or a fixed set of independent streams (3-D), so aggregate counters do not
/// depend on the number of worker threads.
inline TrialStats run_point(const LatticeConfig& cfg, const NoiseParams& params, Pruning pruning,
                            StopRule stop, uint64_t master_seed, int threads,
                            int verify_every = 10, MatcherOptions mopts = {}) {
    cfg.validate();
    params.validate(cfg);
    TrialStats out;
    out.mode = cfg.mode;
    out.d = cfg.d;
    out.p = params.p;
    out.q = params.q;
    out.pruning = pruning;
    out.seed = master_seed;
    uint64_t tag = point_tag(cfg.mode, cfg.d, params.p, params.q, pruning);

    if (cfg.mode == SimMode::TwoD) {
        auto run_block = [&](uint64_t block, uint64_t count) {
            uint64_t fails = 0;
            for (uint64_t i = 0; i < count; ++i) {
                uint64_t trial = block * kTrialBlock + i;
                CounterRng rng(CounterRng::derive_key(master_seed ^ tag, trial));
                fails += static_cast<uint64_t>(run_trial_2d(cfg, params, pruning, rng, mopts));
            }
            return fails;
        };
        if (stop.kind == StopRule::Kind::FixedTrials) {
            uint64_t n = stop.value;
            uint64_t blocks = (n + kTrialBlock - 1) / kTrialBlock;
            std::vector<uint64_t> fails(blocks, 0);
            detail::parallel_for(0, blocks, threads, [&](uint64_t b) {
                uint64_t count = std::min(kTrialBlock, n - b * kTrialBlock);
                fails[b] = run_block(b, count);
            });
            for (uint64_t b = 0; b < blocks; ++b) out.failures += fails[b];
            out.trials = n;
        } else {
            // deterministic stop: cumulative failures over blocks in block
            // order reach the target; whole blocks always count
            std::vector<uint64_t> fails;
            uint64_t done = 0;
            uint64_t stop_block = UINT64_MAX;
            while (stop_block == UINT64_MAX && done * kTrialBlock < kFailureStopCap) {
                uint64_t wave = std::max<uint64_t>(threads, 2);
                fails.resize(done + wave, 0);
                detail::parallel_for(done, done + wave, threads,
                                     [&](uint64_t b) { fails[b] = run_block(b, kTrialBlock); });
                done += wave;
                uint64_t cum = 0;
                for (uint64_t b = 0; b < done; ++b) {
                    cum += fails[b];
                    if (cum >= stop.value) {
                        stop_block = b;
                        break;
                    }
                }
            }
            uint64_t last = std::min(stop_block, done - 1);
            for (uint64_t b = 0; b <= last; ++b) out.failures += fails[b];
            out.trials = (last + 1) * kTrialBlock;
        }
        out.rounds = out.trials;
        double n = static_cast<double>(out.trials);
        out.p_l = n > 0 ? static_cast<double>(out.failures) / n : 0.0;
        auto ci = wilson_interval(out.failures, out.trials);
        out.ci_lo = ci.first;
        out.ci_hi = ci.second;
        return out;
    }

    // 3-D: fixed number of independent streams; logical failures are parity
    // changes observed by periodic do/undo verification.
    uint64_t per_stream_rounds = 0, per_stream_failures = 0;
    if (stop.kind == StopRule::Kind::FixedTrials)
        per_stream_rounds = (stop.value + kStreams3D - 1) / kStreams3D;
    else
        per_stream_failures = (stop.value + kStreams3D - 1) / kStreams3D;

    std::vector<uint64_t> fails(kStreams3D, 0), rounds(kStreams3D, 0);
    detail::parallel_for(0, kStreams3D, threads, [&](uint64_t s) {
        CounterRng rng(CounterRng::derive_key(master_seed ^ tag, s, 0x3d));
        StreamOptions sopts;
        sopts.matcher = mopts;
        sopts.matcher.journal = true;
        StreamDecoder dec(cfg, sopts);
        ErrorState cum(cfg);
        int last_parity = 0;
        uint64_t streamed = 0, failures = 0;
        NoiseParams pq = params;
        auto verify = [&]() {
            VerifyResult vr = dec.verify_logical(z_check_bits(cum), cum);
            if (vr.failure_bit != last_parity) {
                failures += 1;
                last_parity = vr.failure_bit;
            }
        };
        while (true) {
            if (stop.kind == StopRule::Kind::FixedTrials && streamed >= per_stream_rounds) break;
            if (stop.kind == StopRule::Kind::FixedFailures &&
                (failures >= per_stream_failures || streamed >= kFailureStopCap))
                break;
            // one noisy round
            for (int i = 0; i < cfg.d; ++i)
                for (int j = 0; j < cfg.d; ++j)
                    if (rng.bernoulli(pq.p)) cum.toggle_vertical(i, j);
            for (int i = 0; i < cfg.d - 1; ++i)
                for (int j = 0; j < cfg.d - 1; ++j)
                    if (rng.bernoulli(pq.p)) cum.toggle_horizontal(i, j);
            std::vector<uint8_t> bits = z_check_bits(cum);
            for (int i = 0; i < cfg.d - 1; ++i)
                for (int j = 0; j < cfg.d; ++j)
                    if (rng.bernoulli(pq.q)) bits[i * cfg.d + j] ^= 1;
            dec.process_round(static_cast<int32_t>(streamed), bits);
            streamed += 1;
            if (verify_every > 0 && streamed % static_cast<uint64_t>(verify_every) == 0) verify();
        }
        if (verify_every <= 0 || streamed % static_cast<uint64_t>(verify_every) != 0) verify();
        fails[s] = failures;
        rounds[s] = streamed;
    });
    for (int s = 0; s < kStreams3D; ++s) {
        out.failures += fails[s];
        out.rounds += rounds[s];
    }
    out.trials = kStreams3D;
    double n = static_cast<double>(out.rounds);
    out.p_l = n > 0 ? static_cast<double>(out.failures) / n : 0.0;
    auto ci = wilson_interval(out.failures, out.rounds);
    out.ci_lo = ci.first;
    out.ci_hi = ci.second;
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps and threshold estimation
// ---------------------------------------------------------------------------

struct SweepSpec {
    SimMode mode = SimMode::TwoD;
    std::vector<int> distances;
    std::vector<double> p_values;
    double q_scale = -1.0;  // 3-D: q = p when negative, else fixed q
    Pruning pruning = Pruning::Shadowed;
    StopRule stop;
    uint64_t seed = 1;
    int verify_every = 10;

    void validate() const {
        if (distances.empty() || p_values.empty())
            throw Error(ErrorCode::BadInput, "sweep needs at least one distance and one p");
        if (stop.value < 1) throw Error(ErrorCode::BadInput, "stop rule needs a positive target");
    }
};

inline std::vector<TrialStats> run_sweep(const SweepSpec& spec, int threads) {
    spec.validate();
    std::vector<TrialStats> out;
    for (int d : spec.distances) {
        for (double p : spec.p_values) {
            LatticeConfig cfg{d, spec.mode};
            NoiseParams params;
            params.p = p;
            params.q = spec.mode == SimMode::ThreeD ? (spec.q_scale < 0 ? p : spec.q_scale) : 0.0;
            out.push_back(run_point(cfg, params, spec.pruning, spec.stop, spec.seed, threads,
                                    spec.verify_every));
        }
    }
    return out;
}

struct ThresholdEstimate {
    double p_th = 0.0;
    double error = 0.0;
    std::vector<double> pairwise;  // one crossing estimate per adjacent-distance pair
};

/// Crossing point of p_L(p; d) curves: for each adjacent pair of distances,
/// interpolate both curves piecewise-linearly in (p, log p_L) and solve for
/// the intersection; the estimate averages the pairwise crossings.
inline ThresholdEstimate estimate_threshold(const std::vector<TrialStats>& stats) {
    std::vector<int> ds;
    for (const TrialStats& s : stats)
        if (std::find(ds.begin(), ds.end(), s.d) == ds.end()) ds.push_back(s.d);
    std::sort(ds.begin(), ds.end());
    if (ds.size() < 2)
        throw Error(ErrorCode::BadInput, "threshold estimation needs at least two distances");

    auto curve = [&](int d) {
        std::vector<std::pair<double, double>> pts;  // (p, log p_L)
        for (const TrialStats& s : stats)
            if (s.d == d && s.failures > 0) pts.push_back({s.p, std::log(s.p_l)});
        std::sort(pts.begin(), pts.end());
        return pts;
    };

    ThresholdEstimate est;
    for (size_t i = 0; i + 1 < ds.size(); ++i) {
        auto a = curve(ds[i]);
        auto b = curve(ds[i + 1]);
        // difference of the two curves on the common grid
        std::vector<std::pair<double, double>> diff;
        for (const auto& [p, la] : a)
            for (const auto& [pb, lb] : b)
                if (p == pb) diff.push_back({p, lb - la});
        for (size_t k = 0; k + 1 < diff.size(); ++k) {
            double y0 = diff[k].second, y1 = diff[k + 1].second;
            if (y0 == 0.0) {
                est.pairwise.push_back(diff[k].first);
            } else if ((y0 < 0.0 && y1 >= 0.0) || (y0 > 0.0 && y1 <= 0.0)) {
                double t = y0 / (y0 - y1);
                est.pairwise.push_back(diff[k].first +
                                       t * (diff[k + 1].first - diff[k].first));
            }
        }
    }
    if (est.pairwise.empty())
        throw Error(ErrorCode::NoCrossing, "logical error rate curves do not cross in range");
    double sum = 0.0;
    for (double v : est.pairwise) sum += v;
    est.p_th = sum / static_cast<double>(est.pairwise.size());
    double var = 0.0;
    for (double v : est.pairwise) var += (v - est.p_th) * (v - est.p_th);
    est.error = est.pairwise.size() > 1
                    ? std::sqrt(var / static_cast<double>(est.pairwise.size() - 1))
                    : 0.0;
    double lo = est.pairwise.front(), hi = est.pairwise.front();
    for (double v : est.pairwise) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    est.error = std::max(est.error, (hi - lo) / 2.0);
    return est;
}

// ---------------------------------------------------------------------------
// CSV output (stable schema; plain decimal, no locale)
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline const char* csv_header() {
    return "mode,d,p,q,pruning,trials,rounds,failures,p_l,ci_lo,ci_hi,seed";
}

inline std::string csv_row(const TrialStats& s) {
    std::string row;
    row += s.mode == SimMode::TwoD ? "2d" : "3d";
    row += ',';
    row += std::to_string(s.d);
    row += ',';
    row += format_double(s.p);
    row += ',';
    row += format_double(s.q);
    row += ',';
    row += s.pruning == Pruning::Complete ? "complete" : "shadowed";
    row += ',';
    row += std::to_string(s.trials);
    row += ',';
    row += std::to_string(s.rounds);
    row += ',';
    row += std::to_string(s.failures);
    row += ',';
    row += format_double(s.p_l);
    row += ',';
    row += format_double(s.ci_lo);
    row += ',';
    row += format_double(s.ci_hi);
    row += ',';
    row += std::to_string(s.seed);
    return row;
}

}  // namespace lb

#endif

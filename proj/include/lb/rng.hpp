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

#ifndef LB_RNG_HPP
#define LB_RNG_HPP

#include <cstdint>

namespace lb {

/// SplitMix64 finalizer (Vigna / Steele et al.). Full-avalanche 64-bit mix.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: output i is splitmix64 applied to key + i * golden
/// ratio. Streams with distinct keys are independent, and a stream can be
/// created at any counter position in O(1), so per-trial streams derived from
/// (master seed, trial index) cost nothing to set up.
class CounterRng {
  public:
    explicit CounterRng(uint64_t key) : state_(key) {}

    /// Derive a stream key from a master seed and up to two stream indices.
    static uint64_t derive_key(uint64_t master, uint64_t a, uint64_t b = 0) {
        uint64_t k = splitmix64(master ^ 0x5851f42d4c957f2dULL);
        k = splitmix64(k ^ a);
        k = splitmix64(k ^ (b + 0x14057b7ef767814fULL));
        return k;
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_double() < p;
    }

    /// Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

  private:
    uint64_t state_;
};

}  // namespace lb

#endif

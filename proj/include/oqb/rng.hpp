// Copyright 2026 The oqbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

namespace oqb {

/// Counter-based random stream with SplitMix64 output mixing.
///
/// Each trajectory gets its own stream keyed by (master_seed, stream index),
/// so ensemble results do not depend on how trajectories are distributed
/// over worker threads.  The n-th draw of a stream is a pure function of
/// (master_seed, stream, n).
///
/// Draw discipline used by the steppers, which pathwise comparisons between
/// the matrix-path and the batch-kernel implementations rely on:
///   photo-detection: one uniform per step;
///   homodyne:        one Gaussian per step (Box-Muller pair, cached spare);
///   heterodyne:      two Gaussians per step.
class CounterRng {
  public:
    CounterRng() : CounterRng(0, 0) {}

    CounterRng(std::uint64_t master_seed, std::uint64_t stream) {
        const std::uint64_t k = mix(master_seed + 0x9E3779B97F4A7C15ull);
        key_ = mix(k ^ (stream + 0xD1B54A32D192ED03ull));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        counter_ += 1;
        return mix(key_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the second member of each pair is
    /// cached and returned by the next call.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_uniform();  // (0, 1], keeps log finite
        const double u2 = next_uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

  private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace oqb

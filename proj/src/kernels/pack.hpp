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

//
// SIMD abstraction shared by the trajectory kernels.  The step bodies are
// written once against this interface and instantiated per backend; every
// operation maps 1:1 onto an IEEE double operation (no FMA, no approximate
// reciprocals), which is what makes the scalar and AVX2 lanes bit-identical.

#pragma once

#include <cmath>
#include <cstdint>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace oqb::kern {

struct ScalarPack {
    double v;

    static constexpr int width = 1;
    using Mask = bool;

    static ScalarPack broadcast(double c) { return {c}; }
    static ScalarPack load(const double* p) { return {*p}; }
    void store(double* p) const { *p = v; }

    friend ScalarPack operator+(ScalarPack a, ScalarPack b) { return {a.v + b.v}; }
    friend ScalarPack operator-(ScalarPack a, ScalarPack b) { return {a.v - b.v}; }
    friend ScalarPack operator*(ScalarPack a, ScalarPack b) { return {a.v * b.v}; }
    friend ScalarPack operator/(ScalarPack a, ScalarPack b) { return {a.v / b.v}; }

    static ScalarPack sqrt(ScalarPack a) { return {std::sqrt(a.v)}; }

    static Mask less(ScalarPack a, ScalarPack b) { return a.v < b.v; }
    static Mask greater(ScalarPack a, ScalarPack b) { return a.v > b.v; }
    static Mask greater_equal(ScalarPack a, ScalarPack b) { return a.v >= b.v; }

    /// a where the mask is set, b elsewhere.
    static ScalarPack select(Mask m, ScalarPack a, ScalarPack b) { return m ? a : b; }

    static Mask mask_and(Mask a, Mask b) { return a && b; }
    static Mask mask_none() { return false; }
    static bool any(Mask m) { return m; }
    static unsigned bits(Mask m) { return m ? 1u : 0u; }
};

#if defined(__AVX2__)

struct Avx2Pack {
    __m256d v;

    static constexpr int width = 4;
    using Mask = __m256d;

    static Avx2Pack broadcast(double c) { return {_mm256_set1_pd(c)}; }
    static Avx2Pack load(const double* p) { return {_mm256_loadu_pd(p)}; }
    void store(double* p) const { _mm256_storeu_pd(p, v); }

    friend Avx2Pack operator+(Avx2Pack a, Avx2Pack b) { return {_mm256_add_pd(a.v, b.v)}; }
    friend Avx2Pack operator-(Avx2Pack a, Avx2Pack b) { return {_mm256_sub_pd(a.v, b.v)}; }
    friend Avx2Pack operator*(Avx2Pack a, Avx2Pack b) { return {_mm256_mul_pd(a.v, b.v)}; }
    friend Avx2Pack operator/(Avx2Pack a, Avx2Pack b) { return {_mm256_div_pd(a.v, b.v)}; }

    static Avx2Pack sqrt(Avx2Pack a) { return {_mm256_sqrt_pd(a.v)}; }

    static Mask less(Avx2Pack a, Avx2Pack b) { return _mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ); }
    static Mask greater(Avx2Pack a, Avx2Pack b) { return _mm256_cmp_pd(a.v, b.v, _CMP_GT_OQ); }
    static Mask greater_equal(Avx2Pack a, Avx2Pack b) {
        return _mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ);
    }

    static Avx2Pack select(Mask m, Avx2Pack a, Avx2Pack b) {
        return {_mm256_blendv_pd(b.v, a.v, m)};
    }

    static Mask mask_and(Mask a, Mask b) { return _mm256_and_pd(a, b); }
    static Mask mask_none() { return _mm256_setzero_pd(); }
    static bool any(Mask m) { return _mm256_movemask_pd(m) != 0; }
    static unsigned bits(Mask m) { return static_cast<unsigned>(_mm256_movemask_pd(m)); }
};

#endif  // __AVX2__

}  // namespace oqb::kern

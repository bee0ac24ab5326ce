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

#include "backends.hpp"
#include "oqb/errors.hpp"

namespace oqb::kern {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return avx2_compiled() && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend resolve_backend(Backend requested) {
    switch (requested) {
        case Backend::Scalar:
            return Backend::Scalar;
        case Backend::Avx2:
            if (!avx2_available())
                throw ConfigError("AVX2 kernel backend requested but not available");
            return Backend::Avx2;
        case Backend::Auto:
        default:
            return avx2_available() ? Backend::Avx2 : Backend::Scalar;
    }
}

const char* backend_name(Backend resolved) {
    switch (resolved) {
        case Backend::Scalar:
            return "scalar";
        case Backend::Avx2:
            return "avx2";
        case Backend::Auto:
        default:
            return "auto";
    }
}

std::optional<StepFailure> run_segment(Backend backend, const StepParams& params, int nsteps,
                                       BatchState& state, CounterRng* rngs,
                                       std::uint8_t* jump_flags) {
    if (nsteps < 0) throw ConfigError("run_segment: negative step count");
    switch (resolve_backend(backend)) {
        case Backend::Avx2:
            return run_segment_avx2(params, nsteps, state, rngs, jump_flags);
        case Backend::Scalar:
        default:
            return run_segment_scalar(params, nsteps, state, rngs, jump_flags);
    }
}

}  // namespace oqb::kern

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
// AVX2 backend: four trajectories per 256-bit register.  Compiled with
// -mavx2 but deliberately not -mfma, so every pack operation lowers to the
// same IEEE-rounded add/mul/div/sqrt sequence as the scalar backend and the
// two produce bit-identical states.  On builds without AVX2 this file only
// provides the "not compiled" stubs.

#include "backends.hpp"

#if defined(__AVX2__)
#include "qubit_body.hpp"
#endif

namespace oqb::kern {

#if defined(__AVX2__)

bool avx2_compiled() { return true; }

std::optional<StepFailure> run_segment_avx2(const StepParams& p, int nsteps, BatchState& s,
                                            CounterRng* rngs, std::uint8_t* jump_flags) {
    return run_segment_dispatch<Avx2Pack>(p, nsteps, s, rngs, jump_flags);
}

#else

bool avx2_compiled() { return false; }

std::optional<StepFailure> run_segment_avx2(const StepParams&, int, BatchState&, CounterRng*,
                                            std::uint8_t*) {
    throw Error("AVX2 kernel backend was not compiled into this build");
}

#endif

}  // namespace oqb::kern

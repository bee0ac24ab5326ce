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
// Scalar reference backend.  This translation unit is compiled without any
// extended ISA flags, so the generated code uses plain IEEE double
// arithmetic with no fused multiply-adds and serves as the ground truth the
// SIMD backends are checked against.

#include "backends.hpp"
#include "qubit_body.hpp"

namespace oqb::kern {

std::optional<StepFailure> run_segment_scalar(const StepParams& p, int nsteps, BatchState& s,
                                              CounterRng* rngs, std::uint8_t* jump_flags) {
    return run_segment_dispatch<ScalarPack>(p, nsteps, s, rngs, jump_flags);
}

}  // namespace oqb::kern

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

#include "oqb/kernels/qubit_kernels.hpp"

namespace oqb::kern {

std::optional<StepFailure> run_segment_scalar(const StepParams& p, int nsteps, BatchState& s,
                                              CounterRng* rngs, std::uint8_t* jump_flags);

std::optional<StepFailure> run_segment_avx2(const StepParams& p, int nsteps, BatchState& s,
                                            CounterRng* rngs, std::uint8_t* jump_flags);

/// True when the AVX2 translation unit was built with AVX2 code generation.
bool avx2_compiled();

}  // namespace oqb::kern

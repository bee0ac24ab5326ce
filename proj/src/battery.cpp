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

#include "oqb/battery.hpp"

#include <cmath>

namespace oqb {

BatteryModel::BatteryModel(double w0, double a, double k) : omega0(w0), alpha(a), kappa(k) {
    if (!(omega0 > 0.0)) throw ConfigError("BatteryModel: omega0 must be positive");
    if (alpha < 0.0) throw ConfigError("BatteryModel: alpha must be non-negative");
    if (!(kappa > 0.0)) throw ConfigError("BatteryModel: kappa must be positive");
}

LindbladModel BatteryModel::to_lindblad() const {
    ComplexMatrix h = pauli::x();
    h *= cplx(alpha, 0.0);
    ComplexMatrix c = pauli::minus();
    c *= cplx(std::sqrt(kappa), 0.0);
    return LindbladModel(std::move(h), std::move(c));
}

std::array<double, 3> BatteryModel::steady_bloch() const {
    const double den = 8.0 * alpha * alpha + kappa * kappa;
    return {0.0, 4.0 * alpha * kappa / den, -kappa * kappa / den};
}

double BatteryModel::steady_energy_analytic() const {
    const double den = 8.0 * alpha * alpha + kappa * kappa;
    return omega0 * 4.0 * alpha * alpha / den;
}

double BatteryModel::steady_ergotropy_analytic() const {
    const double den = 8.0 * alpha * alpha + kappa * kappa;
    return 0.5 * omega0 * kappa *
           (std::sqrt(16.0 * alpha * alpha + kappa * kappa) - kappa) / den;
}

double BatteryModel::peak_drive_ratio() { return std::sqrt((1.0 + std::sqrt(2.0)) / 8.0); }

double BatteryModel::peak_steady_ergotropy() const {
    return 0.5 * omega0 * (std::sqrt(2.0) - 1.0);
}

void BatteryModel::bloch_rhs(const double r[3], double out[3]) const {
    out[0] = -0.5 * kappa * r[0];
    out[1] = -0.5 * kappa * r[1] - 2.0 * alpha * r[2];
    out[2] = 2.0 * alpha * r[1] - kappa * (1.0 + r[2]);
}

}  // namespace oqb

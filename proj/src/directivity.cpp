// SPDX-License-Identifier: Apache-2.0
//
// wsprant - relative HF antenna efficiency from paired WSPR spot reports
// Copyright (C) 2026 The wsprant authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "wsprant/directivity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "wsprant/stats.hpp"

namespace wsprant::est {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kAzimuthCells = 360;
constexpr int kElevationCells = 90;
}  // namespace

DirectivityPattern::DirectivityPattern(Function fn, std::string description)
    : fn_(std::move(fn)), description_(std::move(description)) {
    const double integral = normalization_integral(fn_);
    if (!(std::abs(integral - 1.0) <= kNormalizationTolerance)) {
        throw std::invalid_argument(
            fmt::format("directivity '{}' not normalized: sphere average {:.6f}", description_, integral));
    }
}

DirectivityPattern DirectivityPattern::isotropic() {
    return {[](double, double) { return 1.0; }, "isotropic"};
}

DirectivityPattern DirectivityPattern::vertical(double exponent) {
    if (!(exponent >= 0.0)) throw std::invalid_argument("vertical pattern: exponent must be >= 0");
    // integral of cos^(m+1) over [-pi/2, pi/2]
    const double moment = std::sqrt(kPi) * std::tgamma((exponent + 2.0) / 2.0) / std::tgamma((exponent + 3.0) / 2.0);
    const double scale = 2.0 / moment;
    return {[=](double, double el) { return scale * std::pow(std::max(0.0, std::cos(el)), exponent); },
            fmt::format("vertical(m={})", exponent)};
}

DirectivityPattern DirectivityPattern::two_lobe(double boresight_deg, double floor) {
    if (!(floor >= 0.0 && floor <= 1.0)) throw std::invalid_argument("two-lobe pattern: floor must be in [0, 1]");
    const double boresight = boresight_deg * kPi / 180.0;
    const double mean = floor + (1.0 - floor) / 2.0;
    return {[=](double az, double) {
                const double c = std::cos(az - boresight);
                return (floor + (1.0 - floor) * c * c) / mean;
            },
            fmt::format("two_lobe(boresight={}, floor={})", boresight_deg, floor)};
}

double DirectivityPattern::gain_db(double azimuth_rad, double elevation_rad) const {
    return 10.0 * std::log10(fn_(azimuth_rad, elevation_rad));
}

double normalization_integral(const DirectivityPattern::Function& fn) {
    const double d_az = 2.0 * kPi / kAzimuthCells;
    const double d_el = kPi / kElevationCells;
    CompensatedSum sum;
    for (int j = 0; j < kElevationCells; ++j) {
        const double el = -kPi / 2.0 + (j + 0.5) * d_el;
        const double w = std::cos(el) * d_el * d_az;
        for (int i = 0; i < kAzimuthCells; ++i) {
            const double d = fn((i + 0.5) * d_az, el);
            if (!(d >= 0.0)) return std::nan("");
            sum += d * w;
        }
    }
    return sum.value() / (4.0 * kPi);
}

}  // namespace wsprant::est

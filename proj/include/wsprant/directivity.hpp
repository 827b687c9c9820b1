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

#pragma once

#include <functional>
#include <string>

namespace wsprant::est {

// Direction-dependent part of antenna gain, as a linear factor normalized so
// that its average over the sphere is one. Azimuth is a compass bearing and
// elevation is measured from the horizon, both in radians.
class DirectivityPattern {
public:
    using Function = std::function<double(double azimuth_rad, double elevation_rad)>;

    // Throws std::invalid_argument when the quadrature check fails.
    DirectivityPattern(Function fn, std::string description);

    static DirectivityPattern isotropic();
    // cos^m(elevation) taper, azimuth independent.
    static DirectivityPattern vertical(double exponent);
    // floor + (1 - floor) cos^2(azimuth - boresight), lobes at boresight and
    // boresight + 180. floor == 0 gives peak 2.0 with nulls broadside.
    static DirectivityPattern two_lobe(double boresight_deg, double floor);

    double operator()(double azimuth_rad, double elevation_rad) const { return fn_(azimuth_rad, elevation_rad); }
    double gain_db(double azimuth_rad, double elevation_rad) const;
    const std::string& description() const noexcept { return description_; }

private:
    Function fn_;
    std::string description_;
};

inline constexpr double kNormalizationTolerance = 1e-3;

// (1 / 4 pi) * integral of D cos(el) over the sphere, midpoint rule on a
// 360 x 90 (azimuth x elevation) grid.
double normalization_integral(const DirectivityPattern::Function& fn);

}  // namespace wsprant::est

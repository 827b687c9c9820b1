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

#include "wsprant/geodesy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "wsprant/errors.hpp"

namespace wsprant::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Subsquare grid: 24 x 24 subsquares per 2 x 1 degree square.
constexpr int kLonSubsquaresPerDeg = 12;  // 5 arc-minutes
constexpr int kLatSubsquaresPerDeg = 24;  // 2.5 arc-minutes
constexpr int kLonSubsquares = 360 * kLonSubsquaresPerDeg;
constexpr int kLatSubsquares = 180 * kLatSubsquaresPerDeg;

// Angular separations below this are treated as coincident/antipodal.
constexpr double kBearingEpsilonRad = 1e-12;

double wrap_longitude(double lon) {
    double wrapped = std::fmod(lon + 180.0, 360.0);
    if (wrapped < 0.0) wrapped += 360.0;
    wrapped -= 180.0;
    // fmod can land exactly on +180 after rounding
    if (wrapped >= 180.0) wrapped -= 360.0;
    return wrapped;
}

}  // namespace

LatLon::LatLon(double lat_deg, double lon_deg) {
    if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg)) {
        throw std::invalid_argument("LatLon: non-finite coordinate");
    }
    if (lat_deg < -90.0 || lat_deg > 90.0) {
        throw std::invalid_argument(fmt::format("LatLon: latitude {} outside [-90, 90]", lat_deg));
    }
    lat_ = lat_deg;
    lon_ = wrap_longitude(lon_deg);
}

Locator::Locator(std::string text)
    : text_(std::move(text)),
      precision_(text_.size() == 6 ? LocatorPrecision::Subsquare : LocatorPrecision::Square) {}

Locator Locator::parse(std::string_view input) {
    if (input.size() != 4 && input.size() != 6) {
        throw LocatorError(
            fmt::format("locator '{}': expected 4 or 6 characters, got {}", input, input.size()), 0);
    }
    std::string canon(input);
    for (std::size_t i = 0; i < canon.size(); ++i) {
        const auto c = static_cast<unsigned char>(canon[i]);
        bool ok = false;
        if (i < 2) {
            canon[i] = static_cast<char>(std::toupper(c));
            ok = canon[i] >= 'A' && canon[i] <= 'R';
        } else if (i < 4) {
            ok = c >= '0' && c <= '9';
        } else {
            canon[i] = static_cast<char>(std::tolower(c));
            ok = canon[i] >= 'a' && canon[i] <= 'x';
        }
        if (!ok) {
            const char* expected = i < 2 ? "A-R" : (i < 4 ? "0-9" : "a-x");
            throw LocatorError(fmt::format("locator '{}': character {} ('{}') not in {}", input,
                                           i + 1, input[i], expected),
                               i + 1);
        }
    }
    return Locator(std::move(canon));
}

double Locator::cell_height_deg() const noexcept {
    return precision_ == LocatorPrecision::Subsquare ? 1.0 / kLatSubsquaresPerDeg : 1.0;
}

double Locator::cell_width_deg() const noexcept {
    return precision_ == LocatorPrecision::Subsquare ? 1.0 / kLonSubsquaresPerDeg : 2.0;
}

LatLon decode_locator(const Locator& loc) {
    const std::string& t = loc.text();
    double lon = (t[0] - 'A') * 20.0 - 180.0 + (t[2] - '0') * 2.0;
    double lat = (t[1] - 'A') * 10.0 - 90.0 + (t[3] - '0') * 1.0;
    if (loc.precision() == LocatorPrecision::Subsquare) {
        lon += (t[4] - 'a') / static_cast<double>(kLonSubsquaresPerDeg);
        lat += (t[5] - 'a') / static_cast<double>(kLatSubsquaresPerDeg);
    }
    lon += loc.cell_width_deg() / 2.0;
    lat += loc.cell_height_deg() / 2.0;
    return LatLon(lat, lon);
}

Locator encode_locator(const LatLon& p, LocatorPrecision precision) {
    // Index in subsquare units from the south-west corner of the grid.
    const double x = p.lon_deg() + 180.0;
    const double y = p.lat_deg() + 90.0;
    const int ix = std::clamp(static_cast<int>(std::floor(x * kLonSubsquaresPerDeg)), 0, kLonSubsquares - 1);
    const int iy = std::clamp(static_cast<int>(std::floor(y * kLatSubsquaresPerDeg)), 0, kLatSubsquares - 1);

    std::string text;
    text += static_cast<char>('A' + ix / (20 * kLonSubsquaresPerDeg));
    text += static_cast<char>('A' + iy / (10 * kLatSubsquaresPerDeg));
    text += static_cast<char>('0' + (ix % (20 * kLonSubsquaresPerDeg)) / (2 * kLonSubsquaresPerDeg));
    text += static_cast<char>('0' + (iy % (10 * kLatSubsquaresPerDeg)) / kLatSubsquaresPerDeg);
    if (precision == LocatorPrecision::Subsquare) {
        text += static_cast<char>('a' + ix % (2 * kLonSubsquaresPerDeg));
        text += static_cast<char>('a' + iy % kLatSubsquaresPerDeg);
    }
    return Locator::parse(text);
}

double great_circle_km(const LatLon& a, const LatLon& b) {
    const double lat1 = a.lat_deg() * kDegToRad;
    const double lat2 = b.lat_deg() * kDegToRad;
    const double sdlat = std::sin((lat2 - lat1) / 2.0);
    const double sdlon = std::sin((b.lon_deg() - a.lon_deg()) * kDegToRad / 2.0);
    const double h = std::min(1.0, sdlat * sdlat + std::cos(lat1) * std::cos(lat2) * sdlon * sdlon);
    return 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

double initial_bearing_deg(const LatLon& a, const LatLon& b) {
    if (std::abs(std::abs(a.lat_deg()) - 90.0) * kDegToRad < kBearingEpsilonRad) {
        throw UndefinedBearingError("initial bearing undefined: origin is a pole");
    }
    const double central = great_circle_km(a, b) / kEarthRadiusKm;
    if (central < kBearingEpsilonRad) {
        throw UndefinedBearingError("initial bearing undefined: coincident points");
    }
    // Distance to b's antipode is well conditioned where the haversine of a
    // near-pi angle is not.
    const LatLon antipode(-b.lat_deg(), b.lon_deg() + 180.0);
    if (great_circle_km(a, antipode) / kEarthRadiusKm < kBearingEpsilonRad) {
        throw UndefinedBearingError("initial bearing undefined: antipodal points");
    }
    const double lat1 = a.lat_deg() * kDegToRad;
    const double lat2 = b.lat_deg() * kDegToRad;
    const double dlon = (b.lon_deg() - a.lon_deg()) * kDegToRad;
    const double y = std::sin(dlon) * std::cos(lat2);
    const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
    double bearing = std::atan2(y, x) / kDegToRad;
    if (bearing < 0.0) bearing += 360.0;
    if (bearing >= 360.0) bearing -= 360.0;
    return bearing;
}

LatLon destination_point(const LatLon& origin, double bearing_deg, double distance_km) {
    const double delta = distance_km / kEarthRadiusKm;
    const double theta = bearing_deg * kDegToRad;
    const double lat1 = origin.lat_deg() * kDegToRad;
    const double lon1 = origin.lon_deg() * kDegToRad;
    const double sin_lat2 = std::clamp(
        std::sin(lat1) * std::cos(delta) + std::cos(lat1) * std::sin(delta) * std::cos(theta), -1.0, 1.0);
    const double lat2 = std::asin(sin_lat2);
    const double lon2 = lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                                          std::cos(delta) - std::sin(lat1) * sin_lat2);
    return LatLon(lat2 / kDegToRad, lon2 / kDegToRad);
}

}  // namespace wsprant::geo

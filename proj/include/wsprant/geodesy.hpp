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

#include <compare>
#include <string>
#include <string_view>

namespace wsprant::geo {

inline constexpr double kEarthRadiusKm = 6371.0;

// Geographic position on a spherical Earth. Latitude is checked against
// [-90, 90]; longitude is wrapped into [-180, 180).
class LatLon {
public:
    LatLon(double lat_deg, double lon_deg);

    double lat_deg() const noexcept { return lat_; }
    double lon_deg() const noexcept { return lon_; }

    bool operator==(const LatLon&) const = default;

private:
    double lat_;
    double lon_;
};

enum class LocatorPrecision { Square = 4, Subsquare = 6 };

// Maidenhead locator in canonical case: "JO89" or "JO89ab".
class Locator {
public:
    // Accepts either case; throws LocatorError naming the offending position.
    static Locator parse(std::string_view text);

    const std::string& text() const noexcept { return text_; }
    LocatorPrecision precision() const noexcept { return precision_; }

    // Height and width of the designated cell in degrees.
    double cell_height_deg() const noexcept;
    double cell_width_deg() const noexcept;

    bool operator==(const Locator& other) const noexcept { return text_ == other.text_; }
    std::strong_ordering operator<=>(const Locator& other) const noexcept {
        return text_ <=> other.text_;
    }

private:
    explicit Locator(std::string text);

    std::string text_;
    LocatorPrecision precision_;
};

// Center of the locator's cell.
LatLon decode_locator(const Locator& loc);

// Locator of the cell that contains p.
Locator encode_locator(const LatLon& p, LocatorPrecision precision);

// Spherical great-circle distance (haversine), R = 6371.0 km.
double great_circle_km(const LatLon& a, const LatLon& b);

// Initial great-circle bearing from a toward b in [0, 360).
// Throws UndefinedBearingError for coincident or antipodal points and for
// an origin at either pole.
double initial_bearing_deg(const LatLon& a, const LatLon& b);

// Point reached by travelling distance_km from origin along bearing_deg.
LatLon destination_point(const LatLon& origin, double bearing_deg, double distance_km);

}  // namespace wsprant::geo

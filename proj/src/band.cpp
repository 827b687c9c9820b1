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

#include "wsprant/band.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

namespace wsprant {

namespace {

// Slack around each 200 Hz segment for transmitter drift and dial error.
constexpr double kSegmentSlackMhz = 50e-6;

constexpr std::array<WsprSegment, 13> kSegments{{
    {Band::B2200m, "2200m", 0.1375, 0.1377},
    {Band::B630m, "630m", 0.4756, 0.4758},
    {Band::B160m, "160m", 1.8380, 1.8382},
    {Band::B80m, "80m", 3.5700, 3.5702},
    {Band::B60m, "60m", 5.2886, 5.2888},
    {Band::B40m, "40m", 7.0400, 7.0402},
    {Band::B30m, "30m", 10.1401, 10.1403},
    {Band::B20m, "20m", 14.0970, 14.0972},
    {Band::B17m, "17m", 18.1060, 18.1062},
    {Band::B15m, "15m", 21.0960, 21.0962},
    {Band::B12m, "12m", 24.9260, 24.9262},
    {Band::B10m, "10m", 28.1260, 28.1262},
    {Band::B6m, "6m", 50.2944, 50.2946},
}};

}  // namespace

std::optional<Band> band_from_frequency(double frequency_mhz) {
    for (const auto& seg : kSegments) {
        if (frequency_mhz >= seg.low_mhz - kSegmentSlackMhz && frequency_mhz <= seg.high_mhz + kSegmentSlackMhz) {
            return seg.band;
        }
    }
    return std::nullopt;
}

const WsprSegment& segment_of(Band band) {
    return kSegments[static_cast<std::size_t>(band)];
}

std::string_view band_name(Band band) {
    return segment_of(band).name;
}

std::optional<Band> parse_band(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const auto& seg : kSegments) {
        if (seg.name == lower) return seg.band;
    }
    return std::nullopt;
}

}  // namespace wsprant

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

#include <optional>
#include <string_view>

namespace wsprant {

// Amateur bands with a WSPR segment.
enum class Band { B2200m, B630m, B160m, B80m, B60m, B40m, B30m, B20m, B17m, B15m, B12m, B10m, B6m };

struct WsprSegment {
    Band band;
    std::string_view name;
    double low_mhz;   // dial frequency + 1400 Hz
    double high_mhz;  // dial frequency + 1600 Hz
};

// Band whose WSPR segment contains frequency_mhz, if any.
std::optional<Band> band_from_frequency(double frequency_mhz);

const WsprSegment& segment_of(Band band);
std::string_view band_name(Band band);

// Accepts the band names used by band_name(), e.g. "20m".
std::optional<Band> parse_band(std::string_view name);

}  // namespace wsprant

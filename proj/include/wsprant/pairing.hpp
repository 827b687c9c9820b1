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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsprant/geodesy.hpp"
#include "wsprant/ingest.hpp"

namespace wsprant::pairing {

// Same-slot, same-receiver reports of both campaign callsigns.
struct PairedSample {
    ingest::SlotId slot;
    std::string rx_call;
    geo::Locator rx_locator;
    int snr_a_db;  // antenna under test
    int snr_b_db;  // reference antenna
    int delta_db;  // snr_a_db - snr_b_db
    // Bearing transmitter -> receiver; empty when both share a locator cell.
    std::optional<double> azimuth_deg;
    double distance_km;

    bool operator==(const PairedSample&) const = default;
};

struct ReceiverGroup {
    std::string rx_call;
    geo::Locator rx_locator;
    std::vector<PairedSample> samples;  // ordered by slot
    std::optional<double> azimuth_deg;
    double distance_km;
};

// One sample per (rx_call, slot) that holds exactly one spot of each campaign
// callsign on the campaign band. Output is sorted by slot, then rx_call.
std::vector<PairedSample> pair_reports(const std::vector<ingest::Spot>& spots, const ingest::CampaignConfig& config);

// Partition by rx_call, sorted by rx_call. Direction is taken from the
// group's first sample.
std::vector<ReceiverGroup> group_by_receiver(const std::vector<PairedSample>& pairs);

// slot,rx_call,rx_locator,snr_a,snr_b,delta,azimuth,distance
void write_pairs_csv(std::ostream& out, const std::vector<PairedSample>& pairs);

}  // namespace wsprant::pairing

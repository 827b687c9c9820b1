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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wsprant/band.hpp"
#include "wsprant/directivity.hpp"
#include "wsprant/estimators.hpp"
#include "wsprant/geodesy.hpp"
#include "wsprant/ingest.hpp"

namespace wsprant::sim {

using Rng = std::mt19937_64;

// Independent generator for (seed, stream, index); used for per-slot
// substreams so that slot results do not depend on evaluation order.
Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream, std::int64_t index);

// Gain in dB = efficiency_db + 10 log10 D(azimuth, elevation).
struct AntennaModel {
    double efficiency_db = 0.0;  // <= 0
    est::DirectivityPattern pattern = est::DirectivityPattern::isotropic();

    double gain_db(double azimuth_rad, double elevation_rad) const;
};

struct ReceiverModel {
    std::string rx_call;
    geo::LatLon location;
    double noise_floor_db = -130.0;  // N_i
    double rx_gain_db = 0.0;         // G_rx,i
    double activity_prob = 1.0;      // chance the receiver monitors the band in a slot
    double elevation_deg = 20.0;     // assumed take-off angle toward this receiver
    double base_loss_db = 160.0;     // L_i before the per-slot fluctuation
};

// I/N ratio drawn independently per signal and slot: zero with quiet_prob,
// otherwise exponential with mean mean_ratio.
struct InterferenceModel {
    bool enabled = true;
    double quiet_prob = 0.7;
    double mean_ratio = 1.8;

    double draw(Rng& rng) const;
};

struct Scenario {
    geo::LatLon tx_location{59.5, 17.0};
    std::string call_a = "SIM0A";
    std::string call_b = "SIM0B";
    Band band = Band::B20m;
    AntennaModel antenna_a;
    AntennaModel antenna_b;
    int tx_power_dbm = 23;
    std::vector<ReceiverModel> receivers;
    // Per-slot path-loss fluctuation, shared by both signals at a receiver.
    double fading_sigma_db = 2.0;
    InterferenceModel interference;
    double decode_threshold_db = -28.0;
    double collision_prob = 0.0;
    // Optional unreliable-report mode: a decoded SNR is offset by a uniform
    // draw in [-corrupt_span_db, +corrupt_span_db].
    double corrupt_prob = 0.0;
    double corrupt_span_db = 10.0;
    std::uint64_t rng_seed = 1;
    ingest::SlotId start_slot{13750000};

    // Throws ConfigError on out-of-range parameters.
    void validate() const;
};

struct ReceiverTruth {
    std::string rx_call;
    double azimuth_deg;
    double elevation_deg;
    double true_delta_db;      // G_a - G_b toward this receiver
    std::size_t n_pairs = 0;   // slots where both signals were reported
};

struct CampaignTruth {
    double delta_eta_db = 0.0;
    std::vector<ReceiverTruth> receivers;
    // Directivity bias over the realized pair directions; empty without pairs.
    std::optional<double> bias_db;
    std::size_t n_pairs = 0;
};

struct SyntheticCampaignResult {
    std::vector<ingest::Spot> spots;
    CampaignTruth truth;
};

std::vector<ingest::Spot> simulate_slot(const Scenario& scenario, ingest::SlotId slot, Rng& rng);

// Concatenates simulate_slot over n_slots consecutive slots from
// scenario.start_slot. Output is bit-identical for any thread count.
SyntheticCampaignResult run_campaign(const Scenario& scenario, int n_slots, int threads = 1);

// The campaign configuration that admits exactly this scenario's spots.
ingest::CampaignConfig campaign_config_for(const Scenario& scenario, int n_slots);

// ---------------------------------------------------------------------------
// Receiver populations

// Single-hop mirror reflection at layer_height_km, or piecewise-linear
// interpolation of a (distance_km, elevation_deg) table when one is given.
struct ElevationModel {
    double layer_height_km = 300.0;
    std::vector<std::pair<double, double>> table;

    double elevation_deg(double distance_km) const;
};

struct SpatialDistribution {
    enum class Kind { UniformAzimuth, SectorClustered };
    Kind kind = Kind::UniformAzimuth;
    double center_deg = 225.0;
    double width_deg = 90.0;
    double fraction = 0.8;  // share drawn inside the sector; the rest is uniform

    static SpatialDistribution uniform() { return {}; }
    static SpatialDistribution sector(double center_deg, double width_deg, double fraction) {
        return {Kind::SectorClustered, center_deg, width_deg, fraction};
    }
};

struct PopulationOptions {
    geo::LatLon tx_location{59.5, 17.0};
    double min_distance_km = 500.0;
    double max_distance_km = 2000.0;
    double loss_at_1000km_db = 160.0;
    double loss_slope_db_per_decade = 20.0;
    double loss_spread_db = 6.0;
    double noise_floor_db = -130.0;
    double noise_spread_db = 3.0;
    double rx_gain_db = 0.0;
    double activity_prob = 1.0;
    ElevationModel elevation;
    std::string call_prefix = "RX";
};

std::vector<ReceiverModel> make_receiver_population(int count, const SpatialDistribution& distribution,
                                                    const PopulationOptions& options, Rng& rng);

// Azimuth from the transmitter, in degrees.
double receiver_azimuth_deg(const Scenario& scenario, const ReceiverModel& rx);

}  // namespace wsprant::sim

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

#include <json.hpp>

#include "wsprant/simulator.hpp"

namespace wsprant::sim {

// A scenario plus its campaign length.
struct ScenarioSetup {
    Scenario scenario;
    int n_slots = 30;
    int threads = 1;
};

// Reference campaign: 30 slots (about one hour), 45 band-hopping receivers
// 500-2000 km away clustered toward the south-west, a test antenna 4 dB less
// efficient than the reference, and heavy collision losses.
ScenarioSetup realistic_scenario(std::uint64_t seed);

// Strong-signal campaign with no collisions, so the decode threshold and
// erasures do not select samples. Interference as in the default model.
ScenarioSetup clean_scenario(std::uint64_t seed, int receivers, int n_slots,
                            const SpatialDistribution& distribution = SpatialDistribution::uniform());

// Builds a scenario from the declarative "scenario" block of a campaign
// file. Every field is optional; missing fields take the values of
// realistic_scenario(). Unknown keys are rejected with ConfigError.
//
//   seed, slots, threads, start (UTC), tx_locator, call_a, call_b, band,
//   tx_power_dbm, fading_sigma_db, decode_threshold_db, collision_prob,
//   corrupt_prob, corrupt_span_db,
//   antenna_a / antenna_b: { efficiency_db,
//       pattern: { type: isotropic | vertical | two_lobe, exponent,
//                  boresight_deg, floor } },
//   interference: { enabled, quiet_prob, mean_ratio },
//   population: { count, activity_prob, min_distance_km, max_distance_km,
//       loss_at_1000km_db, loss_slope_db_per_decade, loss_spread_db,
//       noise_floor_db, noise_spread_db, rx_gain_db, layer_height_km,
//       elevation_table: [[distance_km, elevation_deg], ...],
//       distribution: { type: uniform | sector, center_deg, width_deg, fraction } }
ScenarioSetup scenario_from_json(const nlohmann::json& block);

nlohmann::json truth_to_json(const CampaignTruth& truth, const Scenario& scenario, int n_slots);

}  // namespace wsprant::sim

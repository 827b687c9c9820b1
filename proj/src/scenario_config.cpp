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

#include "wsprant/scenario_config.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>

#include <fmt/format.h>

#include "wsprant/errors.hpp"

namespace wsprant::sim {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPopulationStream = 0x706f70;  // "pop"

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, T& target, std::string_view where) {
    if (!obj.contains(key)) return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("{}.{}: {}", where, key, e.what()));
    }
}

PopulationOptions default_population(const geo::LatLon& tx) {
    PopulationOptions p;
    p.tx_location = tx;
    return p;
}

struct PopulationPlan {
    int count;
    SpatialDistribution distribution;
    PopulationOptions options;
};

// Band-hopping receivers, most of them near the decode threshold.
PopulationPlan realistic_population(const geo::LatLon& tx) {
    PopulationPlan plan{45, SpatialDistribution::sector(225.0, 120.0, 0.7), default_population(tx)};
    plan.options.activity_prob = 0.8;
    plan.options.loss_at_1000km_db = 176.0;
    plan.options.loss_spread_db = 8.0;
    return plan;
}

est::DirectivityPattern pattern_from_json(const json& j, std::string_view where) {
    reject_unknown(j, where, {"type", "exponent", "boresight_deg", "floor"});
    std::string type = "isotropic";
    double exponent = 1.0, boresight = 0.0, floor = 0.2;
    read(j, "type", type, where);
    read(j, "exponent", exponent, where);
    read(j, "boresight_deg", boresight, where);
    read(j, "floor", floor, where);
    try {
        if (type == "isotropic") return est::DirectivityPattern::isotropic();
        if (type == "vertical") return est::DirectivityPattern::vertical(exponent);
        if (type == "two_lobe") return est::DirectivityPattern::two_lobe(boresight, floor);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}: {}", where, e.what()));
    }
    throw ConfigError(fmt::format("{}: unknown pattern type '{}'", where, type));
}

void antenna_from_json(const json& j, AntennaModel& antenna, std::string_view where) {
    reject_unknown(j, where, {"efficiency_db", "pattern"});
    read(j, "efficiency_db", antenna.efficiency_db, where);
    if (j.contains("pattern")) antenna.pattern = pattern_from_json(j.at("pattern"), fmt::format("{}.pattern", where));
}

json pattern_summary(const est::DirectivityPattern& p) {
    return p.description();
}

}  // namespace

ScenarioSetup realistic_scenario(std::uint64_t seed) {
    ScenarioSetup setup;
    auto& s = setup.scenario;
    s.rng_seed = seed;
    s.antenna_a = {-4.0, est::DirectivityPattern::vertical(1.0)};
    s.antenna_b = {0.0, est::DirectivityPattern::vertical(1.0)};
    s.collision_prob = 0.4;
    const auto pop = realistic_population(s.tx_location);
    auto rng = make_stream_rng(seed, kPopulationStream, 0);
    s.receivers = make_receiver_population(pop.count, pop.distribution, pop.options, rng);
    setup.n_slots = 30;
    return setup;
}

ScenarioSetup clean_scenario(std::uint64_t seed, int receivers, int n_slots, const SpatialDistribution& distribution) {
    ScenarioSetup setup;
    auto& s = setup.scenario;
    s.rng_seed = seed;
    s.collision_prob = 0.0;
    auto pop = default_population(s.tx_location);
    pop.activity_prob = 1.0;
    pop.loss_at_1000km_db = 150.0;
    pop.loss_spread_db = 3.0;
    auto rng = make_stream_rng(seed, kPopulationStream, 0);
    s.receivers = make_receiver_population(receivers, distribution, pop, rng);
    setup.n_slots = n_slots;
    return setup;
}

ScenarioSetup scenario_from_json(const json& block) {
    constexpr std::string_view where = "scenario";
    reject_unknown(block, where,
                   {"seed", "slots", "threads", "start", "tx_locator", "call_a", "call_b", "band", "tx_power_dbm",
                    "fading_sigma_db", "decode_threshold_db", "collision_prob", "corrupt_prob", "corrupt_span_db",
                    "antenna_a", "antenna_b", "interference", "population"});
    std::uint64_t seed = 1;
    read(block, "seed", seed, where);
    ScenarioSetup setup = realistic_scenario(seed);
    auto& s = setup.scenario;

    read(block, "slots", setup.n_slots, where);
    read(block, "threads", setup.threads, where);
    if (setup.n_slots < 1) throw ConfigError("scenario.slots must be >= 1");
    if (block.contains("start")) {
        std::string start;
        if (block.at("start").is_number_integer()) {
            start = std::to_string(block.at("start").get<std::int64_t>());
        } else {
            read(block, "start", start, where);
        }
        s.start_slot = ingest::slot_of(ingest::parse_utc(start));
    }
    if (block.contains("tx_locator")) {
        std::string loc;
        read(block, "tx_locator", loc, where);
        try {
            s.tx_location = geo::decode_locator(geo::Locator::parse(loc));
        } catch (const LocatorError& e) {
            throw ConfigError(fmt::format("scenario.tx_locator: {}", e.what()));
        }
    }
    read(block, "call_a", s.call_a, where);
    read(block, "call_b", s.call_b, where);
    for (auto* call : {&s.call_a, &s.call_b}) {
        const auto canon = ingest::normalize_callsign(*call);
        if (!canon) throw ConfigError(fmt::format("{}: invalid callsign '{}'", where, *call));
        *call = *canon;
    }
    if (block.contains("band")) {
        std::string band;
        read(block, "band", band, where);
        const auto b = parse_band(band);
        if (!b) throw ConfigError(fmt::format("scenario.band: unknown band '{}'", band));
        s.band = *b;
    }
    read(block, "tx_power_dbm", s.tx_power_dbm, where);
    read(block, "fading_sigma_db", s.fading_sigma_db, where);
    read(block, "decode_threshold_db", s.decode_threshold_db, where);
    read(block, "collision_prob", s.collision_prob, where);
    read(block, "corrupt_prob", s.corrupt_prob, where);
    read(block, "corrupt_span_db", s.corrupt_span_db, where);
    if (block.contains("antenna_a")) antenna_from_json(block.at("antenna_a"), s.antenna_a, "scenario.antenna_a");
    if (block.contains("antenna_b")) antenna_from_json(block.at("antenna_b"), s.antenna_b, "scenario.antenna_b");
    if (block.contains("interference")) {
        const auto& j = block.at("interference");
        reject_unknown(j, "scenario.interference", {"enabled", "quiet_prob", "mean_ratio"});
        read(j, "enabled", s.interference.enabled, "scenario.interference");
        read(j, "quiet_prob", s.interference.quiet_prob, "scenario.interference");
        read(j, "mean_ratio", s.interference.mean_ratio, "scenario.interference");
    }

    // The population is regenerated whenever the block or the transmitter site changes.
    auto [count, distribution, pop] = realistic_population(s.tx_location);
    if (block.contains("population")) {
        constexpr std::string_view pw = "scenario.population";
        const auto& j = block.at("population");
        reject_unknown(j, pw,
                       {"count", "activity_prob", "min_distance_km", "max_distance_km", "loss_at_1000km_db",
                        "loss_slope_db_per_decade", "loss_spread_db", "noise_floor_db", "noise_spread_db",
                        "rx_gain_db", "layer_height_km", "elevation_table", "distribution"});
        read(j, "count", count, pw);
        read(j, "activity_prob", pop.activity_prob, pw);
        read(j, "min_distance_km", pop.min_distance_km, pw);
        read(j, "max_distance_km", pop.max_distance_km, pw);
        read(j, "loss_at_1000km_db", pop.loss_at_1000km_db, pw);
        read(j, "loss_slope_db_per_decade", pop.loss_slope_db_per_decade, pw);
        read(j, "loss_spread_db", pop.loss_spread_db, pw);
        read(j, "noise_floor_db", pop.noise_floor_db, pw);
        read(j, "noise_spread_db", pop.noise_spread_db, pw);
        read(j, "rx_gain_db", pop.rx_gain_db, pw);
        read(j, "layer_height_km", pop.elevation.layer_height_km, pw);
        read(j, "elevation_table", pop.elevation.table, pw);
        std::sort(pop.elevation.table.begin(), pop.elevation.table.end());
        if (j.contains("distribution")) {
            const auto& d = j.at("distribution");
            const std::string dw = "scenario.population.distribution";
            reject_unknown(d, dw, {"type", "center_deg", "width_deg", "fraction"});
            std::string type = "uniform";
            read(d, "type", type, dw);
            if (type == "uniform") {
                distribution = SpatialDistribution::uniform();
            } else if (type == "sector") {
                read(d, "center_deg", distribution.center_deg, dw);
                read(d, "width_deg", distribution.width_deg, dw);
                read(d, "fraction", distribution.fraction, dw);
            } else {
                throw ConfigError(fmt::format("{}: unknown type '{}'", dw, type));
            }
        }
    }
    if (count < 1) throw ConfigError("scenario.population.count must be >= 1");
    auto rng = make_stream_rng(seed, kPopulationStream, 0);
    try {
        s.receivers = make_receiver_population(count, distribution, pop, rng);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("scenario.population: {}", e.what()));
    }
    s.validate();
    return setup;
}

json truth_to_json(const CampaignTruth& truth, const Scenario& scenario, int n_slots) {
    json receivers = json::array();
    for (const auto& r : truth.receivers) {
        receivers.push_back({{"rx_call", r.rx_call},
                             {"azimuth_deg", r.azimuth_deg},
                             {"elevation_deg", r.elevation_deg},
                             {"true_delta_db", r.true_delta_db},
                             {"n_pairs", r.n_pairs}});
    }
    json j{
        {"schema", "wsprant-truth v1"},
        {"seed", scenario.rng_seed},
        {"slots", n_slots},
        {"call_a", scenario.call_a},
        {"call_b", scenario.call_b},
        {"antenna_a", {{"efficiency_db", scenario.antenna_a.efficiency_db},
                       {"pattern", pattern_summary(scenario.antenna_a.pattern)}}},
        {"antenna_b", {{"efficiency_db", scenario.antenna_b.efficiency_db},
                       {"pattern", pattern_summary(scenario.antenna_b.pattern)}}},
        {"delta_eta_db", truth.delta_eta_db},
        {"n_pairs", truth.n_pairs},
        {"receivers", receivers},
    };
    j["bias_db"] = truth.bias_db ? json(*truth.bias_db) : json(nullptr);
    return j;
}

}  // namespace wsprant::sim

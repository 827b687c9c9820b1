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

#include "wsprant/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "wsprant/errors.hpp"
#include "wsprant/stats.hpp"

namespace wsprant::sim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int round_half_away(double x) {
    return static_cast<int>(std::round(x));
}

struct Geometry {
    double azimuth_rad;
    double elevation_rad;
};

std::vector<Geometry> geometry_of(const Scenario& scenario) {
    std::vector<Geometry> g;
    g.reserve(scenario.receivers.size());
    for (const auto& rx : scenario.receivers) {
        g.push_back({receiver_azimuth_deg(scenario, rx) * kDegToRad, rx.elevation_deg * kDegToRad});
    }
    return g;
}

std::vector<ingest::Spot> simulate_slot_impl(const Scenario& s, const std::vector<Geometry>& geometry,
                                             const geo::Locator& tx_locator,
                                             const std::vector<geo::Locator>& rx_locators, ingest::SlotId slot,
                                             Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> fade(0.0, 1.0);
    std::uniform_real_distribution<double> corrupt(-1.0, 1.0);
    const auto& seg = segment_of(s.band);
    // Distinct 6 Hz sub-slots inside the segment.
    const double freq_a = seg.low_mhz + 50e-6;
    const double freq_b = seg.low_mhz + 150e-6;

    std::vector<ingest::Spot> spots;
    for (std::size_t i = 0; i < s.receivers.size(); ++i) {
        const auto& rx = s.receivers[i];
        if (!(unit(rng) < rx.activity_prob)) continue;
        const double loss = rx.base_loss_db + s.fading_sigma_db * fade(rng);

        const auto emit = [&](const AntennaModel& antenna, const std::string& call, double freq) {
            const double x = s.interference.draw(rng);
            const bool collided = unit(rng) < s.collision_prob;
            const bool corrupted = unit(rng) < s.corrupt_prob;
            const double offset = corrupt(rng) * s.corrupt_span_db;
            double snr = s.tx_power_dbm + antenna.gain_db(geometry[i].azimuth_rad, geometry[i].elevation_rad) +
                         rx.rx_gain_db - loss - (rx.noise_floor_db + 10.0 * std::log10(1.0 + x));
            if (collided || !(snr >= s.decode_threshold_db)) return;
            if (corrupted) snr += offset;
            spots.push_back(ingest::Spot{
                .timestamp = slot.start_time(),
                .tx_call = call,
                .frequency_mhz = freq,
                .snr_db = round_half_away(snr),
                .power_dbm = s.tx_power_dbm,
                .tx_locator = tx_locator,
                .rx_call = rx.rx_call,
                .rx_locator = rx_locators[i],
                .drift_hz_s = 0.0,
                .mode = ingest::kWspr2Mode,
                .band = s.band,
            });
        };
        emit(s.antenna_a, s.call_a, freq_a);
        emit(s.antenna_b, s.call_b, freq_b);
    }
    return spots;
}

std::vector<geo::Locator> rx_locators_of(const Scenario& s) {
    std::vector<geo::Locator> locs;
    locs.reserve(s.receivers.size());
    for (const auto& rx : s.receivers) locs.push_back(geo::encode_locator(rx.location, geo::LocatorPrecision::Subsquare));
    return locs;
}

constexpr std::uint64_t kSlotStream = 0x736c6f74;  // "slot"

}  // namespace

Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream, std::int64_t index) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(stream));
    const std::uint64_t c = splitmix64(b ^ static_cast<std::uint64_t>(index));
    std::seed_seq seq{static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

double AntennaModel::gain_db(double azimuth_rad, double elevation_rad) const {
    return efficiency_db + pattern.gain_db(azimuth_rad, elevation_rad);
}

double InterferenceModel::draw(Rng& rng) const {
    // Both draws are always consumed so the stream layout does not depend on parameters.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    const double u = unit(rng);
    const double e = expo(rng);
    if (!enabled || u < quiet_prob) return 0.0;
    return e * mean_ratio;
}

void Scenario::validate() const {
    const auto fail = [](const std::string& msg) { throw ConfigError("scenario: " + msg); };
    if (!ingest::normalize_callsign(call_a) || !ingest::normalize_callsign(call_b)) fail("invalid callsign");
    if (*ingest::normalize_callsign(call_a) == *ingest::normalize_callsign(call_b)) fail("call_a == call_b");
    if (antenna_a.efficiency_db > 0.0 || antenna_b.efficiency_db > 0.0) fail("efficiency_db must be <= 0");
    if (fading_sigma_db < 0.0) fail("fading_sigma_db must be >= 0");
    if (collision_prob < 0.0 || collision_prob > 1.0) fail("collision_prob must be in [0, 1]");
    if (corrupt_prob < 0.0 || corrupt_prob > 1.0) fail("corrupt_prob must be in [0, 1]");
    if (interference.quiet_prob < 0.0 || interference.quiet_prob > 1.0) fail("quiet_prob must be in [0, 1]");
    if (interference.mean_ratio < 0.0) fail("interference mean must be >= 0");
    if (receivers.empty()) fail("no receivers");
    for (const auto& rx : receivers) {
        if (rx.activity_prob < 0.0 || rx.activity_prob > 1.0) fail(fmt::format("{}: activity_prob outside [0, 1]", rx.rx_call));
        if (!ingest::normalize_callsign(rx.rx_call)) fail(fmt::format("invalid receiver callsign '{}'", rx.rx_call));
    }
}

double receiver_azimuth_deg(const Scenario& scenario, const ReceiverModel& rx) {
    return geo::initial_bearing_deg(scenario.tx_location, rx.location);
}

std::vector<ingest::Spot> simulate_slot(const Scenario& scenario, ingest::SlotId slot, Rng& rng) {
    const auto tx_loc = geo::encode_locator(scenario.tx_location, geo::LocatorPrecision::Subsquare);
    return simulate_slot_impl(scenario, geometry_of(scenario), tx_loc, rx_locators_of(scenario), slot, rng);
}

SyntheticCampaignResult run_campaign(const Scenario& scenario, int n_slots, int threads) {
    if (n_slots < 1) throw std::invalid_argument("run_campaign: n_slots must be >= 1");
    scenario.validate();
    const auto geometry = geometry_of(scenario);
    const auto tx_loc = geo::encode_locator(scenario.tx_location, geo::LocatorPrecision::Subsquare);
    const auto rx_locs = rx_locators_of(scenario);

    std::vector<std::vector<ingest::Spot>> per_slot(static_cast<std::size_t>(n_slots));
    const auto work = [&](int first, int last) {
        for (int k = first; k < last; ++k) {
            const ingest::SlotId slot{scenario.start_slot.index + k};
            auto rng = make_stream_rng(scenario.rng_seed, kSlotStream, slot.index);
            per_slot[static_cast<std::size_t>(k)] = simulate_slot_impl(scenario, geometry, tx_loc, rx_locs, slot, rng);
        }
    };
    threads = std::clamp(threads, 1, n_slots);
    if (threads == 1) {
        work(0, n_slots);
    } else {
        std::vector<std::jthread> pool;
        const int chunk = (n_slots + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t * chunk, std::min(n_slots, (t + 1) * chunk));
    }

    SyntheticCampaignResult result;
    for (auto& slot_spots : per_slot) {
        std::move(slot_spots.begin(), slot_spots.end(), std::back_inserter(result.spots));
    }

    // Truth ledger.
    auto& truth = result.truth;
    truth.delta_eta_db = scenario.antenna_a.efficiency_db - scenario.antenna_b.efficiency_db;
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < scenario.receivers.size(); ++i) {
        const auto& rx = scenario.receivers[i];
        index_of[rx.rx_call] = i;
        truth.receivers.push_back(ReceiverTruth{
            rx.rx_call, geometry[i].azimuth_rad / kDegToRad, rx.elevation_deg,
            scenario.antenna_a.gain_db(geometry[i].azimuth_rad, geometry[i].elevation_rad) -
                scenario.antenna_b.gain_db(geometry[i].azimuth_rad, geometry[i].elevation_rad),
            0});
    }
    // Spots of one slot are emitted receiver by receiver, A before B.
    for (std::size_t j = 0; j + 1 < result.spots.size(); ++j) {
        const auto& x = result.spots[j];
        const auto& y = result.spots[j + 1];
        if (x.tx_call == scenario.call_a && y.tx_call == scenario.call_b && x.rx_call == y.rx_call &&
            x.timestamp == y.timestamp) {
            ++truth.receivers[index_of.at(x.rx_call)].n_pairs;
            ++truth.n_pairs;
        }
    }
    if (truth.n_pairs > 0) {
        std::vector<est::BiasDirection> dirs;
        for (const auto& r : truth.receivers) {
            if (r.n_pairs == 0) continue;
            dirs.push_back({r.azimuth_deg, r.elevation_deg,
                            static_cast<double>(r.n_pairs) / static_cast<double>(truth.n_pairs)});
        }
        // Renormalize against rounding in the individual weights.
        CompensatedSum total;
        for (const auto& d : dirs) total += d.weight;
        for (auto& d : dirs) d.weight /= total.value();
        truth.bias_db = est::bias_estimate(scenario.antenna_a.pattern, scenario.antenna_b.pattern, dirs).bias_db;
    }
    return result;
}

ingest::CampaignConfig campaign_config_for(const Scenario& scenario, int n_slots) {
    ingest::CampaignConfig c;
    c.call_a = scenario.call_a;
    c.call_b = scenario.call_b;
    c.band = scenario.band;
    c.window_start = scenario.start_slot.start_time();
    c.window_end = ingest::SlotId{scenario.start_slot.index + n_slots}.start_time() - 1;
    c.expected_power_dbm = scenario.tx_power_dbm;
    c.tx_locator = geo::encode_locator(scenario.tx_location, geo::LocatorPrecision::Subsquare);
    return c;
}

double ElevationModel::elevation_deg(double distance_km) const {
    if (!table.empty()) {
        if (distance_km <= table.front().first) return table.front().second;
        if (distance_km >= table.back().first) return table.back().second;
        const auto hi = std::upper_bound(table.begin(), table.end(), distance_km,
                                         [](double d, const auto& row) { return d < row.first; });
        const auto lo = hi - 1;
        const double t = (distance_km - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }
    const double r = geo::kEarthRadiusKm;
    const double psi = distance_km / (2.0 * r);  // half-hop central angle
    const double beta = std::atan((std::cos(psi) - r / (r + layer_height_km)) / std::sin(psi));
    return std::max(0.0, beta / kDegToRad);
}

std::vector<ReceiverModel> make_receiver_population(int count, const SpatialDistribution& distribution,
                                                    const PopulationOptions& options, Rng& rng) {
    if (count < 1) throw std::invalid_argument("make_receiver_population: count must be >= 1");
    if (!(options.min_distance_km > 0.0 && options.max_distance_km >= options.min_distance_km)) {
        throw std::invalid_argument("make_receiver_population: invalid distance band");
    }
    if (distribution.kind == SpatialDistribution::Kind::SectorClustered &&
        !(distribution.fraction >= 0.0 && distribution.fraction <= 1.0 && distribution.width_deg > 0.0 &&
          distribution.width_deg <= 360.0)) {
        throw std::invalid_argument("make_receiver_population: invalid sector parameters");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<ReceiverModel> receivers;
    receivers.reserve(static_cast<std::size_t>(count));
    const int width = count >= 1000 ? 4 : 3;
    for (int i = 0; i < count; ++i) {
        double azimuth = 360.0 * unit(rng);
        const double u = unit(rng);
        if (distribution.kind == SpatialDistribution::Kind::SectorClustered && u < distribution.fraction) {
            azimuth = distribution.center_deg + distribution.width_deg * (unit(rng) - 0.5);
        } else {
            unit(rng);
        }
        azimuth = std::fmod(std::fmod(azimuth, 360.0) + 360.0, 360.0);
        const double distance =
            options.min_distance_km + (options.max_distance_km - options.min_distance_km) * unit(rng);
        ReceiverModel rx{
            .rx_call = fmt::format("{}{:0{}d}", options.call_prefix, i + 1, width),
            .location = geo::destination_point(options.tx_location, azimuth, distance),
            .noise_floor_db = options.noise_floor_db + options.noise_spread_db * gauss(rng),
            .rx_gain_db = options.rx_gain_db,
            .activity_prob = options.activity_prob,
            .elevation_deg = options.elevation.elevation_deg(distance),
            .base_loss_db = options.loss_at_1000km_db + options.loss_slope_db_per_decade * std::log10(distance / 1000.0) +
                            options.loss_spread_db * gauss(rng),
        };
        receivers.push_back(std::move(rx));
    }
    return receivers;
}

}  // namespace wsprant::sim

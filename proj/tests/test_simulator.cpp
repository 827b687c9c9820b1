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

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include "wsprant/errors.hpp"
#include "wsprant/pairing.hpp"
#include "wsprant/scenario_config.hpp"
#include "wsprant/simulator.hpp"
#include "wsprant/stats.hpp"

using namespace wsprant;
using namespace wsprant::sim;
using Catch::Approx;

namespace {

std::vector<pairing::PairedSample> pairs_of(const Scenario& s, int n_slots, int threads = 1) {
    const auto r = run_campaign(s, n_slots, threads);
    return pairing::pair_reports(r.spots, campaign_config_for(s, n_slots));
}

std::string store_text(const std::vector<ingest::Spot>& spots) {
    std::ostringstream out;
    ingest::write_spot_store(out, spots);
    return out.str();
}

// No interference, no fading, no erasures.
Scenario quiet(std::uint64_t seed, int receivers) {
    auto s = clean_scenario(seed, receivers, 1).scenario;
    s.interference.enabled = false;
    s.fading_sigma_db = 0.0;
    return s;
}

}  // namespace

TEST_CASE("identical antennas with no noise terms") {
    const auto pairs = pairs_of(quiet(3, 30), 5);
    REQUIRE(pairs.size() == 150);
    for (const auto& p : pairs) REQUIRE(p.delta_db == 0);
}

TEST_CASE("identical antennas with independent rounding stay within one step") {
    // Rounding is the only difference left once A and B get independent
    // sub-integer offsets through the pattern; a tilted pattern on A adds a
    // fractional gain toward each receiver.
    auto s = quiet(5, 40);
    s.antenna_a.pattern = est::DirectivityPattern::two_lobe(10.0, 0.9);
    s.antenna_b.pattern = est::DirectivityPattern::two_lobe(10.0, 0.9);
    for (const auto& p : pairs_of(s, 3)) REQUIRE(std::abs(p.delta_db) <= 1);
}

TEST_CASE("efficiency offset with no noise terms") {
    auto s = quiet(7, 30);
    s.antenna_a.efficiency_db = -3.0;
    const auto pairs = pairs_of(s, 5);
    REQUIRE(pairs.size() == 150);
    for (const auto& p : pairs) REQUIRE(p.delta_db == -3);
}

TEST_CASE("propagation terms cancel in the delta") {
    auto s = clean_scenario(11, 30, 1).scenario;
    s.interference.enabled = false;
    s.fading_sigma_db = 6.0;
    s.antenna_a.efficiency_db = -2.4;
    std::map<std::string, std::set<int>> per_rx;
    std::set<int> snrs;
    for (const auto& p : pairs_of(s, 50)) {
        per_rx[p.rx_call].insert(p.delta_db);
        snrs.insert(p.snr_b_db);
    }
    REQUIRE(per_rx.size() == 30);
    CHECK(snrs.size() > 10);  // the fading really moves the SNR
    for (const auto& [rx, deltas] : per_rx) {
        REQUIRE(*deltas.rbegin() - *deltas.begin() <= 1);
        for (int d : deltas) REQUIRE((d == -2 || d == -3));
    }
}

TEST_CASE("interference error has zero mean on the deltas") {
    auto s = clean_scenario(13, 100, 1).scenario;
    s.fading_sigma_db = 2.0;
    s.antenna_a.efficiency_db = -1.7;
    const auto pairs = pairs_of(s, 1100);
    REQUIRE(pairs.size() >= 100000);
    CompensatedSum e;
    for (const auto& p : pairs) e += p.delta_db - (-1.7);
    CHECK(std::abs(e.value() / static_cast<double>(pairs.size())) < 0.05);
}

TEST_CASE("pooled sigma of the default model is close to 3 dB") {
    const auto pairs = pairs_of(clean_scenario(17, 40, 1).scenario, 300);
    std::vector<double> d;
    for (const auto& p : pairs) d.push_back(p.delta_db);
    CHECK(*sample_std_of(d) == Approx(3.0).margin(0.25));
}

TEST_CASE("determinism and thread independence") {
    const auto setup = realistic_scenario(19);
    const auto a = run_campaign(setup.scenario, 40, 1);
    const auto b = run_campaign(setup.scenario, 40, 1);
    const auto c = run_campaign(setup.scenario, 40, 4);
    const auto d = run_campaign(setup.scenario, 40, 64);
    CHECK(store_text(a.spots) == store_text(b.spots));
    CHECK(store_text(a.spots) == store_text(c.spots));
    CHECK(store_text(a.spots) == store_text(d.spots));
    CHECK(a.truth.n_pairs == c.truth.n_pairs);
    CHECK(a.truth.bias_db == c.truth.bias_db);

    auto other = setup.scenario;
    other.rng_seed = 20;
    CHECK(store_text(run_campaign(other, 40).spots) != store_text(a.spots));

    // a slot depends only on (seed, slot), not on the campaign it sits in
    auto shifted = setup.scenario;
    shifted.start_slot.index += 10;
    const auto e = run_campaign(shifted, 30);
    std::vector<ingest::Spot> tail;
    for (const auto& sp : a.spots) {
        if (sp.slot().index >= shifted.start_slot.index) tail.push_back(sp);
    }
    CHECK(store_text(tail) == store_text(e.spots));

    auto rng1 = make_stream_rng(1, 2, 3), rng2 = make_stream_rng(1, 2, 3), rng3 = make_stream_rng(1, 2, 4);
    CHECK(rng1() == rng2());
    CHECK(rng2() != rng3());
}

TEST_CASE("campaign preconditions") {
    const auto setup = realistic_scenario(1);
    CHECK_THROWS_AS(run_campaign(setup.scenario, 0), std::invalid_argument);
    auto bad = setup.scenario;
    bad.antenna_a.efficiency_db = 1.0;
    CHECK_THROWS_AS(run_campaign(bad, 1), ConfigError);
    bad = setup.scenario;
    bad.collision_prob = 1.5;
    CHECK_THROWS_AS(run_campaign(bad, 1), ConfigError);
    bad = setup.scenario;
    bad.receivers[0].activity_prob = -0.1;
    CHECK_THROWS_AS(run_campaign(bad, 1), ConfigError);
}

TEST_CASE("simulated spots pass ingest validation unchanged") {
    for (std::uint64_t seed : {1, 2, 3}) {
        auto setup = realistic_scenario(seed);
        setup.scenario.corrupt_prob = 0.2;
        const auto r = run_campaign(setup.scenario, setup.n_slots);
        REQUIRE_FALSE(r.spots.empty());
        const auto f = ingest::validate_and_filter(r.spots, campaign_config_for(setup.scenario, setup.n_slots));
        CHECK(f.spots == r.spots);
        CHECK(f.report.total_removed() == 0);
        CHECK(ingest::dedupe(r.spots).spots.size() == r.spots.size());
        for (const auto& s : r.spots) {
            REQUIRE(s.mode == 2);
            REQUIRE(s.snr_db >= -28 - 10);
        }
    }
}

TEST_CASE("decode threshold and erasures") {
    auto s = quiet(23, 20);
    s.decode_threshold_db = 100.0;
    CHECK(run_campaign(s, 3).spots.empty());

    s = quiet(23, 200);
    s.collision_prob = 0.25;
    const auto r = run_campaign(s, 20);
    const double expected = 2.0 * 200 * 20 * 0.75;
    CHECK(static_cast<double>(r.spots.size()) == Approx(expected).epsilon(0.03));
    for (const auto& sp : r.spots) REQUIRE(sp.snr_db >= -28);
}

TEST_CASE("reference campaign size") {
    // 30 slots, 40 receivers, activity 0.5
    auto setup = realistic_scenario(29);
    auto rng = make_stream_rng(29, 99, 0);
    PopulationOptions opts;
    opts.activity_prob = 0.5;
    opts.loss_at_1000km_db = 170.0;
    setup.scenario.receivers = make_receiver_population(40, SpatialDistribution::uniform(), opts, rng);
    const auto r = run_campaign(setup.scenario, 30);
    CHECK(r.spots.size() > 316);
    CHECK(r.spots.size() < 3162);
}

TEST_CASE("ground truth ledger") {
    auto setup = realistic_scenario(31);
    const auto r = run_campaign(setup.scenario, setup.n_slots);
    CHECK(r.truth.delta_eta_db == Approx(setup.scenario.antenna_a.efficiency_db - setup.scenario.antenna_b.efficiency_db));
    REQUIRE(r.truth.bias_db.has_value());
    CHECK(*r.truth.bias_db == 0.0);  // identical patterns
    CHECK(r.truth.receivers.size() == setup.scenario.receivers.size());
    std::size_t n = 0;
    for (const auto& t : r.truth.receivers) n += t.n_pairs;
    CHECK(n == r.truth.n_pairs);
    CHECK(r.truth.n_pairs == pairing::pair_reports(r.spots, campaign_config_for(setup.scenario, setup.n_slots)).size());

    auto directive = setup.scenario;
    directive.antenna_a.pattern = est::DirectivityPattern::two_lobe(225.0, 0.2);
    const auto d = run_campaign(directive, setup.n_slots);
    REQUIRE(d.truth.bias_db.has_value());
    CHECK(*d.truth.bias_db != 0.0);
    for (const auto& t : d.truth.receivers) {
        const double expected = directive.antenna_a.efficiency_db - directive.antenna_b.efficiency_db +
                                10.0 * std::log10(directive.antenna_a.pattern(t.azimuth_deg * std::numbers::pi / 180,
                                                                              t.elevation_deg * std::numbers::pi / 180)) -
                                10.0 * std::log10(directive.antenna_b.pattern(t.azimuth_deg * std::numbers::pi / 180,
                                                                              t.elevation_deg * std::numbers::pi / 180));
        REQUIRE(t.true_delta_db == Approx(expected).margin(1e-9));
    }
}

TEST_CASE("uniform population passes a chi-square flatness test") {
    auto rng = make_stream_rng(37, 1, 0);
    Scenario s;
    const auto rx = make_receiver_population(360, SpatialDistribution::uniform(), PopulationOptions{}, rng);
    REQUIRE(rx.size() == 360);
    constexpr int kBins = 12;
    std::vector<int> counts(kBins, 0);
    for (const auto& r : rx) ++counts[static_cast<int>(receiver_azimuth_deg(s, r) / (360.0 / kBins)) % kBins];
    double chi2 = 0;
    for (int c : counts) chi2 += (c - 30.0) * (c - 30.0) / 30.0;
    CHECK(chi2 < 24.725);  // 99th percentile, 11 degrees of freedom
}

TEST_CASE("sector population concentrates azimuths") {
    auto rng = make_stream_rng(41, 1, 0);
    Scenario s;
    const auto rx = make_receiver_population(1000, SpatialDistribution::sector(225.0, 90.0, 0.8), {}, rng);
    int inside = 0;
    for (const auto& r : rx) {
        const double az = receiver_azimuth_deg(s, r);
        inside += az >= 180.0 && az <= 270.0;
    }
    CHECK(inside >= 750);
}

TEST_CASE("population geometry") {
    auto rng = make_stream_rng(43, 1, 0);
    PopulationOptions opts;
    const auto one = make_receiver_population(1, SpatialDistribution::uniform(), opts, rng);
    REQUIRE(one.size() == 1);
    CHECK(one[0].rx_call == "RX001");
    CHECK_THROWS_AS(make_receiver_population(0, SpatialDistribution::uniform(), opts, rng), std::invalid_argument);

    const auto many = make_receiver_population(500, SpatialDistribution::uniform(), opts, rng);
    std::set<std::string> calls;
    for (const auto& r : many) {
        const double d = geo::great_circle_km(opts.tx_location, r.location);
        REQUIRE(d >= 500.0 - 1e-6);
        REQUIRE(d <= 2000.0 + 1e-6);
        REQUIRE(r.elevation_deg == Approx(opts.elevation.elevation_deg(d)).margin(1e-9));
        REQUIRE(r.activity_prob == opts.activity_prob);
        calls.insert(r.rx_call);
    }
    CHECK(calls.size() == 500);
}

TEST_CASE("mirror elevation model") {
    // Oracle: planar geometry of the transmitter and the reflection point
    // above the path midpoint.
    const auto oracle = [](double d, double h) {
        const double r = geo::kEarthRadiusKm, psi = d / (2 * r);
        const double px = (r + h) * std::sin(psi), py = (r + h) * std::cos(psi) - r;
        return std::max(0.0, std::atan2(py, px) * 180.0 / std::numbers::pi);
    };
    ElevationModel m;
    double previous = 90.0;
    for (double d = 100.0; d <= 4000.0; d += 100.0) {
        const double e = m.elevation_deg(d);
        REQUIRE(e == Approx(oracle(d, 300.0)).margin(1e-9));
        REQUIRE(e <= previous);
        previous = e;
    }
    CHECK(m.elevation_deg(1000.0) == Approx(28.1).margin(0.1));

    ElevationModel table{300.0, {{500.0, 30.0}, {1500.0, 10.0}}};
    CHECK(table.elevation_deg(100.0) == 30.0);
    CHECK(table.elevation_deg(1000.0) == Approx(20.0));
    CHECK(table.elevation_deg(9000.0) == 10.0);
}

TEST_CASE("scenario block parsing") {
    using nlohmann::json;
    const auto base = scenario_from_json(json::object());
    const auto ref = realistic_scenario(1);
    CHECK(base.n_slots == ref.n_slots);
    CHECK(store_text(run_campaign(base.scenario, 5).spots) == store_text(run_campaign(ref.scenario, 5).spots));

    const auto custom = scenario_from_json(json::parse(R"({
        "seed": 9, "slots": 12, "threads": 2, "call_a": "sm0aaa", "band": "40m",
        "decode_threshold_db": -25, "antenna_a": {"efficiency_db": -3,
            "pattern": {"type": "two_lobe", "boresight_deg": 200, "floor": 0.3}},
        "interference": {"quiet_prob": 0.5},
        "population": {"count": 10, "distribution": {"type": "sector", "center_deg": 180, "width_deg": 60, "fraction": 1}}
    })"));
    CHECK(custom.n_slots == 12);
    CHECK(custom.threads == 2);
    CHECK(custom.scenario.rng_seed == 9);
    CHECK(custom.scenario.call_a == "SM0AAA");
    CHECK(custom.scenario.band == Band::B40m);
    CHECK(custom.scenario.decode_threshold_db == -25.0);
    CHECK(custom.scenario.antenna_a.efficiency_db == -3.0);
    CHECK(custom.scenario.interference.quiet_prob == 0.5);
    REQUIRE(custom.scenario.receivers.size() == 10);
    for (const auto& r : custom.scenario.receivers) {
        const double az = receiver_azimuth_deg(custom.scenario, r);
        CHECK(az >= 149.0);
        CHECK(az <= 211.0);
    }

    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"sed": 1})")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"population": {"cout": 1}})")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"antenna_a": {"pattern": {"type": "yagi"}}})")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"slots": "many"})")), ConfigError);

    const auto truth = truth_to_json(run_campaign(custom.scenario, 3).truth, custom.scenario, 3);
    CHECK(truth.at("schema") == "wsprant-truth v1");
    CHECK(truth.at("delta_eta_db").get<double>() == Approx(-3.0));
}

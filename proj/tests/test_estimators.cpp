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
#include <numbers>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "wsprant/directivity.hpp"
#include "wsprant/errors.hpp"
#include "wsprant/estimators.hpp"
#include "wsprant/scenario_config.hpp"
#include "wsprant/simulator.hpp"
#include "wsprant/stats.hpp"

using namespace wsprant;
using namespace wsprant::est;
using pairing::PairedSample;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

PairedSample pair(int a, int b, const std::string& rx = "DL1ABC", std::int64_t slot = 0) {
    return PairedSample{ingest::SlotId{slot}, rx, geo::Locator::parse("JO62qm"), a, b, a - b, 240.0, 1000.0};
}

std::vector<PairedSample> from_deltas(const std::vector<int>& deltas) {
    std::vector<PairedSample> out;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        out.push_back(pair(deltas[i] - 20, -20, "RX" + std::to_string(i % 7), static_cast<std::int64_t>(i)));
    }
    return out;
}

// Oracles in long double, two-pass.
long double oracle_mean(const std::vector<int>& d) {
    long double s = 0;
    for (int x : d) s += x;
    return s / d.size();
}
long double oracle_std(const std::vector<int>& d) {
    const auto m = oracle_mean(d);
    long double s = 0;
    for (int x : d) s += (x - m) * (x - m);
    return std::sqrt(s / (d.size() - 1));
}

pairing::ReceiverGroup group_of(const std::vector<int>& deltas) {
    pairing::ReceiverGroup g{"DL1ABC", geo::Locator::parse("JO62qm"), {}, 240.0, 1000.0};
    for (std::size_t i = 0; i < deltas.size(); ++i) g.samples.push_back(pair(deltas[i], 0, "DL1ABC", i));
    return g;
}

}  // namespace

TEST_CASE("delta snr") {
    CHECK(delta_snr(pair(-10, -13)) == 3.0);
    CHECK(delta_snr(pair(-13, -13)) == 0.0);
    CHECK(delta_snr(pair(-13, -10)) == -3.0);
}

TEST_CASE("per-receiver estimate") {
    const auto flat = receiver_gain_estimate(group_of({3, 3, 3}));
    CHECK(flat.mean_delta_db == 3.0);
    CHECK(flat.sample_std_db == 0.0);

    const auto two = receiver_gain_estimate(group_of({2, 4}));
    CHECK(two.mean_delta_db == 3.0);
    CHECK(*two.sample_std_db == Approx(std::sqrt(2.0)));
    CHECK(*two.stderr_db == Approx(1.0));

    const auto one = receiver_gain_estimate(group_of({5}));
    CHECK(one.n_samples == 1);
    CHECK_FALSE(one.sample_std_db.has_value());
    CHECK_FALSE(one.stderr_db.has_value());

    CHECK_THROWS_AS(receiver_gain_estimate(group_of({})), std::invalid_argument);
}

TEST_CASE("per-receiver estimate against simulated ground truth") {
    auto setup = sim::clean_scenario(77, 1, 200);
    setup.scenario.antenna_b.efficiency_db = -6.0;
    const auto result = sim::run_campaign(setup.scenario, setup.n_slots);
    const auto pairs = pairing::pair_reports(result.spots, sim::campaign_config_for(setup.scenario, setup.n_slots));
    const auto groups = pairing::group_by_receiver(pairs);
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0].samples.size() > 150);
    const auto g = receiver_gain_estimate(groups[0]);
    CHECK(std::abs(g.mean_delta_db - 6.0) < 3.0 * *g.stderr_db);
}

TEST_CASE("pooled estimate agrees with the oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> d(2 + rng() % 500);
        for (auto& x : d) x = static_cast<int>(rng() % 31) - 15;
        const auto s = efficiency_estimate(from_deltas(d));
        REQUIRE(s.mean_delta_db == Approx(static_cast<double>(oracle_mean(d))).margin(1e-12));
        REQUIRE(s.sample_std_db == Approx(static_cast<double>(oracle_std(d))).margin(1e-12));
        REQUIRE(s.stderr_db == Approx(s.sample_std_db / std::sqrt(d.size())).margin(1e-12));
        REQUIRE(s.n_pairs == d.size());
        REQUIRE(s.n_used == d.size());

        // pooled mean == sample-weighted mean of per-receiver means
        long double weighted = 0;
        std::size_t n = 0;
        for (const auto& g : s.per_receiver) {
            weighted += static_cast<long double>(g.mean_delta_db) * g.n_samples;
            n += g.n_samples;
        }
        REQUIRE(n == d.size());
        REQUIRE(std::abs(static_cast<double>(weighted / n) - s.mean_delta_db) <=
                1e-12 * std::max(1.0, std::abs(s.mean_delta_db)));
        REQUIRE(s.n_receivers == s.per_receiver.size());
    }
}

TEST_CASE("constant deltas and shifts") {
    const auto c = efficiency_estimate(from_deltas({-4, -4, -4, -4}));
    CHECK(c.mean_delta_db == -4.0);
    CHECK(c.sample_std_db == 0.0);

    std::mt19937_64 rng(43);
    std::vector<PairedSample> pairs;
    for (int i = 0; i < 300; ++i) pairs.push_back(pair(static_cast<int>(rng() % 20) - 25, -20, "R", i));
    const auto base = efficiency_estimate(pairs);
    for (int shift : {-7, 1, 12}) {
        auto moved = pairs;
        for (auto& p : moved) {
            p.snr_a_db += shift;
            p.delta_db += shift;
        }
        const auto s = efficiency_estimate(moved);
        CHECK(s.mean_delta_db == Approx(base.mean_delta_db + shift).margin(1e-12));
        CHECK(s.sample_std_db == Approx(base.sample_std_db).margin(1e-12));
    }
}

TEST_CASE("stderr with sigma 3 over 150 samples") {
    // 75 at -1 and 75 at -7 give mean -4, sigma 3; moving 15 samples down
    // one step (9 from the upper cluster, 6 from the lower) gives mean -4.1.
    std::vector<int> d(66, -1);
    d.insert(d.end(), 9, -2);
    d.insert(d.end(), 69, -7);
    d.insert(d.end(), 6, -8);
    const auto s = efficiency_estimate(from_deltas(d));
    CHECK(s.mean_delta_db == Approx(-4.1));
    CHECK(s.sample_std_db == Approx(3.0).margin(0.05));
    CHECK(s.stderr_db == Approx(0.245).margin(0.005));
    CHECK(s.stderr_db < 0.5);
}

TEST_CASE("too few pairs") {
    CHECK_THROWS_AS(efficiency_estimate({}), InsufficientDataError);
    CHECK_THROWS_AS(efficiency_estimate({pair(1, 0)}), InsufficientDataError);
    CHECK_NOTHROW(efficiency_estimate({pair(1, 0), pair(2, 0)}));
}

TEST_CASE("trimmed mean") {
    // ten samples, 10% from each tail
    const auto pairs = from_deltas({-30, 1, 2, 3, 4, 5, 6, 7, 8, 40});
    const auto s = efficiency_estimate(pairs, {0.1});
    CHECK(s.n_pairs == 10);
    CHECK(s.n_used == 8);
    CHECK(s.mean_delta_db == Approx(4.5));
    CHECK(s.stderr_db == Approx(s.sample_std_db / std::sqrt(8.0)));
    CHECK(efficiency_estimate(pairs).mean_delta_db == Approx(4.6));
    CHECK_THROWS_AS(efficiency_estimate(pairs, {0.5}), std::invalid_argument);
}

TEST_CASE("histogram examples") {
    const auto h = histogram(from_deltas({0, 0, 1}), 1.0);
    REQUIRE(h.counts == std::vector<std::size_t>{2, 1});
    CHECK(h.bin_center(0) == 0.0);
    CHECK(h.bin_center(1) == 1.0);
    CHECK(h.mu_db == Approx(1.0 / 3.0));
    CHECK(h.bin_edges.size() == 3);

    const auto single = histogram(from_deltas({-3, -3, -3}), 1.0);
    CHECK(single.counts == std::vector<std::size_t>{3});
    CHECK(single.bin_center(0) == -3.0);
    CHECK_FALSE(histogram(from_deltas({2}), 1.0).sigma_db.has_value());

    CHECK_THROWS_AS(histogram({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(histogram(from_deltas({1}), 0.0), std::invalid_argument);
}

TEST_CASE("histogram conserves counts and covers every sample") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> d(1 + rng() % 300);
        for (auto& x : d) x = static_cast<int>(rng() % 41) - 20;
        const double width = std::vector<double>{0.5, 1.0, 2.0, 3.0}[rng() % 4];
        const auto h = histogram(from_deltas(d), width);
        std::size_t total = 0;
        for (auto c : h.counts) total += c;
        REQUIRE(total == d.size());
        REQUIRE(h.counts.front() > 0);
        REQUIRE(h.counts.back() > 0);
        for (int x : d) {
            REQUIRE(x >= h.bin_edges.front());
            REQUIRE(x < h.bin_edges.back());
        }
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            const double c = h.bin_center(i) / width;
            REQUIRE(std::abs(c - std::round(c)) < 1e-9);
        }
    }
}

TEST_CASE("histogram and summary agree on a simulated campaign") {
    auto setup = sim::clean_scenario(5, 30, 10);
    setup.scenario.antenna_a.efficiency_db = -4.0;
    const auto r = sim::run_campaign(setup.scenario, setup.n_slots);
    const auto pairs = pairing::pair_reports(r.spots, sim::campaign_config_for(setup.scenario, setup.n_slots));
    REQUIRE(pairs.size() > 100);
    const auto s = efficiency_estimate(pairs);
    const auto h = histogram(pairs, 1.0);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == s.n_pairs);
    CHECK(h.mu_db == s.mean_delta_db);
    CHECK(*h.sigma_db == s.sample_std_db);
    CHECK(s.mean_delta_db == Approx(-4.0).margin(1.0));

    std::ostringstream csv;
    write_histogram_csv(csv, h);
    const auto line = format_summary_line(s);
    const auto header = csv.str().substr(0, csv.str().find('\n'));
    const auto mu_sigma = line.substr(0, line.find(" K="));
    CHECK(header.rfind("# " + mu_sigma, 0) == 0);
}

TEST_CASE("summary line and reports") {
    const auto s = efficiency_estimate(from_deltas({2, 4, 3, 3}));
    CHECK(format_summary_line(s) == "mu=3.000 dB sigma=0.816 dB K=4 stderr=0.408 dB receivers=4");
    std::ostringstream report, receivers;
    write_summary_report(report, s);
    write_receivers_csv(receivers, s.per_receiver);
    CHECK(report.str().find("delta_eta_db: 3.000") != std::string::npos);
    CHECK(receivers.str().rfind("rx_call,azimuth_deg,n_samples,mean_delta_db,sample_std_db,stderr_db\n", 0) == 0);
    // single-sample receivers report empty std fields
    CHECK(receivers.str().find("RX0,240.00,1,2.000000,,\n") != std::string::npos);
}

TEST_CASE("directivity normalization") {
    CHECK(normalization_integral([](double, double) { return 1.0; }) == Approx(1.0).margin(1e-4));
    for (double m : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const auto v = DirectivityPattern::vertical(m);
        CHECK(std::abs(normalization_integral([&](double a, double e) { return v(a, e); }) - 1.0) <
              kNormalizationTolerance);
    }
    for (double f : {0.0, 0.2, 0.5, 1.0}) {
        const auto t = DirectivityPattern::two_lobe(37.0, f);
        CHECK(std::abs(normalization_integral([&](double a, double e) { return t(a, e); }) - 1.0) <
              kNormalizationTolerance);
    }
    CHECK_THROWS_AS(DirectivityPattern([](double, double) { return 2.0; }, "wrong"), std::invalid_argument);
    CHECK_THROWS_AS(DirectivityPattern([](double, double) { return -1.0; }, "negative"), std::invalid_argument);
    CHECK_THROWS_AS(DirectivityPattern::vertical(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(DirectivityPattern::two_lobe(0.0, 1.5), std::invalid_argument);
}

TEST_CASE("directivity pattern values") {
    const auto t = DirectivityPattern::two_lobe(90.0, 0.0);
    CHECK(t(kPi / 2, 0.3) == Approx(2.0));
    CHECK(t(3 * kPi / 2, 0.0) == Approx(2.0));
    CHECK(t(0.0, 0.0) == Approx(0.0).margin(1e-12));
    CHECK(t.gain_db(kPi / 2, 0.0) == Approx(10.0 * std::log10(2.0)));
    CHECK(DirectivityPattern::isotropic()(1.0, 0.5) == 1.0);
}

TEST_CASE("bias estimate") {
    const auto iso = DirectivityPattern::isotropic();
    const auto lobe = DirectivityPattern::two_lobe(0.0, 0.0);
    const auto soft = DirectivityPattern::two_lobe(45.0, 0.3);
    const auto vert = DirectivityPattern::vertical(1.0);

    const std::vector<BiasDirection> spread{{10.0, 5.0, 0.25}, {120.0, 20.0, 0.25}, {200.0, 10.0, 0.3},
                                            {300.0, 40.0, 0.2}};
    CHECK(bias_estimate(soft, soft, spread).bias_db == 0.0);
    CHECK(bias_estimate(iso, iso, spread).bias_db == 0.0);

    const auto peak = bias_estimate(lobe, iso, {{0.0, 0.0, 1.0}});
    CHECK(peak.bias_db == Approx(3.0103).margin(1e-4));
    CHECK(peak.directions.size() == 1);

    // oracle: direct weighted sum
    const double expected = [&] {
        double b = 0;
        for (const auto& d : spread) {
            const double az = d.azimuth_deg * kPi / 180, el = d.elevation_deg * kPi / 180;
            b += d.weight * 10.0 * (std::log10(soft(az, el)) - std::log10(vert(az, el)));
        }
        return b;
    }();
    CHECK(bias_estimate(soft, vert, spread).bias_db == Approx(expected).margin(1e-12));
    CHECK(bias_estimate(vert, soft, spread).bias_db == Approx(-expected).margin(1e-12));

    try {
        bias_estimate(lobe, iso, {{90.0, 10.0, 1.0}});
        FAIL("expected NullDirectionError");
    } catch (const NullDirectionError& e) {
        CHECK(e.azimuth_deg() == 90.0);
        CHECK(e.elevation_deg() == 10.0);
    }
    CHECK_THROWS_AS(bias_estimate(iso, vert, {{0.0, 90.0, 1.0}}), NullDirectionError);
    CHECK_THROWS_AS(bias_estimate(iso, iso, {{0.0, 0.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(bias_estimate(iso, iso, {}), std::invalid_argument);
}

TEST_CASE("interference error term has zero mean") {
    for (const auto& model : {sim::InterferenceModel{}, sim::InterferenceModel{true, 0.0, 3.0},
                              sim::InterferenceModel{true, 0.9, 0.5}}) {
        sim::Rng rng(53);
        CompensatedSum eps;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const double x = model.draw(rng), x_hat = model.draw(rng);
            eps += 10.0 * std::log10(1.0 + x) - 10.0 * std::log10(1.0 + x_hat);
        }
        CHECK(std::abs(eps.value() / n) < 0.05);
    }
}

TEST_CASE("bootstrap std of the mean tracks sigma over root n") {
    std::mt19937_64 rng(59);
    std::normal_distribution<double> g(0.0, 3.0);
    std::vector<double> d(400);
    for (auto& x : d) x = g(rng);
    const double analytic = *sample_std_of(d) / std::sqrt(static_cast<double>(d.size()));
    const double boot = bootstrap_std_of_mean(d, 4000, 61);
    CHECK(std::abs(boot - analytic) / analytic < 0.1);
    CHECK(bootstrap_std_of_mean(d, 500, 7) == bootstrap_std_of_mean(d, 500, 7));
}

TEST_CASE("compensated sum is order independent") {
    std::mt19937_64 rng(67);
    std::vector<double> xs(10000);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (auto& x : xs) x = u(rng) * (rng() % 2 ? 1e-6 : 1.0);
    CompensatedSum forward, backward;
    for (double x : xs) forward += x;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) backward += *it;
    CHECK(std::abs(forward.value() - backward.value()) <= 1e-9);
    CHECK_FALSE(sample_std_of(std::vector<double>{1.0}).has_value());
}

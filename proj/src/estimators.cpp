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

#include "wsprant/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "wsprant/errors.hpp"
#include "wsprant/stats.hpp"

namespace wsprant::est {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Linear directivity at or below this counts as a null; analytic zeros such
// as cos^2(pi/2) evaluate to ~1e-33 in floating point.
constexpr double kNullDirectivity = 1e-12;

std::vector<double> deltas_of(const std::vector<pairing::PairedSample>& pairs) {
    std::vector<double> d;
    d.reserve(pairs.size());
    for (const auto& p : pairs) d.push_back(delta_snr(p));
    return d;
}

std::string opt_fixed(const std::optional<double>& v, int digits) {
    return v ? fmt::format("{:.{}f}", *v, digits) : std::string();
}

}  // namespace

double delta_snr(const pairing::PairedSample& sample) {
    return static_cast<double>(sample.snr_a_db) - static_cast<double>(sample.snr_b_db);
}

GainDelta receiver_gain_estimate(const pairing::ReceiverGroup& group) {
    if (group.samples.empty()) {
        throw std::invalid_argument(fmt::format("receiver_gain_estimate: empty group '{}'", group.rx_call));
    }
    std::vector<double> d;
    d.reserve(group.samples.size());
    for (const auto& s : group.samples) d.push_back(delta_snr(s));

    GainDelta g;
    g.rx_call = group.rx_call;
    g.azimuth_deg = group.azimuth_deg;
    g.n_samples = d.size();
    g.mean_delta_db = mean_of(d);
    g.sample_std_db = sample_std_of(d);
    if (g.sample_std_db) g.stderr_db = *g.sample_std_db / std::sqrt(static_cast<double>(d.size()));
    return g;
}

EfficiencySummary efficiency_estimate(const std::vector<pairing::PairedSample>& pairs,
                                      const EfficiencyOptions& options) {
    if (pairs.size() < 2) {
        throw InsufficientDataError(
            fmt::format("efficiency estimate needs at least 2 paired samples, got {}", pairs.size()));
    }
    if (!(options.trim_fraction >= 0.0 && options.trim_fraction < 0.5)) {
        throw std::invalid_argument("trim_fraction must be in [0, 0.5)");
    }

    auto d = deltas_of(pairs);
    if (options.trim_fraction > 0.0) {
        const auto cut = static_cast<std::size_t>(std::floor(options.trim_fraction * static_cast<double>(d.size())));
        std::sort(d.begin(), d.end());
        d = std::vector<double>(d.begin() + static_cast<std::ptrdiff_t>(cut),
                                d.end() - static_cast<std::ptrdiff_t>(cut));
        if (d.size() < 2) throw InsufficientDataError("fewer than 2 samples remain after trimming");
    }

    EfficiencySummary s;
    s.n_pairs = pairs.size();
    s.n_used = d.size();
    s.mean_delta_db = mean_of(d);
    s.sample_std_db = *sample_std_of(d);
    s.stderr_db = s.sample_std_db / std::sqrt(static_cast<double>(s.n_used));
    for (const auto& g : pairing::group_by_receiver(pairs)) s.per_receiver.push_back(receiver_gain_estimate(g));
    s.n_receivers = s.per_receiver.size();
    return s;
}

Histogram histogram(const std::vector<pairing::PairedSample>& pairs, double bin_width_db) {
    if (!(bin_width_db > 0.0)) throw std::invalid_argument("histogram: bin width must be positive");
    if (pairs.empty()) throw std::invalid_argument("histogram: no samples");

    const auto d = deltas_of(pairs);
    const auto index_of = [&](double x) { return static_cast<long>(std::floor(x / bin_width_db + 0.5)); };
    const auto [lo_it, hi_it] = std::minmax_element(d.begin(), d.end());
    const long lo = index_of(*lo_it);
    const long hi = index_of(*hi_it);

    Histogram h;
    h.bin_width_db = bin_width_db;
    h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (long k = lo; k <= hi + 1; ++k) h.bin_edges.push_back((static_cast<double>(k) - 0.5) * bin_width_db);
    for (double x : d) ++h.counts[static_cast<std::size_t>(index_of(x) - lo)];
    h.mu_db = mean_of(d);
    h.sigma_db = sample_std_of(d);
    return h;
}

BiasEstimate bias_estimate(const DirectivityPattern& d_test, const DirectivityPattern& d_ref,
                           const std::vector<BiasDirection>& directions) {
    if (directions.empty()) throw std::invalid_argument("bias_estimate: empty direction set");
    CompensatedSum total_weight;
    for (const auto& dir : directions) {
        if (!(dir.weight >= 0.0)) throw std::invalid_argument("bias_estimate: negative weight");
        total_weight += dir.weight;
    }
    if (std::abs(total_weight.value() - 1.0) > 1e-9) {
        throw std::invalid_argument(fmt::format("bias_estimate: weights sum to {}, expected 1", total_weight.value()));
    }

    CompensatedSum bias;
    for (const auto& dir : directions) {
        const double az = dir.azimuth_deg * kDegToRad;
        const double el = dir.elevation_deg * kDegToRad;
        const double t = d_test(az, el);
        const double r = d_ref(az, el);
        if (!(t > kNullDirectivity) || !(r > kNullDirectivity)) {
            throw NullDirectionError(fmt::format("bias_estimate: pattern null toward azimuth {} deg, elevation {} deg",
                                                 dir.azimuth_deg, dir.elevation_deg),
                                     dir.azimuth_deg, dir.elevation_deg);
        }
        bias += dir.weight * (10.0 * std::log10(t) - 10.0 * std::log10(r));
    }
    return {bias.value(), directions};
}

double bootstrap_std_of_mean(const std::vector<double>& deltas, int resamples, std::uint64_t seed) {
    if (deltas.empty() || resamples < 2) throw std::invalid_argument("bootstrap needs samples and >= 2 resamples");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, deltas.size() - 1);
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        CompensatedSum s;
        for (std::size_t i = 0; i < deltas.size(); ++i) s += deltas[pick(rng)];
        means.push_back(s.value() / static_cast<double>(deltas.size()));
    }
    return *sample_std_of(means);
}

std::string format_summary_line(const EfficiencySummary& s) {
    return fmt::format("mu={:.3f} dB sigma={:.3f} dB K={} stderr={:.3f} dB receivers={}", s.mean_delta_db,
                       s.sample_std_db, s.n_used, s.stderr_db, s.n_receivers);
}

void write_summary_report(std::ostream& out, const EfficiencySummary& s) {
    out << "# relative efficiency summary\n";
    out << fmt::format("delta_eta_db: {:.3f}\n", s.mean_delta_db);
    out << fmt::format("sample_std_db: {:.3f}\n", s.sample_std_db);
    out << fmt::format("stderr_db: {:.3f}\n", s.stderr_db);
    out << fmt::format("n_pairs: {}\n", s.n_pairs);
    out << fmt::format("n_used: {}\n", s.n_used);
    out << fmt::format("n_receivers: {}\n", s.n_receivers);
    out << "per_receiver:\n";
    for (const auto& g : s.per_receiver) {
        out << fmt::format("  {} az={} K={} mean={:.3f} std={} stderr={}\n", g.rx_call,
                           g.azimuth_deg ? fmt::format("{:.1f}", *g.azimuth_deg) : "-", g.n_samples, g.mean_delta_db,
                           g.sample_std_db ? opt_fixed(g.sample_std_db, 3) : "-",
                           g.stderr_db ? opt_fixed(g.stderr_db, 3) : "-");
    }
}

void write_receivers_csv(std::ostream& out, const std::vector<GainDelta>& gains) {
    out << "rx_call,azimuth_deg,n_samples,mean_delta_db,sample_std_db,stderr_db\n";
    for (const auto& g : gains) {
        out << fmt::format("{},{},{},{:.6f},{},{}\n", g.rx_call, opt_fixed(g.azimuth_deg, 2), g.n_samples,
                           g.mean_delta_db, opt_fixed(g.sample_std_db, 6), opt_fixed(g.stderr_db, 6));
    }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << fmt::format("# mu={:.3f} dB sigma={} dB bin_width={}\n", h.mu_db,
                       h.sigma_db ? fmt::format("{:.3f}", *h.sigma_db) : "nan", h.bin_width_db);
    out << "bin_center_db,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) out << fmt::format("{},{}\n", h.bin_center(i), h.counts[i]);
}

}  // namespace wsprant::est

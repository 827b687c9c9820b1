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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsprant/directivity.hpp"
#include "wsprant/pairing.hpp"

namespace wsprant::est {

// Relative gain toward one receiver (mean of its K paired deltas).
struct GainDelta {
    std::string rx_call;
    std::optional<double> azimuth_deg;
    std::size_t n_samples = 0;
    double mean_delta_db = 0.0;
    // Undefined (empty) for a single sample.
    std::optional<double> sample_std_db;
    std::optional<double> stderr_db;
};

struct EfficiencyOptions {
    // Fraction trimmed from each tail before pooling; 0 keeps every pair.
    double trim_fraction = 0.0;
};

struct EfficiencySummary {
    double mean_delta_db = 0.0;  // relative efficiency estimate
    double sample_std_db = 0.0;
    std::size_t n_pairs = 0;
    std::size_t n_used = 0;  // n_pairs minus trimmed samples
    std::size_t n_receivers = 0;
    double stderr_db = 0.0;  // sample_std / sqrt(n_used)
    std::vector<GainDelta> per_receiver;
};

struct Histogram {
    double bin_width_db = 1.0;
    std::vector<double> bin_edges;  // size counts.size() + 1
    std::vector<std::size_t> counts;
    double mu_db = 0.0;
    std::optional<double> sigma_db;

    double bin_center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
};

struct BiasDirection {
    double azimuth_deg;
    double elevation_deg;
    double weight;
};

struct BiasEstimate {
    double bias_db = 0.0;
    std::vector<BiasDirection> directions;
};

double delta_snr(const pairing::PairedSample& sample);

// Throws std::invalid_argument for an empty group.
GainDelta receiver_gain_estimate(const pairing::ReceiverGroup& group);

// Pooled mean over all pairs. Throws InsufficientDataError for fewer than two.
EfficiencySummary efficiency_estimate(const std::vector<pairing::PairedSample>& pairs,
                                      const EfficiencyOptions& options = {});

// Bins of width bin_width_db centered on multiples of the width, covering the
// data range. mu/sigma are computed from the raw deltas.
Histogram histogram(const std::vector<pairing::PairedSample>& pairs, double bin_width_db);

// Weighted mean of 10 log10(D_test / D_ref) over the directions. Weights must
// be nonnegative and sum to one; a null in either pattern throws
// NullDirectionError.
BiasEstimate bias_estimate(const DirectivityPattern& d_test, const DirectivityPattern& d_ref,
                           const std::vector<BiasDirection>& directions);

// Standard deviation of the mean over bootstrap resamples of the deltas.
double bootstrap_std_of_mean(const std::vector<double>& deltas, int resamples, std::uint64_t seed);

// Reports. Formats are fixed; the histogram header repeats mu/sigma with the
// same precision as format_summary_line.
std::string format_summary_line(const EfficiencySummary& s);
void write_summary_report(std::ostream& out, const EfficiencySummary& s);
void write_receivers_csv(std::ostream& out, const std::vector<GainDelta>& gains);
void write_histogram_csv(std::ostream& out, const Histogram& h);

}  // namespace wsprant::est

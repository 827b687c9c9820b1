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
#include <string>
#include <vector>

#include "wsprant/pairing.hpp"
#include "wsprant/scenario_config.hpp"
#include "wsprant/simulator.hpp"

namespace wsprant::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationOptions {
    bool quick = false;  // fewer replications; still deterministic
    std::uint64_t seed = 1;
    // Replaces the decode threshold of every built-in scenario.
    std::optional<double> decode_threshold_db;
};

// Pass thresholds of the built-in checks.
namespace limits {
inline constexpr std::size_t kUnbiasedMinPairs = 100000;
inline constexpr double kUnbiasedMaxAbsMeanDb = 0.05;
inline constexpr double kUnbiasedMaxSeconds = 10.0;

inline constexpr double kScalingSlope = -0.5;
inline constexpr double kScalingSlopeTolerance = 0.05;
inline constexpr int kScalingReplications = 200;
inline constexpr double kScalingMaxSeconds = 120.0;

inline constexpr double kStderrSigmaLow = 2.5;
inline constexpr double kStderrSigmaHigh = 3.5;
inline constexpr std::size_t kStderrPairs = 100;
inline constexpr double kStderrMaxDb = 0.5;
inline constexpr double kBootstrapRelTolerance = 0.20;

inline constexpr double kNullMaxAbsDb = 0.3;
inline constexpr std::size_t kNullMinPairs = 200;
inline constexpr double kNullMinPassFraction = 0.95;
inline constexpr int kNullCampaigns = 100;

inline constexpr double kRecoveryTrueDeltaDb = 3.0;
inline constexpr double kRecoveryStderrMultiple = 3.0;
inline constexpr double kRecoveryMinPassFraction = 0.95;
inline constexpr int kRecoveryCampaigns = 100;

inline constexpr double kBiasStderrMultiple = 3.0;
inline constexpr double kMatchedMaxOffsetDb = 0.2;

inline constexpr double kRetentionLow = 0.1;
inline constexpr double kRetentionHigh = 0.3;
inline constexpr std::size_t kReceiversLow = 15;
inline constexpr std::size_t kReceiversHigh = 35;
}  // namespace limits

// Runs the scenario slot batch by slot batch until at least min_pairs pairs
// exist and returns the first min_pairs of them in (slot, rx_call) order.
// Throws InsufficientDataError if the scenario cannot produce them.
std::vector<pairing::PairedSample> collect_pairs(const sim::Scenario& scenario, std::size_t min_pairs);

// Scenario used by the identical-antenna check (also driven through the CLI
// by the acceptance suite): the realistic campaign stretched to 120 slots.
sim::ScenarioSetup null_scenario(std::uint64_t seed);

CheckResult check_unbiasedness(const ValidationOptions& options);
CheckResult check_variance_scaling(const ValidationOptions& options);
CheckResult check_stderr_claim(const ValidationOptions& options);
CheckResult check_null(const ValidationOptions& options);
CheckResult check_recovery(const ValidationOptions& options);
CheckResult check_bias_reproduction(const ValidationOptions& options);
CheckResult check_campaign_shape(const ValidationOptions& options);

std::vector<CheckResult> run_validation(const ValidationOptions& options);

// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string format_table(const std::vector<CheckResult>& results);

}  // namespace wsprant::validation

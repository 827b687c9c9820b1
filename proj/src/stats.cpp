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

#include "wsprant/stats.hpp"

#include <stdexcept>

namespace wsprant {

double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    CompensatedSum s;
    for (double x : xs) s += x;
    return s.value() / static_cast<double>(xs.size());
}

std::optional<double> sample_std_of(std::span<const double> xs) {
    if (xs.size() < 2) return std::nullopt;
    const double m = mean_of(xs);
    CompensatedSum ss;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss.value() / static_cast<double>(xs.size() - 1));
}

}  // namespace wsprant

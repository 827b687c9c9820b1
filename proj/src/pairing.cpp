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

#include "wsprant/pairing.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

#include "wsprant/errors.hpp"

namespace wsprant::pairing {

namespace {

struct SlotReceiverKey {
    ingest::SlotId slot;
    std::string rx_call;
    auto operator<=>(const SlotReceiverKey&) const = default;
};

struct Bucket {
    const ingest::Spot* a = nullptr;
    const ingest::Spot* b = nullptr;
    int count_a = 0;
    int count_b = 0;
};

// Role-independent choice so swapping call_a/call_b only flips signs.
const geo::Locator& finer_locator(const geo::Locator& x, const geo::Locator& y) {
    if (x.precision() != y.precision()) return x.precision() > y.precision() ? x : y;
    return x <= y ? x : y;
}

}  // namespace

std::vector<PairedSample> pair_reports(const std::vector<ingest::Spot>& spots, const ingest::CampaignConfig& config) {
    const auto call_a = ingest::normalize_callsign(config.call_a).value_or(config.call_a);
    const auto call_b = ingest::normalize_callsign(config.call_b).value_or(config.call_b);

    std::map<SlotReceiverKey, Bucket> buckets;
    for (const auto& s : spots) {
        if (s.band != config.band) continue;
        const bool is_a = s.tx_call == call_a;
        const bool is_b = s.tx_call == call_b;
        if (!is_a && !is_b) continue;
        auto& bucket = buckets[SlotReceiverKey{s.slot(), s.rx_call}];
        if (is_a) {
            bucket.a = &s;
            ++bucket.count_a;
        } else {
            bucket.b = &s;
            ++bucket.count_b;
        }
    }

    std::vector<PairedSample> pairs;
    for (const auto& [key, bucket] : buckets) {
        if (bucket.count_a != 1 || bucket.count_b != 1) continue;
        const auto& tx_loc = config.tx_locator ? *config.tx_locator : bucket.a->tx_locator;
        const auto& rx_loc = finer_locator(bucket.a->rx_locator, bucket.b->rx_locator);
        const auto tx_pos = geo::decode_locator(tx_loc);
        const auto rx_pos = geo::decode_locator(rx_loc);
        std::optional<double> azimuth;
        try {
            azimuth = geo::initial_bearing_deg(tx_pos, rx_pos);
        } catch (const UndefinedBearingError&) {
        }
        pairs.push_back(PairedSample{
            .slot = key.slot,
            .rx_call = key.rx_call,
            .rx_locator = rx_loc,
            .snr_a_db = bucket.a->snr_db,
            .snr_b_db = bucket.b->snr_db,
            .delta_db = bucket.a->snr_db - bucket.b->snr_db,
            .azimuth_deg = azimuth,
            .distance_km = geo::great_circle_km(tx_pos, rx_pos),
        });
    }
    return pairs;
}

std::vector<ReceiverGroup> group_by_receiver(const std::vector<PairedSample>& pairs) {
    std::map<std::string, std::vector<const PairedSample*>> by_rx;
    for (const auto& p : pairs) by_rx[p.rx_call].push_back(&p);

    std::vector<ReceiverGroup> groups;
    groups.reserve(by_rx.size());
    for (auto& [rx_call, members] : by_rx) {
        std::stable_sort(members.begin(), members.end(),
                         [](const PairedSample* x, const PairedSample* y) { return x->slot < y->slot; });
        const auto& first = *members.front();
        ReceiverGroup g{rx_call, first.rx_locator, {}, first.azimuth_deg, first.distance_km};
        g.samples.reserve(members.size());
        for (const auto* m : members) g.samples.push_back(*m);
        groups.push_back(std::move(g));
    }
    return groups;
}

void write_pairs_csv(std::ostream& out, const std::vector<PairedSample>& pairs) {
    out << "slot,rx_call,rx_locator,snr_a,snr_b,delta,azimuth,distance\n";
    for (const auto& p : pairs) {
        out << fmt::format("{},{},{},{},{},{},{},{:.1f}\n", p.slot.index, p.rx_call, p.rx_locator.text(), p.snr_a_db,
                           p.snr_b_db, p.delta_db, p.azimuth_deg ? fmt::format("{:.1f}", *p.azimuth_deg) : "",
                           p.distance_km);
    }
}

}  // namespace wsprant::pairing

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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsprant/band.hpp"
#include "wsprant/geodesy.hpp"

namespace wsprant::ingest {

inline constexpr std::int64_t kSlotSeconds = 120;
inline constexpr int kWspr2Mode = 2;

// Index of a 2-minute WSPR frame counted from the Unix epoch. Frames start on
// even UTC minutes.
struct SlotId {
    std::int64_t index = 0;

    std::int64_t start_time() const noexcept { return index * kSlotSeconds; }
    auto operator<=>(const SlotId&) const = default;
};

SlotId slot_of(std::int64_t timestamp);

// One WSPR.net signal report.
struct Spot {
    std::int64_t timestamp;  // UTC seconds
    std::string tx_call;
    double frequency_mhz;
    int snr_db;
    int power_dbm;
    geo::Locator tx_locator;
    std::string rx_call;
    geo::Locator rx_locator;
    double drift_hz_s;
    int mode;
    Band band;

    SlotId slot() const noexcept { return slot_of(timestamp); }
    bool operator==(const Spot&) const = default;
};

struct CampaignConfig {
    std::string call_a;  // antenna under test
    std::string call_b;  // reference antenna
    Band band = Band::B20m;
    std::int64_t window_start = 0;  // inclusive
    std::int64_t window_end = 0;    // inclusive
    int expected_power_dbm = 23;
    // Transmitter site used for azimuth/distance; defaults to call_a's spot locator.
    std::optional<geo::Locator> tx_locator;

    // Throws ConfigError when call_a == call_b or the window is empty.
    void validate() const;
};

// Canonical callsign: trimmed, upper case, [A-Z0-9/] only. nullopt if invalid.
std::optional<std::string> normalize_callsign(std::string_view raw);

// Accepts Unix seconds or "YYYY-MM-DDTHH:MM:SSZ".
std::int64_t parse_utc(std::string_view text);
std::string format_utc(std::int64_t timestamp);

// ---------------------------------------------------------------------------
// Archive CSV adapter

// Zero-based column indices of the fields the adapter consumes. The default
// is the WSPR.net archive layout: spot id, timestamp, reporter, reporter
// locator, SNR, frequency, tx call, tx locator, power, drift, distance,
// azimuth, band, version, code.
struct ColumnMapping {
    int timestamp = 1;
    int rx_call = 2;
    int rx_locator = 3;
    int snr = 4;
    int frequency = 5;
    int tx_call = 6;
    int tx_locator = 7;
    int power = 8;
    int drift = 9;
    int mode = 14;

    int required_columns() const;
};

// Reads "key=index" lines ('#' starts a comment). Unlisted keys keep defaults.
ColumnMapping parse_column_mapping(std::string_view text);
ColumnMapping load_column_mapping(const std::filesystem::path& path);

struct RowError {
    std::size_t line;  // 1-based
    std::string cause;
    bool operator==(const RowError&) const = default;
};

struct ParseResult {
    std::vector<Spot> spots;
    std::vector<RowError> errors;
};

ParseResult parse_archive_csv(std::istream& in, const ColumnMapping& mapping = {});
ParseResult parse_archive_csv(std::string_view text, const ColumnMapping& mapping = {});

// Reads a plain or gzip-compressed archive file. Throws IoError.
std::string read_archive_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Validation and deduplication

enum class FilterCause { NonWspr2Mode, BandMismatch, UnknownCallsign, OutsideWindow, PowerMismatch };

std::string_view cause_name(FilterCause cause);

struct FilterReport {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::map<FilterCause, std::size_t> removed;

    std::size_t total_removed() const;
    // One "cause: count" line per nonzero cause, preceded by input/kept lines.
    std::string to_text() const;
};

struct FilterResult {
    std::vector<Spot> spots;
    FilterReport report;
};

FilterResult validate_and_filter(const std::vector<Spot>& spots, const CampaignConfig& config);

struct DedupeKey {
    std::string tx_call;
    std::string rx_call;
    SlotId slot;
    Band band;
    auto operator<=>(const DedupeKey&) const = default;
};

struct DedupeResult {
    std::vector<Spot> spots;
    std::vector<DedupeKey> ambiguous;  // keys dropped because SNRs disagreed
};

// At most one spot per (tx_call, rx_call, slot, band); first occurrence wins
// among agreeing duplicates, disagreeing SNRs drop the key entirely.
DedupeResult dedupe(const std::vector<Spot>& spots);

// ---------------------------------------------------------------------------
// Canonical spot store

inline constexpr std::string_view kStoreMagic = "#wsprant-spotstore v1";

void write_spot_store(std::ostream& out, const std::vector<Spot>& spots);
std::vector<Spot> read_spot_store(std::istream& in);

void save_spot_store(const std::filesystem::path& path, const std::vector<Spot>& spots);
std::vector<Spot> load_spot_store(const std::filesystem::path& path);

// Store order: timestamp, rx_call, tx_call, frequency.
void sort_canonical(std::vector<Spot>& spots);

}  // namespace wsprant::ingest

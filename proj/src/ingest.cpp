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

#include "wsprant/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <variant>

#include <fmt/format.h>
#include <zlib.h>

#include "wsprant/errors.hpp"

namespace wsprant::ingest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) return std::nullopt;
    }
    return value;
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

// Integer-valued field; distinguishes "not a number" from "not an integer".
std::variant<int, std::string> integer_field(std::string_view raw, std::string_view what) {
    if (auto v = parse_number<int>(raw)) return *v;
    if (parse_number<double>(raw)) return fmt::format("non-integer {} '{}'", what, trim(raw));
    return fmt::format("invalid {} '{}'", what, trim(raw));
}

using RowOutcome = std::variant<Spot, std::string>;

RowOutcome parse_row(const std::vector<std::string>& f, const ColumnMapping& m) {
    if (static_cast<int>(f.size()) < m.required_columns()) {
        return fmt::format("expected at least {} fields, got {}", m.required_columns(), f.size());
    }
    const auto timestamp = parse_number<std::int64_t>(f[m.timestamp]);
    if (!timestamp || *timestamp < 0) return fmt::format("invalid timestamp '{}'", trim(f[m.timestamp]));

    const auto snr = integer_field(f[m.snr], "SNR");
    if (auto* err = std::get_if<std::string>(&snr)) return *err;
    const auto power = integer_field(f[m.power], "power");
    if (auto* err = std::get_if<std::string>(&power)) return *err;
    const auto mode = integer_field(f[m.mode], "mode");
    if (auto* err = std::get_if<std::string>(&mode)) return *err;

    const auto frequency = parse_number<double>(f[m.frequency]);
    if (!frequency) return fmt::format("invalid frequency '{}'", trim(f[m.frequency]));
    const auto band = band_from_frequency(*frequency);
    if (!band) return fmt::format("frequency {} MHz outside any WSPR segment", *frequency);

    // Drift is optional in older archive rows.
    double drift = 0.0;
    if (!trim(f[m.drift]).empty()) {
        const auto d = parse_number<double>(f[m.drift]);
        if (!d) return fmt::format("invalid drift '{}'", trim(f[m.drift]));
        drift = *d;
    }

    const auto tx_call = normalize_callsign(f[m.tx_call]);
    if (!tx_call) return fmt::format("invalid tx callsign '{}'", trim(f[m.tx_call]));
    const auto rx_call = normalize_callsign(f[m.rx_call]);
    if (!rx_call) return fmt::format("invalid rx callsign '{}'", trim(f[m.rx_call]));

    try {
        auto tx_loc = geo::Locator::parse(trim(f[m.tx_locator]));
        auto rx_loc = geo::Locator::parse(trim(f[m.rx_locator]));
        return Spot{
            .timestamp = *timestamp,
            .tx_call = *tx_call,
            .frequency_mhz = *frequency,
            .snr_db = std::get<int>(snr),
            .power_dbm = std::get<int>(power),
            .tx_locator = std::move(tx_loc),
            .rx_call = *rx_call,
            .rx_locator = std::move(rx_loc),
            .drift_hz_s = drift,
            .mode = std::get<int>(mode),
            .band = *band,
        };
    } catch (const LocatorError& e) {
        return std::string(e.what());
    }
}

bool looks_like_header(const std::vector<std::string>& fields, const ColumnMapping& m) {
    if (static_cast<int>(fields.size()) <= m.timestamp) return false;
    const auto ts = trim(fields[m.timestamp]);
    return !ts.empty() && std::all_of(ts.begin(), ts.end(), [](unsigned char c) {
        return std::isalpha(c) || c == '_' || c == ' ';
    });
}

}  // namespace

SlotId slot_of(std::int64_t timestamp) {
    // floor division; negative timestamps are outside the contract but stay consistent
    std::int64_t q = timestamp / kSlotSeconds;
    if (timestamp % kSlotSeconds < 0) --q;
    return SlotId{q};
}

void CampaignConfig::validate() const {
    const auto a = normalize_callsign(call_a);
    const auto b = normalize_callsign(call_b);
    if (!a) throw ConfigError(fmt::format("campaign: invalid call_a '{}'", call_a));
    if (!b) throw ConfigError(fmt::format("campaign: invalid call_b '{}'", call_b));
    if (*a == *b) throw ConfigError(fmt::format("campaign: call_a and call_b are both '{}'", *a));
    if (window_start >= window_end) {
        throw ConfigError(fmt::format("campaign: window start {} is not before end {}", window_start, window_end));
    }
}

std::optional<std::string> normalize_callsign(std::string_view raw) {
    raw = trim(raw);
    if (raw.empty() || raw.size() > 16) return std::nullopt;
    std::string out;
    out.reserve(raw.size());
    for (unsigned char c : raw) {
        const char u = static_cast<char>(std::toupper(c));
        if (!(std::isdigit(c) || (u >= 'A' && u <= 'Z') || u == '/')) return std::nullopt;
        out += u;
    }
    return out;
}

std::int64_t parse_utc(std::string_view text) {
    text = trim(text);
    if (auto v = parse_number<std::int64_t>(text)) return *v;
    std::tm tm{};
    char z = 0;
    const std::string s(text);
    const int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                              &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &z);
    if (n != 7 || z != 'Z') throw ConfigError(fmt::format("invalid UTC time '{}'", text));
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    return static_cast<std::int64_t>(timegm(&tm));
}

std::string format_utc(std::int64_t timestamp) {
    const std::time_t t = static_cast<std::time_t>(timestamp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec);
}

int ColumnMapping::required_columns() const {
    return 1 + std::max({timestamp, rx_call, rx_locator, snr, frequency, tx_call, tx_locator, power, drift, mode});
}

ColumnMapping parse_column_mapping(std::string_view text) {
    ColumnMapping m;
    const std::array<std::pair<std::string_view, int ColumnMapping::*>, 10> keys{{
        {"timestamp", &ColumnMapping::timestamp},
        {"rx_call", &ColumnMapping::rx_call},
        {"rx_locator", &ColumnMapping::rx_locator},
        {"snr", &ColumnMapping::snr},
        {"frequency", &ColumnMapping::frequency},
        {"tx_call", &ColumnMapping::tx_call},
        {"tx_locator", &ColumnMapping::tx_locator},
        {"power", &ColumnMapping::power},
        {"drift", &ColumnMapping::drift},
        {"mode", &ColumnMapping::mode},
    }};
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view l = line;
        if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = trim(l);
        if (l.empty()) continue;
        const auto eq = l.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("column mapping line {}: expected key=index", lineno));
        }
        const auto key = trim(l.substr(0, eq));
        const auto index = parse_number<int>(l.substr(eq + 1));
        if (!index || *index < 0) {
            throw ConfigError(fmt::format("column mapping line {}: invalid index", lineno));
        }
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& kv) { return kv.first == key; });
        if (it == keys.end()) throw ConfigError(fmt::format("column mapping line {}: unknown key '{}'", lineno, key));
        m.*(it->second) = *index;
    }
    return m;
}

ColumnMapping load_column_mapping(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open column mapping {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_column_mapping(ss.str());
}

ParseResult parse_archive_csv(std::istream& in, const ColumnMapping& mapping) {
    ParseResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        const auto fields = split_csv(line);
        if (lineno == 1 && looks_like_header(fields, mapping)) continue;
        auto outcome = parse_row(fields, mapping);
        if (auto* spot = std::get_if<Spot>(&outcome)) {
            result.spots.push_back(std::move(*spot));
        } else {
            result.errors.push_back({lineno, std::get<std::string>(outcome)});
        }
    }
    if (in.bad()) throw IoError("archive stream read failure");
    return result;
}

ParseResult parse_archive_csv(std::string_view text, const ColumnMapping& mapping) {
    std::istringstream in{std::string(text)};
    return parse_archive_csv(in, mapping);
}

std::string read_archive_file(const std::filesystem::path& path) {
    // gzread passes uncompressed files through unchanged.
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) throw IoError(fmt::format("cannot open archive {}", path.string()));
    std::string data;
    std::array<char, 1 << 16> buf{};
    int n = 0;
    while ((n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
        data.append(buf.data(), static_cast<std::size_t>(n));
    }
    int errnum = Z_OK;
    const char* msg = gzerror(file, &errnum);
    const std::string err = (n < 0 && msg != nullptr) ? msg : "";
    gzclose(file);
    if (n < 0) throw IoError(fmt::format("read error in {}: {}", path.string(), err));
    return data;
}

std::string_view cause_name(FilterCause cause) {
    switch (cause) {
        case FilterCause::NonWspr2Mode: return "non-WSPR-2 mode";
        case FilterCause::BandMismatch: return "band mismatch";
        case FilterCause::UnknownCallsign: return "unknown callsign";
        case FilterCause::OutsideWindow: return "outside window";
        case FilterCause::PowerMismatch: return "power mismatch";
    }
    return "unknown";
}

std::size_t FilterReport::total_removed() const {
    std::size_t n = 0;
    for (const auto& [cause, count] : removed) n += count;
    return n;
}

std::string FilterReport::to_text() const {
    std::string out = fmt::format("input: {}\nkept: {}\n", input, kept);
    for (const auto& [cause, count] : removed) {
        if (count > 0) out += fmt::format("removed[{}]: {}\n", cause_name(cause), count);
    }
    return out;
}

FilterResult validate_and_filter(const std::vector<Spot>& spots, const CampaignConfig& config) {
    const auto call_a = normalize_callsign(config.call_a).value_or(config.call_a);
    const auto call_b = normalize_callsign(config.call_b).value_or(config.call_b);
    FilterResult result;
    result.report.input = spots.size();
    for (const auto& s : spots) {
        std::optional<FilterCause> cause;
        if (s.mode != kWspr2Mode) {
            cause = FilterCause::NonWspr2Mode;
        } else if (s.band != config.band) {
            cause = FilterCause::BandMismatch;
        } else if (s.tx_call != call_a && s.tx_call != call_b) {
            cause = FilterCause::UnknownCallsign;
        } else if (s.timestamp < config.window_start || s.timestamp > config.window_end) {
            cause = FilterCause::OutsideWindow;
        } else if (s.power_dbm != config.expected_power_dbm) {
            cause = FilterCause::PowerMismatch;
        }
        if (cause) {
            ++result.report.removed[*cause];
        } else {
            result.spots.push_back(s);
        }
    }
    result.report.kept = result.spots.size();
    return result;
}

DedupeResult dedupe(const std::vector<Spot>& spots) {
    struct Entry {
        std::size_t first_index;
        bool ambiguous = false;
    };
    std::map<DedupeKey, Entry> seen;
    for (std::size_t i = 0; i < spots.size(); ++i) {
        const auto& s = spots[i];
        DedupeKey key{s.tx_call, s.rx_call, s.slot(), s.band};
        auto [it, inserted] = seen.try_emplace(std::move(key), Entry{i});
        if (!inserted && spots[it->second.first_index].snr_db != s.snr_db) it->second.ambiguous = true;
    }
    DedupeResult result;
    std::vector<std::size_t> keep;
    for (const auto& [key, entry] : seen) {
        if (entry.ambiguous) {
            result.ambiguous.push_back(key);
        } else {
            keep.push_back(entry.first_index);
        }
    }
    std::sort(keep.begin(), keep.end());
    result.spots.reserve(keep.size());
    for (auto i : keep) result.spots.push_back(spots[i]);
    return result;
}

namespace {

constexpr std::string_view kStoreHeader =
    "timestamp,tx_call,frequency_mhz,snr_db,power_dbm,tx_locator,rx_call,rx_locator,drift_hz_s,mode";

}  // namespace

void write_spot_store(std::ostream& out, const std::vector<Spot>& spots) {
    out << kStoreMagic << '\n' << kStoreHeader << '\n';
    for (const auto& s : spots) {
        out << s.timestamp << ',' << s.tx_call << ',' << format_double(s.frequency_mhz) << ',' << s.snr_db << ','
            << s.power_dbm << ',' << s.tx_locator.text() << ',' << s.rx_call << ',' << s.rx_locator.text() << ','
            << format_double(s.drift_hz_s) << ',' << s.mode << '\n';
    }
}

std::vector<Spot> read_spot_store(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kStoreMagic) {
        throw StoreFormatError("spot store: missing or unsupported schema line", 1);
    }
    if (!std::getline(in, line) || line != kStoreHeader) {
        throw StoreFormatError("spot store: unexpected column header", 2);
    }
    // Store column order as a mapping onto the archive adapter.
    const ColumnMapping store_mapping{.timestamp = 0, .rx_call = 6, .rx_locator = 7, .snr = 3, .frequency = 2,
                                      .tx_call = 1, .tx_locator = 5, .power = 4, .drift = 8, .mode = 9};
    std::vector<Spot> spots;
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 10) {
            throw StoreFormatError(fmt::format("spot store line {}: expected 10 fields", lineno), lineno);
        }
        auto outcome = parse_row(fields, store_mapping);
        if (auto* err = std::get_if<std::string>(&outcome)) {
            throw StoreFormatError(fmt::format("spot store line {}: {}", lineno, *err), lineno);
        }
        spots.push_back(std::get<Spot>(std::move(outcome)));
    }
    if (in.bad()) throw IoError("spot store read failure");
    return spots;
}

void save_spot_store(const std::filesystem::path& path, const std::vector<Spot>& spots) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write spot store {}", path.string()));
    write_spot_store(out, spots);
    if (!out) throw IoError(fmt::format("write failure on {}", path.string()));
}

std::vector<Spot> load_spot_store(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open spot store {}", path.string()));
    return read_spot_store(in);
}

void sort_canonical(std::vector<Spot>& spots) {
    std::stable_sort(spots.begin(), spots.end(), [](const Spot& a, const Spot& b) {
        return std::tie(a.timestamp, a.rx_call, a.tx_call, a.frequency_mhz) <
               std::tie(b.timestamp, b.rx_call, b.tx_call, b.frequency_mhz);
    });
}

}  // namespace wsprant::ingest

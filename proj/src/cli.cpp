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

#include "wsprant/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wsprant/errors.hpp"
#include "wsprant/pairing.hpp"
#include "wsprant/scenario_config.hpp"
#include "wsprant/simulator.hpp"
#include "wsprant/validation.hpp"

namespace wsprant::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
void read_key(const json& obj, const char* key, T& target, std::string_view where) {
    if (!obj.contains(key)) return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("{}.{}: {}", where, key, e.what()));
    }
}

std::optional<std::int64_t> read_time(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) return ingest::parse_utc(v.get<std::string>());
    throw ConfigError(fmt::format("{}.{}: expected Unix seconds or UTC string", where, key));
}

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
        }
    }
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out << content;
    if (!out) throw IoError(fmt::format("write failure on {}", path.string()));
}

// Filter report, row errors and dedupe ambiguities go to stdout as text.
void print_pipeline_report(std::ostream& out, const ingest::FilterReport& report,
                           const std::vector<ingest::DedupeKey>& ambiguous, std::size_t stored) {
    out << report.to_text();
    out << fmt::format("ambiguous duplicates dropped: {}\n", ambiguous.size());
    out << fmt::format("stored: {}\n", stored);
}

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<double> decode_threshold;
    bool quick = false;
    bool merge = false;
    std::vector<std::string> inputs;
};

int cmd_fetch(const Overrides& o, std::ostream& out, std::ostream& err) {
    const auto file = load_campaign_file(o.config);
    if (file.fetch.base_url.empty()) throw ConfigError("fetch.base_url is not set");
    const auto fetched = ingest::fetch_spots(file.campaign, file.fetch);
    auto filtered = ingest::validate_and_filter(fetched, file.campaign);
    auto deduped = ingest::dedupe(filtered.spots);
    ingest::sort_canonical(deduped.spots);
    ingest::save_spot_store(file.spot_store, deduped.spots);
    out << fmt::format("fetched: {}\n", fetched.size());
    print_pipeline_report(out, filtered.report, deduped.ambiguous, deduped.spots.size());
    if (deduped.spots.empty()) {
        err << "warning: no spots matched the campaign; wrote an empty store\n";
        return kExitEmpty;
    }
    return kExitOk;
}

int cmd_ingest(const Overrides& o, std::ostream& out, std::ostream& err) {
    const auto file = load_campaign_file(o.config);
    const auto mapping = file.column_mapping ? ingest::load_column_mapping(*file.column_mapping) : ingest::ColumnMapping{};
    std::vector<ingest::Spot> spots;
    if (o.merge && fs::exists(file.spot_store)) spots = ingest::load_spot_store(file.spot_store);
    std::size_t parsed = 0;
    for (const auto& input : o.inputs) {
        auto result = ingest::parse_archive_csv(ingest::read_archive_file(input), mapping);
        parsed += result.spots.size();
        for (const auto& e : result.errors) err << fmt::format("{}:{}: {}\n", input, e.line, e.cause);
        out << fmt::format("{}: {} spots, {} rejected rows\n", input, result.spots.size(), result.errors.size());
        std::move(result.spots.begin(), result.spots.end(), std::back_inserter(spots));
    }
    auto filtered = ingest::validate_and_filter(spots, file.campaign);
    auto deduped = ingest::dedupe(filtered.spots);
    ingest::sort_canonical(deduped.spots);
    ingest::save_spot_store(file.spot_store, deduped.spots);
    print_pipeline_report(out, filtered.report, deduped.ambiguous, deduped.spots.size());
    if (deduped.spots.empty()) {
        err << "warning: no spots matched the campaign; wrote an empty store\n";
        return kExitEmpty;
    }
    return kExitOk;
}

int cmd_estimate(const Overrides& o, std::ostream& out, std::ostream& err) {
    const auto file = load_campaign_file(o.config);
    const auto stored = ingest::load_spot_store(file.spot_store);
    const auto filtered = ingest::validate_and_filter(stored, file.campaign);
    const auto pairs = pairing::pair_reports(filtered.spots, file.campaign);
    if (pairs.size() < 2) {
        err << fmt::format("error: {} paired samples, at least 2 required\n", pairs.size());
        return kExitInsufficient;
    }
    const auto summary = est::efficiency_estimate(pairs, file.estimator);
    const auto hist = est::histogram(pairs, file.bin_width_db);

    std::ostringstream report, receivers, histogram_csv, pairs_csv;
    est::write_summary_report(report, summary);
    est::write_receivers_csv(receivers, summary.per_receiver);
    est::write_histogram_csv(histogram_csv, hist);
    pairing::write_pairs_csv(pairs_csv, pairs);
    write_file(file.output_dir / "summary.txt", report.str());
    write_file(file.output_dir / "receivers.csv", receivers.str());
    write_file(file.output_dir / "histogram.csv", histogram_csv.str());
    write_file(file.output_dir / "pairs.csv", pairs_csv.str());

    out << est::format_summary_line(summary) << '\n';
    out << fmt::format("reports written to {}\n", file.output_dir.string());
    return kExitOk;
}

int cmd_simulate(const Overrides& o, std::ostream& out, std::ostream&) {
    const auto file = load_campaign_file(o.config);
    if (!file.scenario) throw ConfigError(fmt::format("{}: no scenario block", file.source.string()));
    json block = *file.scenario;
    if (o.seed) block["seed"] = *o.seed;
    if (o.decode_threshold) block["decode_threshold_db"] = *o.decode_threshold;
    const auto setup = sim::scenario_from_json(block);
    const auto result = sim::run_campaign(setup.scenario, setup.n_slots, setup.threads);
    ingest::save_spot_store(file.spot_store, result.spots);
    write_file(file.truth_path(), sim::truth_to_json(result.truth, setup.scenario, setup.n_slots).dump(2) + "\n");
    out << fmt::format("simulated {} slots, {} receivers: {} spots, {} pairs, true delta_eta={:.3f} dB\n",
                       setup.n_slots, setup.scenario.receivers.size(), result.spots.size(), result.truth.n_pairs,
                       result.truth.delta_eta_db);
    out << fmt::format("spot store: {}\ntruth: {}\n", file.spot_store.string(), file.truth_path().string());
    return kExitOk;
}

int cmd_validate(const Overrides& o, std::ostream& out, std::ostream&) {
    validation::ValidationOptions options;
    options.quick = o.quick;
    if (!o.config.empty()) {
        const auto file = load_campaign_file(o.config);
        if (file.scenario) {
            if (file.scenario->contains("seed")) options.seed = file.scenario->at("seed").get<std::uint64_t>();
            if (file.scenario->contains("decode_threshold_db")) {
                options.decode_threshold_db = file.scenario->at("decode_threshold_db").get<double>();
            }
        }
    }
    if (o.seed) options.seed = *o.seed;
    if (o.decode_threshold) options.decode_threshold_db = *o.decode_threshold;
    const auto results = validation::run_validation(options);
    out << validation::format_table(results);
    const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    out << (ok ? "all checks passed\n" : "validation FAILED\n");
    return ok ? kExitOk : kExitValidation;
}

}  // namespace

fs::path CampaignFile::truth_path() const {
    auto p = spot_store;
    p += ".truth.json";
    return p;
}

CampaignFile load_campaign_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open campaign file {}", path.string()));
    json root;
    try {
        root = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
    check_keys(root, "config", {"campaign", "paths", "fetch", "estimator", "scenario"});

    CampaignFile file;
    file.source = path;
    const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

    const json campaign = root.value("campaign", json::object());
    check_keys(campaign, "campaign",
               {"call_a", "call_b", "band", "start", "end", "expected_power_dbm", "tx_locator"});

    // Campaign identity flows into a scenario that omits it; otherwise the
    // scenario supplies whatever the campaign block omits.
    if (root.contains("scenario")) {
        json block = root.at("scenario");
        if (block.is_object()) {
            for (const char* key : {"call_a", "call_b", "band", "tx_locator"}) {
                if (campaign.contains(key) && !block.contains(key)) block[key] = campaign.at(key);
            }
        }
        file.scenario = std::move(block);
    }
    std::optional<sim::ScenarioSetup> scenario;
    if (file.scenario) scenario = sim::scenario_from_json(*file.scenario);
    auto& c = file.campaign;
    if (scenario) c = sim::campaign_config_for(scenario->scenario, scenario->n_slots);

    read_key(campaign, "call_a", c.call_a, "campaign");
    read_key(campaign, "call_b", c.call_b, "campaign");
    if (campaign.contains("band")) {
        std::string band;
        read_key(campaign, "band", band, "campaign");
        const auto b = parse_band(band);
        if (!b) throw ConfigError(fmt::format("campaign.band: unknown band '{}'", band));
        c.band = *b;
    }
    if (auto t = read_time(campaign, "start", "campaign")) c.window_start = *t;
    if (auto t = read_time(campaign, "end", "campaign")) c.window_end = *t;
    read_key(campaign, "expected_power_dbm", c.expected_power_dbm, "campaign");
    if (campaign.contains("tx_locator")) {
        std::string loc;
        read_key(campaign, "tx_locator", loc, "campaign");
        try {
            c.tx_locator = geo::Locator::parse(loc);
        } catch (const LocatorError& e) {
            throw ConfigError(fmt::format("campaign.tx_locator: {}", e.what()));
        }
    }
    c.call_a = ingest::normalize_callsign(c.call_a).value_or(c.call_a);
    c.call_b = ingest::normalize_callsign(c.call_b).value_or(c.call_b);
    if (scenario) {
        const auto& s = scenario->scenario;
        if (c.call_a != s.call_a || c.call_b != s.call_b || c.band != s.band) {
            throw ConfigError("campaign and scenario disagree on callsigns or band");
        }
    }
    c.validate();

    const json paths = root.value("paths", json::object());
    check_keys(paths, "paths", {"spot_store", "output_dir", "column_mapping"});
    std::string store = "spots.wsprstore", output = "report";
    read_key(paths, "spot_store", store, "paths");
    read_key(paths, "output_dir", output, "paths");
    file.spot_store = resolve(store);
    file.output_dir = resolve(output);
    if (paths.contains("column_mapping")) {
        std::string mapping;
        read_key(paths, "column_mapping", mapping, "paths");
        file.column_mapping = resolve(mapping);
    }

    const json fetch = root.value("fetch", json::object());
    check_keys(fetch, "fetch",
               {"base_url", "request_delay_s", "retries", "backoff_initial_s", "backoff_max_s", "page_size",
                "timeout_s"});
    read_key(fetch, "base_url", file.fetch.base_url, "fetch");
    read_key(fetch, "request_delay_s", file.fetch.request_delay_s, "fetch");
    read_key(fetch, "retries", file.fetch.retries, "fetch");
    read_key(fetch, "backoff_initial_s", file.fetch.backoff_initial_s, "fetch");
    read_key(fetch, "backoff_max_s", file.fetch.backoff_max_s, "fetch");
    read_key(fetch, "page_size", file.fetch.page_size, "fetch");
    read_key(fetch, "timeout_s", file.fetch.timeout_s, "fetch");
    if (file.column_mapping) file.fetch.mapping = ingest::load_column_mapping(*file.column_mapping);

    const json estimator = root.value("estimator", json::object());
    check_keys(estimator, "estimator", {"bin_width_db", "trim_fraction"});
    read_key(estimator, "bin_width_db", file.bin_width_db, "estimator");
    read_key(estimator, "trim_fraction", file.estimator.trim_fraction, "estimator");
    if (!(file.bin_width_db > 0.0)) throw ConfigError("estimator.bin_width_db must be positive");
    if (!(file.estimator.trim_fraction >= 0.0 && file.estimator.trim_fraction < 0.5)) {
        throw ConfigError("estimator.trim_fraction must be in [0, 0.5)");
    }
    return file;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relative HF antenna efficiency from paired WSPR spot reports", "wsprant"};
    app.require_subcommand(1);
    Overrides o;

    const auto add_config = [&](CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--config", o.config, "campaign file (JSON)");
        if (required) opt->required();
    };
    auto* fetch = app.add_subcommand("fetch", "query the spot endpoint and write the spot store");
    add_config(fetch, true);
    auto* ingest_cmd = app.add_subcommand("ingest", "import archive CSV files (plain or gzip) into the spot store");
    add_config(ingest_cmd, true);
    ingest_cmd->add_option("csv", o.inputs, "archive files")->required()->check(CLI::ExistingFile);
    ingest_cmd->add_flag("--merge", o.merge, "merge with the existing store instead of replacing it");
    auto* estimate = app.add_subcommand("estimate", "pair reports and estimate relative gain and efficiency");
    add_config(estimate, true);
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic campaign from the scenario block");
    add_config(simulate, true);
    simulate->add_option("--seed", o.seed, "override scenario.seed");
    simulate->add_option("--decode-threshold", o.decode_threshold, "override scenario.decode_threshold_db");
    auto* validate = app.add_subcommand("validate", "run the built-in estimator checks");
    add_config(validate, false);
    validate->add_option("--seed", o.seed, "base seed of the checks");
    validate->add_option("--decode-threshold", o.decode_threshold, "override every scenario's decode threshold");
    validate->add_flag("--quick", o.quick, "fewer replications");

    std::vector<const char*> argv{"wsprant"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (fetch->parsed()) return cmd_fetch(o, out, err);
        if (ingest_cmd->parsed()) return cmd_ingest(o, out, err);
        if (estimate->parsed()) return cmd_estimate(o, out, err);
        if (simulate->parsed()) return cmd_simulate(o, out, err);
        if (validate->parsed()) return cmd_validate(o, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FetchError& e) {
        err << "network error: " << e.what() << '\n';
        return kExitNetwork;
    } catch (const ProtocolError& e) {
        err << "protocol error: " << e.what() << "\n  payload: " << e.excerpt() << '\n';
        return kExitProtocol;
    } catch (const InsufficientDataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInsufficient;
    } catch (const StoreFormatError& e) {
        err << "store error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace wsprant::cli

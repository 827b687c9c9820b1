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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsprant/estimators.hpp"
#include "wsprant/fetch.hpp"
#include "wsprant/ingest.hpp"

namespace wsprant::cli {

// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,          // bad arguments or configuration
    kExitNetwork = 2,        // endpoint unreachable / refused
    kExitEmpty = 3,          // no spots survived validation
    kExitInsufficient = 4,   // fewer than two paired samples
    kExitValidation = 5,     // a built-in validation check failed
    kExitIo = 6,             // file read/write or store format error
    kExitProtocol = 7,       // endpoint returned a malformed payload
};

// Everything a command needs, resolved from one campaign file. Relative
// paths are resolved against the file's directory.
struct CampaignFile {
    std::filesystem::path source;
    ingest::CampaignConfig campaign;
    std::filesystem::path spot_store;
    std::filesystem::path output_dir;
    std::optional<std::filesystem::path> column_mapping;
    ingest::FetchOptions fetch;
    double bin_width_db = 1.0;
    est::EfficiencyOptions estimator;
    std::optional<nlohmann::json> scenario;  // raw block, parsed by simulate

    std::filesystem::path truth_path() const;
};

// Throws ConfigError / IoError.
CampaignFile load_campaign_file(const std::filesystem::path& path);

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wsprant::cli

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

#include <string>
#include <vector>

#include "wsprant/ingest.hpp"

namespace wsprant::ingest {

struct FetchOptions {
    // e.g. "http://wspr.example.org/api/spots"; the path is kept as the query endpoint.
    std::string base_url;
    double request_delay_s = 10.0;  // minimum spacing between consecutive requests
    int retries = 3;                // extra attempts after a transient failure
    double backoff_initial_s = 1.0;
    double backoff_max_s = 30.0;
    int page_size = 1000;
    double timeout_s = 30.0;
    ColumnMapping mapping;
};

// Queries the endpoint once per campaign callsign, paging with limit/offset
// until a short page comes back. Request parameters:
//   tx_call, band, start, end (Unix seconds, inclusive), limit, offset
// Responses are archive-format CSV; an empty body is an empty page.
//
// Throws ConfigError before any request if the campaign is invalid,
// FetchError when the endpoint stays unreachable or returns a client error,
// ProtocolError when a response body is not a valid spot table.
std::vector<Spot> fetch_spots(const CampaignConfig& query, const FetchOptions& options);

}  // namespace wsprant::ingest

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

#include "wsprant/fetch.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include <fmt/format.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "wsprant/errors.hpp"

namespace wsprant::ingest {

namespace {

using Clock = std::chrono::steady_clock;

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError(fmt::format("fetch: base URL '{}' has no scheme", url));
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string excerpt_of(const std::string& body) {
    constexpr std::size_t kMax = 200;
    return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

class Session {
public:
    explicit Session(const FetchOptions& options) : options_(options), endpoint_(split_url(options.base_url)),
        client_(endpoint_.origin) {
        const auto timeout = std::chrono::duration<double>(options.timeout_s);
        client_.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
        client_.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    }

    std::string get(const httplib::Params& params) {
        double backoff = options_.backoff_initial_s;
        std::string last_failure;
        for (int attempt = 0; attempt <= options_.retries; ++attempt) {
            if (attempt > 0) {
                sleep_for(backoff);
                backoff = std::min(backoff * 2.0, options_.backoff_max_s);
            }
            pace();
            auto res = client_.Get(endpoint_.path, params, httplib::Headers{});
            last_request_ = Clock::now();
            if (!res) {
                last_failure = httplib::to_string(res.error());
                continue;
            }
            if (res->status == 200) return res->body;
            if (res->status == 429 || res->status >= 500) {
                last_failure = fmt::format("HTTP {}", res->status);
                continue;
            }
            throw FetchError(fmt::format("fetch: {} answered HTTP {}", options_.base_url, res->status));
        }
        throw FetchError(fmt::format("fetch: {} unreachable after {} attempts ({})", options_.base_url,
                                     options_.retries + 1, last_failure));
    }

private:
    static void sleep_for(double seconds) {
        if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }

    void pace() {
        if (!last_request_) return;
        const auto earliest = *last_request_ + std::chrono::duration_cast<Clock::duration>(
                                                   std::chrono::duration<double>(options_.request_delay_s));
        std::this_thread::sleep_until(earliest);
    }

    const FetchOptions& options_;
    Endpoint endpoint_;
    httplib::Client client_;
    std::optional<Clock::time_point> last_request_;
};

}  // namespace

std::vector<Spot> fetch_spots(const CampaignConfig& query, const FetchOptions& options) {
    query.validate();
    if (options.page_size <= 0) throw ConfigError("fetch: page_size must be positive");
    if (options.retries < 0) throw ConfigError("fetch: retries must be >= 0");

    Session session(options);
    std::vector<Spot> spots;
    for (const auto& call : {query.call_a, query.call_b}) {
        for (std::int64_t offset = 0;; offset += options.page_size) {
            const httplib::Params params{
                {"tx_call", *normalize_callsign(call)},
                {"band", std::string(band_name(query.band))},
                {"start", std::to_string(query.window_start)},
                {"end", std::to_string(query.window_end)},
                {"limit", std::to_string(options.page_size)},
                {"offset", std::to_string(offset)},
            };
            const std::string body = session.get(params);
            auto page = parse_archive_csv(body, options.mapping);
            if (!page.errors.empty()) {
                const auto& e = page.errors.front();
                throw ProtocolError(fmt::format("fetch: malformed response at line {}: {}", e.line, e.cause),
                                    excerpt_of(body));
            }
            const auto n = page.spots.size();
            std::move(page.spots.begin(), page.spots.end(), std::back_inserter(spots));
            if (n < static_cast<std::size_t>(options.page_size)) break;
        }
    }
    return spots;
}

}  // namespace wsprant::ingest

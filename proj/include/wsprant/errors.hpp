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

#include <stdexcept>
#include <string>

namespace wsprant {

// Root of all library exceptions. Row-level parse failures are not
// exceptions; they are returned as data (see ingest::RowError).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed Maidenhead locator. position() is 1-based, 0 for length errors.
class LocatorError : public Error {
public:
    LocatorError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Initial bearing is undefined for coincident/antipodal points and pole origins.
class UndefinedBearingError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class StoreFormatError : public Error {
public:
    StoreFormatError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Endpoint unreachable (after retries) or answered with a non-retriable status.
class FetchError : public Error {
public:
    using Error::Error;
};

// The endpoint answered, but the payload is not a spot table.
class ProtocolError : public Error {
public:
    ProtocolError(const std::string& what, std::string excerpt)
        : Error(what), excerpt_(std::move(excerpt)) {}
    const std::string& excerpt() const noexcept { return excerpt_; }

private:
    std::string excerpt_;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// A bias evaluation direction falls on a pattern null.
class NullDirectionError : public Error {
public:
    NullDirectionError(const std::string& what, double azimuth_deg, double elevation_deg)
        : Error(what), azimuth_deg_(azimuth_deg), elevation_deg_(elevation_deg) {}
    double azimuth_deg() const noexcept { return azimuth_deg_; }
    double elevation_deg() const noexcept { return elevation_deg_; }

private:
    double azimuth_deg_;
    double elevation_deg_;
};

}  // namespace wsprant

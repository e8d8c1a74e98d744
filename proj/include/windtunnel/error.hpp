// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <stdexcept>
#include <string>

namespace windtunnel {

/// Base class for all data-level failures (bad input, broken invariants).
/// The CLI maps every windtunnel::Error to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the file and 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::string path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), path_(std::move(path)),
          line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace windtunnel

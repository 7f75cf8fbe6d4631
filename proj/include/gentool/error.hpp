// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace gentool {

// Base for every failure raised by the toolkit. Validation problems that are
// reported as data (violation lists, quality reports, parse_ok flags) never
// throw.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Transport or server failure after the retry budget was spent.
class RemoteError : public Error {
public:
    using Error::Error;
};

// The backend stopped generating because it hit the token limit.
class TruncatedError : public Error {
public:
    using Error::Error;
};

class DegenerateVectorError : public Error {
public:
    using Error::Error;
};

// A synthesis stage could not obtain usable output. raw_text() holds the last
// generator response so the failure can be inspected.
class SynthesisError : public Error {
public:
    SynthesisError(const std::string& what, std::string raw_text)
        : Error(what), raw_text_(std::move(raw_text)) {}

    [[nodiscard]] const std::string& raw_text() const noexcept { return raw_text_; }

private:
    std::string raw_text_;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class InsufficientCorpusError : public Error {
public:
    using Error::Error;
};

class SplitError : public Error {
public:
    using Error::Error;
};

class LabelError : public Error {
public:
    using Error::Error;
};

class AnalysisError : public Error {
public:
    using Error::Error;
};

// Malformed input file. line() is 1-based, 0 when the problem is not tied to
// a line.
class InputError : public Error {
public:
    InputError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace gentool

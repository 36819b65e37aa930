/*
 * Copyright 2026 The vecaxis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vecaxis {

enum class ErrorKind {
    // input / storage
    EmptyInput,
    DimensionMismatch,
    MalformedNumber,
    IoError,
    ConfigError,
    UnknownLabel,
    // formula and filter languages
    SyntaxError,
    TypeError,
    UnknownFunction,
    BadArity,
    UnknownSetName,
    // numerics
    ZeroNorm,
    DivisionByZero,
    ConvergenceFailure,
    DegenerateInput,
    InvalidPerplexity,
    NonFinite,
    // request semantics
    BadRequest,
    InvalidArgument,
    TooManyItems,
    NotNormalized,
    UnknownSpace,
    UnknownJob,
    Canceled,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the engine. `offset` is a byte offset into the
/// formula or filter text for parse/type errors, `line` is a 1-based line
/// number for file loading errors, `subject` names the offending label,
/// space or component when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Error& at_offset(std::size_t offset) {
        offset_ = offset;
        return *this;
    }
    Error& at_line(std::size_t line) {
        line_ = line;
        return *this;
    }
    Error& about(std::string subject) {
        subject_ = std::move(subject);
        return *this;
    }

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> offset() const noexcept { return offset_; }
    std::optional<std::size_t> line() const noexcept { return line_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> offset_;
    std::optional<std::size_t> line_;
    std::string subject_;
};

/// HTTP status used by the service for an error kind.
int http_status(ErrorKind kind) noexcept;

/// Process exit code used by the CLI for an error kind. 2 is reserved for
/// usage errors.
int exit_code(ErrorKind kind) noexcept;

}  // namespace vecaxis

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

#include "vecaxis/error.hpp"

namespace vecaxis {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::MalformedNumber: return "MalformedNumber";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::UnknownLabel: return "UnknownLabel";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::TypeError: return "TypeError";
        case ErrorKind::UnknownFunction: return "UnknownFunction";
        case ErrorKind::BadArity: return "BadArity";
        case ErrorKind::UnknownSetName: return "UnknownSetName";
        case ErrorKind::ZeroNorm: return "ZeroNorm";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::InvalidPerplexity: return "InvalidPerplexity";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::BadRequest: return "BadRequest";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::TooManyItems: return "TooManyItems";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::UnknownSpace: return "UnknownSpace";
        case ErrorKind::UnknownJob: return "UnknownJob";
        case ErrorKind::Canceled: return "Canceled";
    }
    return "Unknown";
}

int http_status(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::SyntaxError:
        case ErrorKind::TypeError:
        case ErrorKind::UnknownFunction:
        case ErrorKind::BadArity:
        case ErrorKind::UnknownSetName:
        case ErrorKind::MalformedNumber:
        case ErrorKind::EmptyInput:
        case ErrorKind::BadRequest:
            return 400;
        case ErrorKind::UnknownSpace:
        case ErrorKind::UnknownJob:
            return 404;
        case ErrorKind::NotNormalized:
            return 409;
        case ErrorKind::IoError:
        case ErrorKind::ConfigError:
            return 500;
        default:
            return 422;
    }
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyInput:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::MalformedNumber:
        case ErrorKind::IoError:
        case ErrorKind::ConfigError:
            return 3;
        case ErrorKind::SyntaxError:
        case ErrorKind::TypeError:
        case ErrorKind::UnknownFunction:
        case ErrorKind::BadArity:
        case ErrorKind::UnknownSetName:
            return 4;
        case ErrorKind::UnknownLabel:
        case ErrorKind::UnknownSpace:
        case ErrorKind::UnknownJob:
            return 5;
        case ErrorKind::NotNormalized:
            return 6;
        case ErrorKind::ZeroNorm:
        case ErrorKind::DivisionByZero:
        case ErrorKind::ConvergenceFailure:
        case ErrorKind::DegenerateInput:
        case ErrorKind::InvalidPerplexity:
        case ErrorKind::NonFinite:
            return 7;
        case ErrorKind::BadRequest:
            return 2;
        case ErrorKind::InvalidArgument:
        case ErrorKind::TooManyItems:
            return 8;
        case ErrorKind::Canceled:
            return 9;
    }
    return 1;
}

}  // namespace vecaxis

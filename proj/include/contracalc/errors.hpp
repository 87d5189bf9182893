/*
 * Copyright 2026 the contracalc authors
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
#include <stdexcept>
#include <string>

namespace contracalc {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression or tensor text that does not conform to the grammar.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

/// A denominator evaluated to zero at the requested point.
struct DivisionByZeroError : Error {
    using Error::Error;
};

/// equal_probabilistic could not find a usable sample point within its
/// retry budget; the input's denominators vanish on too large a set.
struct RetriesExhaustedError : Error {
    using Error::Error;
};

struct ChartMismatchError : Error {
    using Error::Error;
};

struct GradeMismatchError : Error {
    using Error::Error;
};

/// An operation's documented precondition failed; `check` names it.
struct PreconditionError : Error {
    PreconditionError(const std::string& what, std::string which)
        : Error(what), check(std::move(which)) {}
    std::string check;
};

/// A structural or mathematical invariant failed during construction or
/// chart-spec loading; `invariant` is the stable name used in reports.
struct ValidationError : Error {
    ValidationError(std::string which, const std::string& what)
        : Error("[" + which + "] " + what), invariant(std::move(which)) {}
    std::string invariant;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace contracalc

/*
 * Copyright 2026 The trajkanon Authors
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

#ifndef TRAJKANON_ERROR_HPP
#define TRAJKANON_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace trajkanon {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters: degenerate ranges, heights out of bounds, k < 2, ...
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An argument violates an operation's domain (bad node id, empty input, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A coordinate lies outside the range covered by a tree.
class OutOfBoundsError : public DomainError {
public:
    using DomainError::DomainError;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A trajectory source contained no data rows.
class EmptyTrajectoryError : public Error {
public:
    using Error::Error;
};

/// Fewer trajectories than the anonymity parameter requires.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Refusal to publish a cluster smaller than k.
class AnonymityViolation : public Error {
public:
    using Error::Error;
};

/// A pipeline failure tagged with the stage it happened in.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace trajkanon

#endif  // TRAJKANON_ERROR_HPP

//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_ERRORS_HPP
#define SWARMOPT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swarmopt {

// Precondition violations on arguments (dimension mismatch, empty inputs, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation called on an object in the wrong state (empty buffer, bad baseline).
class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class UnsupportedSize : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A solver produced a non-finite intermediate.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string &what, std::size_t iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

// Base for failures of the remote proposer. Every error records how many
// attempts were made before giving up.
class ProposerError : public std::runtime_error {
public:
    ProposerError(const std::string &what, int attempts)
        : std::runtime_error(what + " after " + std::to_string(attempts) + " attempt(s)"),
          attempts_(attempts) {}

    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

class TransportError : public ProposerError {
public:
    using ProposerError::ProposerError;
};

class AuthError : public ProposerError {
public:
    using ProposerError::ProposerError;
};

class ProtocolError : public ProposerError {
public:
    using ProposerError::ProposerError;
};

// Proposer failure annotated with the agent and iteration it happened in.
class AgentStepError : public std::runtime_error {
public:
    AgentStepError(const std::string &what, std::size_t agent_id, std::size_t iteration)
        : std::runtime_error("agent " + std::to_string(agent_id) + ", iteration "
                             + std::to_string(iteration) + ": " + what),
          agent_id_(agent_id), iteration_(iteration) {}

    std::size_t agent_id() const noexcept { return agent_id_; }
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t agent_id_;
    std::size_t iteration_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed CSV input; row is 1-based and counts the header.
class CsvParseError : public std::runtime_error {
public:
    CsvParseError(const std::string &what, std::size_t row)
        : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string &what, const std::string &path)
        : std::runtime_error(what + ": " + path), path_(path) {}

    const std::string &path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace swarmopt

#endif  // SWARMOPT_ERRORS_HPP

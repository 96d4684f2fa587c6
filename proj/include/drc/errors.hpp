// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace drc {

// Base class for every error raised by the library. kind() is a short stable
// tag that the CLI prints verbatim so scripts can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class RankDeficiencyError : public Error {
public:
    RankDeficiencyError(std::size_t achieved, std::size_t required, const std::string& what)
        : Error("rank-deficient", what + " (rank " + std::to_string(achieved) + " of " +
                                      std::to_string(required) + ")"),
          achieved_(achieved),
          required_(required) {}

    std::size_t achieved_rank() const noexcept { return achieved_; }
    std::size_t required_rank() const noexcept { return required_; }

private:
    std::size_t achieved_;
    std::size_t required_;
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error("invalid-parameters", what) {}
};

class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what) : Error("geometry", what) {}
};

class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& what) : Error("insufficient-data", what) {}
};

class MdsViolationError : public Error {
public:
    explicit MdsViolationError(const std::string& what) : Error("mds-violation", what) {}
};

class ConstructionError : public Error {
public:
    explicit ConstructionError(const std::string& what) : Error("construction-invalid", what) {}
};

class UnsupportedScenarioError : public Error {
public:
    explicit UnsupportedScenarioError(const std::string& what)
        : Error("unsupported-scenario", what) {}
};

class IncompleteRackError : public Error {
public:
    explicit IncompleteRackError(const std::string& what) : Error("incomplete-rack", what) {}
};

class TopologyError : public Error {
public:
    explicit TopologyError(const std::string& what) : Error("topology-mismatch", what) {}
};

class ModelError : public Error {
public:
    explicit ModelError(const std::string& what) : Error("model", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace drc

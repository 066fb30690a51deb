#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdpr {

/// A model or input value violates one of its invariants. `field()` names the
/// offending field using the file-schema spelling (e.g. "tension_min_N").
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Geometry file could not be parsed. Line is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A cable length collapsed below the degeneracy threshold at the requested pose.
class SingularPoseError : public std::runtime_error {
 public:
  SingularPoseError(std::size_t cable_index, bool counterbalance)
      : std::runtime_error(std::string(counterbalance ? "counterbalance cable " : "cable ") +
                           std::to_string(cable_index + 1) + " has zero length at this pose"),
        cable_index_(cable_index),
        counterbalance_(counterbalance) {}

  /// Zero-based index within the driven or counterbalance set.
  std::size_t cable_index() const noexcept { return cable_index_; }
  bool counterbalance() const noexcept { return counterbalance_; }

 private:
  std::size_t cable_index_;
  bool counterbalance_;
};

/// The structure matrix lost rank, so the null-space decomposition is undefined.
class SingularConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested analysis needs model data that is not present (e.g. elastic
/// parameters) or a model shape it does not support.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdpr

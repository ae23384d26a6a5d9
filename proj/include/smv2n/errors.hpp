#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace smv2n {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or malformed configuration. `key()` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config error [" + key + "]: " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// The configuration is valid but cannot be materialized (e.g. too many
/// vehicles for the road length at the requested spacing).
class InfeasibleScenario : public Error {
 public:
  using Error::Error;
};

/// Argument outside a model's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Distance outside the validity range of the path-loss model.
class OutOfModelRange : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Aggregation requested over an empty population.
class EmptySummary : public Error {
 public:
  using Error::Error;
};

}  // namespace smv2n

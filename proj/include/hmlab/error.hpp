#pragma once

#include <stdexcept>
#include <string>

namespace hmlab {

/// A run configuration that cannot be used. `key()` names the offending
/// dotted config key (e.g. "pair.n").
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A computation that ran but could not produce a meaningful answer
/// (no regular Frobenius branch, inconclusive sign adjudication, a
/// trajectory that is not monotone where monotonicity is required).
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace hmlab

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nnecon/model.hpp"

namespace nnecon::harness {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, std::string reason)
      : std::runtime_error(key + ": " + reason), key_(std::move(key)), reason_(std::move(reason)) {}
  const std::string& key() const noexcept { return key_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string key_;
  std::string reason_;
};

enum class ModelKind { Subscription, Advertisement };

struct SweepSpec {
  std::string var;
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;

  double value(int i) const { return start + (stop - start) * i / (steps - 1); }
};

/// A second parameter taking a short list of values; each value gets its own sweep.
struct SeriesSpec {
  std::string var;
  std::vector<double> values;
};

struct ScenarioConfig {
  ModelKind model = ModelKind::Subscription;
  SubscriptionParams subscription;
  AdParams ad;
  std::optional<SweepSpec> sweep;
  std::optional<SeriesSpec> series;
  std::optional<BargainSetting> bargain;
  std::string output;  ///< empty means stdout
};

/// Parses and validates a key=value scenario. Unknown keys, duplicate keys
/// and malformed lines raise ParseError; missing or out-of-range values
/// raise ValidationError.
ScenarioConfig parse_config(std::string_view text);

ScenarioConfig load_config(const std::string& path);

/// Numeric parameters a sweep or series may vary for the given model.
const std::vector<std::string>& sweepable_keys(ModelKind model);

/// Copy of the config with one numeric parameter replaced.
ScenarioConfig with_value(const ScenarioConfig& cfg, const std::string& key, double value);

}  // namespace nnecon::harness

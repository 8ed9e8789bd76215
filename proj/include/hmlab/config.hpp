#pragma once

// Run configuration: a flat JSON object whose keys are dotted paths
// ("pair.n", "integration.rel_tol"), overridable key by key from the
// command line. Precedence: flags > file > defaults. Unknown keys and
// non-finite numbers are rejected with a ConfigError naming the key.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmlab/analysis.hpp"
#include "hmlab/integrator.hpp"
#include "hmlab/metric_model.hpp"
#include "hmlab/shooting_lab.hpp"

namespace hmlab {

enum class Command { check_conditions, integrate, shoot, sweep, adjudicate_sign, monitors };

std::string_view to_string(Command c);
Command parse_command(std::string_view s);

enum class SeedKind { series, explicit_ };

struct RunConfig {
  Command command = Command::check_conditions;
  std::filesystem::path output_dir = "out";

  int n = 3;
  FamilySpec target{Family::hyperbolic, {}, {}};
  IntegrationConfig integration;

  // integrate
  SeedKind seed = SeedKind::series;
  double c = 1.0;
  double y0 = 1.0;
  double yp0 = 1.0;
  Direction direction = Direction::forward;

  // shoot and monitors
  Regime shoot_regime = Regime::infinity_decay;
  double shoot_c = 1e-2;

  // sweep; grid bounds default per regime
  Regime sweep_regime = Regime::origin_regular;
  std::optional<std::size_t> c_count;
  std::optional<double> c_min;
  std::optional<double> c_max;
  unsigned threads = 0;

  ConditionGrid conditions;
  CheckMode check_mode = CheckMode::theorem;

  double points_per_decade = kDefaultPointsPerDecade;

  /// Upper end of the y-range for the w-equation run in `monitors`.
  double w_y_max = 10.0;

  CGrid sweep_grid() const;
  ModelPair pair() const;
};

using Override = std::pair<std::string, std::string>;

/// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

/// Parses a config file (may be absent) and applies the overrides, whose
/// values are read as JSON when they parse as JSON and as bare strings
/// otherwise.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<Override>& overrides);

/// Same, from JSON text already in memory.
RunConfig parse_config(const std::string& json_text, const std::vector<Override>& overrides);

}  // namespace hmlab

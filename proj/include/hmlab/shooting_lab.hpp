#pragma once

// Parameter sweeps of shooting solutions for the two boundary regimes of
// a radial diffeomorphism: y(0) = 0 increasing to infinity, or y blowing
// up at the puncture and decaying to 0 at infinity.

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "hmlab/integrator.hpp"
#include "hmlab/metric_model.hpp"

namespace hmlab {

enum class Regime { origin_regular, infinity_decay };

std::string_view to_string(Regime r);
Regime parse_regime(std::string_view s);

/// `count` log-spaced shooting parameters from `min` to `max` inclusive.
struct CGrid {
  std::size_t count = 61;
  double min = 1e-3;
  double max = 1e3;

  std::vector<double> values() const;
};

struct SweepSpec {
  ModelPair pair;
  Regime regime = Regime::origin_regular;
  CGrid c_grid;
  IntegrationConfig cfg;
  unsigned threads = 0;  // 0: hardware concurrency

  /// Throws std::invalid_argument on an unusable grid or config.
  void validate() const;
};

struct SweepRow {
  double c = 0.0;
  Verdict verdict;
  double final_y = 0.0;
  double final_yp = 0.0;
};

struct SweepReport {
  Regime regime = Regime::origin_regular;
  std::vector<SweepRow> rows;  // ordered by c
  std::array<std::size_t, kVerdictTagCount> summary{};
  bool any_diffeo_candidate = false;
};

/// One shot for parameter c: series seed at cfg.r_start integrated forward
/// (origin_regular), or y(r_end) = c, y'(r_end) = -c/r_end integrated
/// backward (infinity_decay).
Trajectory shoot(const ModelPair& pair, Regime regime, double c, const IntegrationConfig& cfg);

/// Runs every c of the grid, in parallel when threads != 1. The report does
/// not depend on the execution order. Series-start failures propagate.
SweepReport run_sweep(const SweepSpec& s);

struct BoundaryResult {
  double c_star = 0.0;  // geometric midpoint of the final bracket
  double c_lo = 0.0;
  double c_hi = 0.0;
  Verdict verdict_lo;
  Verdict verdict_hi;
  std::size_t iterations = 0;
};

/// Bisects in ln c between two parameters with different verdict tags until
/// the bracket is relatively narrower than `rel_tol`.
BoundaryResult bisect_boundary(const SweepSpec& s, double lo, double hi, double rel_tol = 1e-10);

}  // namespace hmlab

#pragma once

// Hypothesis checks for the nonexistence theorem, invariant monitors along
// transformed trajectories, and the numerical adjudication between the two
// candidate signs of the Abel equation.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmlab/integrator.hpp"
#include "hmlab/metric_model.hpp"
#include "hmlab/ode_system.hpp"

namespace hmlab {

/// (n-2)^2/(n-1) as an exact fraction plus its double value.
struct Threshold {
  long long num = 0;
  long long den = 1;
  double value = 0.0;
};

Threshold c3_threshold(int n);

struct ConditionGrid {
  double r_min = 1e-4;
  double r_max = 50.0;
  std::size_t count = 2000;

  void validate() const;
};

/// `theorem`: conditions (1), (2), (3). `remark`: (1), (3) and gg > 0 on
/// the grid, condition (2) reported but left out of `overall`.
enum class CheckMode { theorem, remark };
std::string_view to_string(CheckMode m);
CheckMode parse_check_mode(std::string_view s);

enum class SupLocation { interior, lower_boundary, upper_boundary };
std::string_view to_string(SupLocation l);

inline constexpr double kConditionTolerance = 1e-9;
inline constexpr double kStrictMargin = 1e-12;

struct ConditionReport {
  int n = 2;
  CheckMode mode = CheckMode::theorem;
  ConditionGrid grid;

  double c1_value = 0.0;  // g(0) g'(0)
  bool c1_pass = false;

  double c2_min = 0.0;  // min of (g g')' over the grid
  double c2_argmin = 0.0;
  bool c2_pass = false;

  double c3_sup = 0.0;  // max of gg(r)/r over the grid
  double c3_argmax = 0.0;
  Threshold c3_threshold;
  double c3_margin = 0.0;  // c3_sup - threshold
  bool c3_pass = false;
  SupLocation c3_location = SupLocation::interior;
  bool c3_boundary_divergent = false;  // still increasing at r_max

  double gg_min = 0.0;  // remark mode: min of gg over the grid
  bool gg_positive_pass = false;

  bool overall = false;
};

ConditionReport check_conditions(const ModelPair& pair, const ConditionGrid& grid = {},
                                 CheckMode mode = CheckMode::theorem);

/// Min over samples of (n-2) + s (n-1) z gg(y), the factor multiplying z^2
/// in the Abel equation (s = +1 as printed, -1 corrected).
struct LemmaReport {
  SignVariant variant = SignVariant::as_printed;
  double min_value = 0.0;
  double y_at_min = 0.0;
  std::size_t violations = 0;
  std::optional<double> first_violation_y;  // smallest y with a violation
  bool pass = false;
};

LemmaReport lemma1_monitor(int n, const MetricProfile& p, const AbelTrajectory& a,
                           SignVariant v = SignVariant::as_printed);

struct CorollaryReport {
  bool z_monotone_nondecreasing = false;
  std::size_t decreases = 0;
  std::optional<double> first_decrease_y;
  double max_decrease = 0.0;
  double y_min = 0.0;
  double z_at_min_y = 0.0;
  bool heading_to_minus_infinity = false;
  bool reaches_small_y = false;  // sampled down to y <= 1e-3 or stopped by the z cap
};

inline constexpr double kMonotoneSlack = 1e-12;

CorollaryReport corollary_monitor(const AbelTrajectory& a, double slack = kMonotoneSlack);

struct WBoundReport {
  double max_excess = 0.0;  // max of sqrt(w) - (n-2) y
  double y_at_max = 0.0;
  bool degenerate = false;  // n = 2: the bound forces w = 0
  bool pass = false;
};

WBoundReport wbound_monitor(int n, std::span<const WState> ws);

struct VariantEvidence {
  SignVariant variant = SignVariant::corrected;
  double sup_coarse = 0.0;
  double sup_fine = 0.0;
  bool vanishes = false;
  std::vector<ResidualPoint> residual_coarse;
  std::vector<ResidualPoint> residual_fine;
};

struct Adjudication {
  SignVariant selected = SignVariant::corrected;
  std::array<VariantEvidence, 2> evidence;  // indexed by SignVariant
  std::string source;                       // which trajectory was used
  double points_per_decade = 0.0;
  double term_scale = 0.0;  // max of |(n-2) z^2| + |(n-1) z^3 gg| on the fine grid
  std::size_t coarse_samples = 0;
  std::size_t fine_samples = 0;
};

inline constexpr double kDefaultPointsPerDecade = 200.0;

/// Resamples `t` at `ppd` and 2 ppd points per decade of y, transforms to
/// z(y) and compares residual_abel of both variants. A variant vanishes
/// when refinement halves its sup-residual or the sup is below 1e-6 of the
/// term scale; exactly one may vanish, with the other at least 10x larger
/// on the fine grid. Throws
/// NumericalFailure("adjudicate_sign", ...) when the outcome is ambiguous.
Adjudication adjudicate_trajectory(int n, const MetricProfile& p, const Trajectory& t,
                                   double ppd = kDefaultPointsPerDecade);

/// Uses the regular shot with c = 1 when the target admits one, else the
/// IVP y(1) = 1, y'(1) = 1 on [1, 2].
Adjudication adjudicate_sign(const ModelPair& pair, const IntegrationConfig& cfg,
                             double ppd = kDefaultPointsPerDecade);

}  // namespace hmlab

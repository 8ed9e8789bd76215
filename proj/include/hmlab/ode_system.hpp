#pragma once

// Every equation form in the reduction chain of the radial harmonic-map
// equation, as right-hand sides and residual evaluators:
//
//   direct   y'' + (n-1) y'/r - (n-1) gg(y)/r^2 = 0          y = y(r)
//   abel     z' = (n-2) z^2 -/+ (n-1) z^3 gg(y)             z = (ln r)'(y)
//   w        w' = 2(n-2) sqrt(w) -/+ 2(n-1) gg(y)            w = 1/z^2
//
// where gg = g g'. The sign of the cubic Abel term is a SignVariant.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hmlab/metric_model.hpp"

namespace hmlab {

struct DirectState {
  double r = 0.0;
  double y = 0.0;
  double yp = 0.0;
};

/// `as_printed`: z' = (n-2)z^2 + (n-1)z^3 gg.
/// `corrected`:  z' = (n-2)z^2 - (n-1)z^3 gg (follows from the log-radius form).
enum class SignVariant { as_printed, corrected };

/// `printed`:     w' = 2(n-2)sqrt(w) - 2(n-1)gg.
/// `alternative`: w' = 2(n-2)sqrt(w) + 2(n-1)gg.
enum class WForm { printed, alternative };

struct AbelState {
  double y = 0.0;
  double z = 0.0;
};

struct WState {
  double y = 0.0;
  double w = 0.0;
};

inline constexpr std::string_view kDirectEquationId = "direct";
std::string_view equation_id(SignVariant v);
std::string_view equation_id(WForm f);
std::string_view to_string(SignVariant v);
SignVariant parse_sign_variant(std::string_view s);
SignVariant other(SignVariant v);

/// Profile product g g' extended oddly to y < 0 so trial stages may step
/// across the puncture.
double gg_odd(const MetricProfile& p, double y);

struct DirectDerivative {
  double dy = 0.0;   // dy/dr
  double dyp = 0.0;  // dy'/dr
};

DirectDerivative direct_rhs(int n, const MetricProfile& p, const DirectState& s);

double abel_rhs(int n, const MetricProfile& p, SignVariant v, const AbelState& a);

/// z' - rhs at a point where the derivative is known.
double abel_residual_point(int n, const MetricProfile& p, SignVariant v, double y, double z,
                           double dz);

double w_rhs(int n, const MetricProfile& p, const WState& ws, WForm form = WForm::printed);

WState z_to_w(const AbelState& a);

/// Why an Abel integration stopped; `none` for transformed trajectories.
enum class AbelStop { none, range_end, z_vanished, z_blowup_negative, z_blowup_positive, step_underflow };
std::string_view to_string(AbelStop s);

/// Samples z(y) ordered by increasing y. `variant` is set when the samples
/// come from integrating an Abel form and empty when they were transformed
/// from a direct trajectory.
struct AbelTrajectory {
  std::optional<SignVariant> variant;
  std::vector<AbelState> samples;
  AbelStop stop = AbelStop::none;
  double y_stop = 0.0;
};

struct ResidualPoint {
  double x = 0.0;
  double value = 0.0;
};

/// Left-hand side of the direct ODE at interior samples, y'' from the
/// three-point nonuniform central difference of y'. Needs >= 3 samples.
std::vector<ResidualPoint> residual_direct(int n, const MetricProfile& p,
                                           std::span<const DirectState> samples);

/// z' - rhs_v at interior samples, z' from central differences on the
/// sample grid: five-point (fourth order) when `order` is 4 and at least
/// five samples exist, otherwise three-point. Needs >= 3 samples, y > 0.
std::vector<ResidualPoint> residual_abel(int n, const MetricProfile& p, SignVariant v,
                                         std::span<const AbelState> samples, int order = 4);

double sup_abs(std::span<const ResidualPoint> residuals);

/// z = 1/(y' r) per sample, reordered by increasing y. Throws
/// NumericalFailure on y' = 0 or non-monotone y.
AbelTrajectory transform_direct_to_abel(std::span<const DirectState> samples);

}  // namespace hmlab

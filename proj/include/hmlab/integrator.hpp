#pragma once

// Adaptive Dormand-Prince integration of the direct radial equation and of
// the first-order transformed forms, with trajectory classification.

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "hmlab/dopri.hpp"
#include "hmlab/metric_model.hpp"
#include "hmlab/ode_system.hpp"

namespace hmlab {

struct IntegrationConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 1'000'000;
  double r_start = 0.01;
  double r_end = 50.0;
  double y_cap = 1e8;
  double yp_zero_tol = 1e-14;
  double z_cap = 1e12;
  double z_zero_tol = 1e-14;
  // Decades of log-radius the classifier continues past the window before
  // accepting a shot as a diffeomorphism candidate; 0 disables the probe.
  double tail_decades = 12.0;
  // Largest |d ln y / d ln r| still read as power-law growth.
  double kappa_max = 100.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class VerdictTag { diffeo_candidate, derivative_vanished, finite_blowup, domain_exhausted, step_underflow };

inline constexpr std::size_t kVerdictTagCount = 5;
std::string_view to_string(VerdictTag tag);

struct Verdict {
  VerdictTag tag = VerdictTag::step_underflow;
  double r_event = std::numeric_limits<double>::quiet_NaN();  // NaN when the tag carries no location
  bool beyond_window = false;  // decided by the tail probe
  std::string note;
};

enum class Direction { forward, backward };
std::string_view to_string(Direction d);

struct IntegrationStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double final_r = std::numeric_limits<double>::quiet_NaN();
  std::size_t tail_steps = 0;
  std::size_t tail_rejected = 0;
};

/// Sampled solution of the direct equation. `samples` covers the
/// integration window, one row per accepted step (plus the located event
/// point); `dense[i]` interpolates between samples i and i+1. `tail` holds
/// the log-radius continuation run by the classifier, if any.
struct Trajectory {
  Direction direction = Direction::forward;
  std::vector<DirectState> samples;
  std::vector<dopri::DenseSegment<2>> dense;
  std::vector<DirectState> tail;
  Verdict verdict;
  IntegrationStats stats;

  /// Last computed state, tail included.
  const DirectState& final_state() const;
  /// Window samples followed by tail samples.
  std::vector<DirectState> full_samples() const;
};

struct InitialData {
  double y0 = 0.0;
  double yp0 = 0.0;
};

/// Extra source term F(r) added to y''; used for manufactured solutions.
using Forcing = std::function<double(double)>;

/// Integrates from cfg.r_start to cfg.r_end (forward) or from cfg.r_end to
/// cfg.r_start (backward), with `init` given at the starting radius.
Trajectory integrate_direct(int n, const MetricProfile& p, const IntegrationConfig& cfg,
                            const InitialData& init, Direction direction,
                            const Forcing& forcing = {});

/// Regular Frobenius branch near r = 0: with mu = lim gg(y)/y, the
/// exponent alpha solves alpha^2 + (n-2) alpha - (n-1) mu = 0.
struct SeriesSeed {
  double y0 = 0.0;
  double yp0 = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
};

/// Positive root of the indicial equation; throws NumericalFailure when
/// mu <= 0 or is not finite.
double regular_exponent(int n, double mu);

SeriesSeed series_start(int n, const MetricProfile& p, double c, double r_start);

/// Integrates an Abel form in y from y_from to y_to (either direction) and
/// stops when z reaches 0 (within cfg.z_zero_tol) or |z| reaches cfg.z_cap.
AbelTrajectory integrate_abel(int n, const MetricProfile& p, SignVariant v,
                              const IntegrationConfig& cfg, double z0, double y_from, double y_to);

struct WTrajectory {
  WForm form = WForm::printed;
  std::vector<WState> samples;  // increasing y
  bool hit_zero = false;        // integration stopped because w would turn negative
  double y_stop = 0.0;
};

WTrajectory integrate_w(int n, const MetricProfile& p, WForm form, const IntegrationConfig& cfg,
                        double w0, double y_from, double y_to);

/// Resamples the window of a strictly monotone trajectory onto y-values
/// spaced uniformly in ln y (`points_per_decade` per factor of 10) using
/// the dense output. Throws NumericalFailure when y is not monotone.
std::vector<DirectState> resample_by_y(const Trajectory& t, double points_per_decade);

}  // namespace hmlab

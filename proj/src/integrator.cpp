#include "hmlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hmlab/error.hpp"

namespace hmlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kStepFloor = 1e-14;

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("integration.") + field + " " + what);
}

std::string format_g(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

dopri::Control control_for(const IntegrationConfig& cfg, double t0, double t1) {
  return {cfg.rel_tol, cfg.abs_tol, kStepFloor * std::abs(t1 - t0), cfg.max_steps};
}

// Shared classification of a step-size collapse: super-power-law growth in
// the direction of integration is a finite-radius singularity of y.
Verdict classify_collapse(const IntegrationConfig& cfg, const DirectState& s, double dir,
                          bool beyond) {
  const double kappa = std::abs(s.r * s.yp / s.y);
  const bool growing = dir * s.yp > 0.0 && s.y > 0.0;
  if (growing && kappa > cfg.kappa_max) {
    return {VerdictTag::finite_blowup, s.r, beyond,
            "step-size collapse with super-power-law growth (|dln y/dln r| = " + format_g(kappa) + ")"};
  }
  return {VerdictTag::step_underflow, s.r, beyond, "step size fell below the floor"};
}

// Continues an event-free window run in the log-radius variable, where
// the source scaling symmetry makes the equation autonomous:
//   y_ss + (n-2) y_s = (n-1) gg(y) + r^2 F(r),   s = ln r.
Verdict tail_probe(int n, const MetricProfile& p, const IntegrationConfig& cfg, const Forcing& forcing,
                   double dir, Trajectory& traj) {
  const DirectState end = traj.samples.back();
  const double s0 = std::log(end.r);
  const double s1 = s0 + dir * cfg.tail_decades * std::numbers::ln10;
  const double a = n - 2.0;
  const double b = n - 1.0;
  auto rhs = [&](double s, const dopri::Vec<2>& u) -> dopri::Vec<2> {
    if (!std::isfinite(u[0]) || !std::isfinite(u[1])) return {kNaN, kNaN};
    double f = -a * u[1] + b * gg_odd(p, u[0]);
    if (forcing) {
      const double r = std::exp(s);
      f += r * r * forcing(r);
    }
    return {u[1], f};
  };
  const std::array<dopri::Event<2>, 3> events{{
      {[](double s, const dopri::Vec<2>& u) { return u[1] * std::exp(-s); }, dopri::EventKind::crossing,
       cfg.yp_zero_tol},
      {[&cfg](double, const dopri::Vec<2>& u) { return u[0] - cfg.y_cap; }, dopri::EventKind::at_least_zero, 0.0},
      {[](double, const dopri::Vec<2>& u) { return u[0]; }, dopri::EventKind::at_most_zero, 0.0},
  }};
  const auto sol = dopri::integrate<2>(rhs, s0, s1, {end.y, end.r * end.yp}, control_for(cfg, s0, s1), events);

  traj.stats.tail_steps = sol.steps;
  traj.stats.tail_rejected = sol.rejected;
  for (std::size_t i = 1; i < sol.t.size(); ++i) {
    const double r = std::exp(sol.t[i]);
    traj.tail.push_back({r, sol.y[i][0], sol.y[i][1] / r});
  }
  const DirectState last = traj.tail.empty() ? end : traj.tail.back();

  switch (sol.stop) {
    case dopri::Stop::event:
      switch (*sol.event_index) {
        case 0:
          return {VerdictTag::derivative_vanished, last.r, true, "y' vanished beyond the window"};
        case 1: {
          const double kappa = std::abs(last.r * last.yp / last.y);
          if (kappa <= cfg.kappa_max) {
            return {VerdictTag::diffeo_candidate, kNaN, true,
                    "reached y_cap at power-law rate (|dln y/dln r| = " + format_g(kappa) + ")"};
          }
          return {VerdictTag::finite_blowup, last.r, true, "y reached y_cap beyond the window"};
        }
        default:
          return {VerdictTag::domain_exhausted, last.r, true, "target puncture reached (y = 0) beyond the window"};
      }
    case dopri::Stop::step_underflow: return classify_collapse(cfg, last, dir, true);
    case dopri::Stop::step_budget:
      return {VerdictTag::step_underflow, last.r, true, "step budget exhausted in the tail probe"};
    case dopri::Stop::reached_end: break;
  }
  return {VerdictTag::diffeo_candidate, kNaN, true, "tail horizon reached without an event"};
}

}  // namespace

void IntegrationConfig::validate() const {
  require(rel_tol > 0.0 && std::isfinite(rel_tol), "rel_tol", "must be positive");
  require(abs_tol > 0.0 && std::isfinite(abs_tol), "abs_tol", "must be positive");
  require(max_steps > 0, "max_steps", "must be positive");
  require(r_start > 0.0 && std::isfinite(r_start), "r_start", "must be positive");
  require(r_end > r_start && std::isfinite(r_end), "r_end", "must exceed r_start");
  require(y_cap > 0.0 && std::isfinite(y_cap), "y_cap", "must be positive");
  require(yp_zero_tol >= 0.0 && std::isfinite(yp_zero_tol), "yp_zero_tol", "must be >= 0");
  require(z_cap > 0.0 && std::isfinite(z_cap), "z_cap", "must be positive");
  require(z_zero_tol >= 0.0 && std::isfinite(z_zero_tol), "z_zero_tol", "must be >= 0");
  require(tail_decades >= 0.0 && std::isfinite(tail_decades), "tail_decades", "must be >= 0");
  require(kappa_max > 0.0 && std::isfinite(kappa_max), "kappa_max", "must be positive");
}

std::string_view to_string(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::diffeo_candidate: return "diffeo_candidate";
    case VerdictTag::derivative_vanished: return "derivative_vanished";
    case VerdictTag::finite_blowup: return "finite_blowup";
    case VerdictTag::domain_exhausted: return "domain_exhausted";
    case VerdictTag::step_underflow: return "step_underflow";
  }
  return "unknown";
}

std::string_view to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

const DirectState& Trajectory::final_state() const { return tail.empty() ? samples.back() : tail.back(); }

std::vector<DirectState> Trajectory::full_samples() const {
  std::vector<DirectState> out(samples);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

Trajectory integrate_direct(int n, const MetricProfile& p, const IntegrationConfig& cfg,
                            const InitialData& init, Direction direction, const Forcing& forcing) {
  cfg.validate();
  if (n < 2) throw std::invalid_argument("integrate_direct: n must be >= 2");
  if (!(init.y0 > 0.0) || !std::isfinite(init.y0)) {
    throw std::invalid_argument("integrate_direct: y0 must be positive and finite");
  }
  if (!std::isfinite(init.yp0)) throw std::invalid_argument("integrate_direct: yp0 must be finite");

  const bool fwd = direction == Direction::forward;
  const double dir = fwd ? 1.0 : -1.0;
  const double r0 = fwd ? cfg.r_start : cfg.r_end;
  const double r1 = fwd ? cfg.r_end : cfg.r_start;
  const double k = n - 1.0;

  auto rhs = [&](double r, const dopri::Vec<2>& u) -> dopri::Vec<2> {
    if (!std::isfinite(u[0]) || !std::isfinite(u[1])) return {kNaN, kNaN};
    double f = -k * u[1] / r + k * gg_odd(p, u[0]) / (r * r);
    if (forcing) f += forcing(r);
    return {u[1], f};
  };
  const std::array<dopri::Event<2>, 3> events{{
      {[](double, const dopri::Vec<2>& u) { return u[1]; }, dopri::EventKind::crossing, cfg.yp_zero_tol},
      {[&cfg](double, const dopri::Vec<2>& u) { return u[0] - cfg.y_cap; }, dopri::EventKind::at_least_zero, 0.0},
      {[](double, const dopri::Vec<2>& u) { return u[0]; }, dopri::EventKind::at_most_zero, 0.0},
  }};
  auto sol = dopri::integrate<2>(rhs, r0, r1, {init.y0, init.yp0}, control_for(cfg, r0, r1), events);

  Trajectory traj;
  traj.direction = direction;
  traj.samples.reserve(sol.t.size());
  for (std::size_t i = 0; i < sol.t.size(); ++i) traj.samples.push_back({sol.t[i], sol.y[i][0], sol.y[i][1]});
  traj.dense = std::move(sol.dense);
  traj.stats.steps = sol.steps;
  traj.stats.rejected = sol.rejected;
  traj.stats.final_r = traj.samples.back().r;
  const DirectState& last = traj.samples.back();

  switch (sol.stop) {
    case dopri::Stop::event:
      switch (*sol.event_index) {
        case 0:
          traj.verdict = {VerdictTag::derivative_vanished, last.r, false,
                          sol.steps == 0 ? "y' vanishes at the starting radius" : "y' changed sign"};
          break;
        case 1: traj.verdict = {VerdictTag::finite_blowup, last.r, false, "y reached y_cap"}; break;
        default: traj.verdict = {VerdictTag::domain_exhausted, last.r, false, "target puncture reached (y = 0)"};
      }
      return traj;
    case dopri::Stop::step_underflow: traj.verdict = classify_collapse(cfg, last, dir, false); return traj;
    case dopri::Stop::step_budget:
      traj.verdict = {VerdictTag::step_underflow, last.r, false, "step budget exhausted"};
      return traj;
    case dopri::Stop::reached_end: break;
  }

  // bfc1-type shots must increase outward, bfc2-type shots must increase inward
  if (dir * last.yp <= 0.0) {
    traj.verdict = {VerdictTag::domain_exhausted, kNaN, false,
                    "window exhausted with y' orientation inconsistent with the regime"};
    return traj;
  }
  if (cfg.tail_decades == 0.0) {
    traj.verdict = {VerdictTag::diffeo_candidate, kNaN, false, "window reached without an event"};
    return traj;
  }
  traj.verdict = tail_probe(n, p, cfg, forcing, dir, traj);
  return traj;
}

double regular_exponent(int n, double mu) {
  if (!std::isfinite(mu) || !(mu > 0.0)) {
    throw NumericalFailure("series_start", "no regular branch: mu = lim gg(y)/y = " + format_g(mu) +
                                               " (need 0 < mu < inf)");
  }
  const double a = n - 2.0;
  return 0.5 * (-a + std::sqrt(a * a + 4.0 * (n - 1.0) * mu));
}

SeriesSeed series_start(int n, const MetricProfile& p, double c, double r_start) {
  if (n < 2) throw std::invalid_argument("series_start: n must be >= 2");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("series_start: c must be positive");
  if (!(r_start > 0.0)) throw std::invalid_argument("series_start: r_start must be positive");
  const double gg0 = eval_gg(p, 0.0);
  if (!(std::abs(gg0) <= 1e-12)) {
    throw NumericalFailure("series_start", "gg(0) = " + format_g(gg0) + " != 0, y(0) = 0 is not a regular point");
  }
  const double mu = eval_gg_prime(p, 0.0);
  const double alpha = regular_exponent(n, mu);
  return {c * std::pow(r_start, alpha), c * alpha * std::pow(r_start, alpha - 1.0), alpha, mu};
}

AbelTrajectory integrate_abel(int n, const MetricProfile& p, SignVariant v, const IntegrationConfig& cfg,
                              double z0, double y_from, double y_to) {
  cfg.validate();
  if (!(y_from > 0.0) || !(y_to > 0.0)) throw std::invalid_argument("integrate_abel: y-range must lie in (0, inf)");
  if (z0 == 0.0 || !std::isfinite(z0)) throw std::invalid_argument("integrate_abel: z0 must be nonzero and finite");

  auto rhs = [&](double y, const dopri::Vec<1>& u) -> dopri::Vec<1> {
    if (!(y > 0.0) || !std::isfinite(u[0])) return {kNaN};
    return {abel_rhs(n, p, v, {y, u[0]})};
  };
  const std::array<dopri::Event<1>, 2> events{{
      {[](double, const dopri::Vec<1>& u) { return u[0]; }, dopri::EventKind::crossing, cfg.z_zero_tol},
      {[&cfg](double, const dopri::Vec<1>& u) { return std::abs(u[0]) - cfg.z_cap; },
       dopri::EventKind::at_least_zero, 0.0},
  }};
  const auto sol = dopri::integrate<1>(rhs, y_from, y_to, {z0}, control_for(cfg, y_from, y_to), events);

  AbelTrajectory out;
  out.variant = v;
  for (std::size_t i = 0; i < sol.t.size(); ++i) out.samples.push_back({sol.t[i], sol.y[i][0]});
  out.y_stop = sol.t.back();
  switch (sol.stop) {
    case dopri::Stop::event:
      if (*sol.event_index == 0) {
        out.stop = AbelStop::z_vanished;
      } else {
        out.stop = sol.y.back()[0] < 0.0 ? AbelStop::z_blowup_negative : AbelStop::z_blowup_positive;
      }
      break;
    case dopri::Stop::reached_end: out.stop = AbelStop::range_end; break;
    default: out.stop = AbelStop::step_underflow;
  }
  if (y_to < y_from) std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

WTrajectory integrate_w(int n, const MetricProfile& p, WForm form, const IntegrationConfig& cfg, double w0,
                        double y_from, double y_to) {
  cfg.validate();
  if (!(y_from >= 0.0) || !(y_to >= 0.0)) throw std::invalid_argument("integrate_w: y-range must lie in [0, inf)");
  if (!(w0 >= 0.0) || !std::isfinite(w0)) throw std::invalid_argument("integrate_w: w0 must be >= 0");

  // sqrt is continued by sqrt(max(w, 0)) so a step may overshoot w = 0 and
  // the crossing is then localized on the dense output.
  auto rhs = [&](double y, const dopri::Vec<1>& u) -> dopri::Vec<1> {
    if (!(y >= 0.0) || !std::isfinite(u[0])) return {kNaN};
    return {w_rhs(n, p, {y, std::max(u[0], 0.0)}, form)};
  };
  const std::array<dopri::Event<1>, 1> events{{
      {[](double, const dopri::Vec<1>& u) { return u[0]; }, dopri::EventKind::below_zero, 0.0},
  }};
  const auto sol = dopri::integrate<1>(rhs, y_from, y_to, {w0}, control_for(cfg, y_from, y_to), events);

  WTrajectory out;
  out.form = form;
  for (std::size_t i = 0; i < sol.t.size(); ++i) out.samples.push_back({sol.t[i], std::max(sol.y[i][0], 0.0)});
  out.hit_zero = sol.stop == dopri::Stop::event;
  out.y_stop = sol.t.back();
  if (y_to < y_from) std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

std::vector<DirectState> resample_by_y(const Trajectory& t, double points_per_decade) {
  if (!(points_per_decade > 0.0)) throw std::invalid_argument("resample_by_y: points_per_decade must be positive");
  const auto& s = t.samples;
  if (s.size() < 2 || t.dense.size() + 1 != s.size()) {
    throw NumericalFailure("resample_by_y", "trajectory has fewer than two samples");
  }
  const bool increasing = s.back().y > s.front().y;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (increasing ? !(s[i].y > s[i - 1].y) : !(s[i].y < s[i - 1].y)) {
      throw NumericalFailure("resample_by_y", "y is not strictly monotone along the trajectory");
    }
  }
  const double lo = std::min(s.front().y, s.back().y);
  const double hi = std::max(s.front().y, s.back().y);
  if (!(lo > 0.0)) throw NumericalFailure("resample_by_y", "y must stay positive");

  const double delta = std::numbers::ln10 / points_per_decade;
  const double llo = std::log(lo);
  const auto count = static_cast<std::size_t>(std::floor((std::log(hi) - llo) / delta)) + 1;

  std::vector<DirectState> out;
  out.reserve(count);
  std::size_t seg = 0;  // segment index in order of increasing y
  const std::size_t nseg = t.dense.size();
  auto seg_bounds = [&](std::size_t j) {
    const std::size_t i = increasing ? j : nseg - 1 - j;
    return std::pair<std::size_t, std::size_t>{i, i + 1};
  };
  for (std::size_t k = 0; k < count; ++k) {
    const double target = std::min(std::exp(llo + static_cast<double>(k) * delta), hi);
    while (seg < nseg) {
      auto [a, b] = seg_bounds(seg);
      if (target <= std::max(s[a].y, s[b].y)) break;
      ++seg;
    }
    if (seg == nseg) break;
    auto [a, b] = seg_bounds(seg);
    const auto& d = t.dense[a];
    double ra = s[a].r;
    double rb = s[b].r;
    double ga = s[a].y - target;
    for (int it = 0; it < 200; ++it) {
      const double rm = 0.5 * (ra + rb);
      if (rm == ra || rm == rb) break;
      const double gm = d(rm)[0] - target;
      if (gm == 0.0) {
        ra = rb = rm;
        break;
      }
      if ((gm < 0.0) == (ga < 0.0)) {
        ra = rm;
        ga = gm;
      } else {
        rb = rm;
      }
    }
    const double r = 0.5 * (ra + rb);
    const auto u = d(r);
    out.push_back({r, u[0], u[1]});
  }
  return out;
}

}  // namespace hmlab

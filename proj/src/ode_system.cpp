#include "hmlab/ode_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hmlab/error.hpp"
#include "hmlab/finite_difference.hpp"

namespace hmlab {

std::string_view equation_id(SignVariant v) {
  return v == SignVariant::as_printed ? "abel_as_printed" : "abel_corrected";
}

std::string_view equation_id(WForm f) {
  return f == WForm::printed ? "w_printed" : "w_alternative";
}

std::string_view to_string(SignVariant v) {
  return v == SignVariant::as_printed ? "as_printed" : "corrected";
}

SignVariant parse_sign_variant(std::string_view s) {
  if (s == "as_printed" || s == "abel_as_printed") return SignVariant::as_printed;
  if (s == "corrected" || s == "abel_corrected") return SignVariant::corrected;
  throw std::invalid_argument("unknown sign variant '" + std::string(s) + "'");
}

SignVariant other(SignVariant v) {
  return v == SignVariant::as_printed ? SignVariant::corrected : SignVariant::as_printed;
}

std::string_view to_string(AbelStop s) {
  switch (s) {
    case AbelStop::none: return "none";
    case AbelStop::range_end: return "range_end";
    case AbelStop::z_vanished: return "z_vanished";
    case AbelStop::z_blowup_negative: return "z_blowup_negative";
    case AbelStop::z_blowup_positive: return "z_blowup_positive";
    case AbelStop::step_underflow: return "step_underflow";
  }
  return "unknown";
}

double gg_odd(const MetricProfile& p, double y) {
  return y >= 0.0 ? eval_gg(p, y) : -eval_gg(p, -y);
}

DirectDerivative direct_rhs(int n, const MetricProfile& p, const DirectState& s) {
  if (!(s.r > 0.0)) {
    throw std::invalid_argument("direct_rhs: r must be > 0 (r = 0 is the singular point)");
  }
  const double k = n - 1.0;
  return {s.yp, -k * s.yp / s.r + k * gg_odd(p, s.y) / (s.r * s.r)};
}

double abel_rhs(int n, const MetricProfile& p, SignVariant v, const AbelState& a) {
  if (!(a.y > 0.0)) throw std::invalid_argument("abel_rhs: y must be > 0");
  const double z2 = a.z * a.z;
  const double cubic = (n - 1.0) * z2 * a.z * eval_gg(p, a.y);
  const double quad = (n - 2.0) * z2;
  return v == SignVariant::as_printed ? quad + cubic : quad - cubic;
}

double abel_residual_point(int n, const MetricProfile& p, SignVariant v, double y, double z,
                           double dz) {
  return dz - abel_rhs(n, p, v, {y, z});
}

double w_rhs(int n, const MetricProfile& p, const WState& ws, WForm form) {
  if (!(ws.w >= 0.0)) throw std::invalid_argument("w_rhs: w must be >= 0");
  if (!(ws.y >= 0.0)) throw std::invalid_argument("w_rhs: y must be >= 0");
  const double lin = 2.0 * (n - 2.0) * std::sqrt(ws.w);
  const double src = 2.0 * (n - 1.0) * eval_gg(p, ws.y);
  return form == WForm::printed ? lin - src : lin + src;
}

WState z_to_w(const AbelState& a) {
  if (a.z == 0.0) throw std::invalid_argument("z_to_w: z must be nonzero");
  return {a.y, 1.0 / (a.z * a.z)};
}

std::vector<ResidualPoint> residual_direct(int n, const MetricProfile& p,
                                           std::span<const DirectState> samples) {
  if (samples.size() < 3) throw std::invalid_argument("residual_direct: need at least 3 samples");
  std::vector<double> r(samples.size()), yp(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    r[i] = samples[i].r;
    yp[i] = samples[i].yp;
  }
  std::vector<ResidualPoint> out;
  out.reserve(samples.size() - 2);
  const double k = n - 1.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.r > 0.0)) throw std::invalid_argument("residual_direct: r must be > 0");
    const double ypp = fd::stencil_derivative(r, yp, i, 1, 1);
    out.push_back({s.r, ypp + k * s.yp / s.r - k * gg_odd(p, s.y) / (s.r * s.r)});
  }
  return out;
}

std::vector<ResidualPoint> residual_abel(int n, const MetricProfile& p, SignVariant v,
                                         std::span<const AbelState> samples, int order) {
  if (samples.size() < 3) throw std::invalid_argument("residual_abel: need at least 3 samples");
  if (order != 2 && order != 4) throw std::invalid_argument("residual_abel: order must be 2 or 4");
  const std::size_t half = (order == 4 && samples.size() >= 5) ? 2 : 1;
  std::vector<double> y(samples.size()), z(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].y > 0.0)) throw std::invalid_argument("residual_abel: y must be > 0");
    y[i] = samples[i].y;
    z[i] = samples[i].z;
  }
  std::vector<ResidualPoint> out;
  out.reserve(samples.size() - 2 * half);
  for (std::size_t i = half; i + half < samples.size(); ++i) {
    const double dz = fd::stencil_derivative(y, z, i, half, 1);
    out.push_back({y[i], abel_residual_point(n, p, v, y[i], z[i], dz)});
  }
  return out;
}

double sup_abs(std::span<const ResidualPoint> residuals) {
  double s = 0.0;
  for (const auto& q : residuals) s = std::max(s, std::abs(q.value));
  return s;
}

AbelTrajectory transform_direct_to_abel(std::span<const DirectState> samples) {
  AbelTrajectory out;
  out.samples.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.yp == 0.0) {
      throw NumericalFailure("transform_direct_to_abel",
                             "monotonicity violation: y' = 0 at r = " + std::to_string(s.r));
    }
    out.samples.push_back({s.y, 1.0 / (s.yp * s.r)});
  }
  if (out.samples.size() >= 2 && out.samples.front().y > out.samples.back().y) {
    std::reverse(out.samples.begin(), out.samples.end());
  }
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    if (!(out.samples[i].y > out.samples[i - 1].y)) {
      throw NumericalFailure("transform_direct_to_abel",
                             "monotonicity violation: y not strictly monotone near y = " +
                                 std::to_string(out.samples[i].y));
    }
  }
  return out;
}

}  // namespace hmlab

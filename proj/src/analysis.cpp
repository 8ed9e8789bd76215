#include "hmlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "hmlab/error.hpp"
#include "hmlab/shooting_lab.hpp"

namespace hmlab {

namespace {

// Stage name for failures that mean the source trajectory is unusable, as
// opposed to an inconclusive comparison.
constexpr const char* kSourceStage = "adjudicate_source";

constexpr double kFloorRatio = 1e-6;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double lemma_sign(SignVariant v) { return v == SignVariant::as_printed ? 1.0 : -1.0; }

// |z| at y_target by linear interpolation on increasing-y samples.
std::optional<double> z_at(const std::vector<AbelState>& s, double y_target) {
  auto it = std::lower_bound(s.begin(), s.end(), y_target,
                             [](const AbelState& a, double y) { return a.y < y; });
  if (it == s.end()) return std::nullopt;
  if (it == s.begin()) return it->z;
  const auto& a = *(it - 1);
  const auto& b = *it;
  const double t = (y_target - a.y) / (b.y - a.y);
  return a.z + t * (b.z - a.z);
}

}  // namespace

Threshold c3_threshold(int n) {
  if (n < 2) throw std::invalid_argument("c3_threshold: n must be >= 2");
  long long num = static_cast<long long>(n - 2) * (n - 2);
  long long den = n - 1;
  const long long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den, static_cast<double>(num) / static_cast<double>(den)};
}

void ConditionGrid::validate() const {
  if (!(r_min > 0.0) || !std::isfinite(r_min)) throw std::invalid_argument("conditions.r_min must be positive");
  if (!(r_max > r_min) || !std::isfinite(r_max)) throw std::invalid_argument("conditions.r_max must exceed r_min");
  if (count < 3) throw std::invalid_argument("conditions.count must be >= 3");
}

std::string_view to_string(CheckMode m) { return m == CheckMode::theorem ? "theorem" : "remark"; }

CheckMode parse_check_mode(std::string_view s) {
  if (s == "theorem") return CheckMode::theorem;
  if (s == "remark") return CheckMode::remark;
  throw std::invalid_argument("unknown check mode '" + std::string(s) + "'");
}

std::string_view to_string(SupLocation l) {
  switch (l) {
    case SupLocation::interior: return "interior";
    case SupLocation::lower_boundary: return "lower_boundary";
    case SupLocation::upper_boundary: return "upper_boundary";
  }
  return "unknown";
}

ConditionReport check_conditions(const ModelPair& pair, const ConditionGrid& grid, CheckMode mode) {
  if (pair.n < 2) throw std::invalid_argument("pair.n must be >= 2");
  grid.validate();
  const MetricProfile& p = pair.target;
  ConditionReport rep;
  rep.n = pair.n;
  rep.mode = mode;
  rep.grid = grid;

  rep.c1_value = eval_gg(p, 0.0);
  rep.c1_pass = rep.c1_value >= -kConditionTolerance;

  const std::vector<double> rs = log_grid(grid.r_min, grid.r_max, grid.count);
  std::vector<double> q(rs.size());
  rep.c2_min = std::numeric_limits<double>::infinity();
  rep.gg_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double d = eval_gg_prime(p, rs[i]);
    if (d < rep.c2_min) {
      rep.c2_min = d;
      rep.c2_argmin = rs[i];
    }
    const double gg = eval_gg(p, rs[i]);
    rep.gg_min = std::min(rep.gg_min, gg);
    q[i] = gg / rs[i];
  }
  rep.c2_pass = rep.c2_min >= -kConditionTolerance;
  rep.gg_positive_pass = rep.gg_min > 0.0;

  const auto imax = static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
  const std::size_t last = q.size() - 1;
  rep.c3_sup = q[imax];
  rep.c3_argmax = rs[imax];
  rep.c3_threshold = c3_threshold(pair.n);
  rep.c3_margin = rep.c3_sup - rep.c3_threshold.value;
  rep.c3_pass = rep.c3_sup > rep.c3_threshold.value + kStrictMargin;
  if (imax == 0) {
    rep.c3_location = SupLocation::lower_boundary;
    rep.c3_boundary_divergent = q[0] > q[1] && q[1] > q[2];
  } else if (imax == last) {
    rep.c3_location = SupLocation::upper_boundary;
    rep.c3_boundary_divergent = q[last] > q[last - 1] && q[last - 1] > q[last - 2];
  }

  rep.overall = mode == CheckMode::theorem ? rep.c1_pass && rep.c2_pass && rep.c3_pass
                                           : rep.c1_pass && rep.c3_pass && rep.gg_positive_pass;
  return rep;
}

LemmaReport lemma1_monitor(int n, const MetricProfile& p, const AbelTrajectory& a, SignVariant v) {
  if (a.samples.empty()) throw std::invalid_argument("lemma1_monitor: empty trajectory");
  LemmaReport rep;
  rep.variant = v;
  rep.min_value = std::numeric_limits<double>::infinity();
  const double s = lemma_sign(v);
  for (const AbelState& st : a.samples) {
    const double q = (n - 2.0) + s * (n - 1.0) * st.z * gg_odd(p, st.y);
    if (q < rep.min_value) {
      rep.min_value = q;
      rep.y_at_min = st.y;
    }
    if (q < -kConditionTolerance) {
      ++rep.violations;
      if (!rep.first_violation_y) rep.first_violation_y = st.y;
    }
  }
  rep.pass = rep.min_value >= -kConditionTolerance;
  return rep;
}

CorollaryReport corollary_monitor(const AbelTrajectory& a, double slack) {
  if (a.samples.empty()) throw std::invalid_argument("corollary_monitor: empty trajectory");
  const auto& s = a.samples;
  CorollaryReport rep;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double d = s[i].z - s[i - 1].z;
    if (d < -slack) {
      ++rep.decreases;
      if (!rep.first_decrease_y) rep.first_decrease_y = s[i].y;
    }
    rep.max_decrease = std::max(rep.max_decrease, -d);
  }
  rep.z_monotone_nondecreasing = rep.decreases == 0;
  rep.y_min = s.front().y;
  rep.z_at_min_y = s.front().z;
  rep.reaches_small_y = rep.y_min <= 1e-3 || a.stop == AbelStop::z_blowup_negative ||
                        a.stop == AbelStop::z_blowup_positive;
  if (rep.z_at_min_y < 0.0 && std::abs(rep.z_at_min_y) > 1e6) {
    const auto z_dec = z_at(s, 10.0 * rep.y_min);
    rep.heading_to_minus_infinity = z_dec && std::abs(rep.z_at_min_y) >= 10.0 * std::abs(*z_dec);
  }
  return rep;
}

WBoundReport wbound_monitor(int n, std::span<const WState> ws) {
  if (ws.empty()) throw std::invalid_argument("wbound_monitor: empty sample list");
  WBoundReport rep;
  rep.degenerate = n == 2;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (const WState& st : ws) {
    if (!(st.w >= 0.0)) throw std::invalid_argument("wbound_monitor: w must be >= 0");
    const double e = std::sqrt(st.w) - (n - 2.0) * st.y;
    if (e > rep.max_excess) {
      rep.max_excess = e;
      rep.y_at_max = st.y;
    }
  }
  rep.pass = rep.max_excess <= kConditionTolerance;
  return rep;
}

Adjudication adjudicate_trajectory(int n, const MetricProfile& p, const Trajectory& t, double ppd) {
  if (!(ppd > 0.0)) throw std::invalid_argument("adjudicate.points_per_decade must be positive");
  std::vector<DirectState> coarse;
  std::vector<DirectState> fine;
  try {
    coarse = resample_by_y(t, ppd);
    fine = resample_by_y(t, 2.0 * ppd);
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(kSourceStage, e.what());
  }
  if (coarse.size() < 5) throw NumericalFailure(kSourceStage, "fewer than 5 resampled points");
  const AbelTrajectory ac = transform_direct_to_abel(coarse);
  const AbelTrajectory af = transform_direct_to_abel(fine);

  Adjudication adj;
  adj.points_per_decade = ppd;
  adj.coarse_samples = ac.samples.size();
  adj.fine_samples = af.samples.size();
  // size of the individual terms of the Abel equation on the fine grid; a
  // residual far below it is at the rounding and interpolation floor
  for (const AbelState& st : af.samples) {
    const double z2 = st.z * st.z;
    adj.term_scale = std::max(adj.term_scale, std::abs((n - 2.0) * z2) + std::abs((n - 1.0) * z2 * st.z * gg_odd(p, st.y)));
  }
  for (SignVariant v : {SignVariant::as_printed, SignVariant::corrected}) {
    VariantEvidence& ev = adj.evidence[static_cast<std::size_t>(v)];
    ev.variant = v;
    ev.residual_coarse = residual_abel(n, p, v, ac.samples);
    ev.residual_fine = residual_abel(n, p, v, af.samples);
    ev.sup_coarse = sup_abs(ev.residual_coarse);
    ev.sup_fine = sup_abs(ev.residual_fine);
    ev.vanishes = ev.sup_fine <= 0.5 * ev.sup_coarse || ev.sup_fine <= kFloorRatio * adj.term_scale;
  }
  const VariantEvidence& pr = adj.evidence[static_cast<std::size_t>(SignVariant::as_printed)];
  const VariantEvidence& co = adj.evidence[static_cast<std::size_t>(SignVariant::corrected)];
  if (pr.vanishes != co.vanishes) {
    const VariantEvidence& sel = pr.vanishes ? pr : co;
    const VariantEvidence& rej = pr.vanishes ? co : pr;
    if (rej.sup_fine >= 10.0 * sel.sup_fine) {
      adj.selected = sel.variant;
      return adj;
    }
  }
  throw NumericalFailure("adjudicate_sign", "inconclusive: as_printed sup " + fmt(pr.sup_coarse) + " -> " +
                                                fmt(pr.sup_fine) + ", corrected sup " + fmt(co.sup_coarse) +
                                                " -> " + fmt(co.sup_fine));
}

Adjudication adjudicate_sign(const ModelPair& pair, const IntegrationConfig& cfg, double ppd) {
  IntegrationConfig c = cfg;
  c.tail_decades = 0.0;
  try {
    const Trajectory t = shoot(pair, Regime::origin_regular, 1.0, c);
    Adjudication adj = adjudicate_trajectory(pair.n, pair.target, t, ppd);
    adj.source = "regular shot c=1 on [" + fmt(c.r_start) + ", " + fmt(c.r_end) + "]";
    return adj;
  } catch (const NumericalFailure& e) {
    if (e.stage() == "adjudicate_sign") throw;
  }
  c.r_start = 1.0;
  c.r_end = 2.0;
  const Trajectory t = integrate_direct(pair.n, pair.target, c, {1.0, 1.0}, Direction::forward);
  Adjudication adj = adjudicate_trajectory(pair.n, pair.target, t, ppd);
  adj.source = "IVP y(1)=1, y'(1)=1 on [1, 2]";
  return adj;
}

}  // namespace hmlab

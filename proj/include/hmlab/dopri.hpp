#pragma once

// Dormand-Prince 5(4) stepper with the 4th-order continuous extension,
// adaptive step control and terminal event localization by bisection on
// the dense output. Fixed-size state, no allocation per step beyond the
// recorded output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace hmlab::dopri {

template <std::size_t N>
using Vec = std::array<double, N>;

namespace tableau {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace tableau

/// Continuous extension over one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<Vec<N>, 5> c{};

  Vec<N> operator()(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    Vec<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
    }
    return out;
  }
};

struct Control {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_min = 0.0;  // magnitude floor for error-driven step reduction
  std::size_t max_steps = 1'000'000;
};

/// How an event condition is tested along the solution. `crossing`: g
/// changes sign or |g| <= tol. The others are one-sided thresholds.
enum class EventKind { crossing, at_least_zero, at_most_zero, below_zero };

template <std::size_t N>
struct Event {
  std::function<double(double, const Vec<N>&)> g;
  EventKind kind = EventKind::crossing;
  double tol = 0.0;
};

enum class Stop { reached_end, event, step_underflow, step_budget };

template <std::size_t N>
struct Solution {
  std::vector<double> t;
  std::vector<Vec<N>> y;
  std::vector<DenseSegment<N>> dense;  // dense[i] covers [t[i], t[i+1]]
  Stop stop = Stop::reached_end;
  std::optional<std::size_t> event_index;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  bool non_finite_seen = false;
};

namespace detail {

inline bool fired(EventKind kind, double g_start, double g, double tol) {
  switch (kind) {
    case EventKind::crossing:
      return std::abs(g) <= tol || (g_start > 0.0 && g < 0.0) || (g_start < 0.0 && g > 0.0);
    case EventKind::at_least_zero: return g >= 0.0;
    case EventKind::at_most_zero: return g <= 0.0;
    case EventKind::below_zero: return g < 0.0;
  }
  return false;
}

template <std::size_t N>
bool all_finite(const Vec<N>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

template <std::size_t N>
double error_norm(const Vec<N>& err, const Vec<N>& y0, const Vec<N>& y1, const Control& ctl) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N>
double scaled_norm(const Vec<N>& v, const Vec<N>& y, const Control& ctl) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double q = v[i] / (ctl.abs_tol + ctl.rel_tol * std::abs(y[i]));
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

// Bisection on the dense output for the first point in (ta, tb] where the
// event condition holds. Returns the located time (the `fired` side).
template <std::size_t N>
double localize(const Event<N>& ev, const DenseSegment<N>& seg, double ta, double tb, double g_start) {
  for (int it = 0; it < 200; ++it) {
    const double tm = 0.5 * (ta + tb);
    if (tm == ta || tm == tb) break;
    const double gm = ev.g(tm, seg(tm));
    if (ev.kind == EventKind::crossing && std::abs(gm) <= ev.tol) return tm;
    if (fired(ev.kind, g_start, gm, ev.tol)) {
      tb = tm;
    } else {
      ta = tm;
    }
  }
  return tb;
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 toward t1 (either direction), stopping at
/// t1, at the first terminal event, on step-size underflow (proposed h
/// below ctl.h_min, or too small to advance t) or when ctl.max_steps accepted steps have
/// been taken. Non-finite trial stages count as rejected steps.
template <std::size_t N, class Rhs>
Solution<N> integrate(Rhs&& f, double t0, double t1, const Vec<N>& y0, const Control& ctl,
                      std::span<const Event<N>> events) {
  using namespace tableau;
  Solution<N> sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);

  std::vector<double> g_prev(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) {
    g_prev[e] = events[e].g(t0, y0);
    const bool immediate = events[e].kind == EventKind::crossing
                               ? std::abs(g_prev[e]) <= events[e].tol
                               : detail::fired(events[e].kind, g_prev[e], g_prev[e], events[e].tol);
    if (immediate) {
      sol.stop = Stop::event;
      sol.event_index = e;
      return sol;
    }
  }
  if (t1 == t0) return sol;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span_len = std::abs(t1 - t0);
  Vec<N> y = y0;
  double t = t0;
  Vec<N> k1 = f(t, y);

  // initial step (Hairer, Norsett & Wanner, II.4)
  double h;
  {
    const double d0 = detail::scaled_norm(y, y, ctl);
    const double d1 = detail::scaled_norm(k1, y, ctl);
    double h0 = (d0 < 1e-5 || d1 < 1e-5 || !std::isfinite(d1)) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span_len);
    Vec<N> y1{};
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * k1[i];
    const Vec<N> f1 = f(t + dir * h0, y1);
    Vec<N> df{};
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - k1[i];
    const double d2 = detail::scaled_norm(df, y, ctl) / h0;
    const double dm = std::max(d1, d2);
    double h1 = (!std::isfinite(dm)) ? h0 * 1e-3
                : (dm <= 1e-15)      ? std::max(1e-6, h0 * 1e-3)
                                     : std::pow(0.01 / dm, 1.0 / 5.0);
    h = std::min(100.0 * h0, h1);
    if (!(h > 0.0) || !std::isfinite(h)) h = h0;
    h = std::min(h, span_len);
  }

  bool last_rejected = false;
  while (true) {
    if (sol.steps >= ctl.max_steps) {
      sol.stop = Stop::step_budget;
      return sol;
    }
    const double remaining = std::abs(t1 - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double hs = dir * h;

    Vec<N> yt{};
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * a21 * k1[i];
    const Vec<N> k2 = f(t + c2 * hs, yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    const Vec<N> k3 = f(t + c3 * hs, yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Vec<N> k4 = f(t + c4 * hs, yt);
    for (std::size_t i = 0; i < N; ++i) {
      yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    const Vec<N> k5 = f(t + c5 * hs, yt);
    for (std::size_t i = 0; i < N; ++i) {
      yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    const Vec<N> k6 = f(t + hs, yt);
    Vec<N> y_new{};
    for (std::size_t i = 0; i < N; ++i) {
      y_new[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    const double t_new = last ? t1 : t + hs;
    if (t_new == t) {
      sol.stop = Stop::step_underflow;
      return sol;
    }
    const Vec<N> k7 = f(t_new, y_new);
    Vec<N> err{};
    for (std::size_t i = 0; i < N; ++i) {
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    double en = detail::error_norm(err, y, y_new, ctl);
    const bool finite = detail::all_finite(y_new) && detail::all_finite(k7) && std::isfinite(en);
    if (!finite) {
      sol.non_finite_seen = true;
      en = std::numeric_limits<double>::infinity();
    }

    if (en > 1.0) {
      ++sol.rejected;
      last_rejected = true;
      const double fac = finite ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.25;
      h *= fac;
      if (h < ctl.h_min) {
        sol.stop = Stop::step_underflow;
        return sol;
      }
      continue;
    }

    DenseSegment<N> seg;
    seg.t0 = t;
    seg.h = t_new - t;
    for (std::size_t i = 0; i < N; ++i) {
      const double dy = y_new[i] - y[i];
      const double bspl = hs * k1[i] - dy;
      seg.c[0][i] = y[i];
      seg.c[1][i] = dy;
      seg.c[2][i] = bspl;
      seg.c[3][i] = dy - hs * k7[i] - bspl;
      seg.c[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    ++sol.steps;

    // earliest firing event within this step
    std::optional<std::size_t> hit;
    double t_hit = t_new;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double g_new = events[e].g(t_new, y_new);
      if (detail::fired(events[e].kind, g_prev[e], g_new, events[e].tol)) {
        const double te = (events[e].kind == EventKind::crossing && std::abs(g_new) <= events[e].tol &&
                           !((g_prev[e] > 0.0 && g_new < 0.0) || (g_prev[e] < 0.0 && g_new > 0.0)))
                              ? t_new
                              : detail::localize(events[e], seg, t, t_new, g_prev[e]);
        if (!hit || dir * (te - t_hit) < 0.0) {
          hit = e;
          t_hit = te;
        }
      }
      g_prev[e] = g_new;
    }
    sol.dense.push_back(seg);
    if (hit) {
      sol.t.push_back(t_hit);
      sol.y.push_back(t_hit == t_new ? y_new : seg(t_hit));
      sol.stop = Stop::event;
      sol.event_index = hit;
      return sol;
    }
    sol.t.push_back(t_new);
    sol.y.push_back(y_new);
    t = t_new;
    y = y_new;
    k1 = k7;
    if (last) {
      sol.stop = Stop::reached_end;
      return sol;
    }
    double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    h *= fac;
    if (h < ctl.h_min) {
      sol.stop = Stop::step_underflow;
      return sol;
    }
  }
}

}  // namespace hmlab::dopri

#include "hmlab/metric_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmlab {

namespace {

void require_nonnegative(double r, const char* what) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument(std::string(what) + ": radius must be >= 0, got " +
                                std::to_string(r));
  }
}

// Central difference of f at r; second-order one-sided when r < h so that
// f is never sampled at negative radius.
double derivative(const ScalarFn& f, double r) {
  const double h = fd_step(r);
  if (r >= h) return (f(r + h) - f(r - h)) / (2.0 * h);
  return (-3.0 * f(r) + 4.0 * f(r + h) - f(r + 2.0 * h)) / (2.0 * h);
}

double horner(const std::vector<double>& c, double r) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + *it;
  return acc;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

}  // namespace

ModelPair make_model_pair(int n, MetricProfile target) {
  if (n < 2) throw std::invalid_argument("dimension n must be >= 2, got " + std::to_string(n));
  if (!target.g) throw std::invalid_argument("metric profile '" + target.name + "' has no g");
  return ModelPair{n, std::move(target)};
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::euclidean: return "euclidean";
    case Family::hyperbolic: return "hyperbolic";
    case Family::scaled_hyperbolic: return "scaled_hyperbolic";
    case Family::power: return "power";
    case Family::polynomial: return "polynomial";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::euclidean, Family::hyperbolic, Family::scaled_hyperbolic,
                   Family::power, Family::polynomial}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown metric family '" + std::string(name) + "'");
}

MetricProfile euclidean() {
  return {"euclidean",
          [](double r) { return r; },
          [](double) { return 1.0; },
          [](double r) { return r; },
          [](double) { return 1.0; }};
}

MetricProfile hyperbolic() {
  return {"hyperbolic",
          [](double r) { return std::sinh(r); },
          [](double r) { return std::cosh(r); },
          [](double r) { return std::sinh(r) * std::cosh(r); },
          [](double r) { return std::cosh(2.0 * r); }};
}

MetricProfile scaled_hyperbolic(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("scaled_hyperbolic: parameter a must be positive");
  }
  return {"scaled_hyperbolic(" + std::to_string(a) + ")",
          [a](double r) { return std::sinh(a * r) / a; },
          [a](double r) { return std::cosh(a * r); },
          [a](double r) { return std::sinh(a * r) * std::cosh(a * r) / a; },
          [a](double r) { return std::cosh(2.0 * a * r); }};
}

MetricProfile power_profile(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("power: exponent k must be positive");
  }
  return {"power(" + std::to_string(k) + ")",
          [k](double r) { return std::pow(r, k); },
          [k](double r) { return k * std::pow(r, k - 1.0); },
          [k](double r) { return k * std::pow(r, 2.0 * k - 1.0); },
          [k](double r) { return k * (2.0 * k - 1.0) * std::pow(r, 2.0 * k - 2.0); }};
}

MetricProfile polynomial_profile(std::vector<double> coefficients) {
  if (coefficients.empty()) {
    throw std::invalid_argument("polynomial: at least one coefficient required");
  }
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial: non-finite coefficient");
  }
  for (double r : log_grid(1e-6, kProbeRadius, 2001)) {
    if (horner(coefficients, r) < 0.0) {
      throw std::invalid_argument("polynomial: g is negative at r = " + std::to_string(r));
    }
  }
  if (horner(coefficients, 0.0) < 0.0) {
    throw std::invalid_argument("polynomial: g is negative at r = 0");
  }
  auto d1 = differentiate(coefficients);
  auto d2 = differentiate(d1);
  return {"polynomial",
          [c = coefficients](double r) { return horner(c, r); },
          [d1](double r) { return horner(d1, r); },
          [c = coefficients, d1](double r) { return horner(c, r) * horner(d1, r); },
          [c = coefficients, d1, d2](double r) {
            const double dg = horner(d1, r);
            return dg * dg + horner(c, r) * horner(d2, r);
          }};
}

MetricProfile make_builtin(const FamilySpec& spec) {
  auto param = [&](const char* name) {
    if (spec.params.size() != 1) {
      throw std::invalid_argument(std::string(to_string(spec.family)) + ": expects exactly one parameter (" +
                                  name + ")");
    }
    return spec.params.front();
  };
  switch (spec.family) {
    case Family::euclidean: return euclidean();
    case Family::hyperbolic: return hyperbolic();
    case Family::scaled_hyperbolic: return scaled_hyperbolic(param("a"));
    case Family::power: return power_profile(param("k"));
    case Family::polynomial: return polynomial_profile(spec.coefficients);
  }
  throw std::invalid_argument("unknown metric family");
}

double fd_step(double r) { return std::max(1e-5, 1e-8 * r); }

double eval_g(const MetricProfile& p, double r) {
  require_nonnegative(r, "eval_g");
  return p.g(r);
}

double eval_g_prime(const MetricProfile& p, double r) {
  require_nonnegative(r, "eval_g_prime");
  if (p.g_prime) return p.g_prime(r);
  return derivative(p.g, r);
}

double eval_gg(const MetricProfile& p, double r) {
  require_nonnegative(r, "eval_gg");
  if (p.gg) return p.gg(r);
  if (p.g_prime) return p.g(r) * p.g_prime(r);
  return p.g(r) * derivative(p.g, r);
}

double eval_gg_prime(const MetricProfile& p, double r) {
  require_nonnegative(r, "eval_gg_prime");
  if (p.gg_prime) return p.gg_prime(r);
  return derivative([&p](double s) { return eval_gg(p, s); }, r);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("log_grid: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp(a + t * (b - a));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> probe_grid(std::size_t count) { return log_grid(1e-4, 50.0, count); }

}  // namespace hmlab

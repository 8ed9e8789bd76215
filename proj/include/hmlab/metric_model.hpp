#pragma once

// Rotationally symmetric target metrics G = g(r)^2 dtheta^2 + dr^2.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hmlab {

using ScalarFn = std::function<double(double)>;

/// Warping profile of a model space. Only `g` is mandatory; the other
/// members hold closed forms when the family provides them and are empty
/// otherwise, in which case evaluation falls back to finite differences.
struct MetricProfile {
  std::string name;
  ScalarFn g;
  ScalarFn g_prime;
  ScalarFn gg;        // g(r) * g'(r)
  ScalarFn gg_prime;  // (g g')'(r)
};

/// Dimension plus target; the source is always Euclidean (g(r) = r).
struct ModelPair {
  int n = 2;
  MetricProfile target;
};

/// Validates n >= 2 and a usable profile.
ModelPair make_model_pair(int n, MetricProfile target);

enum class Family { euclidean, hyperbolic, scaled_hyperbolic, power, polynomial };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct FamilySpec {
  Family family = Family::euclidean;
  std::vector<double> params;        // scaled_hyperbolic: {a}, power: {k}
  std::vector<double> coefficients;  // polynomial: c0 + c1 r + c2 r^2 + ...
};

/// Radius up to which custom polynomials must be nonnegative.
inline constexpr double kProbeRadius = 50.0;

MetricProfile make_builtin(const FamilySpec& spec);

MetricProfile euclidean();
MetricProfile hyperbolic();
MetricProfile scaled_hyperbolic(double a);
MetricProfile power_profile(double k);
MetricProfile polynomial_profile(std::vector<double> coefficients);

/// Finite-difference step used by the fallbacks: max(1e-5, 1e-8 r).
double fd_step(double r);

double eval_g(const MetricProfile& p, double r);
double eval_g_prime(const MetricProfile& p, double r);
double eval_gg(const MetricProfile& p, double r);
double eval_gg_prime(const MetricProfile& p, double r);

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Standard probe grid for profile invariants: log-spaced on [1e-4, 50].
std::vector<double> probe_grid(std::size_t count = 400);

}  // namespace hmlab

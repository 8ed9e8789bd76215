#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hmlab/metric_model.hpp"

using namespace hmlab;

namespace {

// Reference values computed with mpmath at 30 digits.
constexpr double kSinh1Cosh1 = 1.8134302039235094;
constexpr double kCosh2 = 3.7621956910836314;

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300); }

std::vector<MetricProfile> builtins() {
  return {euclidean(), hyperbolic(), scaled_hyperbolic(0.5), scaled_hyperbolic(2.0), power_profile(1.0),
          power_profile(2.0), power_profile(0.75), polynomial_profile({0.0, 1.0, 0.0, 0.5})};
}

// Central difference with a step that shrinks with r below 1. The fixed
// step of the fallback path is too coarse against r^k near r = 1e-4.
double scaled_fd(const ScalarFn& f, double r) {
  const double h = 1e-5 * std::min(r, 1.0);
  return (f(r + h) - f(r - h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("metric_model") {
  TEST_CASE("hyperbolic and euclidean closed forms at simple points") {
    const MetricProfile h = hyperbolic();
    CHECK(eval_g(h, 0.0) == 0.0);
    CHECK(eval_g_prime(h, 0.0) == 1.0);
    CHECK(eval_gg(h, 0.0) == 0.0);
    const MetricProfile e = euclidean();
    CHECK(eval_g(e, 2.0) == 2.0);
    CHECK(eval_gg(e, 2.0) == 2.0);
    CHECK(eval_gg(e, 3.0) == 3.0);
    CHECK(eval_gg(power_profile(2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  }

  TEST_CASE("hyperbolic values against high-precision oracle") {
    CHECK(rel_close(eval_gg(hyperbolic(), 1.0), kSinh1Cosh1, 1e-15));
    CHECK(rel_close(eval_gg_prime(hyperbolic(), 1.0), kCosh2, 1e-15));
    CHECK(eval_gg_prime(hyperbolic(), 0.0) == 1.0);
    for (double r : {0.0, 1.0, 3.0, 17.0}) CHECK(eval_gg_prime(euclidean(), r) == 1.0);
  }

  TEST_CASE("closed-form derivatives agree with finite differences on the probe grid") {
    for (const MetricProfile& p : builtins()) {
      CAPTURE(p.name);
      for (double r : probe_grid()) {
        CAPTURE(r);
        CHECK(eval_g(p, r) >= 0.0);
        CHECK(rel_close(eval_g_prime(p, r), scaled_fd(p.g, r), 1e-6));
        CHECK(rel_close(eval_gg_prime(p, r), scaled_fd(p.gg, r), 1e-6));
        CHECK(rel_close(eval_gg(p, r), eval_g(p, r) * eval_g_prime(p, r), 1e-12));
        CHECK(eval_gg(p, r) >= 0.0);
      }
    }
  }

  TEST_CASE("hyperbolic gg equals sinh(2r)/2") {
    for (double r : probe_grid()) CHECK(rel_close(eval_gg(hyperbolic(), r), 0.5 * std::sinh(2.0 * r), 1e-12));
  }

  TEST_CASE("finite-difference fallbacks match the closed forms") {
    MetricProfile bare{"bare sinh", [](double r) { return std::sinh(r); }, {}, {}, {}};
    for (double r : {0.0, 0.3, 1.0, 4.0}) {
      CAPTURE(r);
      CHECK(eval_g_prime(bare, r) == doctest::Approx(std::cosh(r)).epsilon(1e-8));
      CHECK(eval_gg(bare, r) == doctest::Approx(std::sinh(r) * std::cosh(r)).epsilon(1e-8));
      CHECK(eval_gg_prime(bare, r) == doctest::Approx(std::cosh(2.0 * r)).epsilon(1e-6));
    }
    CHECK(fd_step(1.0) == 1e-5);
    CHECK(fd_step(1e4) == 1e-4);
  }

  TEST_CASE("polynomial profile derivatives") {
    const MetricProfile p = polynomial_profile({1.0, 2.0, 3.0});  // g = 1 + 2r + 3r^2
    CHECK(eval_g(p, 2.0) == 17.0);
    CHECK(eval_g_prime(p, 2.0) == 14.0);
    CHECK(eval_gg(p, 2.0) == 238.0);
    CHECK(eval_gg_prime(p, 2.0) == 14.0 * 14.0 + 17.0 * 6.0);
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(scaled_hyperbolic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(scaled_hyperbolic(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(power_profile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(polynomial_profile({1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(polynomial_profile({}), std::invalid_argument);
    CHECK_THROWS_AS(make_builtin({Family::power, {}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(eval_gg(hyperbolic(), -1e-3), std::invalid_argument);
    CHECK_THROWS_AS(eval_gg_prime(hyperbolic(), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_model_pair(1, euclidean()), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("spherical"), std::invalid_argument);
  }

  TEST_CASE("make_builtin dispatches by family") {
    CHECK(eval_g(make_builtin({Family::scaled_hyperbolic, {2.0}, {}}), 1.0) ==
          doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-15));
    CHECK(eval_g(make_builtin({Family::power, {3.0}, {}}), 2.0) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(eval_g(make_builtin({Family::polynomial, {}, {0.0, 1.0}}), 5.0) == 5.0);
    CHECK(parse_family(to_string(Family::scaled_hyperbolic)) == Family::scaled_hyperbolic);
  }

  TEST_CASE("log grid endpoints are exact and refinement keeps the coarse points") {
    const auto coarse = log_grid(1e-3, 1e3, 61);
    const auto fine = log_grid(1e-3, 1e3, 121);
    CHECK(coarse.front() == 1e-3);
    CHECK(coarse.back() == 1e3);
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(coarse[i] == fine[2 * i]);
  }
}

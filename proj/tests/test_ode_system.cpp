#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hmlab/error.hpp"
#include "hmlab/ode_system.hpp"

using namespace hmlab;

namespace {

// (1.81343... / 4) - 0.25 with gg(1) = sinh(1)cosh(1) from mpmath.
constexpr double kHyperbolicN2Second = 0.20335755098087735;

std::vector<AbelState> sampled(double lo, double hi, std::size_t count, double (*z)(double)) {
  std::vector<AbelState> out;
  for (double y : log_grid(lo, hi, count)) out.push_back({y, z(y)});
  return out;
}

}  // namespace

TEST_SUITE("ode_system") {
  TEST_CASE("direct_rhs examples") {
    const auto id = direct_rhs(2, euclidean(), {1.0, 1.0, 1.0});
    CHECK(id.dy == 1.0);
    CHECK(id.dyp == 0.0);
    const double c = 0.7;
    CHECK(direct_rhs(3, hyperbolic(), {1.0, 0.0, c}).dyp == doctest::Approx(-2.0 * c));
    const auto h = direct_rhs(2, hyperbolic(), {2.0, 1.0, 0.5});
    CHECK(h.dy == 0.5);
    CHECK(h.dyp == doctest::Approx(kHyperbolicN2Second).epsilon(1e-14));
    CHECK_THROWS_AS(direct_rhs(2, euclidean(), {0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(direct_rhs(2, euclidean(), {-1.0, 1.0, 1.0}), std::invalid_argument);
  }

  TEST_CASE("abel_rhs examples") {
    CHECK(abel_rhs(2, euclidean(), SignVariant::corrected, {1.0, 1.0}) == -1.0);
    CHECK(abel_rhs(2, euclidean(), SignVariant::as_printed, {1.0, 1.0}) == 1.0);
    for (const MetricProfile& p : {euclidean(), hyperbolic(), power_profile(2.0)}) {
      for (int n : {2, 3, 4, 5}) {
        CHECK(abel_rhs(n, p, SignVariant::corrected, {0.8, 0.0}) == 0.0);
        CHECK(abel_rhs(n, p, SignVariant::as_printed, {0.8, 0.0}) == 0.0);
      }
    }
    CHECK_THROWS_AS(abel_rhs(2, euclidean(), SignVariant::corrected, {0.0, 1.0}), std::invalid_argument);
  }

  TEST_CASE("variants differ by 2 z^3 gg for n = 2 and coincide when gg vanishes") {
    const MetricProfile constant = polynomial_profile({1.0});
    for (double y : {0.1, 1.0, 2.5}) {
      for (double z : {-3.0, -0.2, 0.5, 4.0}) {
        const double a = abel_rhs(2, hyperbolic(), SignVariant::as_printed, {y, z});
        const double b = abel_rhs(2, hyperbolic(), SignVariant::corrected, {y, z});
        CHECK(a - b == doctest::Approx(2.0 * z * z * z * eval_gg(hyperbolic(), y)));
        CHECK(abel_rhs(3, constant, SignVariant::as_printed, {y, z}) ==
              abel_rhs(3, constant, SignVariant::corrected, {y, z}));
      }
    }
  }

  TEST_CASE("residual_direct") {
    std::vector<DirectState> id;
    for (double r : log_grid(0.1, 10.0, 50)) id.push_back({r, r, 1.0});
    for (const auto& q : residual_direct(4, euclidean(), id)) CHECK(std::abs(q.value) < 1e-12);

    std::vector<DirectState> flat;
    for (double r : {1.0, 1.5, 2.0, 3.0}) flat.push_back({r, 0.7, 0.0});
    const auto res = residual_direct(3, hyperbolic(), flat);
    REQUIRE(res.size() == 2);
    // only the gg term of the left-hand side survives
    for (const auto& q : res) CHECK(q.value == doctest::Approx(-2.0 * eval_gg(hyperbolic(), 0.7) / (q.x * q.x)));
    CHECK_THROWS_AS(residual_direct(3, hyperbolic(), std::span(flat).first(2)), std::invalid_argument);
  }

  TEST_CASE("residual_abel on the identity map's z = 1/y") {
    const auto s = sampled(0.5, 10.0, 2001, [](double y) { return 1.0 / y; });
    for (const auto& q : residual_abel(2, euclidean(), SignVariant::corrected, s)) {
      CHECK(std::abs(q.value) < 1e-9);
    }
    for (const auto& q : residual_abel(2, euclidean(), SignVariant::as_printed, s)) {
      CHECK(q.value == doctest::Approx(-2.0 / (q.x * q.x)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(residual_abel(2, euclidean(), SignVariant::corrected, std::span(s).first(2)),
                    std::invalid_argument);
  }

  TEST_CASE("residual_abel converges at fourth order under refinement") {
    auto z = [](double y) { return std::exp(-y) / y; };
    // with n = 2 and gg = 0 the equation is z' = 0, so the residual is the
    // stencil's estimate of z' itself
    const MetricProfile constant = polynomial_profile({1.0});
    auto sup_for = [&](std::size_t count) {
      std::vector<AbelState> s;
      for (double y : log_grid(0.5, 2.0, count)) s.push_back({y, z(y)});
      double sup = 0.0;
      for (const auto& q : residual_abel(2, constant, SignVariant::corrected, s)) {
        const double exact = -std::exp(-q.x) * (1.0 / q.x + 1.0 / (q.x * q.x));
        sup = std::max(sup, std::abs(q.value - exact));
      }
      return sup;
    };
    const double coarse = sup_for(41);
    const double fine = sup_for(81);
    CHECK(coarse / fine > 12.0);
  }

  TEST_CASE("transform_direct_to_abel") {
    std::vector<DirectState> id;
    for (double r : log_grid(0.1, 10.0, 30)) id.push_back({r, r, 1.0});
    const AbelTrajectory a = transform_direct_to_abel(id);
    CHECK_FALSE(a.variant.has_value());
    for (const auto& s : a.samples) CHECK(s.z == doctest::Approx(1.0 / s.y).epsilon(1e-15));

    std::vector<DirectState> dec;
    for (double r : {1.0, 2.0, 3.0}) dec.push_back({r, 1.0 / r, -1.0 / (r * r)});
    const AbelTrajectory b = transform_direct_to_abel(dec);
    CHECK(b.samples.front().y < b.samples.back().y);
    for (const auto& s : b.samples) CHECK(s.z < 0.0);

    dec[1].yp = 0.0;
    CHECK_THROWS_AS(transform_direct_to_abel(dec), NumericalFailure);
  }

  TEST_CASE("w forms") {
    const MetricProfile constant = polynomial_profile({1.0});
    CHECK(w_rhs(3, constant, {1.0, 0.0}) == 0.0);
    for (double y : {0.2, 1.0, 3.0}) {
      CHECK(w_rhs(2, hyperbolic(), {y, 5.0}) == doctest::Approx(-2.0 * eval_gg(hyperbolic(), y)));
      CHECK(w_rhs(2, hyperbolic(), {y, 5.0}) <= 0.0);
      CHECK(w_rhs(2, hyperbolic(), {y, 5.0}, WForm::alternative) ==
            doctest::Approx(2.0 * eval_gg(hyperbolic(), y)));
    }
    CHECK(z_to_w({1.0, -0.5}).w == 4.0);
    CHECK_THROWS_AS(z_to_w({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(w_rhs(3, hyperbolic(), {1.0, -1e-3}), std::invalid_argument);
  }

  TEST_CASE("stable equation identifiers") {
    CHECK(kDirectEquationId == "direct");
    CHECK(equation_id(SignVariant::as_printed) == "abel_as_printed");
    CHECK(equation_id(SignVariant::corrected) == "abel_corrected");
    CHECK(equation_id(WForm::printed) == "w_printed");
    CHECK(equation_id(WForm::alternative) == "w_alternative");
    CHECK(parse_sign_variant("corrected") == SignVariant::corrected);
    CHECK(other(SignVariant::corrected) == SignVariant::as_printed);
  }
}

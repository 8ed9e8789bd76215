#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hmlab::fd {

/// Fornberg weights for the m-th derivative at x0 from arbitrary distinct
/// nodes. Returns one weight per node.
inline std::vector<double> weights(double x0, std::span<const double> x, int m) {
  const std::size_t n = x.size();
  if (n == 0 || m < 0 || static_cast<std::size_t>(m) >= n) {
    throw std::invalid_argument("fd::weights: need more nodes than the derivative order");
  }
  const auto mm = static_cast<std::size_t>(m);
  // c[j][k]: weight of node j for derivative k
  std::vector<std::vector<double>> c(n, std::vector<double>(mm + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, mm);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = c[j][mm];
  return out;
}

/// m-th derivative at node `center` of the stencil [center - half, center + half].
inline double stencil_derivative(std::span<const double> x, std::span<const double> f,
                                 std::size_t center, std::size_t half, int m) {
  const auto first = center - half;
  const auto width = 2 * half + 1;
  const auto w = weights(x[center], x.subspan(first, width), m);
  double acc = 0.0;
  for (std::size_t j = 0; j < width; ++j) acc += w[j] * f[first + j];
  return acc;
}

}  // namespace hmlab::fd

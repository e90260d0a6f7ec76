#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "fsynth/error.hpp"

namespace fsynth {

/// Gauss-Legendre rule mapped to [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  [[nodiscard]] auto integrate(F&& f) const {
    using R = decltype(f(nodes[0]));
    R acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

[[nodiscard]] inline QuadratureRule gauss_legendre(std::size_t n, double a,
                                                   double b) {
  detail::require(n >= 1, "gauss_legendre: need at least one node");
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  std::vector<std::pair<double, double>> ref;
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime<double>(static_cast<int>(n), x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    ref.emplace_back(-x, w);
    if (x != 0.0) ref.emplace_back(x, w);
  }
  std::sort(ref.begin(), ref.end());
  QuadratureRule q;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (const auto& [x, w] : ref) {
    q.nodes.push_back(mid + half * x);
    q.weights.push_back(half * w);
  }
  return q;
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` nodes.
[[nodiscard]] inline QuadratureRule composite_gauss_legendre(
    std::size_t order, std::size_t panels, double a, double b) {
  const QuadratureRule ref = gauss_legendre(order, -1.0, 1.0);
  QuadratureRule q;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
      q.nodes.push_back(lo + 0.5 * width * (ref.nodes[i] + 1.0));
      q.weights.push_back(0.5 * width * ref.weights[i]);
    }
  }
  return q;
}

/// Adaptive Gauss-Kronrod (15-point) integral of a real function; throws
/// QuadratureError unless the error estimate is within abs_tol. The relative
/// tolerance handed to the refinement is tightened until abs_tol is met.
template <class F>
[[nodiscard]] double adaptive_integral(F&& f, double a, double b,
                                       double abs_tol) {
  if (a == b) return 0.0;
  double err = 0.0;
  double value = 0.0;
  for (double rel : {1e-8, 1e-11, 1e-14}) {
    value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 20, rel, &err);
    if (err <= abs_tol) break;
  }
  if (!(err <= abs_tol) || !std::isfinite(value)) {
    throw QuadratureError("adaptive quadrature did not converge on [" +
                          std::to_string(a) + ", " + std::to_string(b) +
                          "]: error estimate " + std::to_string(err));
  }
  return value;
}

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

[[nodiscard]] inline LineFit fit_line(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  detail::require(x.size() == y.size() && x.size() >= 2,
                  "fit_line: need at least two matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  detail::require(sxx > 0.0, "fit_line: x values must not all coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace fsynth

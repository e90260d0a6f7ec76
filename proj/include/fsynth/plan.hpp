#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "fsynth/error.hpp"
#include "fsynth/prior.hpp"

namespace fsynth {

/// Continuation parameters derived from the prior, the noise level delta and
/// the Hoelder exponent tau in [0, 1]:
///   L = max{1, 1/4 ((1 - tau) ln(N/delta) / (r sigma))^tau},  R = r L,
///   n = ceil((2 - tau) ln(N/delta) / (ln 3 + ln(4 L) / tau))  (n = 0 if tau = 0).
struct Plan {
  double tau = 0.0;
  double delta = 0.0;
  double L = 1.0;
  double R = 0.0;
  std::size_t n = 0;
};

/// L_tau as a function of the two scale-free quantities r sigma and N / delta.
[[nodiscard]] inline double plan_scale(double tau, double r_sigma,
                                       double n_over_delta) {
  const double base = (1.0 - tau) * std::log(n_over_delta) / r_sigma;
  return std::max(1.0, 0.25 * std::pow(base, tau));
}

[[nodiscard]] inline std::size_t plan_order(double tau, double L,
                                            double n_over_delta) {
  if (tau <= 0.0) return 0;
  const double num = (2.0 - tau) * std::log(n_over_delta);
  const double den = std::log(3.0) + std::log(4.0 * L) / tau;
  return static_cast<std::size_t>(std::ceil(num / den));
}

namespace detail {

inline void check_tau_delta(const PriorData& prior, double tau, double delta) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ValidationError("tau must lie in [0, 1], got " + std::to_string(tau));
  }
  if (!(delta > 0.0)) {
    throw ValidationError("delta must be > 0, got " + std::to_string(delta));
  }
  if (!(delta < prior.N)) {
    throw ValidationError(
        "delta >= N: data no more informative than w = 0 (delta = " +
        std::to_string(delta) + ", N = " + std::to_string(prior.N) + ")");
  }
}

}  // namespace detail

[[nodiscard]] inline Plan make_plan(const PriorData& prior, double tau,
                                    double delta) {
  prior.validate();
  detail::check_tau_delta(prior, tau, delta);
  const double ratio = prior.N / delta;
  Plan p;
  p.tau = tau;
  p.delta = delta;
  p.L = plan_scale(tau, prior.r * prior.sigma, ratio);
  p.R = prior.r * p.L;
  p.n = plan_order(tau, p.L, ratio);
  return p;
}

}  // namespace fsynth

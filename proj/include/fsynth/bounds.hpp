#pragma once

// Closed-form stability estimates for Chebyshev continuation and for the
// reconstruction built on it. Every product of the form A^n e^B is evaluated
// as exp(n ln A + B); the log_* functions expose the exponent directly for
// parameter sets whose value exceeds the double range.
//
// Hypotheses are hard errors: each function throws HypothesisError naming
// the violated inequality.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>

#include "fsynth/chebyshev.hpp"
#include "fsynth/error.hpp"
#include "fsynth/plan.hpp"
#include "fsynth/prior.hpp"

namespace fsynth {

struct HolderBound {
  std::size_t n_star = 0;
  double tau_rho = 0.0;
  double value = 0.0;
};

struct ReconstructionBound {
  double holder_term = 0.0;
  double tail_term = 0.0;
  double total = 0.0;
};

/// All estimates for one parameter set.
struct BoundReport {
  double lemma21 = 0.0;
  std::size_t lemma21_n = 0;
  HolderBound thm_holder;
  double corollary = 0.0;
  ReconstructionBound thm_rec;
};

namespace detail {

/// ln(e^a + e^b) without overflow.
[[nodiscard]] inline double log_add(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (hi == -INFINITY) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

inline void check_noise(const PriorData& p, double delta) {
  require_hypothesis(delta > 0.0, "delta > 0");
  require_hypothesis(delta < p.N, "delta < N");
}

inline void check_box(const PriorData& p, double R) {
  require_hypothesis(std::isfinite(R) && R >= p.r, "R >= r");
}

inline void check_rho_strip(const PriorData& p, double R, double rho) {
  require_hypothesis(rho >= 4.0 * R / p.r,
                     "rho >= 4R/r (rho = " + std::to_string(rho) +
                         ", 4R/r = " + std::to_string(4.0 * R / p.r) + ")");
}

}  // namespace detail

/// ln of 1/4 (4^d (4R/r)^n delta + (16/3)^d N e^{r sigma rho} (4R/(3 r rho))^n).
[[nodiscard]] inline double log_bound_lemma21(const PriorData& p, double delta,
                                              double R, double rho,
                                              std::size_t n) {
  p.validate();
  detail::require_hypothesis(n >= 1, "n >= 1");
  detail::check_box(p, R);
  detail::check_rho_strip(p, R, rho);
  detail::check_noise(p, delta);
  const double d = static_cast<double>(p.d);
  const double nn = static_cast<double>(n);
  const double noise = d * std::log(4.0) + nn * std::log(4.0 * R / p.r) +
                       std::log(delta);
  const double tail = d * std::log(16.0 / 3.0) + std::log(p.N) +
                      p.r * p.sigma * rho +
                      nn * std::log(4.0 * R / (3.0 * p.r * rho));
  return std::log(0.25) + detail::log_add(noise, tail);
}

/// Sup-norm error bound of the n-term continuation on [-R, R]^d.
[[nodiscard]] inline double bound_lemma21(const PriorData& p, double delta,
                                          double R, double rho,
                                          std::size_t n) {
  return std::exp(log_bound_lemma21(p, delta, R, rho, n));
}

/// Hoelder estimate with the optimal order
///   n* = ceil((ln(N/delta) + r sigma rho) / ln(3 rho)),
///   tau(rho) = ln(4R/r) / ln(3 rho),
///   value = (16/3)^d (R/r) (N e^{r sigma rho} / delta)^{tau(rho)} delta.
[[nodiscard]] inline HolderBound bound_holder_theorem(const PriorData& p,
                                                      double delta, double R,
                                                      double rho) {
  p.validate();
  detail::check_box(p, R);
  detail::check_rho_strip(p, R, rho);
  detail::check_noise(p, delta);
  const double d = static_cast<double>(p.d);
  const double log_ratio = std::log(p.N / delta);
  const double l3rho = std::log(3.0 * rho);
  HolderBound h;
  h.n_star = static_cast<std::size_t>(
      std::ceil((log_ratio + p.r * p.sigma * rho) / l3rho));
  h.tau_rho = std::log(4.0 * R / p.r) / l3rho;
  const double log_value = d * std::log(16.0 / 3.0) + std::log(R / p.r) +
                           h.tau_rho * (log_ratio + p.r * p.sigma * rho) +
                           std::log(delta);
  h.value = std::exp(log_value);
  return h;
}

/// (16/3)^d N (delta/N)^{(1-tau)^2} L_tau(delta).
[[nodiscard]] inline double bound_corollary(const PriorData& p, double tau,
                                            double delta) {
  p.validate();
  detail::require_hypothesis(tau >= 0.0 && tau <= 1.0, "0 <= tau <= 1");
  detail::check_noise(p, delta);
  const double L = plan_scale(tau, p.r * p.sigma, p.N / delta);
  const double d = static_cast<double>(p.d);
  const double e = (1.0 - tau) * (1.0 - tau);
  return std::exp(d * std::log(16.0 / 3.0) + std::log(p.N) +
                  e * std::log(delta / p.N) + std::log(L));
}

/// L2 reconstruction bound split into the continuation term
///   (20 sqrt r)^d N L^{d/2 + 1} (delta/N)^{(1-tau)^2}
/// and the truncation tail gamma (r L)^{-m}.
[[nodiscard]] inline ReconstructionBound bound_reconstruction(
    const PriorData& p, double tau, double delta) {
  p.validate();
  detail::require_hypothesis(p.m >= 1, "m >= 1 (integer smoothness order)");
  detail::require_hypothesis(tau >= 0.0 && tau <= 1.0, "0 <= tau <= 1");
  detail::check_noise(p, delta);
  const double L = plan_scale(tau, p.r * p.sigma, p.N / delta);
  const double d = static_cast<double>(p.d);
  const double e = (1.0 - tau) * (1.0 - tau);
  ReconstructionBound b;
  b.holder_term =
      std::exp(d * std::log(20.0 * std::sqrt(p.r)) + std::log(p.N) +
               (d / 2.0 + 1.0) * std::log(L) + e * std::log(delta / p.N));
  b.tail_term = p.gamma * std::pow(p.r * L, -static_cast<double>(p.m));
  b.total = b.holder_term + b.tail_term;
  return b;
}

/// Envelope on a single term of the Chebyshev series of F v on [-R, R]^d:
///   2^d N e^{r sigma rho / 2} (2R / (r rho))^{|k|},   rho >= 1.
[[nodiscard]] inline double coeff_bound(const PriorData& p, double R,
                                        double rho, std::span<const int> k) {
  p.validate();
  detail::check_box(p, R);
  detail::require_hypothesis(rho >= 1.0, "rho >= 1");
  double total = 0.0;
  for (int kj : k) {
    detail::require(kj >= 0, "coeff_bound: negative Chebyshev index");
    total += kj;
  }
  const double d = static_cast<double>(p.d);
  return std::exp(d * std::log(2.0) + std::log(p.N) +
                  0.5 * p.r * p.sigma * rho +
                  total * std::log(2.0 * R / (p.r * rho)));
}

/// Truncation error of the exact-data continuation:
///   (8/3)^d N e^{r sigma rho'} C(n+d-1, n) (4R / (3 r rho'))^n,  rho' >= 4R/r.
[[nodiscard]] inline double tail_bound(const PriorData& p, double R,
                                       double rho_prime, std::size_t n) {
  p.validate();
  detail::check_box(p, R);
  detail::check_rho_strip(p, R, rho_prime);
  detail::require(n + p.d <= 64, "tail_bound: n + d must be <= 64");
  const double d = static_cast<double>(p.d);
  const double binom = static_cast<double>(binomial(n + p.d - 1, n));
  return std::exp(d * std::log(8.0 / 3.0) + std::log(p.N) +
                  p.r * p.sigma * rho_prime + std::log(binom) +
                  static_cast<double>(n) *
                      std::log(4.0 * R / (3.0 * p.r * rho_prime)));
}

/// Evaluates every estimate. The continuation estimate uses lemma_n, or n*
/// when lemma_n is zero. The reconstruction term is left zero when p.m == 0.
[[nodiscard]] inline BoundReport bound_report(const PriorData& p, double tau,
                                              double delta, double R,
                                              double rho,
                                              std::size_t lemma_n = 0) {
  BoundReport rep;
  rep.thm_holder = bound_holder_theorem(p, delta, R, rho);
  rep.lemma21_n = lemma_n == 0 ? rep.thm_holder.n_star : lemma_n;
  rep.lemma21 = bound_lemma21(p, delta, R, rho, rep.lemma21_n);
  rep.corollary = bound_corollary(p, tau, delta);
  if (p.m >= 1) rep.thm_rec = bound_reconstruction(p, tau, delta);
  return rep;
}

}  // namespace fsynth

#pragma once

// Admissible test functions with certified priors, and the oscillatory
// family v_{n,m}(x) = n^{-m} e^{i n phi} g(|x|) whose Fourier data on a fixed
// box decays like e^{-n} while its L2 norm decays only like n^{-m}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fsynth/chebyshev.hpp"
#include "fsynth/error.hpp"
#include "fsynth/fourier_grid.hpp"
#include "fsynth/prior.hpp"
#include "fsynth/quadrature.hpp"

namespace fsynth {

// ---------------------------------------------------------------------------
// The bump g

/// exp(1 / ((t - 1)(t - 2))) on (1, 2), zero elsewhere. C-infinity, peak
/// e^{-4} at t = 1.5.
[[nodiscard]] inline double bump_g(double t) {
  if (!(t > 1.0 && t < 2.0)) return 0.0;
  return std::exp(1.0 / ((t - 1.0) * (t - 2.0)));
}

/// g(t), g'(t), ..., g^{(m)}(t) by truncated Taylor arithmetic on
/// exp(1/u), u = (t - 1)(t - 2).
[[nodiscard]] inline std::vector<double> bump_g_derivatives(double t, int m) {
  const std::size_t len = static_cast<std::size_t>(m) + 1;
  std::vector<double> out(len, 0.0);
  const double e0 = bump_g(t);
  if (e0 == 0.0) return out;
  // u(t + h) = u0 + u1 h + h^2
  std::vector<double> u(len, 0.0);
  u[0] = (t - 1.0) * (t - 2.0);
  if (len > 1) u[1] = 2.0 * t - 3.0;
  if (len > 2) u[2] = 1.0;
  // q = 1 / u
  std::vector<double> q(len, 0.0);
  q[0] = 1.0 / u[0];
  for (std::size_t k = 1; k < len; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += u[j] * q[k - j];
    q[k] = -s / u[0];
  }
  // e = exp(q)
  std::vector<double> e(len, 0.0);
  e[0] = e0;
  for (std::size_t k = 1; k < len; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      s += static_cast<double>(j) * q[j] * e[k - j];
    }
    e[k] = s / static_cast<double>(k);
  }
  double fact = 1.0;
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    out[k] = fact * e[k];
  }
  return out;
}

namespace detail {

/// Composite Gauss-Legendre rule on [1, 2] fine enough for \int g(u) e^{iku} du
/// at frequency k.
[[nodiscard]] inline const QuadratureRule& bump_rule(std::size_t panels) {
  static thread_local std::map<std::size_t, QuadratureRule> cache;
  auto it = cache.find(panels);
  if (it == cache.end()) {
    it = cache.emplace(panels, composite_gauss_legendre(24, panels, 1.0, 2.0))
             .first;
  }
  return it->second;
}

[[nodiscard]] inline std::size_t bump_panels(double k) {
  return 8 + static_cast<std::size_t>(std::ceil(std::abs(k) / 4.0));
}

}  // namespace detail

/// \int_1^2 g(u) e^{i k u} du.
[[nodiscard]] inline Complex bump_moment(double k) {
  const auto& q = detail::bump_rule(detail::bump_panels(k));
  Complex acc{};
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    acc += q.weights[i] * bump_g(q.nodes[i]) * std::polar(1.0, k * q.nodes[i]);
  }
  return acc;
}

/// \int_1^2 g.
[[nodiscard]] inline double bump_integral() {
  static const double value = bump_moment(0.0).real();
  return value;
}

// ---------------------------------------------------------------------------
// Separable test functions

/// One axis factor of a separable test function, optionally modulated by
/// e^{i xi0 x}.
struct Factor1D {
  enum class Kind { bump, indicator };

  Kind kind = Kind::bump;
  double center = 0.0;
  /// Bump: inner scale beta, support half-width 1/(2 beta).
  /// Indicator: half-width of the interval.
  double scale = 1.0;
  double modulation = 0.0;

  [[nodiscard]] static Factor1D bump(double center, double beta,
                                     double xi0 = 0.0) {
    return {Kind::bump, center, beta, xi0};
  }
  [[nodiscard]] static Factor1D indicator(double center, double half_width,
                                          double xi0 = 0.0) {
    return {Kind::indicator, center, half_width, xi0};
  }

  [[nodiscard]] double half_support() const {
    return kind == Kind::bump ? 0.5 / scale : scale;
  }
  [[nodiscard]] double lo() const { return center - half_support(); }
  [[nodiscard]] double hi() const { return center + half_support(); }
  [[nodiscard]] double max_abs_coord() const {
    return std::max(std::abs(lo()), std::abs(hi()));
  }

  [[nodiscard]] Complex value(double x) const {
    const Complex phase = std::polar(1.0, modulation * x);
    if (kind == Kind::bump) return phase * bump_g(1.5 + scale * (x - center));
    return std::abs(x - center) <= scale ? phase : Complex{};
  }

  /// \int |f|.
  [[nodiscard]] double l1() const {
    return kind == Kind::bump ? bump_integral() / scale : 2.0 * scale;
  }

  /// (2 pi)^{-1} \int f(x) e^{i xi x} dx.
  [[nodiscard]] Complex transform(double xi) const {
    const double eta = xi + modulation;
    const double inv2pi = 0.5 / std::numbers::pi;
    if (kind == Kind::indicator) {
      const Complex phase = std::polar(1.0, eta * center);
      const double kernel =
          eta == 0.0 ? 2.0 * scale : 2.0 * std::sin(eta * scale) / eta;
      return inv2pi * phase * kernel;
    }
    // x = center + (u - 1.5) / beta
    const Complex phase = std::polar(1.0, eta * (center - 1.5 / scale));
    return inv2pi / scale * phase * bump_moment(eta / scale);
  }

  [[nodiscard]] bool smooth() const { return kind == Kind::bump; }

  /// f^{(m)}(x); only defined for bump factors.
  [[nodiscard]] Complex derivative(double x, int m) const {
    detail::require(m == 0 || smooth(),
                    "Factor1D: derivatives of an indicator are not functions");
    if (m == 0) return value(x);
    const auto gd = bump_g_derivatives(1.5 + scale * (x - center), m);
    const Complex im_xi0(0.0, modulation);
    Complex acc{};
    double beta_k = 1.0;
    for (int k = 0; k <= m; ++k) {
      const double c = static_cast<double>(binomial(m, k));
      acc += c * std::pow(im_xi0, m - k) * beta_k *
             gd[static_cast<std::size_t>(k)];
      beta_k *= scale;
    }
    return std::polar(1.0, modulation * x) * acc;
  }

  /// ||f^{(m)}||_{L2}.
  [[nodiscard]] double derivative_l2(int m) const {
    if (m == 0 && kind == Kind::indicator) return std::sqrt(2.0 * scale);
    const QuadratureRule q = composite_gauss_legendre(24, 48, lo(), hi());
    const double s = q.integrate(
        [&](double x) { return std::norm(derivative(x, m)); });
    return std::sqrt(s);
  }
};

/// amplitude * prod_j factor_j(x_j).
struct TestFunction {
  double amplitude = 1.0;
  std::vector<Factor1D> factors;

  [[nodiscard]] std::size_t dim() const { return factors.size(); }

  [[nodiscard]] Complex value(std::span<const double> x) const {
    Complex v = amplitude;
    for (std::size_t j = 0; j < factors.size(); ++j) v *= factors[j].value(x[j]);
    return v;
  }
  [[nodiscard]] Complex transform(std::span<const double> xi) const {
    Complex v = amplitude;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      v *= factors[j].transform(xi[j]);
    }
    return v;
  }
  [[nodiscard]] bool smooth() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const Factor1D& f) { return f.smooth(); });
  }
  /// Certified amplitude bound N = ||v||_{L1} / (2 pi)^d.
  [[nodiscard]] double N() const {
    double l1 = std::abs(amplitude);
    for (const auto& f : factors) l1 *= f.l1();
    return l1 / std::pow(2.0 * std::numbers::pi, static_cast<double>(dim()));
  }
  /// Smallest l1-ball radius containing the support.
  [[nodiscard]] double sigma() const {
    double s = 0.0;
    for (const auto& f : factors) s += f.max_abs_coord();
    return s;
  }
  [[nodiscard]] double l2_norm() const {
    double s = std::abs(amplitude);
    for (const auto& f : factors) s *= f.derivative_l2(0);
    return s;
  }
  /// |v|_{H^m}, from the separable structure.
  [[nodiscard]] double gamma(int m) const {
    detail::require(m >= 1, "gamma: m must be >= 1");
    detail::require(smooth(), "gamma: function is not smooth");
    double acc = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) {
      double term = std::pow(factors[j].derivative_l2(m), 2);
      for (std::size_t i = 0; i < dim(); ++i) {
        if (i != j) term *= std::pow(factors[i].derivative_l2(0), 2);
      }
      acc += term;
    }
    return std::abs(amplitude) * std::sqrt(acc);
  }
  /// Samples of F v at the Chebyshev nodes.
  [[nodiscard]] NodeSamples node_data(const NodeGrid& grid) const {
    return sample_at_nodes(grid, [&](std::span<const double> xi) {
      return transform(xi);
    });
  }
  [[nodiscard]] SpatialField sample(const GridSpec& grid) const {
    SpatialField f = SpatialField::sample(
        grid, [&](std::span<const double> x) { return value(x); });
    f.sigma = sigma();
    return f;
  }
  [[nodiscard]] Field sample_transform(const GridSpec& grid) const {
    return Field::sample(grid,
                         [&](std::span<const double> xi) { return transform(xi); });
  }
};

/// A member of the standard corpus with its certified constants.
struct SuiteMember {
  std::string name;
  TestFunction fn;
  int max_m = 0;  // largest smoothness order for which gamma is certified
  double N = 0.0;
  double sigma = 0.0;
  std::vector<double> gamma;  // gamma[m - 1] = |v|_{H^m}, m = 1..max_m
  SpatialField samples;

  [[nodiscard]] PriorData prior(double r, int m = 0) const {
    detail::require(m <= max_m, "suite member " + name +
                                    " has no certified seminorm of order " +
                                    std::to_string(m));
    PriorData p;
    p.d = fn.dim();
    p.N = N;
    p.sigma = sigma;
    p.r = r;
    p.m = m;
    p.gamma = m >= 1 ? gamma[static_cast<std::size_t>(m - 1)] : 0.0;
    return p;
  }

  /// Frequency box for forward transforms of `samples`: half-width
  /// 40 * 2^level times the largest inner bump scale, spacing 1/16 (d = 1)
  /// or 1/4 (d = 2). Level 0 and level 1 are the two default resolutions.
  [[nodiscard]] GridSpec transform_grid(int level = 0) const {
    double scale = 1.0;
    for (const auto& f : fn.factors) {
      if (f.kind == Factor1D::Kind::bump) scale = std::max(scale, f.scale);
    }
    const double h = 40.0 * scale * std::ldexp(1.0, level);
    const double per_unit = fn.dim() == 1 ? 16.0 : 4.0;
    return GridSpec::cube(fn.dim(), h,
                          static_cast<std::size_t>(h * per_unit) + 1);
  }

  /// Grid on [-(sigma + 1/4), sigma + 1/4]^d with the default resolution.
  [[nodiscard]] GridSpec default_grid() const {
    return GridSpec::cube(fn.dim(), sigma + 0.25, fn.dim() == 1 ? 1024 : 256);
  }
};

[[nodiscard]] inline SuiteMember make_member(std::string name, TestFunction fn,
                                             int max_m) {
  SuiteMember s;
  s.name = std::move(name);
  s.fn = std::move(fn);
  s.max_m = s.fn.smooth() ? max_m : 0;
  s.N = s.fn.N();
  s.sigma = s.fn.sigma();
  for (int m = 1; m <= s.max_m; ++m) s.gamma.push_back(s.fn.gamma(m));
  s.samples = s.fn.sample(s.default_grid());
  return s;
}

/// Standard corpus for d = 1 or 2: separable bumps (shifted and scaled),
/// indicator boxes (m = 0 only) and modulated bumps.
[[nodiscard]] inline std::vector<SuiteMember> standard_suite(std::size_t d) {
  detail::require(d == 1 || d == 2, "standard_suite: d must be 1 or 2");
  using F = Factor1D;
  std::vector<SuiteMember> out;
  if (d == 1) {
    out.push_back(make_member("bump", {1.0, {F::bump(1.5, 1.0)}}, 4));
    out.push_back(make_member("bump_centered", {1.0, {F::bump(0.0, 1.0)}}, 4));
    out.push_back(make_member("bump_scaled", {3.0, {F::bump(-0.5, 2.0)}}, 4));
    out.push_back(make_member("indicator", {1.0, {F::indicator(0.0, 1.0)}}, 0));
    out.push_back(
        make_member("bump_modulated", {1.0, {F::bump(0.0, 1.0, 2.0)}}, 4));
  } else {
    out.push_back(make_member(
        "bump2", {1.0, {F::bump(0.0, 1.0), F::bump(0.0, 1.0)}}, 4));
    out.push_back(make_member(
        "bump2_shifted", {2.0, {F::bump(0.5, 2.0), F::bump(-0.25, 1.0)}}, 4));
    out.push_back(make_member(
        "indicator2", {1.0, {F::indicator(0.0, 1.0), F::indicator(0.0, 1.0)}},
        0));
    out.push_back(make_member(
        "bump2_modulated",
        {1.0, {F::bump(0.0, 1.0, 1.0), F::bump(0.0, 1.0, -2.0)}}, 4));
  }
  return out;
}

[[nodiscard]] inline SuiteMember suite_member(std::size_t d,
                                              const std::string& name) {
  for (auto& m : standard_suite(d)) {
    if (m.name == name) return m;
  }
  throw ValidationError("unknown suite member '" + name + "' for d = " +
                        std::to_string(d));
}

// ---------------------------------------------------------------------------
// Instability family

/// v_{n,m} placed as alpha * Re v_{n,m}(beta (x - center)) (d = 2), or the
/// line integral h_{n,m} placed the same way (d = 1).
struct InstabilitySpec {
  int n = 1;
  int m = 0;
  std::size_t d = 2;
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<double> center;

  void validate() const {
    detail::require(n >= 1, "instability: n must be >= 1");
    detail::require(m >= 0, "instability: m must be >= 0");
    detail::require(d == 1 || d == 2, "instability: d must be 1 or 2");
    detail::require(alpha > 0.0 && beta > 0.0,
                    "instability: alpha and beta must be > 0");
    detail::require(center.empty() || center.size() == d,
                    "instability: center has the wrong dimension");
  }
  [[nodiscard]] double center_at(std::size_t j) const {
    return center.empty() ? 0.0 : center[j];
  }
};

/// Re v_{n,m}(x1, x2) = n^{-m} cos(n phi) g(t) in polar coordinates.
[[nodiscard]] inline double re_vnm(int n, int m, double x1, double x2) {
  const double t = std::hypot(x1, x2);
  const double g = bump_g(t);
  if (g == 0.0) return 0.0;
  const double phi = std::atan2(x2, x1);
  return std::pow(static_cast<double>(n), -m) * std::cos(n * phi) * g;
}

/// v_{n,m}(x1, x2) (complex).
[[nodiscard]] inline Complex vnm(int n, int m, double x1, double x2) {
  const double t = std::hypot(x1, x2);
  const double g = bump_g(t);
  if (g == 0.0) return {};
  return std::pow(static_cast<double>(n), -m) *
         std::polar(g, n * std::atan2(x2, x1));
}

[[nodiscard]] inline SpatialField make_vnm(const InstabilitySpec& spec,
                                           const GridSpec& grid) {
  spec.validate();
  detail::require(spec.d == 2, "make_vnm: spec must have d = 2");
  grid.validate();
  detail::require(grid.dim() == 2, "make_vnm: grid must be two-dimensional");
  for (std::size_t j = 0; j < 2; ++j) {
    const double reach = 2.0 / spec.beta;
    detail::require(
        spec.center_at(j) - reach >= -grid.half_width[j] &&
            spec.center_at(j) + reach <= grid.half_width[j],
        "make_vnm: grid does not cover the annulus 1 <= t <= 2");
  }
  SpatialField f = SpatialField::sample(grid, [&](std::span<const double> x) {
    return Complex(spec.alpha *
                   re_vnm(spec.n, spec.m,
                          spec.beta * (x[0] - spec.center_at(0)),
                          spec.beta * (x[1] - spec.center_at(1))));
  });
  double sigma = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    sigma += std::abs(spec.center_at(j)) + 2.0 / spec.beta;
  }
  f.sigma = sigma;
  return f;
}

/// h_{n,m}(x) = \int_{-2}^{2} Re v_{2n,m}(t, x) dt by adaptive quadrature,
/// absolute tolerance 1e-12.
[[nodiscard]] inline double hnm(int n, int m, double x) {
  const double ax = std::abs(x);
  if (ax >= 2.0) return 0.0;
  const int k = 2 * n;
  auto f = [&](double t) { return re_vnm(k, m, t, x); };
  const double outer = std::sqrt(4.0 - x * x);
  constexpr double tol = 1e-12;
  if (ax < 1.0) {
    const double inner = std::sqrt(1.0 - x * x);
    return adaptive_integral(f, -outer, -inner, tol / 2) +
           adaptive_integral(f, inner, outer, tol / 2);
  }
  return adaptive_integral(f, -outer, outer, tol);
}

[[nodiscard]] inline SpatialField make_hnm(const InstabilitySpec& spec,
                                           const GridSpec& grid) {
  spec.validate();
  detail::require(spec.d == 1, "make_hnm: spec must have d = 1");
  grid.validate();
  detail::require(grid.dim() == 1, "make_hnm: grid must be one-dimensional");
  const double reach = 2.0 / spec.beta;
  detail::require(spec.center_at(0) - reach >= -grid.half_width[0] &&
                      spec.center_at(0) + reach <= grid.half_width[0],
                  "make_hnm: grid does not cover the support");
  SpatialField f = SpatialField::sample(grid, [&](std::span<const double> x) {
    return Complex(spec.alpha *
                   hnm(spec.n, spec.m, spec.beta * (x[0] - spec.center_at(0))));
  });
  f.sigma = std::abs(spec.center_at(0)) + reach;
  return f;
}

/// Quadrature sizes for the polar-coordinate transform of v_{n,m}.
struct PolarQuadrature {
  std::size_t radial = 512;   // Gauss-Legendre nodes on [1, 2]
  std::size_t angular = 1024; // trapezoid points on the shifted circle
};

namespace detail {

/// Angular integral A_n(z) = \int_0^{2pi} e^{i z cos phi} e^{i n phi} d phi
/// (= 2 pi i^n J_n(z)). The periodic trapezoid rule runs on the contour
/// Im phi = s with cosh s = n / z, where the integrand has the size of the
/// result, so values far below the roundoff of the real-axis sum are
/// resolved.
class AngularIntegral {
 public:
  AngularIntegral(int n, std::size_t points) : n_(n), k_(points) {
    require(points >= 8 && points % 2 == 0,
            "angular quadrature needs an even point count >= 8");
    const std::size_t half = k_ / 2;
    cos_.resize(half + 1);
    sin_.resize(half + 1);
    mode_.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(k_);
      cos_[k] = std::cos(phi);
      sin_[k] = std::sin(phi);
      mode_[k] = std::polar(1.0, n * phi);
    }
  }

  [[nodiscard]] Complex operator()(double z) const {
    if (z == 0.0) return n_ == 0 ? Complex(2.0 * std::numbers::pi) : Complex{};
    const double nn = static_cast<double>(n_);
    const double s = nn > z ? std::acosh(nn / z) : 0.0;
    const double zc = z * std::cosh(s);
    const double zs = z * std::sinh(s);
    const double ns = nn * s;
    const std::size_t half = k_ / 2;
    // e^{-ns} underflows only far below the reporting floor; a <= n <= 160.
    const double ens = std::exp(-ns);
    const bool split = ens > 1e-290;
    Complex acc{};
    for (std::size_t k = 0; k <= half; ++k) {
      const Complex carrier = std::polar(1.0, zc * cos_[k]);
      const double a = zs * sin_[k];
      double up = 0.0, down = 0.0;
      if (split) {
        const double ea = std::exp(a);
        up = ea * ens;
        down = ens / ea;
      } else {
        up = std::exp(a - ns);
        down = std::exp(-a - ns);
      }
      Complex term = up * mode_[k];
      if (k != 0 && k != half) term += down * std::conj(mode_[k]);
      acc += carrier * term;
    }
    return acc * (2.0 * std::numbers::pi / static_cast<double>(k_));
  }

 private:
  int n_;
  std::size_t k_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<Complex> mode_;
};

/// Radial profile S(rho) with F v_{n,m}(xi) = e^{i n phi_0} S(|xi|):
///   S(rho) = n^{-m} (2 pi)^{-2} \int_1^2 t g(t) A_n(t rho) dt.
class VnmTransform {
 public:
  VnmTransform(int n, int m, const PolarQuadrature& q)
      : n_(n),
        m_(m),
        angular_(n, q.angular),
        radial_(gauss_legendre(q.radial, 1.0, 2.0)) {
    tg_.resize(radial_.nodes.size());
    for (std::size_t i = 0; i < tg_.size(); ++i) {
      tg_[i] = radial_.weights[i] * radial_.nodes[i] * bump_g(radial_.nodes[i]);
    }
  }

  [[nodiscard]] Complex profile(double rho) const {
    Complex acc{};
    for (std::size_t i = 0; i < tg_.size(); ++i) {
      if (tg_[i] == 0.0) continue;
      acc += tg_[i] * angular_(radial_.nodes[i] * rho);
    }
    const double pre = std::pow(static_cast<double>(n_), -m_) /
                       std::pow(2.0 * std::numbers::pi, 2);
    return pre * acc;
  }

  /// F[Re v_{n,m}](xi) = (F v(xi) + conj(F v(-xi))) / 2 given S(|xi|).
  [[nodiscard]] Complex real_part_transform(Complex profile_value,
                                            double xi1, double xi2) const {
    const double phi0 = std::atan2(xi2, xi1);
    const Complex fv = std::polar(1.0, n_ * phi0) * profile_value;
    const Complex fv_neg =
        std::polar(1.0, n_ * (phi0 + std::numbers::pi)) * profile_value;
    return 0.5 * (fv + std::conj(fv_neg));
  }

 private:
  int n_;
  int m_;
  AngularIntegral angular_;
  QuadratureRule radial_;
  std::vector<double> tg_;
};

}  // namespace detail

/// F[Re v_{n,m}](xi) for the unplaced family (alpha = beta = 1, center 0).
[[nodiscard]] inline Complex re_vnm_transform(int n, int m, double xi1,
                                              double xi2,
                                              const PolarQuadrature& q = {}) {
  const detail::VnmTransform t(n, m, q);
  return t.real_part_transform(t.profile(std::hypot(xi1, xi2)), xi1, xi2);
}

/// sup over a grid_points^d grid of [-r, r]^d of |F u| for the placed
/// exhibit u: alpha Re v_{n,m}(beta (x - x0)) when d = 2, and
/// alpha h_{n,m}(beta (x - x0)) when d = 1, using
/// F h_{n,m}(eta) = 2 pi F[Re v_{2n,m}](0, eta).
[[nodiscard]] inline double decay_norm(const InstabilitySpec& spec, double r,
                                       const PolarQuadrature& q = {},
                                       std::size_t grid_points = 129) {
  spec.validate();
  detail::require(r > 0.0, "decay_norm: r must be > 0");
  detail::require(spec.n <= 80,
                  "decay_norm: n must be <= 80 (values underflow beyond)");
  const int order = spec.d == 2 ? spec.n : 2 * spec.n;
  const detail::VnmTransform t(order, spec.m, q);
  const GridSpec grid = GridSpec::cube(spec.d, r, grid_points);
  // |F u| depends on |xi| through S and on the angle only through a phase
  // factor, so S is cached per radius. Keys are exact integers.
  std::map<long, Complex> cache;
  auto profile_at = [&](long key, double rho) {
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, t.profile(rho)).first;
    return it->second;
  };
  const long off = static_cast<long>(grid_points) - 1;
  double sup = 0.0;
  if (spec.d == 2) {
    const double scale = spec.alpha / (spec.beta * spec.beta);
    for (std::size_t i = 0; i < grid_points; ++i) {
      for (std::size_t j = 0; j < grid_points; ++j) {
        const double xi1 = grid.coord(0, i) / spec.beta;
        const double xi2 = grid.coord(1, j) / spec.beta;
        const long a = 2 * static_cast<long>(i) - off;
        const long b = 2 * static_cast<long>(j) - off;
        const Complex s = profile_at(a * a + b * b, std::hypot(xi1, xi2));
        sup = std::max(sup,
                       scale * std::abs(t.real_part_transform(s, xi1, xi2)));
      }
    }
  } else {
    const double scale = spec.alpha / spec.beta * 2.0 * std::numbers::pi;
    for (std::size_t j = 0; j < grid_points; ++j) {
      const double eta = grid.coord(0, j) / spec.beta;
      const long b = 2 * static_cast<long>(j) - off;
      const Complex s = profile_at(b * b, std::abs(eta));
      sup = std::max(sup,
                     scale * std::abs(t.real_part_transform(s, 0.0, eta)));
    }
  }
  if (!(sup >= 1e-300)) {
    throw UnderflowError("decay_norm: value below 1e-300 floor");
  }
  return sup;
}

/// Finite-difference estimate of ||f||_{C^m}: the largest |Delta_h^k f| / h^k
/// over orders k <= m and axes (forward differences).
[[nodiscard]] inline double cm_norm_fd(const SpatialField& f, int m) {
  f.validate();
  detail::require(m >= 0, "cm_norm_fd: m must be >= 0");
  double best = detail::max_abs(f.values);
  const std::size_t d = f.grid.dim();
  std::vector<std::size_t> idx(d);
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::size_t stride = 1;
    for (std::size_t a = axis + 1; a < d; ++a) stride *= f.grid.points[a];
    const double h = f.grid.spacing(axis);
    for (int k = 1; k <= m; ++k) {
      const double hk = std::pow(h, k);
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        unravel(i, f.grid.points, idx);
        if (idx[axis] + static_cast<std::size_t>(k) >= f.grid.points[axis]) {
          continue;
        }
        Complex diff{};
        for (int j = 0; j <= k; ++j) {
          const double c = static_cast<double>(binomial(k, j)) *
                           ((k - j) % 2 == 0 ? 1.0 : -1.0);
          diff += c * f.values[i + static_cast<std::size_t>(j) * stride];
        }
        best = std::max(best, std::abs(diff) / hk);
      }
    }
  }
  return best;
}

}  // namespace fsynth

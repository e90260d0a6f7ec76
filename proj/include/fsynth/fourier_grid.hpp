#pragma once

// Trapezoidal-rule Fourier transforms under the convention
//   F v(xi)      = (2 pi)^{-d} \int e^{i xi x} v(x) dx,
//   F^{-1} w(x)  =             \int w(xi) e^{-i xi x} d xi,
// plus grid norms and the Sobolev seminorm.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsynth/error.hpp"
#include "fsynth/tensor.hpp"

namespace fsynth {

/// Closed uniform tensor grid on prod_j [-h_j, h_j] with P_j points per axis.
struct GridSpec {
  std::vector<double> half_width;
  std::vector<std::size_t> points;

  [[nodiscard]] static GridSpec cube(std::size_t d, double h, std::size_t p) {
    return GridSpec{std::vector<double>(d, h), std::vector<std::size_t>(d, p)};
  }

  [[nodiscard]] std::size_t dim() const { return points.size(); }
  [[nodiscard]] std::size_t size() const { return shape_size(points); }
  [[nodiscard]] Shape shape() const { return points; }

  [[nodiscard]] double spacing(std::size_t axis) const {
    return 2.0 * half_width[axis] / static_cast<double>(points[axis] - 1);
  }
  /// Coordinate i on an axis; the endpoints are exactly -h and +h.
  [[nodiscard]] double coord(std::size_t axis, std::size_t i) const {
    const double h = half_width[axis];
    return -h + 2.0 * h * static_cast<double>(i) /
                    static_cast<double>(points[axis] - 1);
  }
  [[nodiscard]] std::vector<double> axis_coords(std::size_t axis) const {
    std::vector<double> c(points[axis]);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coord(axis, i);
    return c;
  }
  [[nodiscard]] std::vector<std::vector<double>> all_axis_coords() const {
    std::vector<std::vector<double>> out;
    for (std::size_t a = 0; a < dim(); ++a) out.push_back(axis_coords(a));
    return out;
  }
  /// Trapezoidal weights along one axis.
  [[nodiscard]] std::vector<double> axis_weights(std::size_t axis) const {
    std::vector<double> w(points[axis], spacing(axis));
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
  }
  [[nodiscard]] std::vector<double> point(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    unravel(flat, points, idx);
    std::vector<double> p(dim());
    for (std::size_t a = 0; a < dim(); ++a) p[a] = coord(a, idx[a]);
    return p;
  }

  void validate() const {
    detail::require(!points.empty() && points.size() <= 3,
                    "GridSpec: dimension must be 1, 2 or 3");
    detail::require(half_width.size() == points.size(),
                    "GridSpec: half_width and points differ in length");
    for (std::size_t a = 0; a < dim(); ++a) {
      detail::require(std::isfinite(half_width[a]) && half_width[a] > 0.0,
                      "GridSpec: half-widths must be > 0");
      detail::require(points[a] >= 2, "GridSpec: need >= 2 points per axis");
    }
  }

  bool operator==(const GridSpec&) const = default;
};

enum class Domain { frequency, physical };

/// Complex samples on a GridSpec. The domain tag keeps frequency-space data
/// (coordinate xi) and physical-space data (coordinate x) from being mixed.
template <Domain D>
struct BasicField {
  GridSpec grid;
  std::vector<Complex> values;
  /// l1-ball support radius of the underlying function, when known.
  std::optional<double> sigma;

  static constexpr Domain domain = D;

  [[nodiscard]] static BasicField zeros(GridSpec g) {
    const std::size_t n = g.size();
    return BasicField{std::move(g), std::vector<Complex>(n), std::nullopt};
  }

  template <class F>
  [[nodiscard]] static BasicField sample(GridSpec g, F&& f) {
    BasicField out = zeros(std::move(g));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      const auto p = out.grid.point(i);
      out.values[i] = f(std::span<const double>(p));
    }
    return out;
  }

  void validate() const {
    grid.validate();
    detail::require(values.size() == grid.size(),
                    "field: value count does not match grid");
    for (const Complex& v : values) {
      detail::require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                      "field: non-finite sample");
    }
  }
};

using Field = BasicField<Domain::frequency>;
using SpatialField = BasicField<Domain::physical>;

enum class TransformStatus { ok, support_warning };

namespace detail {

[[nodiscard]] inline double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z));
  return m;
}

/// True when every sample on the outer layer of the grid is negligible.
[[nodiscard]] inline bool boundary_vanishes(const SpatialField& v,
                                            double rel_tol = 1e-14) {
  const double limit = rel_tol * max_abs(v.values);
  std::vector<std::size_t> idx(v.grid.dim());
  for (std::size_t f = 0; f < v.values.size(); ++f) {
    unravel(f, v.grid.points, idx);
    bool edge = false;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      edge = edge || idx[a] == 0 || idx[a] + 1 == v.grid.points[a];
    }
    if (edge && std::abs(v.values[f]) > limit) return false;
  }
  return true;
}

/// Separable trapezoidal sum  out(y) = sum_x w(x) e^{i sign y.x} in(x).
[[nodiscard]] inline std::vector<Complex> exp_sum(
    const GridSpec& in_grid, std::span<const Complex> in,
    const GridSpec& out_grid, double sign) {
  require(in_grid.dim() == out_grid.dim(), "transform: dimension mismatch");
  Shape shape = in_grid.points;
  std::vector<Complex> t(in.begin(), in.end());
  for (std::size_t a = 0; a < in_grid.dim(); ++a) {
    const auto xs = in_grid.axis_coords(a);
    const auto ws = in_grid.axis_weights(a);
    const auto ys = out_grid.axis_coords(a);
    std::vector<Complex> mat(ys.size() * xs.size());
    for (std::size_t p = 0; p < ys.size(); ++p) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mat[p * xs.size() + i] = ws[i] * std::polar(1.0, sign * ys[p] * xs[i]);
      }
    }
    t = contract_axis<Complex>(t, shape, a, mat, ys.size());
    shape[a] = ys.size();
  }
  return t;
}

}  // namespace detail

/// Trapezoidal approximation of (2 pi)^{-d} \int e^{i xi x} v(x) dx at every
/// point of out_grid. The tensor sum is factorized axis by axis; this is the
/// same quadrature as the direct double sum. If samples on the boundary layer
/// of v's grid exceed 1e-14 max|v|, *status is set to support_warning.
[[nodiscard]] inline Field forward_transform(const SpatialField& v,
                                             const GridSpec& out_grid,
                                             TransformStatus* status = nullptr) {
  v.validate();
  out_grid.validate();
  if (status != nullptr) {
    *status = detail::boundary_vanishes(v) ? TransformStatus::ok
                                           : TransformStatus::support_warning;
  }
  Field out{out_grid, detail::exp_sum(v.grid, v.values, out_grid, +1.0),
            std::nullopt};
  const double scale =
      std::pow(2.0 * std::numbers::pi, -static_cast<double>(v.grid.dim()));
  for (Complex& z : out.values) z *= scale;
  return out;
}

/// Trapezoidal approximation of \int w(xi) e^{-i xi x} d xi over w's box;
/// w is implicitly zero outside its box.
[[nodiscard]] inline SpatialField inverse_transform(const Field& w,
                                                    const GridSpec& out_grid) {
  w.validate();
  out_grid.validate();
  return SpatialField{out_grid,
                      detail::exp_sum(w.grid, w.values, out_grid, -1.0),
                      std::nullopt};
}

template <Domain D>
[[nodiscard]] double sup_norm(const BasicField<D>& f) {
  return detail::max_abs(f.values);
}

/// sqrt(sum w |f|^2) with tensor trapezoidal weights.
template <Domain D>
[[nodiscard]] double l2_norm(const BasicField<D>& f) {
  f.grid.validate();
  detail::require(f.values.size() == f.grid.size(),
                  "l2_norm: value count does not match grid");
  std::vector<std::vector<double>> w;
  for (std::size_t a = 0; a < f.grid.dim(); ++a) {
    w.push_back(f.grid.axis_weights(a));
  }
  std::vector<std::size_t> idx(f.grid.dim());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    unravel(i, f.grid.points, idx);
    double wt = 1.0;
    for (std::size_t a = 0; a < idx.size(); ++a) wt *= w[a][idx[a]];
    acc += wt * std::norm(f.values[i]);
  }
  return std::sqrt(acc);
}

/// | ||v|| - (2 pi)^{d/2} ||w|| | / ||v||, the Parseval-Plancherel defect.
[[nodiscard]] inline double parseval_residual(const SpatialField& v,
                                              const Field& w) {
  const double nv = l2_norm(v);
  detail::require(nv > 0.0, "parseval_residual: ||v|| must be nonzero");
  const double d = static_cast<double>(v.grid.dim());
  const double nw = std::pow(2.0 * std::numbers::pi, d / 2.0) * l2_norm(w);
  return std::abs(nv - nw) / nv;
}

/// Sobolev seminorm ( sum_j ||d^m v / dx_j^m||^2 )^{1/2}, computed
/// spectrally: the grid samples are transformed onto the discrete frequency
/// lattice of the periodic extension (spacing 2 pi / (h (P - 1))), each
/// transform is weighted by xi_j^m, and Parseval gives
///   |v|^2 = (2 pi)^d sum_j ||xi_j^m F v||^2.
/// Requires samples that vanish on the grid boundary.
[[nodiscard]] inline double sobolev_seminorm(const SpatialField& v, int m) {
  detail::require(m >= 1, "sobolev_seminorm: m must be >= 1");
  v.validate();
  const std::size_t d = v.grid.dim();
  for (std::size_t a = 0; a < d; ++a) {
    detail::require(v.grid.points[a] >= static_cast<std::size_t>(2 * m + 2),
                    "sobolev_seminorm: grid too coarse for order m");
  }
  GridSpec freq;
  std::vector<std::vector<double>> weights(d);
  for (std::size_t a = 0; a < d; ++a) {
    const std::size_t periodic = v.grid.points[a] - 1;
    const double dxi = 2.0 * std::numbers::pi /
                       (v.grid.spacing(a) * static_cast<double>(periodic));
    const std::size_t k = periodic / 2;
    freq.half_width.push_back(static_cast<double>(k) * dxi);
    freq.points.push_back(2 * k + 1);
    // One full period of the lattice: for an even period the two endpoints
    // are the same Nyquist mode and share its weight.
    std::vector<double> w(2 * k + 1, dxi);
    if (periodic % 2 == 0) {
      w.front() *= 0.5;
      w.back() *= 0.5;
    }
    weights[a] = std::move(w);
  }
  const Field fv = forward_transform(v, freq);
  std::vector<std::size_t> idx(d);
  double acc = 0.0;
  for (std::size_t i = 0; i < fv.values.size(); ++i) {
    unravel(i, freq.points, idx);
    double wt = 1.0;
    double poly = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      wt *= weights[a][idx[a]];
      poly += std::pow(freq.coord(a, idx[a]), 2 * m);
    }
    acc += wt * poly * std::norm(fv.values[i]);
  }
  return std::sqrt(std::pow(2.0 * std::numbers::pi, static_cast<double>(d)) *
                   acc);
}

/// Flags samples of v lying outside the l1-ball sum |x_j| <= sigma that exceed
/// rel_tol * max|v|. Returns the number of offending samples.
[[nodiscard]] inline std::size_t support_violations(const SpatialField& v,
                                                    double sigma,
                                                    double rel_tol = 1e-14) {
  const double limit = rel_tol * detail::max_abs(v.values);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const auto p = v.grid.point(i);
    double l1 = 0.0;
    for (double x : p) l1 += std::abs(x);
    if (l1 > sigma * (1.0 + 1e-12) && std::abs(v.values[i]) > limit) ++bad;
  }
  return bad;
}

}  // namespace fsynth

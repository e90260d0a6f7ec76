#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fsynth/error.hpp"
#include "fsynth/tensor.hpp"

namespace fsynth {

/// Chebyshev polynomial of the first kind, T_k(t).
///
/// Uses cos(k acos t) on [-1, 1] and sign(t)^k cosh(k acosh |t|) outside,
/// which stays forward-stable for large |t| where the three-term recurrence
/// would accumulate cancellation.
[[nodiscard]] inline double cheb_eval(int k, double t) {
  if (k == 0) return 1.0;
  if (std::abs(t) <= 1.0) return std::cos(k * std::acos(t));
  const double mag = std::cosh(k * std::acosh(std::abs(t)));
  return (t < 0.0 && (k % 2 != 0)) ? -mag : mag;
}

/// Binomial coefficient, exact for results that fit in 64 bits.
[[nodiscard]] inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
  }
  return static_cast<std::uint64_t>(acc);
}

/// Number of d-tuples of nonnegative integers with sum < n, i.e.
/// sum_{j<n} C(j+d-1, j) = C(n+d-1, d).
[[nodiscard]] inline std::size_t simplex_count(std::size_t d, std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(binomial(n - 1 + d, d));
}

/// Tensor grid of Gauss-Chebyshev (first kind) nodes on [-r, r]^d.
/// Per-axis node i is r cos(pi (i + 1/2) / M), decreasing in i.
struct NodeGrid {
  std::size_t d = 1;
  std::size_t M = 1;
  double r = 1.0;
  std::vector<double> nodes;

  [[nodiscard]] std::size_t size() const {
    std::size_t s = 1;
    for (std::size_t a = 0; a < d; ++a) s *= M;
    return s;
  }
  [[nodiscard]] Shape shape() const { return Shape(d, M); }
  /// Angle theta_i with node_i = r cos(theta_i).
  [[nodiscard]] double angle(std::size_t i) const {
    return std::numbers::pi * (static_cast<double>(i) + 0.5) /
           static_cast<double>(M);
  }
};

[[nodiscard]] inline NodeGrid cheb_nodes(std::size_t d, std::size_t M,
                                         double r) {
  detail::require(d >= 1, "cheb_nodes: dimension must be >= 1");
  detail::require(M >= 1, "cheb_nodes: node count M must be >= 1");
  detail::require(std::isfinite(r) && r > 0.0,
                  "cheb_nodes: half-width r must be > 0");
  NodeGrid g{d, M, r, std::vector<double>(M)};
  // sin form makes the grid exactly antisymmetric and puts the middle node
  // of an odd grid at exactly 0.
  const double m = static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double num = m - 2.0 * static_cast<double>(i) - 1.0;
    g.nodes[i] = r * std::sin(std::numbers::pi * num / (2.0 * m));
  }
  return g;
}

/// Complex samples of a function at every point of a NodeGrid, row-major.
struct NodeSamples {
  NodeGrid grid;
  std::vector<Complex> values;

  /// Coordinates of the flat sample index.
  [[nodiscard]] std::vector<double> point(std::size_t flat) const {
    std::vector<std::size_t> idx(grid.d);
    unravel(flat, grid.shape(), idx);
    std::vector<double> p(grid.d);
    for (std::size_t a = 0; a < grid.d; ++a) p[a] = grid.nodes[idx[a]];
    return p;
  }
};

/// Samples a callable f(std::span<const double>) -> Complex on the grid.
template <class F>
[[nodiscard]] NodeSamples sample_at_nodes(const NodeGrid& grid, F&& f) {
  NodeSamples s{grid, std::vector<Complex>(grid.size())};
  std::vector<std::size_t> idx(grid.d);
  std::vector<double> p(grid.d);
  for (std::size_t flat = 0; flat < s.values.size(); ++flat) {
    unravel(flat, grid.shape(), idx);
    for (std::size_t a = 0; a < grid.d; ++a) p[a] = grid.nodes[idx[a]];
    s.values[flat] = f(std::span<const double>(p));
  }
  return s;
}

/// Chebyshev coefficients a_k over [-r, r]^d truncated to total degree
/// k_1 + ... + k_d < n. Entries are stored densely over the simplex in
/// lexicographic order of the multi-index.
class ChebCoeffs {
 public:
  ChebCoeffs() = default;
  ChebCoeffs(std::size_t d, std::size_t n, double r)
      : d_(d), n_(n), r_(r), values_(simplex_count(d, n)) {
    detail::require(d >= 1, "ChebCoeffs: dimension must be >= 1");
    detail::require(std::isfinite(r) && r > 0.0, "ChebCoeffs: r must be > 0");
    build_indices();
  }

  [[nodiscard]] std::size_t dim() const { return d_; }
  [[nodiscard]] std::size_t order() const { return n_; }
  [[nodiscard]] double half_width() const { return r_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  [[nodiscard]] std::span<const int> multi_index(std::size_t e) const {
    return {indices_.data() + e * d_, d_};
  }
  [[nodiscard]] Complex& value(std::size_t e) { return values_[e]; }
  [[nodiscard]] const Complex& value(std::size_t e) const {
    return values_[e];
  }
  [[nodiscard]] std::span<const Complex> values() const { return values_; }

  /// Flat position of multi-index k, or size() if k is outside the simplex.
  [[nodiscard]] std::size_t rank(std::span<const int> k) const {
    if (k.size() != d_) return size();
    long remaining = static_cast<long>(n_);
    std::size_t pos = 0;
    for (std::size_t j = 0; j < d_; ++j) {
      if (k[j] < 0) return size();
      const std::size_t tail_dim = d_ - j - 1;
      for (int i = 0; i < k[j]; ++i) {
        const long s = remaining - i;
        if (s > 0) pos += simplex_count(tail_dim, static_cast<std::size_t>(s));
      }
      remaining -= k[j];
      if (remaining <= 0) return size();
    }
    return pos;
  }

  [[nodiscard]] Complex at(std::span<const int> k) const {
    const std::size_t e = rank(k);
    return e < size() ? values_[e] : Complex{};
  }

 private:
  void build_indices() {
    indices_.assign(values_.size() * d_, 0);
    std::vector<int> k(d_, 0);
    std::size_t e = 0;
    // Odometer over the simplex sum(k) < n in lexicographic order.
    auto emit = [&](auto&& self, std::size_t axis, long budget) -> void {
      if (axis == d_) {
        for (std::size_t j = 0; j < d_; ++j) indices_[e * d_ + j] = k[j];
        ++e;
        return;
      }
      for (long v = 0; v < budget; ++v) {
        k[axis] = static_cast<int>(v);
        self(self, axis + 1, budget - v);
      }
      k[axis] = 0;
    };
    if (n_ > 0) emit(emit, 0, static_cast<long>(n_));
  }

  std::size_t d_ = 1;
  std::size_t n_ = 0;
  double r_ = 1.0;
  std::vector<Complex> values_;
  std::vector<int> indices_;
};

namespace detail {

/// (rows x M) table of 2^{1[k>0]} cos(k theta_i) / M: one axis of the
/// Gauss-Chebyshev discretization of the coefficient integral.
[[nodiscard]] inline std::vector<double> cosine_table(const NodeGrid& g,
                                                      std::size_t rows) {
  std::vector<double> t(rows * g.M);
  const double inv_m = 1.0 / static_cast<double>(g.M);
  for (std::size_t k = 0; k < rows; ++k) {
    const double scale = (k > 0 ? 2.0 : 1.0) * inv_m;
    for (std::size_t i = 0; i < g.M; ++i) {
      t[k * g.M + i] =
          scale * std::cos(static_cast<double>(k) * g.angle(i));
    }
  }
  return t;
}

inline void check_samples(const NodeSamples& s) {
  require(s.values.size() == s.grid.size(),
          "node samples: expected " + std::to_string(s.grid.size()) +
              " values for the node grid, got " +
              std::to_string(s.values.size()));
  require(s.grid.nodes.size() == s.grid.M,
          "node samples: node list does not match M");
  for (const Complex& v : s.values) {
    require(std::isfinite(v.real()) && std::isfinite(v.imag()),
            "node samples: non-finite value");
  }
}

/// Dense tensor of coefficients with every per-axis degree < rows.
[[nodiscard]] inline std::vector<Complex> dense_coefficients(
    const NodeSamples& s, std::size_t rows) {
  const auto table = cosine_table(s.grid, rows);
  Shape shape = s.grid.shape();
  std::vector<Complex> t = s.values;
  for (std::size_t a = 0; a < s.grid.d; ++a) {
    t = contract_axis<double>(t, shape, a, table, rows);
    shape[a] = rows;
  }
  return t;
}

}  // namespace detail

/// Coefficients a_k for every k with |k| < n from samples at Gauss-Chebyshev
/// nodes. The weighted integral over [-r, r]^d is discretized by M-point
/// Gauss-Chebyshev quadrature per axis:
///   a_k = 2^{#{j : k_j > 0}} / M^d * sum_i w(node_i) prod_j cos(k_j theta_{i_j}).
/// Throws AliasingError when n > M.
[[nodiscard]] inline ChebCoeffs coeffs_from_node_samples(const NodeSamples& s,
                                                         std::size_t n) {
  detail::check_samples(s);
  if (n > s.grid.M) {
    throw AliasingError("aliasing risk: truncation n = " + std::to_string(n) +
                        " exceeds node count M = " + std::to_string(s.grid.M));
  }
  ChebCoeffs out(s.grid.d, n, s.grid.r);
  if (n == 0) return out;
  const auto dense = detail::dense_coefficients(s, n);
  for (std::size_t e = 0; e < out.size(); ++e) {
    const auto k = out.multi_index(e);
    std::size_t flat = 0;
    for (std::size_t j = 0; j < out.dim(); ++j) {
      flat = flat * n + static_cast<std::size_t>(k[j]);
    }
    out.value(e) = dense[flat];
  }
  return out;
}

/// Default node count for truncation order n.
[[nodiscard]] inline std::size_t default_node_count(std::size_t n) {
  return std::max<std::size_t>(4 * n, 32);
}

/// sum_{|k| < n} a_k prod_j T_{k_j}(point_j / r). Valid for points outside
/// [-r, r]^d; returns 0 when n == 0.
[[nodiscard]] inline Complex eval_series(const ChebCoeffs& c,
                                         std::span<const double> point) {
  const std::size_t d = c.dim();
  const std::size_t n = c.order();
  if (n == 0) return {};
  detail::require(point.size() == d, "eval_series: point dimension mismatch");
  std::vector<double> table(d * n);
  for (std::size_t j = 0; j < d; ++j) {
    const double t = point[j] / c.half_width();
    for (std::size_t k = 0; k < n; ++k) {
      table[j * n + k] = cheb_eval(static_cast<int>(k), t);
    }
  }
  Complex sum{};
  for (std::size_t e = 0; e < c.size(); ++e) {
    const auto k = c.multi_index(e);
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      w *= table[j * n + static_cast<std::size_t>(k[j])];
    }
    sum += c.value(e) * w;
  }
  return sum;
}

/// Full tensor Chebyshev interpolant (per-axis degree M - 1) of node samples.
class ChebInterpolant {
 public:
  explicit ChebInterpolant(const NodeSamples& s) : grid_(s.grid) {
    detail::check_samples(s);
    coeffs_ = detail::dense_coefficients(s, s.grid.M);
  }

  [[nodiscard]] const NodeGrid& grid() const { return grid_; }
  [[nodiscard]] std::span<const Complex> dense_coefficients() const {
    return coeffs_;
  }

  /// Evaluates on a tensor product of per-axis coordinate lists. Coordinates
  /// with |x| > r (1 + 1e-12) produce zero rows, so any point with such a
  /// coordinate evaluates to 0.
  [[nodiscard]] std::vector<Complex> eval_tensor(
      const std::vector<std::vector<double>>& axes) const {
    detail::require(axes.size() == grid_.d,
                    "ChebInterpolant: axis count mismatch");
    Shape shape = grid_.shape();
    std::vector<Complex> t = coeffs_;
    for (std::size_t a = 0; a < grid_.d; ++a) {
      const auto& xs = axes[a];
      std::vector<double> mat(xs.size() * grid_.M, 0.0);
      for (std::size_t p = 0; p < xs.size(); ++p) {
        if (!inside(xs[p])) continue;
        const double u = std::clamp(xs[p] / grid_.r, -1.0, 1.0);
        for (std::size_t k = 0; k < grid_.M; ++k) {
          mat[p * grid_.M + k] = cheb_eval(static_cast<int>(k), u);
        }
      }
      t = contract_axis<double>(t, shape, a, mat, xs.size());
      shape[a] = xs.size();
    }
    return t;
  }

  [[nodiscard]] Complex operator()(std::span<const double> point) const {
    std::vector<std::vector<double>> axes;
    for (double x : point) axes.push_back({x});
    return eval_tensor(axes).front();
  }

  [[nodiscard]] bool inside(double x) const {
    return std::abs(x) <= grid_.r * (1.0 + 1e-12);
  }

 private:
  NodeGrid grid_;
  std::vector<Complex> coeffs_;
};

}  // namespace fsynth

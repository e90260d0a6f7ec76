#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsynth/bounds.hpp"
#include "fsynth/chebyshev.hpp"
#include "fsynth/error.hpp"
#include "fsynth/fourier_grid.hpp"
#include "fsynth/plan.hpp"
#include "fsynth/prior.hpp"

namespace fsynth {

/// Frequency grid resolution used by reconstruct; defaults per dimension.
struct ReconstructOptions {
  std::size_t freq_points = 0;  // 0: 257 for d = 1, 129 otherwise

  [[nodiscard]] std::size_t points_for(std::size_t d) const {
    if (freq_points != 0) return freq_points;
    return d == 1 ? 257 : 129;
  }
};

/// Degree-(M-1) tensor Chebyshev interpolant of the node samples evaluated on
/// `grid`; zero at grid points outside [-r, r]^d.
[[nodiscard]] inline Field interpolate_nodes(const NodeSamples& w,
                                             const GridSpec& grid) {
  grid.validate();
  detail::require(grid.dim() == w.grid.d,
                  "interpolate_nodes: dimension mismatch");
  const ChebInterpolant interp(w);
  return Field{grid, interp.eval_tensor(grid.all_axis_coords()), std::nullopt};
}

/// Continuation C_{R,n}[w] sampled on out_grid = [-R, R]^d: the node
/// interpolant inside [-r, r]^d and the total-degree-(< n) Chebyshev series
/// outside it. With n = 0 the outside values are zero.
[[nodiscard]] inline Field extend(const NodeSamples& w, double R, std::size_t n,
                                  const GridSpec& out_grid) {
  detail::check_samples(w);
  const double r = w.grid.r;
  detail::require(std::isfinite(R) && R >= r,
                  "extend: R must be >= r (R = " + std::to_string(R) +
                      ", r = " + std::to_string(r) + ")");
  if (n > w.grid.M) {
    throw AliasingError("aliasing risk: n = " + std::to_string(n) +
                        " exceeds node count M = " + std::to_string(w.grid.M));
  }
  detail::require(w.grid.M >= 4, "extend: need at least 4 nodes per axis");
  out_grid.validate();
  detail::require(out_grid.dim() == w.grid.d, "extend: dimension mismatch");
  for (double h : out_grid.half_width) {
    detail::require(std::abs(h - R) <= 1e-12 * R,
                    "extend: output grid must span [-R, R]^d");
  }

  Field out = interpolate_nodes(w, out_grid);
  if (n == 0) return out;

  const ChebCoeffs coeffs = coeffs_from_node_samples(w, n);
  const double inside = r * (1.0 + 1e-12);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const auto p = out_grid.point(i);
    const bool in_box = std::all_of(p.begin(), p.end(), [&](double x) {
      return std::abs(x) <= inside;
    });
    if (!in_box) out.values[i] = eval_series(coeffs, p);
  }
  return out;
}

/// Pointwise form of C_{R,n}[w], zero outside [-R, R]^d. Agrees with extend
/// at grid points.
class Continuation {
 public:
  Continuation(const NodeSamples& w, double R, std::size_t n)
      : interp_(w), R_(R) {
    detail::require(std::isfinite(R) && R >= w.grid.r, "Continuation: R must be >= r");
    if (n > w.grid.M) {
      throw AliasingError("aliasing risk: n = " + std::to_string(n) +
                          " exceeds node count M = " + std::to_string(w.grid.M));
    }
    if (n > 0) coeffs_.emplace(coeffs_from_node_samples(w, n));
  }

  [[nodiscard]] Complex operator()(std::span<const double> point) const {
    bool in_box = true;
    for (double x : point) {
      if (std::abs(x) > R_ * (1.0 + 1e-12)) return {};
      in_box = in_box && interp_.inside(x);
    }
    if (in_box) return interp_(point);
    return coeffs_ ? eval_series(*coeffs_, point) : Complex{};
  }

 private:
  ChebInterpolant interp_;
  std::optional<ChebCoeffs> coeffs_;
  double R_;
};

/// Naive reconstruction: inverse transform of the data extended by zero
/// outside [-r, r]^d.
[[nodiscard]] inline SpatialField reconstruct_zero_padded(
    const NodeSamples& w, const GridSpec& out_grid,
    ReconstructOptions opts = {}) {
  const GridSpec freq =
      GridSpec::cube(w.grid.d, w.grid.r, opts.points_for(w.grid.d));
  return inverse_transform(interpolate_nodes(w, freq), out_grid);
}

/// F^{-1} C*_{tau,delta}[w] on out_grid (x-space), with the continuation
/// parameters taken from make_plan.
[[nodiscard]] inline SpatialField reconstruct(const NodeSamples& w,
                                              const PriorData& prior,
                                              double tau, double delta,
                                              const GridSpec& out_grid,
                                              ReconstructOptions opts = {}) {
  const Plan plan = make_plan(prior, tau, delta);
  detail::require(prior.d == w.grid.d, "reconstruct: prior dimension mismatch");
  detail::require(std::abs(prior.r - w.grid.r) <= 1e-12 * prior.r,
                  "reconstruct: prior r differs from the node grid half-width");
  out_grid.validate();
  for (double h : out_grid.half_width) {
    detail::require(h >= prior.sigma,
                    "reconstruct: output grid must cover the support ball");
  }
  const GridSpec freq =
      GridSpec::cube(w.grid.d, plan.R, opts.points_for(w.grid.d));
  SpatialField out = inverse_transform(extend(w, plan.R, plan.n, freq), out_grid);
  out.sigma = prior.sigma;
  return out;
}

/// tau on a 64-point grid of [0, 1] minimizing the reconstruction bound.
[[nodiscard]] inline double suggest_tau(const PriorData& prior, double delta) {
  double best_tau = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64; ++i) {
    const double tau = static_cast<double>(i) / 63.0;
    const double total = bound_reconstruction(prior, tau, delta).total;
    if (total < best) {
      best = total;
      best_tau = tau;
    }
  }
  return best_tau;
}

namespace detail {

/// (M x P) matrix of 4-point Lagrange weights taking uniform samples at
/// `xs` to the points `ys`.
[[nodiscard]] inline std::vector<double> cubic_weights(
    const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t P = xs.size();
  std::vector<double> mat(ys.size() * P, 0.0);
  const double h = xs[1] - xs[0];
  for (std::size_t q = 0; q < ys.size(); ++q) {
    const double s = (ys[q] - xs[0]) / h;
    std::size_t base = 0;
    if (P >= 4) {
      const long j = static_cast<long>(std::floor(s)) - 1;
      base = static_cast<std::size_t>(
          std::clamp(j, 0L, static_cast<long>(P) - 4));
    }
    const std::size_t width = std::min<std::size_t>(P, 4);
    for (std::size_t a = 0; a < width; ++a) {
      double l = 1.0;
      for (std::size_t b = 0; b < width; ++b) {
        if (a == b) continue;
        l *= (ys[q] - xs[base + b]) / (xs[base + a] - xs[base + b]);
      }
      mat[q * P + base + a] = l;
    }
  }
  return mat;
}

}  // namespace detail

/// Resamples uniform-grid data on [-r, r]^d to M Chebyshev nodes per axis by
/// tensor cubic interpolation. The interpolation error must be folded into
/// the noise level by the caller.
[[nodiscard]] inline NodeSamples resample_to_nodes(const Field& w,
                                                   std::size_t M) {
  w.validate();
  const double r = w.grid.half_width[0];
  for (double h : w.grid.half_width) {
    detail::require(std::abs(h - r) <= 1e-12 * r,
                    "resample_to_nodes: data box must be a cube [-r, r]^d");
  }
  NodeSamples out{cheb_nodes(w.grid.dim(), M, r), {}};
  Shape shape = w.grid.points;
  std::vector<Complex> t = w.values;
  for (std::size_t a = 0; a < w.grid.dim(); ++a) {
    const auto mat = detail::cubic_weights(w.grid.axis_coords(a),
                                           out.grid.nodes);
    t = contract_axis<double>(t, shape, a, mat, M);
    shape[a] = M;
  }
  out.values = std::move(t);
  return out;
}

}  // namespace fsynth

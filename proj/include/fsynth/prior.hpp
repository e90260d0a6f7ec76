#pragma once

#include <cmath>
#include <cstddef>

#include "fsynth/error.hpp"

namespace fsynth {

/// A-priori constants of the reconstruction problem.
///
/// The unknown v satisfies ||v||_{L1} <= (2 pi)^d N and is supported in the
/// l1-ball sum |x_j| <= sigma; its transform is given on [-r, r]^d. When the
/// smoothness order m is positive, |v|_{H^m} <= gamma.
struct PriorData {
  std::size_t d = 1;
  double N = 1.0;
  double sigma = 1.0;
  double r = 1.0;
  int m = 0;
  double gamma = 0.0;

  void validate() const {
    detail::require(d >= 1 && d <= 3, "prior: dimension must be 1, 2 or 3");
    detail::require(std::isfinite(N) && N > 0.0, "prior: N must be > 0");
    detail::require(std::isfinite(sigma) && sigma > 0.0,
                    "prior: sigma must be > 0");
    detail::require(std::isfinite(r) && r > 0.0, "prior: r must be > 0");
    detail::require(m >= 0, "prior: m must be >= 0");
    if (m >= 1) {
      detail::require(std::isfinite(gamma) && gamma > 0.0,
                      "prior: gamma must be > 0 when m >= 1");
    }
  }
};

}  // namespace fsynth

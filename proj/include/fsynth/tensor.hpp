#pragma once

// Dense row-major tensor helpers shared by the Chebyshev and Fourier code.
// Axis 0 is the slowest-varying index.

#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace fsynth {

using Complex = std::complex<double>;
using Shape = std::vector<std::size_t>;

[[nodiscard]] inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>{});
}

/// Splits a flat row-major index into per-axis indices.
inline void unravel(std::size_t flat, const Shape& shape,
                    std::span<std::size_t> out) {
  for (std::size_t a = shape.size(); a-- > 0;) {
    out[a] = flat % shape[a];
    flat /= shape[a];
  }
}

/// Applies a (P x K) matrix along one axis of a tensor whose extent on that
/// axis is K. The result has extent P on that axis. Summation order is fixed
/// so results are bitwise reproducible.
template <class MatScalar>
[[nodiscard]] std::vector<Complex> contract_axis(
    std::span<const Complex> in, const Shape& shape, std::size_t axis,
    std::span<const MatScalar> mat, std::size_t rows) {
  const std::size_t cols = shape[axis];
  std::size_t outer = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  std::size_t inner = 1;
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];

  std::vector<Complex> out(outer * rows * inner, Complex{});
  for (std::size_t o = 0; o < outer; ++o) {
    const Complex* src = in.data() + o * cols * inner;
    Complex* dst = out.data() + o * rows * inner;
    for (std::size_t p = 0; p < rows; ++p) {
      Complex* drow = dst + p * inner;
      const MatScalar* mrow = mat.data() + p * cols;
      for (std::size_t k = 0; k < cols; ++k) {
        const MatScalar c = mrow[k];
        if (c == MatScalar{}) continue;
        const Complex* srow = src + k * inner;
        for (std::size_t i = 0; i < inner; ++i) drow[i] += c * srow[i];
      }
    }
  }
  return out;
}

}  // namespace fsynth

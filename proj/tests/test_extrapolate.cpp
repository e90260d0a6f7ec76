#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "fsynth/exhibits.hpp"
#include "fsynth/extrapolate.hpp"
#include "fsynth/harness.hpp"

using namespace fsynth;

namespace {

double sup_diff(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    s = std::max(s, std::abs(a.values[i] - b.values[i]));
  }
  return s;
}

}  // namespace

TEST(Extend, ZeroOrderLeavesOutsideEmpty) {
  const SuiteMember m = suite_member(1, "bump_centered");
  const NodeSamples w = m.fn.node_data(cheb_nodes(1, 32, 1.0));
  const GridSpec g = GridSpec::cube(1, 3.0, 61);
  const Field f = extend(w, 3.0, 0, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    if (std::abs(x) > 1.0 + 1e-12) {
      EXPECT_EQ(f.values[i], Complex{}) << x;
    } else {
      EXPECT_LE(std::abs(f.values[i] - m.fn.transform(std::span<const double>(&x, 1))),
                1e-14);
    }
  }
}

TEST(Extend, LinearDataContinuesExactly) {
  // w = xi / r = T_1(xi / r); the continuation is the same line on [-R, R].
  const NodeSamples w = sample_at_nodes(
      cheb_nodes(1, 16, 0.5), [](std::span<const double> x) { return Complex(x[0] / 0.5); });
  const GridSpec g = GridSpec::cube(1, 2.0, 41);
  const Field f = extend(w, 2.0, 3, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(f.values[i].real(), g.coord(0, i) / 0.5, 1e-12);
    EXPECT_NEAR(f.values[i].imag(), 0.0, 1e-12);
  }
}

TEST(Extend, Validation) {
  const NodeSamples w = sample_at_nodes(cheb_nodes(1, 8, 1.0),
                                        [](std::span<const double>) { return Complex(1.0); });
  EXPECT_THROW((void)extend(w, 0.5, 2, GridSpec::cube(1, 0.5, 9)), ValidationError);
  EXPECT_THROW((void)extend(w, 2.0, 9, GridSpec::cube(1, 2.0, 9)), AliasingError);
  EXPECT_THROW((void)extend(w, 2.0, 4, GridSpec::cube(1, 1.5, 9)), ValidationError);
}

TEST(Extend, IndicatorWithinLemmaEstimate) {
  const SuiteMember m = suite_member(1, "indicator");
  const double r = 4.0, R = 8.0, rho = 8.0;
  const std::size_t n = 24;
  const NodeSamples w = m.fn.node_data(cheb_nodes(1, 96, r));
  const GridSpec g = GridSpec::cube(1, R, 1025);
  const double err = sup_diff(extend(w, R, n, g), m.fn.sample_transform(g));
  const double delta = effective_delta(m.fn, w);
  const double bound = bound_lemma21(m.prior(r), delta, R, rho, n);
  EXPECT_LE(err, bound);
  EXPECT_LE(err, 1e-2);
}

TEST(Extend, Linearity) {
  const SuiteMember a = suite_member(2, "bump2");
  const SuiteMember b = suite_member(2, "bump2_modulated");
  const NodeGrid nodes = cheb_nodes(2, 24, 1.0);
  const NodeSamples wa = a.fn.node_data(nodes), wb = b.fn.node_data(nodes);
  NodeSamples mix = wa;
  const Complex ca(1.5, -0.5), cb(-2.0, 0.25);
  for (std::size_t i = 0; i < mix.values.size(); ++i) {
    mix.values[i] = ca * wa.values[i] + cb * wb.values[i];
  }
  const GridSpec g = GridSpec::cube(2, 1.6, 33);
  const Field fa = extend(wa, 1.6, 10, g), fb = extend(wb, 1.6, 10, g),
              fm = extend(mix, 1.6, 10, g);
  const double scale = std::max(sup_norm(fm), 1e-300);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_LE(std::abs(fm.values[i] - (ca * fa.values[i] + cb * fb.values[i])),
              1e-10 * scale);
  }
}

TEST(Continuation, AgreesWithExtendOnGrid) {
  const SuiteMember m = suite_member(2, "bump2_shifted");
  const NodeSamples w = m.fn.node_data(cheb_nodes(2, 20, 0.8));
  const GridSpec g = GridSpec::cube(2, 1.4, 15);
  const Field f = extend(w, 1.4, 8, g);
  const Continuation c(w, 1.4, 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_LE(std::abs(c(g.point(i)) - f.values[i]), 1e-14 * (1.0 + std::abs(f.values[i])));
  }
  const double far[2] = {1.5, 0.0};
  EXPECT_EQ(c(far), Complex{});
}

TEST(Reconstruct, TauZeroIsTheZeroPaddedInverse) {
  for (std::size_t d : {1u, 2u}) {
    const SuiteMember m = standard_suite(d).front();
    const double r = 0.7;
    const NodeSamples w = m.fn.node_data(cheb_nodes(d, 24, r));
    const GridSpec xg = GridSpec::cube(d, m.sigma + 0.25, d == 1 ? 128 : 32);
    const SpatialField a = reconstruct(w, m.prior(r, 1), 0.0, 1e-8, xg);
    const SpatialField z = reconstruct_zero_padded(w, xg);
    ASSERT_EQ(a.values.size(), z.values.size());
    EXPECT_EQ(std::memcmp(a.values.data(), z.values.data(),
                          a.values.size() * sizeof(Complex)),
              0);
  }
}

TEST(Reconstruct, BumpErrorWithinEstimate) {
  const SuiteMember m = suite_member(1, "bump");
  const double r = 0.05;
  const NodeSamples exact = m.fn.node_data(cheb_nodes(1, 128, r));
  const NodeSamples w = inject_noise(exact, 1e-9, NoiseMode::worst, 3);
  const double delta = effective_delta(m.fn, w);
  const PriorData prior = m.prior(r, 1);
  const Plan plan = make_plan(prior, 0.5, delta);
  EXPECT_GT(plan.L, 1.0);
  EXPECT_GT(plan.n, 0u);
  const double err = reconstruction_error_l2(m.fn, w, plan.R, plan.n);
  const double naive = reconstruction_error_l2(m.fn, w, r, 0);
  EXPECT_LE(err, bound_reconstruction(prior, 0.5, delta).total);
  EXPECT_LT(err, naive);

  // Spatial-domain check on the support: the reconstruction is close to v.
  const GridSpec xg = m.default_grid();
  const SpatialField rec = reconstruct(w, prior, 0.5, delta, xg);
  SpatialField diff = rec;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= m.samples.values[i];
  EXPECT_LE(l2_norm(diff), bound_reconstruction(prior, 0.5, delta).total);
}

TEST(Reconstruct, RejectsMismatchedPrior) {
  const SuiteMember m = suite_member(1, "bump");
  const NodeSamples w = m.fn.node_data(cheb_nodes(1, 32, 1.0));
  const GridSpec xg = m.default_grid();
  EXPECT_THROW((void)reconstruct(w, m.prior(2.0, 1), 0.5, 1e-8, xg), ValidationError);
  EXPECT_THROW((void)reconstruct(w, m.prior(1.0, 1), 0.5, 1e-8, GridSpec::cube(1, 1.0, 64)),
               ValidationError);
}

TEST(SuggestTau, MinimizesTheEstimate) {
  const SuiteMember m = suite_member(1, "bump");
  const PriorData p = m.prior(0.1, 2);
  const double tau = suggest_tau(p, 1e-10);
  const double best = bound_reconstruction(p, tau, 1e-10).total;
  for (int i = 0; i < 64; ++i) {
    EXPECT_LE(best, bound_reconstruction(p, i / 63.0, 1e-10).total);
  }
}

TEST(Resample, CubicOnUniformGrid) {
  const Field u = Field::sample(GridSpec::cube(1, 1.0, 401), [](std::span<const double> x) {
    return Complex(std::cos(2.0 * x[0]), x[0] * x[0]);
  });
  const NodeSamples w = resample_to_nodes(u, 33);
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double x = w.grid.nodes[i];
    EXPECT_LE(std::abs(w.values[i] - Complex(std::cos(2.0 * x), x * x)), 1e-9);
  }
  const Field rect{GridSpec{{1.0, 2.0}, {5, 5}}, std::vector<Complex>(25), std::nullopt};
  EXPECT_THROW((void)resample_to_nodes(rect, 8), ValidationError);
}

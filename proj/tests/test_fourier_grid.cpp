#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fsynth/exhibits.hpp"
#include "fsynth/fourier_grid.hpp"
#include "support/oracles.hpp"

using namespace fsynth;

namespace {

constexpr double kPi = std::numbers::pi;

SpatialField indicator_on(double half_box, std::size_t points) {
  return SpatialField::sample(GridSpec::cube(1, half_box, points),
                              [](std::span<const double> x) {
                                return Complex(std::abs(x[0]) <= 1.0 ? 1.0 : 0.0);
                              });
}

double rel_l2_diff(const SpatialField& a, const SpatialField& b) {
  SpatialField e = a;
  for (std::size_t i = 0; i < e.values.size(); ++i) e.values[i] -= b.values[i];
  return l2_norm(e) / l2_norm(a);
}

/// Si(x) = \int_0^x sin t / t dt.
double sine_integral(double x) {
  return oracle::integrate(
             [](double t) { return Complex(t == 0.0 ? 1.0 : std::sin(t) / t); },
             0.0, x)
      .real();
}

}  // namespace

TEST(GridSpec, CoordinatesAndValidation) {
  const GridSpec g = GridSpec::cube(2, 1.5, 7);
  EXPECT_EQ(g.size(), 49u);
  EXPECT_EQ(g.coord(0, 0), -1.5);
  EXPECT_EQ(g.coord(0, 6), 1.5);
  EXPECT_EQ(g.coord(1, 3), 0.0);
  EXPECT_DOUBLE_EQ(g.spacing(0) * 6.0, 3.0);
  EXPECT_THROW(GridSpec::cube(1, 1.0, 1).validate(), ValidationError);
  EXPECT_THROW(GridSpec::cube(1, 0.0, 5).validate(), ValidationError);
  EXPECT_THROW(GridSpec::cube(4, 1.0, 5).validate(), ValidationError);
}

TEST(Norms, ConstantAndSingleSample) {
  SpatialField c = SpatialField::sample(GridSpec::cube(2, 1.0, 11),
                                        [](std::span<const double>) { return Complex(3.0); });
  EXPECT_DOUBLE_EQ(sup_norm(c), 3.0);
  EXPECT_NEAR(l2_norm(c), 3.0 * std::sqrt(4.0), 1e-13);

  SpatialField s = SpatialField::zeros(GridSpec::cube(1, 1.0, 9));
  s.values[4] = Complex(0.0, -2.5);
  EXPECT_DOUBLE_EQ(sup_norm(s), 2.5);
}

TEST(Forward, IndicatorAtZeroAndPi) {
  const SpatialField v = indicator_on(2.0, 4001);
  const Field w = forward_transform(v, GridSpec{{kPi}, {3}});
  // xi = -pi, 0, pi
  EXPECT_NEAR(w.values[1].real(), 1.0 / kPi, 1e-3);
  EXPECT_NEAR(std::abs(w.values[2]), 0.0, 1e-3);
}

TEST(Forward, ZeroFieldAndSupportWarning) {
  const SpatialField z = SpatialField::zeros(GridSpec::cube(1, 1.0, 33));
  TransformStatus st = TransformStatus::support_warning;
  const Field w = forward_transform(z, GridSpec::cube(1, 3.0, 17), &st);
  EXPECT_EQ(st, TransformStatus::ok);
  for (const auto& x : w.values) EXPECT_EQ(x, Complex{});

  const SpatialField wide = indicator_on(1.0, 65);
  (void)forward_transform(wide, GridSpec::cube(1, 3.0, 17), &st);
  EXPECT_EQ(st, TransformStatus::support_warning);
}

TEST(Forward, RejectsNonFinite) {
  SpatialField v = SpatialField::zeros(GridSpec::cube(1, 1.0, 5));
  v.values[2] = Complex(NAN, 0.0);
  EXPECT_THROW((void)forward_transform(v, GridSpec::cube(1, 1.0, 5)), ValidationError);
}

TEST(Forward, MatchesAdaptiveQuadratureOnBump) {
  const SuiteMember m = suite_member(1, "bump_modulated");
  const GridSpec out = GridSpec::cube(1, 12.0, 25);
  const Field w = forward_transform(m.samples, out);
  for (std::size_t i = 0; i < out.points[0]; ++i) {
    const Complex want = oracle::factor_transform(m.fn.factors[0], out.coord(0, i));
    EXPECT_LE(std::abs(w.values[i] - want), 1e-12) << out.coord(0, i);
  }
}

TEST(Forward, LinearityAndModulation) {
  const SuiteMember a = suite_member(1, "bump_centered");
  const SuiteMember b = suite_member(1, "bump_scaled");
  const GridSpec xg = a.default_grid();
  const SpatialField va = a.fn.sample(xg);
  const SpatialField vb = b.fn.sample(xg);
  SpatialField mix = va;
  for (std::size_t i = 0; i < mix.values.size(); ++i) {
    mix.values[i] = 2.0 * va.values[i] - Complex(0, 3) * vb.values[i];
  }
  const GridSpec out = GridSpec::cube(1, 20.0, 81);
  const Field fa = forward_transform(va, out), fb = forward_transform(vb, out),
              fm = forward_transform(mix, out);
  const double scale = sup_norm(fm);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_LE(std::abs(fm.values[i] - (2.0 * fa.values[i] - Complex(0, 3) * fb.values[i])),
              1e-12 * scale);
  }

  // v(x) e^{i xi0 x} transforms to the xi0-shift of F v.
  const double xi0 = 2.0;
  SpatialField mod = va;
  for (std::size_t i = 0; i < mod.values.size(); ++i) {
    mod.values[i] *= std::polar(1.0, xi0 * xg.coord(0, i));
  }
  const Field shifted = forward_transform(va, GridSpec{{20.0}, {81}});
  const Field fmod = forward_transform(mod, GridSpec{{20.0}, {81}});
  // grid spacing 0.5, so xi + 2 is four samples to the right
  for (std::size_t i = 0; i + 4 < 81; ++i) {
    EXPECT_LE(std::abs(fmod.values[i] - shifted.values[i + 4]), 1e-12 * scale);
  }
}

TEST(Inverse, ZeroAndSincPartialInverse) {
  const Field z = Field::zeros(GridSpec::cube(1, 2.0, 9));
  for (const auto& x : inverse_transform(z, GridSpec::cube(1, 1.0, 5)).values) {
    EXPECT_EQ(x, Complex{});
  }

  const double K = 80.0;
  const Field w = Field::sample(GridSpec::cube(1, K, 16001), [](std::span<const double> xi) {
    return Complex(xi[0] == 0.0 ? 1.0 / kPi : std::sin(xi[0]) / (kPi * xi[0]));
  });
  const GridSpec xs = GridSpec::cube(1, 0.8, 17);
  const SpatialField u = inverse_transform(w, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs.coord(0, i);
    const double partial = (sine_integral(K * (1 + x)) + sine_integral(K * (1 - x))) / kPi;
    EXPECT_NEAR(u.values[i].real(), 1.0, 0.05) << x;
    EXPECT_NEAR(u.values[i].real(), partial, 1e-4) << x;
  }
}

TEST(Inverse, RoundTripOnBump) {
  const SuiteMember m = suite_member(1, "bump");
  const SpatialField v = m.fn.sample(GridSpec::cube(1, 2.25, 512));
  const Field w = forward_transform(v, GridSpec::cube(1, 160.0, 1281));
  EXPECT_LE(rel_l2_diff(v, inverse_transform(w, v.grid)), 1e-6);
}

TEST(Inverse, RoundTripConvergesBetweenResolutions) {
  for (std::size_t d : {1u, 2u}) {
    for (const auto& m : standard_suite(d)) {
      if (!m.fn.smooth()) continue;
      const double e0 =
          rel_l2_diff(m.samples, inverse_transform(forward_transform(m.samples, m.transform_grid(0)),
                                                   m.samples.grid));
      const double e1 =
          rel_l2_diff(m.samples, inverse_transform(forward_transform(m.samples, m.transform_grid(1)),
                                                   m.samples.grid));
      EXPECT_GE(e0 / e1, 4.0) << m.name;
    }
  }
}

TEST(Parseval, BumpAndGuards) {
  const SuiteMember m = suite_member(1, "bump");
  const SpatialField v = m.fn.sample(GridSpec::cube(1, 2.25, 512));
  const Field w = forward_transform(v, GridSpec::cube(1, 60.0, 961));
  const double res = parseval_residual(v, w);
  EXPECT_LE(res, 1e-4);

  SpatialField av = v;
  Field aw = w;
  for (auto& x : av.values) x *= 7.5;
  for (auto& x : aw.values) x *= 7.5;
  EXPECT_NEAR(parseval_residual(av, aw), res, 1e-12);

  EXPECT_THROW((void)parseval_residual(SpatialField::zeros(v.grid), w), ValidationError);
}

TEST(Sobolev, BumpDerivativeAgainstFiniteDifferences) {
  const SpatialField g = SpatialField::sample(GridSpec::cube(1, 2.5, 2049),
                                              [](std::span<const double> x) {
                                                return Complex(bump_g(x[0]));
                                              });
  EXPECT_NEAR(sobolev_seminorm(g, 1), oracle::bump_derivative_l2_fd(), 1e-8);
}

TEST(Sobolev, ZeroAndGuards) {
  const SpatialField z = SpatialField::zeros(GridSpec::cube(1, 1.0, 33));
  EXPECT_EQ(sobolev_seminorm(z, 2), 0.0);
  EXPECT_THROW((void)sobolev_seminorm(z, 0), ValidationError);
  const SpatialField coarse = SpatialField::zeros(GridSpec::cube(1, 1.0, 5));
  EXPECT_THROW((void)sobolev_seminorm(coarse, 2), ValidationError);
}

TEST(Sobolev, ScalingIdentity) {
  // alpha beta^d v(beta x) has seminorm alpha beta^{m + d/2} |v|_{H^m}.
  const double alpha = 1.7, beta = 1.6;
  for (int m : {1, 2, 3}) {
    const double base = sobolev_seminorm(
        SpatialField::sample(GridSpec::cube(1, 2.5, 2049),
                             [](std::span<const double> x) { return Complex(bump_g(x[0])); }),
        m);
    const double scaled = sobolev_seminorm(
        SpatialField::sample(GridSpec::cube(1, 2.5 / beta, 2049),
                             [&](std::span<const double> x) {
                               return Complex(alpha * beta * bump_g(beta * x[0]));
                             }),
        m);
    EXPECT_NEAR(scaled / base, alpha * std::pow(beta, m + 0.5), 1e-8 * scaled / base) << m;
  }
}

TEST(Support, FlagsSamplesOutsideBall) {
  const SuiteMember m = suite_member(2, "bump2_shifted");
  EXPECT_EQ(support_violations(m.samples, m.sigma), 0u);
  EXPECT_GT(support_violations(m.samples, 0.5 * m.sigma), 0u);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "finslerlab/scurvature.hpp"
#include "spaces.hpp"

using namespace finslerlab;
using testing_support::catalog_space;

namespace {

using Vec = std::vector<double>;

double max_abs_s(const RandersSpace& s, const Measure& m, int probes) {
  const auto F = s.finsler();
  double worst = 0.0;
  for (const auto& p : make_probes(s.chart(), probes)) worst = std::max(worst, std::abs(s_curvature(F, m, p.x, p.v)));
  return worst;
}

}  // namespace

TEST(Measures, KindNames) {
  EXPECT_EQ(parse_measure_kind("bh"), MeasureKind::busemann_hausdorff);
  EXPECT_EQ(parse_measure_kind("busemann-hausdorff"), MeasureKind::busemann_hausdorff);
  EXPECT_EQ(parse_measure_kind("riemannian-volume"), MeasureKind::riemannian_volume);
  EXPECT_EQ(parse_measure_kind("lebesgue"), MeasureKind::lebesgue);
  EXPECT_EQ(parse_measure_kind("custom"), MeasureKind::custom);
  EXPECT_FALSE(parse_measure_kind("holmes-thompson").has_value());
  EXPECT_EQ(to_string(MeasureKind::riemannian_volume), "riemannian-volume");
}

TEST(Measures, Densities) {
  const auto polar = catalog_space("polar-riemannian");
  EXPECT_NEAR(riemannian_volume_density(polar, Vec{1.5, 0.2}), 1.5, 1e-15);
  EXPECT_NEAR(Measure::riemannian_volume(polar).density(Vec{0.7, 0.0}), 0.7, 1e-15);
  const auto fc = catalog_space("flat-const");
  EXPECT_NEAR(Measure::busemann_hausdorff(fc).density(Vec{0.1, 0.1}), std::pow(0.75, 1.5), 1e-15);
  EXPECT_EQ(Measure::lebesgue().density(Vec{0.1, 0.1}), 1.0);
  EXPECT_NEAR(Measure::busemann_hausdorff(fc).scaled(2.7).density(Vec{0.0, 0.0}), 2.7 * std::pow(0.75, 1.5), 1e-15);
  EXPECT_THROW(Measure::lebesgue().scaled(0.0), std::invalid_argument);
}

TEST(Measures, LogDerivativeNeedsPositiveDensity) {
  const auto m = Measure::custom(ScalarField::parse("x1", {"x1", "x2"}));
  EXPECT_NEAR(m.log_derivative(Vec{0.5, 0.0}, Vec{1.0, 3.0}), 2.0, 1e-15);
  EXPECT_THROW(m.log_derivative(Vec{-0.5, 0.0}, Vec{1.0, 0.0}), DomainError);
}

TEST(UnitBall, Volumes) {
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(4), std::numbers::pi * std::numbers::pi / 2.0, 1e-14);
}

TEST(SCurvature, NonKillingFlatValues) {
  const auto s = catalog_space("flat-nonkilling");
  const auto F = s.finsler();
  const Vec x{0.5, 0.0}, v{1.0, 0.0};
  EXPECT_NEAR(s_curvature(F, Measure::busemann_hausdorff(s), x, v), 0.75, 1e-12);
  EXPECT_NEAR(s_curvature(F, Measure::lebesgue(), x, v), 0.5, 1e-12);
  EXPECT_EQ(s_curvature(F, Measure::lebesgue(), x, Vec{0.0, 0.0}), 0.0);
}

TEST(SCurvature, VanishesForBusemannHausdorffWhenTheFormQualifies) {
  for (const char* name : {"euclidean2", "flat-const", "polar-riemannian", "sphere-hopf"}) {
    const auto s = catalog_space(name);
    EXPECT_LT(max_abs_s(s, Measure::busemann_hausdorff(s), 30), 1e-9) << name;
  }
}

TEST(SCurvature, NonzeroForEveryStandardMeasureOtherwise) {
  for (const char* name : {"flat-nonkilling", "rotational-killing"}) {
    const auto s = catalog_space(name);
    for (const auto& m : {Measure::busemann_hausdorff(s), Measure::riemannian_volume(s), Measure::lebesgue()}) {
      EXPECT_GT(max_abs_s(s, m, 30), 0.05) << name << " " << m.label();
    }
  }
}

TEST(SCurvature, RiemannianVolumeOfARiemannianMetric) {
  const auto s = catalog_space("polar-riemannian");
  EXPECT_LT(max_abs_s(s, Measure::riemannian_volume(s), 30), 1e-10);
  // Lebesgue in polar coordinates is not the area form
  EXPECT_GT(max_abs_s(s, Measure::lebesgue(), 30), 0.1);
}

TEST(SCurvature, PositivelyHomogeneous) {
  const auto s = catalog_space("rotational-killing");
  const auto F = s.finsler();
  const auto m = Measure::busemann_hausdorff(s);
  for (const auto& p : make_probes(s.chart(), 20)) {
    const double base = s_curvature(F, m, p.x, p.v);
    for (double c : {0.5, 3.0}) {
      Vec w = p.v;
      for (auto& e : w) e *= c;
      EXPECT_NEAR(s_curvature(F, m, p.x, w), c * base, 1e-9 * (1.0 + std::abs(c * base)));
    }
  }
}

TEST(SCurvature, MeasureChanges) {
  const auto s = catalog_space("flat-nonkilling");
  const auto F = s.finsler();
  const auto bh = Measure::busemann_hausdorff(s);
  const auto scaled = bh.scaled(2.7);
  const auto tilted = bh.times(ScalarField::parse("exp(x1)", {"x1", "x2"}));
  EXPECT_EQ(tilted.kind(), MeasureKind::custom);
  for (const auto& p : make_probes(s.chart(), 20)) {
    const double base = s_curvature(F, bh, p.x, p.v);
    EXPECT_NEAR(s_curvature(F, scaled, p.x, p.v), base, 1e-12);
    EXPECT_NEAR(s_curvature(F, tilted, p.x, p.v), base - p.v[0], 1e-10);
  }
}

TEST(Transport, AgreesWithTheFormula) {
  for (const char* name : {"flat-nonkilling", "rotational-killing", "sphere-hopf", "polar-riemannian"}) {
    const auto s = catalog_space(name);
    const auto F = s.finsler();
    for (const auto& m : {Measure::busemann_hausdorff(s), Measure::lebesgue()}) {
      for (const auto& p : make_probes(s.chart(), 8)) {
        const double formula = s_curvature(F, m, p.x, p.v);
        const double transport = s_curvature_transport(F, m, p.x, p.v);
        EXPECT_NEAR(transport, formula, 1e-5) << name << " " << m.label();
      }
    }
  }
}

TEST(Transport, NonKillingExample) {
  const auto s = catalog_space("flat-nonkilling");
  EXPECT_NEAR(s_curvature_transport(s.finsler(), Measure::busemann_hausdorff(s), Vec{0.5, 0.0}, Vec{1.0, 0.0}), 0.75,
              1e-9);
}

TEST(Transport, ReportsLeavingTheChart) {
  const auto s = catalog_space("flat-nonkilling");
  TransportOptions opt;
  opt.h = 0.5;
  EXPECT_THROW(s_curvature_transport(s.finsler(), Measure::lebesgue(), Vec{1.99, 0.0}, Vec{1.0, 0.0}, opt),
               DomainError);
  opt.h = 0.0;
  EXPECT_THROW(s_curvature_transport(s.finsler(), Measure::lebesgue(), Vec{0.0, 0.0}, Vec{1.0, 0.0}, opt),
               std::invalid_argument);
}

TEST(MonteCarlo, EuclideanDensityIsOne) {
  const auto s = catalog_space("euclidean2");
  const auto est = bh_density_monte_carlo(s, Vec{0.0, 0.0}, 200'000, 11);
  EXPECT_NEAR(est.density, 1.0, 4.0 * est.std_error);
  EXPECT_EQ(est.samples, 200'000u);
  EXPECT_EQ(est.workers, 4);
}

TEST(MonteCarlo, FlatRandersWithinOnePercent) {
  const auto s = catalog_space("flat-const");
  const auto est = bh_density_monte_carlo(s, Vec{0.0, 0.0}, 1'000'000, kDefaultSeed);
  const double exact = std::pow(0.75, 1.5);
  EXPECT_LT(std::abs(est.density - exact) / exact, 0.01);
  EXPECT_LT(std::abs(est.density - exact), 4.0 * est.std_error);
}

TEST(MonteCarlo, SphereWithinOnePercent) {
  const auto s = catalog_space("sphere-hopf");
  const Vec x{0.3, -0.4, 0.2};
  const auto est = bh_density_monte_carlo(s, x, 1'000'000, kDefaultSeed);
  const double exact = bh_density_closed_form(s, x);
  EXPECT_LT(std::abs(est.density - exact) / exact, 0.01);
}

TEST(MonteCarlo, DeterministicPerSeed) {
  const auto s = catalog_space("flat-const");
  const auto a = bh_density_monte_carlo(s, Vec{0.0, 0.0}, 20'000, 5);
  const auto b = bh_density_monte_carlo(s, Vec{0.0, 0.0}, 20'000, 5);
  const auto c = bh_density_monte_carlo(s, Vec{0.0, 0.0}, 20'000, 6);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.density, b.density);
  EXPECT_NE(a.hits, c.hits);
}

TEST(MonteCarlo, RejectsTooFewSamples) {
  const auto s = catalog_space("flat-const");
  EXPECT_THROW(bh_density_monte_carlo(s, Vec{0.0, 0.0}, 1000, 1), std::invalid_argument);
  EXPECT_THROW(bh_density_monte_carlo(s, Vec{0.0, 0.0}, 20'000, 1, 0), std::invalid_argument);
}

TEST(Uniqueness, ConstantMultiplesOnly) {
  const auto fc = catalog_space("flat-const");
  const auto F = fc.finsler();
  const auto probes = make_probes(fc.chart(), 30);
  const auto bh = Measure::busemann_hausdorff(fc);

  const auto same = measure_uniqueness_check(F, bh, bh.scaled(2.7), probes, 1e-8);
  EXPECT_TRUE(same.both_vanishing);
  EXPECT_TRUE(same.consistent);
  EXPECT_LT(same.ratio_spread, 1e-12);

  const auto tilted = measure_uniqueness_check(F, bh, bh.times(ScalarField::parse("exp(x1)", {"x1", "x2"})), probes,
                                               1e-8);
  EXPECT_FALSE(tilted.both_vanishing);
  EXPECT_GT(tilted.max_s_second, 0.1);

  // on a Riemannian space the Riemannian volume and BH agree exactly
  const auto e = catalog_space("euclidean2");
  const auto r = measure_uniqueness_check(e.finsler(), Measure::riemannian_volume(e), Measure::busemann_hausdorff(e),
                                          make_probes(e.chart(), 30), 1e-8);
  EXPECT_TRUE(r.both_vanishing);
  EXPECT_LT(r.ratio_spread, 1e-14);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fd_oracle.hpp"
#include "finslerlab/finsler.hpp"
#include "finslerlab/probes.hpp"
#include "randers_oracle.hpp"
#include "spaces.hpp"

using namespace finslerlab;
using testing_support::catalog_space;
using testing_support::flat_space;

namespace {

using Vec = std::vector<double>;

double max_entry(const Tensor3<double>& t) {
  double m = 0.0;
  const int n = t.extent();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(t(i, j, k)));
    }
  }
  return m;
}

}  // namespace

TEST(Chart, ValidatesDimensionAndIntervals) {
  EXPECT_THROW(CoordinateChart({"x1"}, {{0, 1}}), InvalidSpace);
  EXPECT_THROW(CoordinateChart({"x1", "x2"}, {{0, 1}}), InvalidSpace);
  EXPECT_THROW(CoordinateChart({"x1", "x2"}, {{0, 1}, {1, 1}}), InvalidSpace);
  const CoordinateChart c({"x1", "x2"}, {{0, 1}, {-1, 1}});
  EXPECT_TRUE(c.contains(Vec{0.5, 0.0}));
  EXPECT_FALSE(c.contains(Vec{0.0, 0.0}));  // open box
  EXPECT_FALSE(c.contains(Vec{0.5}));
}

TEST(FundamentalTensor, EuclideanIsIdentity) {
  const auto F = catalog_space("euclidean2").finsler();
  for (const auto& p : make_probes(F.chart(), 20)) {
    EXPECT_LT(max_abs_difference(fundamental_tensor(F, p.x, p.v), Matrix<double>::identity(2)), 1e-14);
  }
}

TEST(FundamentalTensor, FlatRandersAlongTheFormDirection) {
  const auto F = catalog_space("flat-const").finsler();
  const Vec x{0.0, 0.0}, v{1.0, 0.0};
  const auto g = fundamental_tensor(F, x, v);
  EXPECT_NEAR(g(0, 0), 2.25, 1e-14);
  EXPECT_NEAR(g(1, 1), 1.5, 1e-14);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-14);
  EXPECT_NEAR(quadratic_form<double>(g, v, v), 2.25, 1e-14);
}

TEST(FundamentalTensor, MatchesClosedFormOnEveryCatalogSpace) {
  for (const auto& e : catalog_entries()) {
    const auto space = catalog_space(std::string(e.name));
    const auto F = space.finsler();
    for (const auto& p : make_probes(F.chart(), 30)) {
      const auto g = fundamental_tensor(F, p.x, p.v);
      const auto ref = oracle::fundamental_tensor(oracle::metric_at(space, p.x), oracle::form_at(space, p.x), p.v);
      for (int i = 0; i < F.dimension(); ++i) {
        for (int j = 0; j < F.dimension(); ++j) EXPECT_NEAR(g(i, j), ref[i][j], 1e-12) << e.name;
      }
    }
  }
}

TEST(FundamentalTensor, InvariantsOnProbes) {
  for (const char* name : {"flat-const", "flat-nonkilling", "rotational-killing", "sphere-hopf"}) {
    const auto F = catalog_space(name).finsler();
    for (const auto& p : make_probes(F.chart(), 30)) {
      const auto g = fundamental_tensor(F, p.x, p.v);
      const double f = F(p.x, p.v);
      EXPECT_TRUE(is_positive_definite(g)) << name;
      EXPECT_NEAR(quadratic_form<double>(g, p.v, p.v), f * f, 1e-10 * f * f) << name;
      Vec w = p.v;
      for (auto& e : w) e *= 2.0;
      EXPECT_LT(max_abs_difference(fundamental_tensor(F, p.x, w), g), 1e-10 * max_abs(g)) << name;
      EXPECT_NEAR(F(p.x, w), 2.0 * f, 1e-12 * f) << name;
    }
  }
}

TEST(FundamentalTensor, UndefinedAtZeroVector) {
  const auto F = catalog_space("flat-const").finsler();
  const Vec x{0.1, 0.2}, zero{0.0, 0.0};
  EXPECT_THROW(fundamental_tensor(F, x, zero), std::invalid_argument);
  EXPECT_THROW(cartan_tensor(F, x, zero), std::invalid_argument);
  EXPECT_THROW(formal_christoffel(F, x, zero), std::invalid_argument);
}

TEST(Cartan, VanishesOnlyForRiemannianSpaces) {
  const auto polar = catalog_space("polar-riemannian").finsler();
  const auto randers = catalog_space("flat-const").finsler();
  double randers_max = 0.0;
  for (const auto& p : make_probes(polar.chart(), 20)) EXPECT_LT(max_entry(cartan_tensor(polar, p.x, p.v)), 1e-10);
  for (const auto& p : make_probes(randers.chart(), 20)) {
    randers_max = std::max(randers_max, max_entry(cartan_tensor(randers, p.x, p.v)));
  }
  EXPECT_GT(randers_max, 0.01);
}

TEST(Cartan, SymmetricAndAnnihilatesTheDirection) {
  const auto F = catalog_space("sphere-hopf").finsler();
  for (const auto& p : make_probes(F.chart(), 10)) {
    const auto a = cartan_tensor(F, p.x, p.v);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double contraction = 0.0;
        for (int k = 0; k < 3; ++k) {
          contraction += a(i, j, k) * p.v[k];
          EXPECT_NEAR(a(i, j, k), a(j, k, i), 1e-12);
          EXPECT_NEAR(a(i, j, k), a(k, j, i), 1e-12);
        }
        EXPECT_NEAR(contraction, 0.0, 1e-10);
      }
    }
  }
}

TEST(Cartan, MatchesFiniteDifferencesOfTheFundamentalTensor) {
  const auto space = catalog_space("rotational-killing");
  const auto F = space.finsler();
  const Vec x{0.4, -0.7}, v{0.6, 0.8};
  const auto a = cartan_tensor(F, x, v);
  const auto ref_a = oracle::metric_at(space, x);
  const auto ref_b = oracle::form_at(space, x);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto gij = [&](std::span<const double> w) {
        return oracle::fundamental_tensor(ref_a, ref_b, Vec(w.begin(), w.end()))[i][j];
      };
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(a(i, j, static_cast<int>(k)), 0.5 * F(x, v) * fd::partial(gij, std::span<const double>(v), k),
                    1e-8);
      }
    }
  }
}

TEST(Christoffel, FlatConstantFormHasNone) {
  const auto F = catalog_space("flat-const").finsler();
  for (const auto& p : make_probes(F.chart(), 10)) EXPECT_EQ(max_entry(formal_christoffel(F, p.x, p.v)), 0.0);
}

TEST(Christoffel, PolarCoordinates) {
  const auto F = catalog_space("polar-riemannian").finsler();
  for (const auto& p : make_probes(F.chart(), 20)) {
    const auto gam = formal_christoffel(F, p.x, p.v);
    const double r = p.x[0];
    EXPECT_NEAR(gam(0, 1, 1), -r, 1e-13);
    EXPECT_NEAR(gam(1, 0, 1), 1.0 / r, 1e-13);
    EXPECT_NEAR(gam(1, 1, 0), 1.0 / r, 1e-13);
    EXPECT_NEAR(gam(0, 0, 0), 0.0, 1e-13);
    EXPECT_NEAR(gam(0, 0, 1), 0.0, 1e-13);
    EXPECT_NEAR(gam(1, 1, 1), 0.0, 1e-13);
  }
}

TEST(Spray, ZeroAtTheZeroSection) {
  const auto F = catalog_space("flat-nonkilling").finsler();
  const Vec x{0.5, 0.0}, zero{0.0, 0.0};
  for (double g : spray(F, x, zero)) EXPECT_EQ(g, 0.0);
  const auto n = nonlinear_connection(F, x, zero);
  EXPECT_EQ(max_abs(n), 0.0);
}

TEST(Spray, NonKillingFlatSpaceValues) {
  const auto F = catalog_space("flat-nonkilling").finsler();
  const Vec x{0.5, 0.0}, v{1.0, 0.0};
  const auto G = spray(F, x, v);
  EXPECT_NEAR(G[0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(G[1], 0.0, 1e-12);
  EXPECT_NEAR(nonlinear_connection_trace(F, x, v), 0.5, 1e-12);
}

TEST(Spray, HomogeneousOfDegreeTwo) {
  for (const auto& e : catalog_entries()) {
    const auto F = catalog_space(std::string(e.name)).finsler();
    for (const auto& p : make_probes(F.chart(), 20)) {
      const auto G = spray(F, p.x, p.v);
      for (double c : {2.0, 0.3}) {
        Vec w = p.v;
        for (auto& x : w) x *= c;
        const auto Gc = spray(F, p.x, w);
        for (std::size_t i = 0; i < G.size(); ++i) {
          EXPECT_NEAR(Gc[i], c * c * G[i], 1e-9 * std::max(1.0, std::abs(c * c * G[i]))) << e.name;
        }
      }
    }
  }
}

TEST(Spray, MatchesTheFiniteDifferenceOracle) {
  for (const auto& e : catalog_entries()) {
    const auto space = catalog_space(std::string(e.name));
    const auto F = space.finsler();
    for (const auto& p : make_probes(F.chart(), 15)) {
      const auto G = spray(F, p.x, p.v);
      const auto ref = oracle::spray(space, p.x, p.v);
      for (std::size_t i = 0; i < G.size(); ++i) {
        EXPECT_NEAR(G[i], ref[i], 1e-6 * std::max(1.0, std::abs(ref[i]))) << e.name;
      }
    }
  }
}

TEST(NonlinearConnection, HalfTheVerticalDerivativeOfTheSpray) {
  for (const char* name : {"flat-nonkilling", "rotational-killing", "sphere-hopf"}) {
    const auto F = catalog_space(name).finsler();
    for (const auto& p : make_probes(F.chart(), 10)) {
      const auto N = nonlinear_connection(F, p.x, p.v);
      const auto Nc = nonlinear_connection_contracted(F, p.x, p.v);
      EXPECT_LT(max_abs_difference(N, Nc), 1e-8 * std::max(1.0, max_abs(N))) << name;
      const int n = F.dimension();
      for (int i = 0; i < n; ++i) {
        const auto Gi = [&](std::span<const double> w) { return spray(F, p.x, w)[static_cast<std::size_t>(i)]; };
        for (int j = 0; j < n; ++j) {
          const double ref = 0.5 * fd::partial(Gi, std::span<const double>(p.v), static_cast<std::size_t>(j));
          EXPECT_NEAR(N(i, j), ref, 1e-6 * std::max(1.0, std::abs(ref))) << name;
        }
      }
      // Euler: N v = G
      const auto G = spray(F, p.x, p.v);
      const auto Nv = multiply<double>(N, p.v);
      for (int i = 0; i < n; ++i) EXPECT_NEAR(Nv[i], G[i], 1e-9 * std::max(1.0, std::abs(G[i]))) << name;
    }
  }
}

TEST(EulerDivergence, EuclideanValueAndIdentity) {
  const auto E = catalog_space("euclidean2").finsler();
  EXPECT_NEAR(euler_divergence(E, Vec{0.0, 0.0}, Vec{3.0, 4.0}), 0.2, 1e-14);
  const auto F = catalog_space("sphere-hopf").finsler();
  for (const auto& p : make_probes(F.chart(), 20)) {
    EXPECT_NEAR(euler_divergence(F, p.x, p.v), 2.0 / F(p.x, p.v), 1e-9);
  }
}

TEST(Geodesic, StraightLinesInFlatSpaces) {
  for (const char* name : {"euclidean2", "flat-const"}) {
    const auto F = catalog_space(name).finsler();
    const Vec x0{-0.5, 0.2}, v0{0.6, -0.3};
    const auto path = geodesic(F, x0, v0, 1.0, 100);
    ASSERT_EQ(path.status, GeodesicPath::Status::completed);
    ASSERT_EQ(path.samples.size(), 101u);
    for (const auto& s : path.samples) {
      EXPECT_NEAR(s.x[0], x0[0] + s.t * v0[0], 1e-14);
      EXPECT_NEAR(s.x[1], x0[1] + s.t * v0[1], 1e-14);
      EXPECT_NEAR(s.v[0], v0[0], 1e-15);
    }
  }
  const auto F = catalog_space("flat-const").finsler();
  const auto path = geodesic(F, Vec{0.0, 0.0}, Vec{1.0, 0.0}, 1.0, 10);
  for (const auto& s : path.samples) EXPECT_NEAR(s.speed, 1.5, 1e-14);
}

TEST(Geodesic, SpeedIsConserved) {
  for (const auto& e : catalog_entries()) {
    const auto F = catalog_space(std::string(e.name)).finsler();
    const auto probes = make_probes(F.chart(), 3);
    for (const auto& p : probes) {
      Vec x0 = p.x;
      if (std::string(e.name) == "polar-riemannian") {
        x0 = {1.2, 0.3 * p.x[1]};
      } else {
        for (auto& c : x0) c *= 0.3;
      }
      const auto path = geodesic(F, x0, p.v, 0.5, 500);
      ASSERT_EQ(path.status, GeodesicPath::Status::completed) << e.name;
      const double f0 = path.samples.front().speed;
      for (const auto& s : path.samples) EXPECT_NEAR(s.speed, f0, 1e-8) << e.name;
    }
  }
}

TEST(Geodesic, FourthOrderConvergence) {
  const auto F = catalog_space("rotational-killing").finsler();
  const Vec x0{0.3, -0.2}, v0{0.8, 0.5};
  const auto end = [&](int steps) { return geodesic(F, x0, v0, 1.0, steps).samples.back().x; };
  const Vec ref = end(10000);
  const auto err = [&](int steps) {
    const Vec x = end(steps);
    return std::hypot(x[0] - ref[0], x[1] - ref[1]);
  };
  const double e1 = err(20), e2 = err(40), e3 = err(80);
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
  EXPECT_GT(e2 / e3, 12.0);
  EXPECT_LT(e2 / e3, 20.0);
}

TEST(Geodesic, LeavingTheChartIsReported) {
  const auto F = catalog_space("euclidean2").finsler();
  const auto path = geodesic(F, Vec{1.5, 0.0}, Vec{1.0, 0.0}, 1.0, 1000);
  EXPECT_EQ(path.status, GeodesicPath::Status::left_domain);
  EXPECT_GT(path.exit_time, 0.49);
  EXPECT_LE(path.exit_time, 0.5);
  EXPECT_EQ(path.samples.back().t, path.exit_time);
}

TEST(Geodesic, BackwardIntegrationRetracesTheCurve) {
  const auto F = catalog_space("flat-nonkilling").finsler();
  const Vec x0{0.1, 0.2}, v0{0.5, 0.4};
  const auto fwd = geodesic(F, x0, v0, 1.0, 1000);
  const auto& end = fwd.samples.back();
  const auto back = geodesic(F, end.x, end.v, -1.0, 1000);
  ASSERT_EQ(back.status, GeodesicPath::Status::completed);
  EXPECT_NEAR(back.samples.back().x[0], x0[0], 1e-10);
  EXPECT_NEAR(back.samples.back().x[1], x0[1], 1e-10);
}

TEST(Geodesic, RejectsBadArguments) {
  const auto F = catalog_space("euclidean2").finsler();
  EXPECT_THROW(geodesic(F, Vec{0.0, 0.0}, Vec{0.0, 0.0}, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(geodesic(F, Vec{3.0, 0.0}, Vec{1.0, 0.0}, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(geodesic(F, Vec{0.0, 0.0}, Vec{1.0, 0.0}, 1.0, 0), std::invalid_argument);
}

TEST(Probes, DeterministicAndInsideTheInnerBox) {
  const CoordinateChart chart({"x1", "x2", "x3"}, {{0.0, 1.0}, {-2.0, 2.0}, {5.0, 6.0}});
  const auto a = make_probes(chart, 50, 7);
  const auto b = make_probes(chart, 50, 7);
  const auto c = make_probes(chart, 50, 8);
  ASSERT_EQ(a.size(), 50u);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].v, b[i].v);
    differs = differs || a[i].x != c[i].x;
    double norm = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto [lo, hi] = chart.domain()[k];
      EXPECT_GE(a[i].x[k], lo + 0.01 * (hi - lo));
      EXPECT_LE(a[i].x[k], hi - 0.01 * (hi - lo));
      norm += a[i].v[k] * a[i].v[k];
    }
    EXPECT_NEAR(norm, 1.0, 1e-14);
  }
  EXPECT_TRUE(differs);
}

TEST(Probes, CornersAreAppended) {
  const CoordinateChart chart({"x1", "x2"}, {{0.0, 1.0}, {-2.0, 2.0}});
  const auto p = make_probes(chart, 5, kDefaultSeed, true);
  ASSERT_EQ(p.size(), 9u);
  EXPECT_EQ(p.interior_count, 5);
  for (std::size_t i = 5; i < 9; ++i) {
    EXPECT_TRUE(std::abs(p[i].x[0] - 0.01) < 1e-12 || std::abs(p[i].x[0] - 0.99) < 1e-12);
    EXPECT_TRUE(std::abs(p[i].x[1] + 1.96) < 1e-12 || std::abs(p[i].x[1] - 1.96) < 1e-12);
  }
}

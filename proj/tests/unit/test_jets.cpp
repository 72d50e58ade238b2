#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fd_oracle.hpp"
#include "finslerlab/derivatives.hpp"
#include "finslerlab/expr.hpp"
#include "finslerlab/jet.hpp"

using namespace finslerlab;

TEST(JetSeed, IdentitySeedMatrix) {
  const double p[] = {0.5, 0.0};
  const int dirs[] = {0, 1};
  const auto j = seed(p, dirs);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0].value, 0.5);
  EXPECT_EQ(j[1].value, 0.0);
  EXPECT_EQ(j[0].partial(0), 1.0);
  EXPECT_EQ(j[0].partial(1), 0.0);
  EXPECT_EQ(j[1].partial(0), 0.0);
  EXPECT_EQ(j[1].partial(1), 1.0);
}

TEST(JetSeed, PartialSeedAndErrors) {
  const double p[] = {1.0, 2.0, 3.0};
  const int only[] = {2};
  const auto j = seed(p, only);
  EXPECT_EQ(j[2].partial(0), 1.0);
  EXPECT_EQ(j[0].partial(0), 0.0);
  const int bad[] = {3};
  EXPECT_THROW(seed(p, bad), std::out_of_range);
  const int negative[] = {-1};
  EXPECT_THROW(seed(p, negative), std::out_of_range);
  const int dup[] = {1, 1};
  EXPECT_THROW(seed(p, dup), std::invalid_argument);
}

TEST(JetArithmetic, ProductAndSine) {
  const double p[] = {2.0, 3.0};
  const auto g = gradient([](auto x) { return x[0] * x[1]; }, std::span<const double>(p));
  EXPECT_EQ(g[0], 3.0);
  EXPECT_EQ(g[1], 2.0);
  const double z[] = {0.0};
  EXPECT_EQ(gradient([](auto x) { return sin(x[0]); }, std::span<const double>(z))[0], 1.0);
}

TEST(JetArithmetic, LinearityAndProductRuleAreExact) {
  const Jet1 f(1.5, {2.0, -1.0});
  const Jet1 g(-0.25, {0.5, 4.0});
  const Jet1 s = f + g;
  const Jet1 p = f * g;
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(s.partial(k), f.partial(k) + g.partial(k));
    EXPECT_EQ(p.partial(k), f.value * g.partial(k) + g.value * f.partial(k));
  }
}

TEST(JetArithmetic, MixedWidthsAndConstants) {
  const Jet1 a(2.0, {1.0});
  const Jet1 b(3.0, {0.0, 1.0});
  const Jet1 c = a * b + 1.0;
  EXPECT_EQ(c.value, 7.0);
  EXPECT_EQ(c.partial(0), 3.0);
  EXPECT_EQ(c.partial(1), 2.0);
  EXPECT_EQ((1.0 / a).partial(0), -0.25);
  EXPECT_EQ((a / 2.0).partial(0), 0.5);
  EXPECT_EQ((5.0 - a).partial(0), -1.0);
}

TEST(Hessian, Quadratics) {
  const double p[] = {0.3, -0.8};
  const auto h = hessian([](auto x) { return x[0] * x[0] + x[1] * x[1]; }, std::span<const double>(p));
  EXPECT_EQ(h(0, 0), 2.0);
  EXPECT_EQ(h(1, 1), 2.0);
  EXPECT_EQ(h(0, 1), 0.0);
  const auto m = hessian([](auto x) { return x[0] * x[1]; }, std::span<const double>(p));
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(0, 1), 1.0);
  EXPECT_EQ(m(1, 0), 1.0);
  EXPECT_EQ(m(1, 1), 0.0);
}

TEST(Hessian, RandersSquareMatchesFiniteDifferencesOfTheGradient) {
  const auto f = [](auto v) {
    using std::sqrt;
    const auto F = sqrt(v[0] * v[0] + v[1] * v[1]) + 0.5 * v[0];
    return 0.5 * (F * F);
  };
  const double p[] = {1.0, 0.0};
  const auto h = hessian(f, std::span<const double>(p));
  EXPECT_NEAR(h(0, 0), 2.25, 1e-14);
  EXPECT_NEAR(h(1, 1), 1.5, 1e-14);
  EXPECT_NEAR(h(0, 1), 0.0, 1e-14);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto dfi = [&](std::span<const double> x) { return gradient(f, x)[i]; };
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(h(static_cast<int>(i), static_cast<int>(j)), fd::partial(dfi, std::span<const double>(p), j, 1e-5),
                  1e-8);
    }
  }
}

TEST(ThirdOrder, CubicAndQuadratic) {
  const double p[] = {0.7, 0.2};
  EXPECT_EQ(third_order([](auto x) { return x[0] * x[0] * x[0]; }, std::span<const double>(p), 0, 0, 0), 6.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(third_order([](auto x) { return 3.0 * x[0] * x[1] + x[1] * x[1] - x[0]; },
                              std::span<const double>(p), i, j, k),
                  0.0);
      }
    }
  }
  EXPECT_THROW(third_order([](auto x) { return x[0]; }, std::span<const double>(p), 0, 0, 2), std::out_of_range);
}

TEST(ThirdOrder, RandersSquareAgainstFiniteDifferencesOfTheHessianAndSymmetry) {
  const auto f = [](auto v) {
    using std::sqrt;
    const auto F = sqrt(v[0] * v[0] + v[1] * v[1]) + 0.5 * v[0];
    return 0.5 * (F * F);
  };
  const double p[] = {0.8, -0.6};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto hij = [&](std::span<const double> x) { return hessian(f, x)(i, j); };
      for (int k = 0; k < 2; ++k) {
        const double exact = third_order(f, std::span<const double>(p), i, j, k);
        const double approx = fd::partial(hij, std::span<const double>(p), static_cast<std::size_t>(k), 1e-5);
        EXPECT_NEAR(exact, approx, 1e-7 * std::max(1.0, std::abs(exact)));
        EXPECT_NEAR(exact, third_order(f, std::span<const double>(p), k, i, j), 1e-14);
        EXPECT_NEAR(exact, third_order(f, std::span<const double>(p), j, k, i), 1e-14);
      }
    }
  }
}

TEST(FdOracle, Examples) {
  const auto e = [](std::span<const double> x) { return std::exp(x[0]); };
  const double zero[] = {0.0};
  const double one[] = {1.0};
  EXPECT_NEAR(fd::directional(e, zero, one, 1, 1e-6), 1.0, 1e-9);
  EXPECT_NEAR(fd::directional(e, zero, one, 2), 1.0, 1e-6);
  const auto sq = [](std::span<const double> x) { return x[0] * x[0]; };
  const double at[] = {0.3};
  EXPECT_NEAR(fd::directional(sq, at, one, 2), 2.0, 1e-7);
  EXPECT_THROW(fd::directional(sq, at, one, 3), std::invalid_argument);
}

TEST(JetProperty, RandomCompositionsMatchFiniteDifferences) {
  // Random expressions in three variables, built from polynomials and smooth
  // functions kept away from their singularities.
  std::mt19937_64 rng(99);
  const std::vector<std::string> vars = {"x1", "x2", "x3"};
  const char* atoms[] = {"x1", "x2", "x3", "1.5", "0.25"};
  const char* wrap[] = {"sin(%)", "cos(%)", "exp(0.3*%)", "(%)^2", "(%)^3", "sqrt(2 + sin(%))",
                        "log(3 + cos(%))", "tanh(%)", "sinh(0.5*%)", "1 / (2 + (%)^2)"};
  const char* ops[] = {" + ", " - ", " * "};
  const auto build = [&](auto& self, int depth) -> std::string {
    if (depth == 0) return atoms[rng() % 5];
    const int choice = static_cast<int>(rng() % 3);
    if (choice == 0) {
      std::string w = wrap[rng() % 10];
      w.replace(w.find('%'), 1, self(self, depth - 1));
      return w;
    }
    return "(" + self(self, depth - 1) + ops[rng() % 3] + self(self, depth - 1) + ")";
  };
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = ScalarField::parse(build(build, 2 + trial % 3), vars);
    const std::vector<double> p = {u(rng), u(rng), u(rng)};
    const auto plain = [&](std::span<const double> x) { return f.evaluate<double>(x); };
    const auto generic = [&](auto x) { return f.evaluate<typename decltype(x)::value_type>(x); };
    const double value = plain(p);
    const double tol = std::max(1e-6, 1e-6 * std::abs(value));
    const auto g = gradient(generic, std::span<const double>(p));
    const auto h = hessian(generic, std::span<const double>(p));
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(g[i], fd::partial(plain, std::span<const double>(p), i), tol) << f.source();
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(h(static_cast<int>(i), static_cast<int>(j)), fd::mixed(plain, std::span<const double>(p), i, j),
                    std::max(1e-5, 1e-5 * std::abs(h(static_cast<int>(i), static_cast<int>(j)))))
            << f.source();
      }
    }
  }
}

TEST(JetProperty, NestingOrderIsIrrelevant) {
  const auto f = ScalarField::parse("exp(x1*x2) * sin(x1 + 2*x2) / (1 + x1^2)", {"x1", "x2"});
  const double p[] = {0.3, -0.7};
  // x at the inner level, y at the outer level, and the other way round
  const int dx[] = {0};
  const int dy[] = {1};
  const auto a_inner = lift<double>(std::span<const double>(p), dx);
  const auto a = lift<Jet1>(std::span<const Jet1>(a_inner), dy);
  const auto b_inner = lift<double>(std::span<const double>(p), dy);
  const auto b = lift<Jet1>(std::span<const Jet1>(b_inner), dx);
  const double xy = f.evaluate<Jet2>(std::span<const Jet2>(a)).partial(0).partial(0);
  const double yx = f.evaluate<Jet2>(std::span<const Jet2>(b)).partial(0).partial(0);
  EXPECT_NEAR(xy, yx, 1e-12);
}

TEST(JetProperty, ZeroDirectionsReproducePlainEvaluation) {
  const auto f = ScalarField::parse("tan(x1) + cosh(x2)^2 - x1^(-3)", {"x1", "x2"});
  const double p[] = {0.4, 0.9};
  const double plain = f.evaluate<double>(std::span<const double>(p));
  const auto j = seed(std::span<const double>(p), {});
  const Jet1 r = f.evaluate<Jet1>(std::span<const Jet1>(j));
  EXPECT_EQ(r.value, plain);
  EXPECT_TRUE(r.d.empty() || (r.partial(0) == 0.0 && r.partial(1) == 0.0));
}

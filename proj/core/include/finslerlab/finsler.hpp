#pragma once

// Generic Finsler tensor calculus. A FinslerStructure is any positively
// 1-homogeneous F(x, v) that can be evaluated on jets up to four nesting
// levels; everything below is derived from it by exact differentiation.
//
// Conventions: g_ij = 1/2 d^2(F^2)/dv^i dv^j, and geodesics solve
// x'' + G(x') = 0 with G^i = gamma^i_jk v^j v^k (no factor 2).

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"
#include "finslerlab/linalg.hpp"

namespace finslerlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

class CoordinateChart {
 public:
  CoordinateChart(std::vector<std::string> names, std::vector<Interval> domain);

  int dimension() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Interval>& domain() const noexcept { return domain_; }

  /// Strictly inside the open box.
  bool contains(std::span<const double> x) const;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> domain_;
};

/// Tangent vectors shorter than this (Euclidean norm in coordinates) are
/// treated as the zero section.
inline constexpr double kZeroVectorThreshold = 1e-12;

class FinslerStructure {
 public:
  /// `fn` is a generic callable (std::span<const T> x, std::span<const T> v) -> T,
  /// instantiated for double and Jet1..Jet4.
  template <class Fn>
  FinslerStructure(CoordinateChart chart, Fn fn)
      : chart_(std::move(chart)), model_(std::make_shared<const Impl<Fn>>(std::move(fn))) {}

  const CoordinateChart& chart() const noexcept { return chart_; }
  int dimension() const noexcept { return chart_.dimension(); }

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> v) const {
    return model_->eval(x, v);
  }
  double operator()(const std::vector<double>& x, const std::vector<double>& v) const {
    return model_->eval(std::span<const double>(x), std::span<const double>(v));
  }

 private:
  struct Model {
    virtual ~Model() = default;
    virtual double eval(std::span<const double> x, std::span<const double> v) const = 0;
    virtual Jet1 eval(std::span<const Jet1> x, std::span<const Jet1> v) const = 0;
    virtual Jet2 eval(std::span<const Jet2> x, std::span<const Jet2> v) const = 0;
    virtual Jet3 eval(std::span<const Jet3> x, std::span<const Jet3> v) const = 0;
    virtual Jet4 eval(std::span<const Jet4> x, std::span<const Jet4> v) const = 0;
  };

  template <class Fn>
  struct Impl final : Model {
    explicit Impl(Fn f) : fn(std::move(f)) {}
    double eval(std::span<const double> x, std::span<const double> v) const override { return fn(x, v); }
    Jet1 eval(std::span<const Jet1> x, std::span<const Jet1> v) const override { return fn(x, v); }
    Jet2 eval(std::span<const Jet2> x, std::span<const Jet2> v) const override { return fn(x, v); }
    Jet3 eval(std::span<const Jet3> x, std::span<const Jet3> v) const override { return fn(x, v); }
    Jet4 eval(std::span<const Jet4> x, std::span<const Jet4> v) const override { return fn(x, v); }
    Fn fn;
  };

  CoordinateChart chart_;
  std::shared_ptr<const Model> model_;
};

template <class T>
double coordinate_norm(std::span<const T> v) {
  double s = 0.0;
  for (const auto& e : v) s += primal(e) * primal(e);
  return std::sqrt(s);
}

namespace detail {

inline void require_nonzero(std::span<const double> v, const char* what) {
  if (coordinate_norm(v) < kZeroVectorThreshold) {
    throw std::invalid_argument(std::string(what) + " is undefined at v = 0");
  }
}

template <class T>
void require_nonzero(std::span<const T> v, const char* what) {
  if (coordinate_norm(v) < kZeroVectorThreshold) {
    throw std::invalid_argument(std::string(what) + " is undefined at v = 0");
  }
}

}  // namespace detail

/// g_ij(x, v) over scalar B; F is evaluated on Jet<Jet<B>> with v seeded at
/// both levels. Entries are symmetrised.
template <class B>
Matrix<B> fundamental_tensor(const FinslerStructure& F, std::span<const B> x, std::span<const B> v) {
  detail::require_nonzero(v, "fundamental tensor");
  const int n = F.dimension();
  using J = Jet<Jet<B>>;
  std::vector<J> xs;
  xs.reserve(x.size());
  for (const auto& xi : x) xs.push_back(J::constant(Jet<B>::constant(xi)));
  const auto inner = lift_all<B>(v);
  const auto vs = lift_all<Jet<B>>(inner);
  const J f = F(std::span<const J>(xs), std::span<const J>(vs));
  const J half_sq = 0.5 * (f * f);
  Matrix<B> g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const B gij = half_sq.partial(static_cast<std::size_t>(i)).partial(static_cast<std::size_t>(j));
      const B gji = half_sq.partial(static_cast<std::size_t>(j)).partial(static_cast<std::size_t>(i));
      g(i, j) = 0.5 * (gij + gji);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

/// g together with its first partials along x (slot k = d/dx^k).
template <class B>
Matrix<Jet<B>> fundamental_tensor_with_x_derivatives(const FinslerStructure& F, std::span<const B> x,
                                                      std::span<const B> v) {
  const auto xs = lift_all<B>(x);
  const auto vs = lift<B>(v);
  return fundamental_tensor<Jet<B>>(F, std::span<const Jet<B>>(xs), std::span<const Jet<B>>(vs));
}

/// A_ijk = (F/2) dg_ij/dv^k.
template <class B>
Tensor3<B> cartan_tensor(const FinslerStructure& F, std::span<const B> x, std::span<const B> v) {
  detail::require_nonzero(v, "Cartan tensor");
  const int n = F.dimension();
  const auto xs = lift<B>(x);
  const auto vs = lift_all<B>(v);
  const auto g = fundamental_tensor<Jet<B>>(F, std::span<const Jet<B>>(xs), std::span<const Jet<B>>(vs));
  const B f = F(x, v);
  Tensor3<B> a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) a(i, j, k) = 0.5 * f * g(i, j).partial(static_cast<std::size_t>(k));
    }
  }
  return a;
}

/// gamma^i_jk = 1/2 g^il (d_k g_lj + d_j g_kl - d_l g_jk).
template <class B>
Tensor3<B> formal_christoffel(const FinslerStructure& F, std::span<const B> x, std::span<const B> v) {
  detail::require_nonzero(v, "formal Christoffel symbol");
  const int n = F.dimension();
  const auto gx = fundamental_tensor_with_x_derivatives<B>(F, x, v);
  Matrix<B> g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = gx(i, j).value;
  }
  const Matrix<B> ginv = inverse(g);
  const auto dg = [&](int i, int j, int k) { return gx(i, j).partial(static_cast<std::size_t>(k)); };
  // lowered symbols first: Gamma_ljk = 1/2 (d_k g_lj + d_j g_kl - d_l g_jk)
  Tensor3<B> lowered(n);
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        lowered(l, j, k) = 0.5 * (dg(l, j, k) + dg(k, l, j) - dg(j, k, l));
        lowered(l, k, j) = lowered(l, j, k);
      }
    }
  }
  Tensor3<B> gamma(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        B s(0.0);
        for (int l = 0; l < n; ++l) s += ginv(i, l) * lowered(l, j, k);
        gamma(i, j, k) = s;
        gamma(i, k, j) = s;
      }
    }
  }
  return gamma;
}

/// G^i = gamma^i_jk v^j v^k; zero at v = 0.
template <class B>
std::vector<B> spray(const FinslerStructure& F, std::span<const B> x, std::span<const B> v) {
  const int n = F.dimension();
  std::vector<B> G(static_cast<std::size_t>(n), B(0.0));
  if (coordinate_norm(v) < kZeroVectorThreshold) return G;
  const auto gamma = formal_christoffel<B>(F, x, v);
  for (int i = 0; i < n; ++i) {
    B s(0.0);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) s += gamma(i, j, k) * v[j] * v[k];
    }
    G[static_cast<std::size_t>(i)] = s;
  }
  return G;
}

// Double-precision entry points.

Matrix<double> fundamental_tensor(const FinslerStructure& F, std::span<const double> x, std::span<const double> v);
Tensor3<double> cartan_tensor(const FinslerStructure& F, std::span<const double> x, std::span<const double> v);
Tensor3<double> formal_christoffel(const FinslerStructure& F, std::span<const double> x,
                                   std::span<const double> v);
std::vector<double> spray(const FinslerStructure& F, std::span<const double> x, std::span<const double> v);

/// N^i_j = 1/2 dG^i/dv^j by differentiating the spray once more; zero at v = 0.
Matrix<double> nonlinear_connection(const FinslerStructure& F, std::span<const double> x,
                                    std::span<const double> v);

/// Trace of the nonlinear connection, sum_i N^i_i.
double nonlinear_connection_trace(const FinslerStructure& F, std::span<const double> x, std::span<const double> v);

/// N^i_j = sum_k gamma^i_jk v^k - A^i_jk G^k / F, the contraction form. Used to
/// cross-check `nonlinear_connection`.
Matrix<double> nonlinear_connection_contracted(const FinslerStructure& F, std::span<const double> x,
                                               std::span<const double> v);

/// sum_i d/dv^i (v^i / F), which equals (n - 1)/F for any 1-homogeneous F.
double euler_divergence(const FinslerStructure& F, std::span<const double> x, std::span<const double> v);

struct GeodesicSample {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> v;
  double speed = 0.0;  // F(x, v)
};

struct GeodesicPath {
  enum class Status { completed, left_domain, blew_up };
  Status status = Status::completed;
  double exit_time = 0.0;  // time of the last accepted sample when status != completed
  std::vector<GeodesicSample> samples;
};

/// Fixed-step classical RK4 for x'' = -G(x, x'). `time` may be negative
/// (backward integration). Stops at the first step that leaves the chart.
GeodesicPath geodesic(const FinslerStructure& F, std::span<const double> x0, std::span<const double> v0, double time,
                      int steps);

}  // namespace finslerlab

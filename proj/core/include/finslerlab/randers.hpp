#pragma once

// Randers spaces F = alpha + beta with alpha(v) = sqrt(a_ij v^i v^j) and
// beta(v) = b_i v^i, plus the one-form analysis that decides whether some
// measure has vanishing S-curvature: beta must be a Killing form
// (b_i|j + b_j|i = 0) of constant length, and the measure is then the
// Busemann-Hausdorff one up to a constant.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finslerlab/expr.hpp"
#include "finslerlab/finsler.hpp"
#include "finslerlab/linalg.hpp"
#include "finslerlab/probes.hpp"

namespace finslerlab {

class RandersSpace {
 public:
  /// Validates on the default probe set (interior plus corners): metric
  /// symmetric and positive definite, ||beta|| < 1. Throws InvalidSpace.
  RandersSpace(CoordinateChart chart, std::vector<std::vector<ScalarField>> metric, std::vector<ScalarField> beta,
               std::string name = {});

  const CoordinateChart& chart() const noexcept { return data_->chart; }
  int dimension() const noexcept { return data_->chart.dimension(); }
  const std::string& name() const noexcept { return data_->name; }

  /// a_ij(x); only the upper triangle is evaluated and mirrored.
  template <class T>
  Matrix<T> metric(std::span<const T> x) const {
    return data_->template metric<T>(x);
  }
  template <class T>
  std::vector<T> one_form(std::span<const T> x) const {
    return data_->template one_form<T>(x);
  }

  template <class T>
  T alpha(std::span<const T> x, std::span<const T> v) const {
    return data_->template alpha<T>(x, v);
  }
  template <class T>
  T beta(std::span<const T> x, std::span<const T> v) const {
    return data_->template beta<T>(x, v);
  }
  template <class T>
  T norm(std::span<const T> x, std::span<const T> v) const {
    return data_->template alpha<T>(x, v) + data_->template beta<T>(x, v);
  }

  /// F = alpha + beta as a generic structure for the tensor calculus.
  FinslerStructure finsler() const;
  /// alpha alone (the underlying Riemannian metric).
  FinslerStructure riemannian() const;

  const ScalarField& metric_field(int i, int j) const;
  const ScalarField& beta_field(int i) const { return data_->forms[static_cast<std::size_t>(i)]; }

 private:
  struct Data {
    CoordinateChart chart;
    std::vector<ScalarField> upper;  // row-major upper triangle of a
    std::vector<ScalarField> forms;  // b_i
    std::string name;

    const ScalarField& entry(int i, int j) const {
      if (i > j) std::swap(i, j);
      const int n = chart.dimension();
      return upper[static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i))];
    }

    template <class T>
    Matrix<T> metric(std::span<const T> x) const {
      const int n = chart.dimension();
      Matrix<T> a(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          a(i, j) = entry(i, j).evaluate<T>(x);
          if (j != i) a(j, i) = a(i, j);
        }
      }
      return a;
    }

    template <class T>
    std::vector<T> one_form(std::span<const T> x) const {
      std::vector<T> b;
      b.reserve(forms.size());
      for (const auto& f : forms) b.push_back(f.evaluate<T>(x));
      return b;
    }

    template <class T>
    T alpha(std::span<const T> x, std::span<const T> v) const {
      const int n = chart.dimension();
      T q(0.0);
      for (int i = 0; i < n; ++i) {
        const T ai = entry(i, i).evaluate<T>(x);
        q += ai * v[i] * v[i];
        for (int j = i + 1; j < n; ++j) q += 2.0 * (entry(i, j).evaluate<T>(x) * v[i] * v[j]);
      }
      using std::sqrt;
      return sqrt(q);
    }

    template <class T>
    T beta(std::span<const T> x, std::span<const T> v) const {
      T s(0.0);
      for (std::size_t i = 0; i < forms.size(); ++i) s += forms[i].evaluate<T>(x) * v[i];
      return s;
    }
  };

  std::shared_ptr<const Data> data_;
};

/// ||beta||(x) = sqrt(a^ij b_i b_j), over any scalar.
template <class T>
T beta_length_squared(const RandersSpace& space, std::span<const T> x) {
  const auto a_inv = inverse(space.metric<T>(x));
  const auto b = space.one_form<T>(x);
  return quadratic_form<T>(a_inv, b, b);
}

double beta_length(const RandersSpace& space, std::span<const double> x);

/// sigma_BH(x) = (1 - ||beta||^2)^{(n+1)/2} sqrt(det a), over any scalar.
template <class T>
T bh_density(const RandersSpace& space, std::span<const T> x) {
  using std::sqrt;
  const int n = space.dimension();
  const T len2 = beta_length_squared<T>(space, x);
  if (!(primal(len2) < 1.0)) throw InvalidSpace("||beta|| >= 1: Busemann-Hausdorff density undefined");
  const T one_minus = 1.0 - len2;
  // exponent (n+1)/2: integer power times an optional square root
  T factor = ipow(one_minus, (n + 1) / 2);
  if ((n + 1) % 2 != 0) factor = factor * sqrt(one_minus);
  return factor * sqrt(determinant(space.metric<T>(x)));
}

double bh_density_closed_form(const RandersSpace& space, std::span<const double> x);

/// Everything about the Riemannian data and beta at one point.
struct PointData {
  int n = 0;
  Matrix<double> a;
  Matrix<double> a_inv;
  std::vector<double> b;
  std::vector<double> b_up;       // b^i = a^ij b_j
  Tensor3<double> christoffel;    // Levi-Civita symbols of a
  Matrix<double> b_cov;           // b_i|j
  double length = 0.0;            // ||beta||
};

PointData point_data(const RandersSpace& space, std::span<const double> x);

/// b_i|j = d b_i / d x^j - b_k gamma~^k_ij, with gamma~ obtained as the formal
/// Christoffel symbols of alpha.
Matrix<double> covariant_derivative(const RandersSpace& space, std::span<const double> x);

/// d(||beta||^2)/dx^i through the identity 2 b_j|i b^j.
std::vector<double> length_gradient(const RandersSpace& space, std::span<const double> x);
/// The same gradient by differentiating ||beta||^2 directly with jets.
std::vector<double> length_gradient_direct(const RandersSpace& space, std::span<const double> x);

template <class T>
struct SprayTerms {
  std::vector<T> G;
  std::vector<T> X;
  std::vector<T> Y;
  std::vector<T> riem;  // gamma~^i_jk v^j v^k
};

/// Closed-form Randers spray G = riem + X + Y at fixed x, generic in v.
template <class T>
SprayTerms<T> spray_terms(const PointData& p, std::span<const T> v) {
  using std::sqrt;
  const int n = p.n;
  T q(0.0);
  T bv(0.0);
  for (int i = 0; i < n; ++i) {
    bv += p.b[i] * v[i];
    for (int j = 0; j < n; ++j) q += p.a(i, j) * (v[i] * v[j]);
  }
  const T alpha = sqrt(q);
  const T F = alpha + bv;

  SprayTerms<T> out;
  out.G.assign(static_cast<std::size_t>(n), T(0.0));
  out.X = out.G;
  out.Y = out.G;
  out.riem = out.G;
  // s = sum_jk b_j|k {v^j v^k + (b^k v^j - b^j v^k) alpha}, shared by every Y^i
  T s(0.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (p.b_cov(j, k) == 0.0) continue;
      s += p.b_cov(j, k) * (v[j] * v[k] + (p.b_up[k] * v[j] - p.b_up[j] * v[k]) * alpha);
    }
  }
  for (int i = 0; i < n; ++i) {
    T r(0.0);
    T x(0.0);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        r += p.christoffel(i, j, k) * (v[j] * v[k]);
        if (p.b_cov(j, k) != 0.0) x += p.b_cov(j, k) * (p.a_inv(i, j) * v[k] - p.a_inv(i, k) * v[j]);
      }
    }
    x = x * alpha;
    const T y = v[i] / F * s;
    out.riem[i] = r;
    out.X[i] = x;
    out.Y[i] = y;
    out.G[i] = r + x + y;
  }
  return out;
}

SprayTerms<double> spray_closed_form(const RandersSpace& space, std::span<const double> x, std::span<const double> v);

/// sum_i dX^i/dv^i and sum_i dY^i/dv^i by differentiating the closed form.
double trace_dX_dv(const RandersSpace& space, std::span<const double> x, std::span<const double> v);
double trace_dY_dv(const RandersSpace& space, std::span<const double> x, std::span<const double> v);
/// (n+1)/2 sum (b_i|j + b_j|i) v^i v^j / F + (n+1) sum (b_i|j - b_j|i) b^j alpha v^i / F.
double trace_dY_dv_closed_form(const RandersSpace& space, std::span<const double> x, std::span<const double> v);

struct BetaAnalysis {
  std::vector<Matrix<double>> b_cov;  // per probe
  double killing_defect_sup = 0.0;    // sup max_ij |b_i|j + b_j|i|
  double parallel_defect_sup = 0.0;   // sup max_ij |b_i|j|
  double length_min = 0.0;
  double length_max = 0.0;
  double length_gradient_sup = 0.0;   // sup max_i |d(||beta||^2)/dx^i|
};

BetaAnalysis analyze_beta(const RandersSpace& space, const ProbeSet& probes);

/// beta parallel (b_i|j = 0) on the probes, i.e. a Berwald space.
bool is_berwald(const RandersSpace& space, const ProbeSet& probes, double tol);

enum class VerdictReason { killing_violated, length_not_constant, satisfied };
std::string_view to_string(VerdictReason r);

inline constexpr double kDefaultKillingTolerance = 1e-9;
inline constexpr double kDefaultLengthTolerance = 1e-8;

struct TheoremVerdict {
  bool admits = false;
  VerdictReason reason = VerdictReason::killing_violated;
  BetaAnalysis analysis;
  std::vector<double> bh_density_probe_values;  // filled when admits
  double tol_killing = kDefaultKillingTolerance;
  double tol_length = kDefaultLengthTolerance;
};

TheoremVerdict theorem_verdict(const RandersSpace& space, const ProbeSet& probes,
                               double tol_killing = kDefaultKillingTolerance,
                               double tol_length = kDefaultLengthTolerance);
/// Same decision from a precomputed analysis.
TheoremVerdict theorem_verdict(const RandersSpace& space, const ProbeSet& probes, BetaAnalysis analysis,
                               double tol_killing, double tol_length);

/// F restricted to one tangent space, with a(x) and b(x) frozen.
class TangentNorm {
 public:
  TangentNorm(const RandersSpace& space, std::span<const double> x);
  double operator()(std::span<const double> v) const;
  const Matrix<double>& metric() const noexcept { return a_; }
  const std::vector<double>& one_form() const noexcept { return b_; }
  double beta_length() const noexcept { return length_; }

 private:
  Matrix<double> a_;
  std::vector<double> b_;
  double length_ = 0.0;
};

}  // namespace finslerlab

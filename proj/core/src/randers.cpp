#include "finslerlab/randers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace finslerlab {
namespace {

std::string point_text(std::span<const double> x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

RandersSpace::RandersSpace(CoordinateChart chart, std::vector<std::vector<ScalarField>> metric,
                           std::vector<ScalarField> beta, std::string name) {
  const int n = chart.dimension();
  if (static_cast<int>(metric.size()) != n) throw InvalidSpace("metric must have one row per coordinate");
  for (const auto& row : metric) {
    if (static_cast<int>(row.size()) != n) throw InvalidSpace("metric must be square");
  }
  if (static_cast<int>(beta.size()) != n) throw InvalidSpace("beta must have one component per coordinate");
  const auto check_coords = [&](const ScalarField& f) {
    if (f.coordinates() != chart.names()) throw InvalidSpace("expression '" + f.source() + "' uses another chart");
  };
  for (const auto& row : metric) std::ranges::for_each(row, check_coords);
  std::ranges::for_each(beta, check_coords);

  const ProbeSet probes = make_probes(chart, kDefaultProbeCount, kDefaultSeed, true);
  for (const auto& probe : probes) {
    const std::span<const double> x(probe.x);
    Matrix<double> a(n, n);
    try {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = metric[i][j].evaluate<double>(x);
      }
    } catch (const DomainError& e) {
      throw InvalidSpace("metric is not defined at " + point_text(x) + ": " + e.what());
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(a(i, j) - a(j, i)) > 1e-12 * (1.0 + std::abs(a(i, j)))) {
          throw InvalidSpace("asymmetric metric: a[" + std::to_string(i) + "][" + std::to_string(j) + "] != a[" +
                             std::to_string(j) + "][" + std::to_string(i) + "] at " + point_text(x));
        }
      }
    }
    if (!is_positive_definite(a)) throw InvalidSpace("metric is not positive definite at " + point_text(x));
    std::vector<double> b(static_cast<std::size_t>(n));
    try {
      for (int i = 0; i < n; ++i) b[i] = beta[i].evaluate<double>(x);
    } catch (const DomainError& e) {
      throw InvalidSpace("beta is not defined at " + point_text(x) + ": " + e.what());
    }
    const double len = std::sqrt(quadratic_form<double>(inverse(a), b, b));
    if (!(len < 1.0)) {
      throw InvalidSpace("||beta|| = " + std::to_string(len) + " >= 1 at " + point_text(x) +
                         "; F would not be positive");
    }
  }

  auto data = std::make_shared<Data>(Data{std::move(chart), {}, std::move(beta), std::move(name)});
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) data->upper.push_back(metric[i][j]);
  }
  data_ = std::move(data);
}

const ScalarField& RandersSpace::metric_field(int i, int j) const { return data_->entry(i, j); }

FinslerStructure RandersSpace::finsler() const {
  auto data = data_;
  return FinslerStructure(data->chart, [data](auto x, auto v) {
    using T = typename decltype(x)::value_type;
    return data->template alpha<std::remove_const_t<T>>(x, v) + data->template beta<std::remove_const_t<T>>(x, v);
  });
}

FinslerStructure RandersSpace::riemannian() const {
  auto data = data_;
  return FinslerStructure(data->chart, [data](auto x, auto v) {
    using T = typename decltype(x)::value_type;
    return data->template alpha<std::remove_const_t<T>>(x, v);
  });
}

double beta_length(const RandersSpace& space, std::span<const double> x) {
  return std::sqrt(std::max(0.0, beta_length_squared<double>(space, x)));
}

double bh_density_closed_form(const RandersSpace& space, std::span<const double> x) {
  return bh_density<double>(space, x);
}

PointData point_data(const RandersSpace& space, std::span<const double> x) {
  const int n = space.dimension();
  PointData p;
  p.n = n;
  p.a = space.metric<double>(x);
  p.a_inv = inverse(p.a);
  p.b = space.one_form<double>(x);
  p.b_up = multiply<double>(p.a_inv, p.b);
  p.length = std::sqrt(std::max(0.0, quadratic_form<double>(p.a_inv, p.b, p.b)));

  // alpha is v-independent in g, so any nonzero v yields the Levi-Civita symbols.
  std::vector<double> e1(static_cast<std::size_t>(n), 0.0);
  e1[0] = 1.0;
  p.christoffel = formal_christoffel<double>(space.riemannian(), x, e1);

  const auto xs = lift_all<double>(x);
  const auto bj = space.one_form<Jet1>(xs);
  p.b_cov = Matrix<double>(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = bj[i].partial(static_cast<std::size_t>(j));
      for (int k = 0; k < n; ++k) s -= p.b[k] * p.christoffel(k, i, j);
      p.b_cov(i, j) = s;
    }
  }
  return p;
}

Matrix<double> covariant_derivative(const RandersSpace& space, std::span<const double> x) {
  return point_data(space, x).b_cov;
}

namespace {

std::vector<double> length_gradient_from(const PointData& p) {
  std::vector<double> grad(static_cast<std::size_t>(p.n), 0.0);
  for (int i = 0; i < p.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < p.n; ++j) s += p.b_cov(j, i) * p.b_up[j];
    grad[i] = 2.0 * s;
  }
  return grad;
}

}  // namespace

std::vector<double> length_gradient(const RandersSpace& space, std::span<const double> x) {
  return length_gradient_from(point_data(space, x));
}

std::vector<double> length_gradient_direct(const RandersSpace& space, std::span<const double> x) {
  const auto xs = lift_all<double>(x);
  const Jet1 len2 = beta_length_squared<Jet1>(space, xs);
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) grad[i] = len2.partial(i);
  return grad;
}

SprayTerms<double> spray_closed_form(const RandersSpace& space, std::span<const double> x, std::span<const double> v) {
  detail::require_nonzero(v, "closed-form spray");
  return spray_terms<double>(point_data(space, x), v);
}

double trace_dX_dv(const RandersSpace& space, std::span<const double> x, std::span<const double> v) {
  detail::require_nonzero(v, "X trace");
  const auto vs = lift_all<double>(v);
  const auto terms = spray_terms<Jet1>(point_data(space, x), vs);
  double t = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) t += terms.X[i].partial(i);
  return t;
}

double trace_dY_dv(const RandersSpace& space, std::span<const double> x, std::span<const double> v) {
  detail::require_nonzero(v, "Y trace");
  const auto vs = lift_all<double>(v);
  const auto terms = spray_terms<Jet1>(point_data(space, x), vs);
  double t = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) t += terms.Y[i].partial(i);
  return t;
}

double trace_dY_dv_closed_form(const RandersSpace& space, std::span<const double> x, std::span<const double> v) {
  detail::require_nonzero(v, "Y trace");
  const PointData p = point_data(space, x);
  const int n = p.n;
  const double alpha = std::sqrt(quadratic_form<double>(p.a, v, v));
  double bv = 0.0;
  for (int i = 0; i < n; ++i) bv += p.b[i] * v[i];
  const double F = alpha + bv;
  double sym = 0.0;
  double skew = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sym += (p.b_cov(i, j) + p.b_cov(j, i)) * v[i] * v[j];
      skew += (p.b_cov(i, j) - p.b_cov(j, i)) * p.b_up[j] * v[i];
    }
  }
  return 0.5 * (n + 1) * sym / F + (n + 1) * skew * alpha / F;
}

BetaAnalysis analyze_beta(const RandersSpace& space, const ProbeSet& probes) {
  BetaAnalysis out;
  out.length_min = std::numeric_limits<double>::infinity();
  out.length_max = -std::numeric_limits<double>::infinity();
  for (const auto& probe : probes) {
    const PointData p = point_data(space, probe.x);
    for (int i = 0; i < p.n; ++i) {
      for (int j = 0; j < p.n; ++j) {
        out.killing_defect_sup = std::max(out.killing_defect_sup, std::abs(p.b_cov(i, j) + p.b_cov(j, i)));
        out.parallel_defect_sup = std::max(out.parallel_defect_sup, std::abs(p.b_cov(i, j)));
      }
    }
    for (double g : length_gradient_from(p)) out.length_gradient_sup = std::max(out.length_gradient_sup, std::abs(g));
    out.length_min = std::min(out.length_min, p.length);
    out.length_max = std::max(out.length_max, p.length);
    out.b_cov.push_back(p.b_cov);
  }
  if (probes.size() == 0) out.length_min = out.length_max = 0.0;
  return out;
}

bool is_berwald(const RandersSpace& space, const ProbeSet& probes, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return analyze_beta(space, probes).parallel_defect_sup <= tol;
}

std::string_view to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::killing_violated:
      return "killing-violated";
    case VerdictReason::length_not_constant:
      return "length-not-constant";
    case VerdictReason::satisfied:
      return "satisfied";
  }
  return "?";
}

TheoremVerdict theorem_verdict(const RandersSpace& space, const ProbeSet& probes, double tol_killing,
                               double tol_length) {
  return theorem_verdict(space, probes, analyze_beta(space, probes), tol_killing, tol_length);
}

TheoremVerdict theorem_verdict(const RandersSpace& space, const ProbeSet& probes, BetaAnalysis analysis,
                               double tol_killing, double tol_length) {
  if (!(tol_killing > 0.0) || !(tol_length > 0.0)) throw std::invalid_argument("tolerances must be positive");
  TheoremVerdict v;
  v.tol_killing = tol_killing;
  v.tol_length = tol_length;
  const bool killing = analysis.killing_defect_sup <= tol_killing;
  const bool constant_length =
      analysis.length_max - analysis.length_min <= tol_length && analysis.length_gradient_sup <= tol_length;
  v.admits = killing && constant_length;
  v.reason = !killing ? VerdictReason::killing_violated
                      : (!constant_length ? VerdictReason::length_not_constant : VerdictReason::satisfied);
  v.analysis = std::move(analysis);
  if (v.admits) {
    for (const auto& probe : probes) v.bh_density_probe_values.push_back(bh_density_closed_form(space, probe.x));
  }
  return v;
}

TangentNorm::TangentNorm(const RandersSpace& space, std::span<const double> x)
    : a_(space.metric<double>(x)), b_(space.one_form<double>(x)) {
  length_ = std::sqrt(std::max(0.0, quadratic_form<double>(inverse(a_), b_, b_)));
}

double TangentNorm::operator()(std::span<const double> v) const {
  return std::sqrt(quadratic_form<double>(a_, v, v)) + std::inner_product(b_.begin(), b_.end(), v.begin(), 0.0);
}

}  // namespace finslerlab

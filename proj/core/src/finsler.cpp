#include "finslerlab/finsler.hpp"

#include <cmath>

namespace finslerlab {

CoordinateChart::CoordinateChart(std::vector<std::string> names, std::vector<Interval> domain)
    : names_(std::move(names)), domain_(std::move(domain)) {
  if (names_.size() < 2) throw InvalidSpace("chart dimension must be at least 2");
  if (domain_.size() != names_.size()) throw InvalidSpace("domain needs one interval per coordinate");
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const auto [lo, hi] = domain_[i];
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      throw InvalidSpace("domain interval for '" + names_[i] + "' must satisfy lo < hi");
    }
  }
}

bool CoordinateChart::contains(std::span<const double> x) const {
  if (x.size() != domain_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > domain_[i].lo && x[i] < domain_[i].hi)) return false;
  }
  return true;
}

Matrix<double> fundamental_tensor(const FinslerStructure& F, std::span<const double> x, std::span<const double> v) {
  return fundamental_tensor<double>(F, x, v);
}

Tensor3<double> cartan_tensor(const FinslerStructure& F, std::span<const double> x, std::span<const double> v) {
  return cartan_tensor<double>(F, x, v);
}

Tensor3<double> formal_christoffel(const FinslerStructure& F, std::span<const double> x,
                                   std::span<const double> v) {
  return formal_christoffel<double>(F, x, v);
}

std::vector<double> spray(const FinslerStructure& F, std::span<const double> x, std::span<const double> v) {
  return spray<double>(F, x, v);
}

Matrix<double> nonlinear_connection(const FinslerStructure& F, std::span<const double> x,
                                    std::span<const double> v) {
  const int n = F.dimension();
  Matrix<double> N(n, n);
  if (coordinate_norm(v) < kZeroVectorThreshold) return N;
  const auto xs = lift<double>(x);
  const auto vs = lift_all<double>(v);
  const auto G = spray<Jet1>(F, std::span<const Jet1>(xs), std::span<const Jet1>(vs));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) N(i, j) = 0.5 * G[static_cast<std::size_t>(i)].partial(static_cast<std::size_t>(j));
  }
  return N;
}

double nonlinear_connection_trace(const FinslerStructure& F, std::span<const double> x, std::span<const double> v) {
  const Matrix<double> N = nonlinear_connection(F, x, v);
  double t = 0.0;
  for (int i = 0; i < N.rows(); ++i) t += N(i, i);
  return t;
}

Matrix<double> nonlinear_connection_contracted(const FinslerStructure& F, std::span<const double> x,
                                               std::span<const double> v) {
  const int n = F.dimension();
  Matrix<double> N(n, n);
  if (coordinate_norm(v) < kZeroVectorThreshold) return N;
  const auto gamma = formal_christoffel<double>(F, x, v);
  const auto A = cartan_tensor<double>(F, x, v);
  const auto ginv = inverse(fundamental_tensor<double>(F, x, v));
  const double f = F(x, v);
  std::vector<double> G(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) G[i] += gamma(i, j, k) * v[j] * v[k];
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        double a_up = 0.0;
        for (int l = 0; l < n; ++l) a_up += ginv(i, l) * A(l, j, k);
        s += gamma(i, j, k) * v[k] - a_up * G[k] / f;
      }
      N(i, j) = s;
    }
  }
  return N;
}

double euler_divergence(const FinslerStructure& F, std::span<const double> x, std::span<const double> v) {
  detail::require_nonzero(v, "Euler divergence");
  const auto xs = lift<double>(x);
  const auto vs = lift_all<double>(v);
  const Jet1 f = F(std::span<const Jet1>(xs), std::span<const Jet1>(vs));
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (vs[i] / f).partial(i);
  return s;
}

namespace {

struct State {
  std::vector<double> x;
  std::vector<double> v;
};

// (x', v') = (v, -G(x, v))
State derivative(const FinslerStructure& F, const State& s) {
  State d;
  d.x = s.v;
  d.v = spray<double>(F, s.x, s.v);
  for (auto& e : d.v) e = -e;
  return d;
}

State axpy(const State& s, double h, const State& d) {
  State out = s;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    out.x[i] += h * d.x[i];
    out.v[i] += h * d.v[i];
  }
  return out;
}

bool finite(const State& s) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.v[i])) return false;
  }
  return true;
}

}  // namespace

GeodesicPath geodesic(const FinslerStructure& F, std::span<const double> x0, std::span<const double> v0, double time,
                      int steps) {
  if (steps < 1) throw std::invalid_argument("geodesic needs at least one step");
  if (!F.chart().contains(x0)) throw std::invalid_argument("geodesic start point is outside the chart domain");
  detail::require_nonzero(v0, "geodesic initial velocity");

  const double h = time / steps;
  GeodesicPath path;
  State s{std::vector<double>(x0.begin(), x0.end()), std::vector<double>(v0.begin(), v0.end())};
  path.samples.push_back({0.0, s.x, s.v, F(s.x, s.v)});

  for (int step = 1; step <= steps; ++step) {
    const double t_prev = (step - 1) * h;
    State next;
    try {
      const State k1 = derivative(F, s);
      const State k2 = derivative(F, axpy(s, 0.5 * h, k1));
      const State k3 = derivative(F, axpy(s, 0.5 * h, k2));
      const State k4 = derivative(F, axpy(s, h, k3));
      next = s;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        next.x[i] += h / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
        next.v[i] += h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
      }
    } catch (const DomainError&) {
      path.status = GeodesicPath::Status::left_domain;
      path.exit_time = t_prev;
      return path;
    }
    if (!finite(next)) {
      path.status = GeodesicPath::Status::blew_up;
      path.exit_time = t_prev;
      return path;
    }
    if (!F.chart().contains(next.x)) {
      path.status = GeodesicPath::Status::left_domain;
      path.exit_time = t_prev;
      return path;
    }
    s = std::move(next);
    path.samples.push_back({step * h, s.x, s.v, F(s.x, s.v)});
  }
  return path;
}

}  // namespace finslerlab

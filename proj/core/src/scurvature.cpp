#include "finslerlab/scurvature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace finslerlab {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::lebesgue:
      return "lebesgue";
    case MeasureKind::riemannian_volume:
      return "riemannian-volume";
    case MeasureKind::busemann_hausdorff:
      return "busemann-hausdorff";
    case MeasureKind::custom:
      return "custom";
  }
  return "?";
}

std::optional<MeasureKind> parse_measure_kind(std::string_view text) {
  if (text == "lebesgue") return MeasureKind::lebesgue;
  if (text == "riemannian-volume") return MeasureKind::riemannian_volume;
  if (text == "busemann-hausdorff" || text == "bh") return MeasureKind::busemann_hausdorff;
  if (text == "custom") return MeasureKind::custom;
  return std::nullopt;
}

Measure Measure::lebesgue() {
  return Measure(
      MeasureKind::lebesgue, "lebesgue", [](std::span<const double>) { return 1.0; },
      [](std::span<const Jet1>) { return Jet1(1.0); });
}

Measure Measure::riemannian_volume(const RandersSpace& space) {
  return Measure(
      MeasureKind::riemannian_volume, "riemannian-volume",
      [space](std::span<const double> x) { return std::sqrt(determinant(space.metric<double>(x))); },
      [space](std::span<const Jet1> x) { return sqrt(determinant(space.metric<Jet1>(x))); });
}

Measure Measure::busemann_hausdorff(const RandersSpace& space) {
  return Measure(
      MeasureKind::busemann_hausdorff, "busemann-hausdorff",
      [space](std::span<const double> x) { return bh_density<double>(space, x); },
      [space](std::span<const Jet1> x) { return bh_density<Jet1>(space, x); });
}

Measure Measure::custom(ScalarField density) {
  std::string label = "custom(" + density.source() + ")";
  return Measure(
      MeasureKind::custom, std::move(label), [density](std::span<const double> x) { return density.evaluate<double>(x); },
      [density](std::span<const Jet1> x) { return density.evaluate<Jet1>(x); });
}

Measure Measure::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("measure scale factor must be positive");
  std::ostringstream label;
  label << c << "*" << label_;
  auto plain = plain_;
  auto jet = jet_;
  return Measure(
      kind_, label.str(), [plain, c](std::span<const double> x) { return c * plain(x); },
      [jet, c](std::span<const Jet1> x) { return c * jet(x); });
}

Measure Measure::times(ScalarField factor) const {
  std::string label = "(" + factor.source() + ")*" + label_;
  auto plain = plain_;
  auto jet = jet_;
  return Measure(
      MeasureKind::custom, std::move(label),
      [plain, factor](std::span<const double> x) { return factor.evaluate<double>(x) * plain(x); },
      [jet, factor](std::span<const Jet1> x) { return factor.evaluate<Jet1>(x) * jet(x); });
}

double Measure::log_derivative(std::span<const double> x, std::span<const double> v) const {
  const auto xs = lift_all<double>(x);
  const Jet1 sigma = jet_(xs);
  if (!(sigma.value > 0.0)) {
    throw DomainError("measure density " + label_ + " is not positive (" + std::to_string(sigma.value) + ")");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * sigma.partial(i);
  return s / sigma.value;
}

double riemannian_volume_density(const RandersSpace& space, std::span<const double> x) {
  const auto a = space.metric<double>(x);
  if (!is_positive_definite(a)) throw InvalidSpace("metric is not positive definite");
  return std::sqrt(determinant(a));
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double s_curvature(const FinslerStructure& F, const Measure& measure, std::span<const double> x,
                   std::span<const double> v) {
  if (coordinate_norm(v) < kZeroVectorThreshold) return 0.0;
  return nonlinear_connection_trace(F, x, v) - measure.log_derivative(x, v);
}

namespace {

double log_volume_ratio(const FinslerStructure& F, const Measure& measure, const GeodesicSample& s) {
  const double det = determinant(fundamental_tensor<double>(F, s.x, s.v));
  const double sigma = measure.density(s.x);
  if (!(det > 0.0) || !(sigma > 0.0)) throw DomainError("non-positive volume along the transport geodesic");
  return 0.5 * std::log(det) - std::log(sigma);
}

double endpoint_phi(const FinslerStructure& F, const Measure& measure, std::span<const double> x,
                    std::span<const double> u, double t, int steps) {
  const GeodesicPath path = geodesic(F, x, u, t, steps);
  if (path.status != GeodesicPath::Status::completed) {
    throw DomainError("transport geodesic left the chart at t = " + std::to_string(path.exit_time));
  }
  return log_volume_ratio(F, measure, path.samples.back());
}

}  // namespace

double s_curvature_transport(const FinslerStructure& F, const Measure& measure, std::span<const double> x,
                             std::span<const double> v, const TransportOptions& options) {
  detail::require_nonzero(v, "transport S-curvature");
  if (!(options.h > 0.0) || options.steps < 1) throw std::invalid_argument("transport needs h > 0 and steps >= 1");
  const double speed = F(x, v);
  std::vector<double> u(v.begin(), v.end());
  for (auto& e : u) e /= speed;

  const auto central = [&](double h) {
    const double forward = endpoint_phi(F, measure, x, u, h, options.steps);
    const double backward = endpoint_phi(F, measure, x, u, -h, options.steps);
    return (forward - backward) / (2.0 * h);
  };
  double s = central(options.h);
  if (options.richardson) s = (4.0 * central(0.5 * options.h) - s) / 3.0;
  return speed * s;
}

MonteCarloEstimate bh_density_monte_carlo(const RandersSpace& space, std::span<const double> x,
                                          std::uint64_t samples, std::uint64_t seed, int workers) {
  if (samples < kMinMonteCarloSamples) {
    throw std::invalid_argument("Monte-Carlo density needs at least " + std::to_string(kMinMonteCarloSamples) +
                                " samples");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const int n = space.dimension();
  const TangentNorm norm(space, x);
  if (!(norm.beta_length() < 1.0)) throw InvalidSpace("||beta|| >= 1: unit ball is unbounded");

  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = norm.metric()(i, j);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw InvalidSpace("degenerate bounding box: metric is not positive definite");
  }
  // c = E diag(lambda^{-1/2}) t makes alpha(c) = |t|.
  const Eigen::MatrixXd frame = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal();
  const double jacobian = frame.determinant();
  const double half = 1.0 / (1.0 - norm.beta_length());
  const double box_volume = std::pow(2.0 * half, n) * std::abs(jacobian);

  std::vector<std::uint64_t> hits(static_cast<std::size_t>(workers), 0);
  const auto run = [&](int w) {
    const std::uint64_t count = samples / workers + (static_cast<std::uint64_t>(w) < samples % workers ? 1 : 0);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(w)};
    std::mt19937_64 rng(seq);
    std::vector<double> t(static_cast<std::size_t>(n));
    std::vector<double> c(static_cast<std::size_t>(n));
    std::uint64_t local = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (auto& e : t) e = half * (2.0 * unit_uniform(rng) - 1.0);
      for (int i = 0; i < n; ++i) {
        double ci = 0.0;
        for (int k = 0; k < n; ++k) ci += frame(i, k) * t[k];
        c[i] = ci;
      }
      if (norm(c) < 1.0) ++local;
    }
    hits[static_cast<std::size_t>(w)] = local;
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
  }

  MonteCarloEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.workers = workers;
  est.box_half_width = half;
  for (auto h : hits) est.hits += h;
  const double p = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.ball_volume = box_volume * p;
  est.ball_volume_std_error = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  if (!(est.ball_volume > 0.0)) throw Error("Monte-Carlo sampling hit no point of the unit ball");
  est.density = unit_ball_volume(n) / est.ball_volume;
  est.std_error = est.density * est.ball_volume_std_error / est.ball_volume;
  return est;
}

UniquenessResult measure_uniqueness_check(const FinslerStructure& F, const Measure& first, const Measure& second,
                                          const ProbeSet& probes, double tol) {
  UniquenessResult r;
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  for (const auto& probe : probes) {
    const double tr = nonlinear_connection_trace(F, probe.x, probe.v);
    r.max_s_first = std::max(r.max_s_first, std::abs(tr - first.log_derivative(probe.x, probe.v)));
    r.max_s_second = std::max(r.max_s_second, std::abs(tr - second.log_derivative(probe.x, probe.v)));
    const double ratio = first.density(probe.x) / second.density(probe.x);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  r.ratio_spread = probes.size() ? ratio_max / ratio_min - 1.0 : 0.0;
  r.both_vanishing = r.max_s_first <= tol && r.max_s_second <= tol;
  r.consistent = !r.both_vanishing || r.ratio_spread <= 10.0 * tol;
  return r;
}

}  // namespace finslerlab

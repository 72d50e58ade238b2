#pragma once

// Measures m = sigma(x) dx^1...dx^n and the S-curvature
//
//   S(v) = sum_i N^i_i(v) - v^i d(log sigma)/dx^i,
//
// together with an independent route through its definition (the rate of
// change of log(sqrt(det g_{eta'}) / sigma(eta)) along a unit-speed geodesic)
// and a Monte-Carlo estimate of the Busemann-Hausdorff density.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "finslerlab/expr.hpp"
#include "finslerlab/finsler.hpp"
#include "finslerlab/probes.hpp"
#include "finslerlab/randers.hpp"

namespace finslerlab {

enum class MeasureKind { lebesgue, riemannian_volume, busemann_hausdorff, custom };

std::string_view to_string(MeasureKind kind);
/// Accepts "lebesgue", "riemannian-volume", "busemann-hausdorff" (or "bh"), "custom".
std::optional<MeasureKind> parse_measure_kind(std::string_view text);

class Measure {
 public:
  static Measure lebesgue();
  static Measure riemannian_volume(const RandersSpace& space);
  static Measure busemann_hausdorff(const RandersSpace& space);
  static Measure custom(ScalarField density);

  /// c * sigma. The kind is kept; the label records the change.
  Measure scaled(double c) const;
  /// f(x) * sigma; the result is a custom measure.
  Measure times(ScalarField factor) const;

  MeasureKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }

  double density(std::span<const double> x) const { return plain_(x); }
  Jet1 density(std::span<const Jet1> x) const { return jet_(x); }

  /// sum_i v^i (d sigma/dx^i) / sigma. Throws DomainError when sigma <= 0.
  double log_derivative(std::span<const double> x, std::span<const double> v) const;

 private:
  Measure(MeasureKind kind, std::string label, std::function<double(std::span<const double>)> plain,
          std::function<Jet1(std::span<const Jet1>)> jet)
      : kind_(kind), label_(std::move(label)), plain_(std::move(plain)), jet_(std::move(jet)) {}

  MeasureKind kind_;
  std::string label_;
  std::function<double(std::span<const double>)> plain_;
  std::function<Jet1(std::span<const Jet1>)> jet_;
};

/// sqrt(det a(x)).
double riemannian_volume_density(const RandersSpace& space, std::span<const double> x);

/// Omega_n = pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// S(v) via the trace of the nonlinear connection; S(0) = 0.
double s_curvature(const FinslerStructure& F, const Measure& measure, std::span<const double> x,
                   std::span<const double> v);

struct TransportOptions {
  double h = 1e-3;
  int steps = 100;
  bool richardson = true;  // combine step h and h/2 as (4 D(h/2) - D(h)) / 3
};

/// S(v) from the definition: integrate the geodesic through (x, v/F(v)) to
/// t = +-h, central-difference phi(t) = log(sqrt(det g_{eta'(t)}) / sigma(eta(t))),
/// then rescale by F(v). Throws DomainError if the path leaves the chart.
double s_curvature_transport(const FinslerStructure& F, const Measure& measure, std::span<const double> x,
                             std::span<const double> v, const TransportOptions& options = {});

struct MonteCarloEstimate {
  double density = 0.0;    // omega_n / vol(unit ball)
  double std_error = 0.0;  // delta-method error from the binomial proportion
  double ball_volume = 0.0;
  double ball_volume_std_error = 0.0;
  double box_half_width = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  int workers = 0;
};

inline constexpr std::uint64_t kMinMonteCarloSamples = 10'000;

/// Busemann-Hausdorff density by rejection sampling of the coordinate unit
/// ball {c : F(x, c) < 1}. Samples are drawn in the eigenframe of a(x), scaled
/// so alpha is Euclidean, inside the box |t_k| < 1/(1 - ||beta||) that
/// contains the ball because F >= (1 - ||beta||) alpha. Each worker w draws
/// from std::mt19937_64 seeded by seed_seq{seed, w}; hit counts are summed in
/// worker order.
MonteCarloEstimate bh_density_monte_carlo(const RandersSpace& space, std::span<const double> x,
                                          std::uint64_t samples, std::uint64_t seed, int workers = 4);

struct UniquenessResult {
  bool both_vanishing = false;
  double max_s_first = 0.0;
  double max_s_second = 0.0;
  double ratio_spread = 0.0;  // max(sigma1/sigma2) / min(sigma1/sigma2) - 1 over probes
  bool consistent = true;     // if both vanish, spread <= 10 * tol
};

/// When two measures both have S <= tol on all probes they may differ only by
/// a constant factor.
UniquenessResult measure_uniqueness_check(const FinslerStructure& F, const Measure& first, const Measure& second,
                                          const ProbeSet& probes, double tol);

}  // namespace finslerlab

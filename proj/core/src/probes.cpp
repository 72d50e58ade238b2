#include "finslerlab/probes.hpp"

#include <cmath>
#include <numbers>

namespace finslerlab {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t index, int base) {
  double inv_base = 1.0 / base;
  double factor = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % static_cast<std::uint64_t>(base)) * factor;
    index /= static_cast<std::uint64_t>(base);
    factor *= inv_base;
  }
  return result;
}

constexpr double kInset = 0.01;

}  // namespace

double standard_normal(std::mt19937_64& rng) {
  double u1 = unit_uniform(rng);
  while (u1 <= 0.0) u1 = unit_uniform(rng);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ProbeSet make_probes(const CoordinateChart& chart, int count, std::uint64_t seed, bool corners) {
  const int n = chart.dimension();
  if (n > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("probe grid supports n <= 8");
  if (count < 0) throw std::invalid_argument("probe count must be non-negative");

  std::mt19937_64 rng(seed);
  std::vector<double> shift(static_cast<std::size_t>(n));
  for (auto& s : shift) s = unit_uniform(rng);

  const auto direction = [&] {
    std::vector<double> v(static_cast<std::size_t>(n));
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& e : v) {
        e = standard_normal(rng);
        norm += e * e;
      }
    } while (norm < 1e-20);
    norm = std::sqrt(norm);
    for (auto& e : v) e /= norm;
    return v;
  };

  ProbeSet set;
  set.seed = seed;
  set.interior_count = count;
  const auto& dom = chart.domain();
  for (int p = 0; p < count; ++p) {
    Probe probe;
    probe.x.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double u = radical_inverse(static_cast<std::uint64_t>(p + 1), kPrimes[i]) + shift[i];
      u -= std::floor(u);
      const double width = dom[i].hi - dom[i].lo;
      probe.x[i] = dom[i].lo + width * (kInset + (1.0 - 2.0 * kInset) * u);
    }
    probe.v = direction();
    set.probes.push_back(std::move(probe));
  }
  if (corners) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      Probe probe;
      probe.x.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const double width = dom[i].hi - dom[i].lo;
        probe.x[i] = (mask >> i) & 1 ? dom[i].hi - kInset * width : dom[i].lo + kInset * width;
      }
      probe.v = direction();
      set.probes.push_back(std::move(probe));
    }
  }
  return set;
}

}  // namespace finslerlab

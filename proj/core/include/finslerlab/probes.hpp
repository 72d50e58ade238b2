#pragma once

// Deterministic probe sets for validity checks. Points come from a Halton
// sequence with a seeded Cranley-Patterson shift, mapped into the inner 98% of
// the chart box; directions are uniform on the coordinate unit sphere
// (Box-Muller over std::mt19937_64, whose output the standard fixes bit for bit).

#include <cstdint>
#include <random>
#include <vector>

#include "finslerlab/finsler.hpp"

namespace finslerlab {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr int kDefaultProbeCount = 100;

struct Probe {
  std::vector<double> x;
  std::vector<double> v;  // unit Euclidean length in coordinates
};

struct ProbeSet {
  std::uint64_t seed = kDefaultSeed;
  int interior_count = 0;  // leading entries; the rest are shrunk corners
  std::vector<Probe> probes;

  std::size_t size() const noexcept { return probes.size(); }
  auto begin() const { return probes.begin(); }
  auto end() const { return probes.end(); }
  const Probe& operator[](std::size_t i) const { return probes[i]; }
};

/// `count` interior probes; with `corners`, also the 2^n box corners pulled
/// 1% of each side length inward.
ProbeSet make_probes(const CoordinateChart& chart, int count, std::uint64_t seed = kDefaultSeed,
                     bool corners = false);

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal by Box-Muller (one of the pair).
double standard_normal(std::mt19937_64& rng);

}  // namespace finslerlab

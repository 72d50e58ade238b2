#pragma once

// The full battery of identities and invariants for one Randers space, run on
// a deterministic probe set. Each check reports the worst value it measured
// and the bound it was judged against.

#include <cstdint>
#include <string>
#include <vector>

#include "finslerlab/probes.hpp"
#include "finslerlab/randers.hpp"

namespace finslerlab {

struct ValidationCheck {
  enum class Bound { at_most, at_least };

  std::string name;
  std::string module;  // finsler-core | randers | scurvature
  double measured = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::at_most;
  bool applicable = true;
  bool passed = false;
  int probes = 0;
  std::string note;
};

struct ValidationOptions {
  int probes = kDefaultProbeCount;
  std::uint64_t seed = kDefaultSeed;
  int transport_probes = 50;
  std::uint64_t mc_samples = 1'000'000;
  double tol_killing = kDefaultKillingTolerance;
  double tol_length = kDefaultLengthTolerance;
  double tol_s = 1e-8;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

ValidationReport run_validation(const RandersSpace& space, const ValidationOptions& options = {});

}  // namespace finslerlab

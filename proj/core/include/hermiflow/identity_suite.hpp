#pragma once

// The identity checks run by `hermiflow verify`: every pointwise identity the
// flow tensors are expected to satisfy, evaluated on one pair at a time.

#include "hermiflow/flow_tensors.hpp"
#include "hermiflow/lie_algebra.hpp"
#include "hermiflow/random_pairs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hermiflow {

/// Residuals of all identities on one pair. `x` is the field used for the
/// Lie-derivative checks. Gated identities (those needing N = 0 or
/// (d omega)^+ = 0) are omitted when their hypothesis fails.
std::vector<NamedResidual> identity_residuals(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair,
                                              const Vector& x);

struct IdentitySummary {
  std::string name;
  double worst = 0.0;
  int evaluated = 0;  // number of pairs on which the identity applied
};

struct SuiteReport {
  std::vector<IdentitySummary> identities;
  int pairs = 0;
  std::uint64_t seed = 0;
  double worst() const;
  bool passed(double tolerance) const { return worst() <= tolerance; }
};

/// Runs identity_residuals on `pair` and on `n_random` seeded random
/// compatible pairs over the same algebra.
SuiteReport run_identity_suite(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair, int n_random,
                               std::uint64_t seed);

/// Gate for the identities that assume N = 0 or (d omega)^+ = 0.
inline constexpr double kGateTol = 1e-12;

}  // namespace hermiflow

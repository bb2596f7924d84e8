#pragma once

#include "hermiflow/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hermiflow {

/// Maximum tolerated Jacobi-identity violation for a structure-constant set.
inline constexpr double kJacobiTol = 1e-12;

/// One bracket [e_i, e_j] contribution: c^k_{ij} = value (0-based indices).
struct BracketEntry {
  int i;
  int j;
  int k;
  double value;
};

/// Real Lie algebra of even dimension given by structure constants
/// [e_i, e_j] = sum_k c^k_{ij} e_k. Construction enforces exact
/// antisymmetry and rejects Jacobi residuals above kJacobiTol.
class LieAlgebraSpec {
 public:
  /// `structure` must have slots (Upper, Lower, Lower), entry (k, i, j) = c^k_{ij}.
  LieAlgebraSpec(std::string name, Tensor structure);

  /// Builds c from entries with i < j; the (j, i) twins are filled in.
  static LieAlgebraSpec from_brackets(std::string name, int dim, const std::vector<BracketEntry>& entries);
  static LieAlgebraSpec abelian(int dim, std::string name = "abelian");

  int dim() const noexcept { return structure_.dim(); }
  const std::string& name() const noexcept { return name_; }
  double c(int k, int i, int j) const { return structure_(k, i, j); }
  const Tensor& structure() const noexcept { return structure_; }

  /// [x, y] for left-invariant fields given by frame components.
  Vector bracket(const Vector& x, const Vector& y) const;

  double jacobi_residual() const { return jacobi_residual_of(structure_); }
  static double jacobi_residual_of(const Tensor& c);

  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  std::string name_;
  Tensor structure_;
  std::uint64_t fingerprint_ = 0;
};

/// Compatible pair (g, J): J^2 = -I and J^T g J = g, both per entry.
class AlmostHermitianPair {
 public:
  /// Validates both invariants to `tol`; throws NotAlmostComplex /
  /// Incompatible / NotPositiveDefinite.
  AlmostHermitianPair(const Matrix& g, const Matrix& j, double tol = kStructureTol);

  /// Skips the J checks (the metric must still be positive definite). Used for
  /// intermediate integrator stages where drift is measured, not enforced.
  static AlmostHermitianPair unchecked(const Matrix& g, const Matrix& j);

  int dim() const noexcept { return metric_.dim(); }
  const Metric& metric() const noexcept { return metric_; }
  const Matrix& g() const noexcept { return metric_.g(); }
  const Matrix& j() const noexcept { return j_; }

  /// Tolerance accepted by projections that assume J^2 = -I.
  double structure_tolerance() const noexcept { return tol_; }

  Tensor j_tensor() const { return Tensor::endomorphism(j_); }
  /// omega(X, Y) = g(JX, Y).
  Tensor omega() const;

  double j_squared_residual() const { return hermiflow::j_squared_residual(j_); }
  double compatibility_residual() const { return hermiflow::compatibility_residual(metric_.g(), j_); }

  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  AlmostHermitianPair(Metric metric, Matrix j, double tol);

  Metric metric_;
  Matrix j_;
  double tol_;
  std::uint64_t fingerprint_ = 0;
};

/// Standard complex structure: J e_{2a} = e_{2a+1}, J e_{2a+1} = -e_{2a}.
Matrix standard_complex_structure(int dim);

/// Identity of the (algebra, pair) a derived quantity was computed from.
std::uint64_t source_id(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair) noexcept;

}  // namespace hermiflow

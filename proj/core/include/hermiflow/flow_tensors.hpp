#pragma once

// Quadratic DJ-tensors of the unified almost Hermitian flow, its right-hand
// side, and checks for the identities they satisfy.

#include "hermiflow/geometry.hpp"
#include "hermiflow/lie_algebra.hpp"
#include "hermiflow/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hermiflow {

/// All bilinear forms are lower pairs in the coordinate frame. Frame sums are
/// taken in the g-orthonormal frame.
struct FlowTensorSet {
  Tensor b1, b2, b3, b4;
  Tensor b1_bar, b2_bar;
  Tensor q1, q2;
  Tensor n_script;  // B2 J
  Tensor r_script;  // Ric(JX, Y) + Ric(X, JY)
  Tensor q_script;  // B2 J + B3 J
  Tensor b_script;  // H(X, i, j) H(Y, i, j)
  Tensor theta_sharp;  // -J (D_i J) e_i, vector
  Tensor n_bar;
  Tensor k_script;  // <(D_i N)(J e_i, X), Y>
  Tensor h;         // d^c omega
  Tensor d_omega_plus;

  Tensor ric;
  Tensor laplacian_j;  // <(Delta J) X, Y>
  /// T(X, Y) = sum_i <(D_{J e_i} J)(D_X J) e_i, Y>; vanishes when N = 0.
  Tensor gauge_correction;
  /// Alternative expansion of Q_script by seven DJ-quadratic terms; agrees
  /// with q_script when N = 0.
  Tensor q_script_expanded;

  std::uint64_t source = 0;
};

FlowTensorSet assemble(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra, const Connection& conn,
                       const CurvatureData& curv, const DJBundle& dj, const Nijenhuis& n,
                       const OmegaDerivatives& omega);
FlowTensorSet assemble(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra, const Geometry& geo);
FlowTensorSet assemble(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra);

/// (dg/dt, dJ/dt): h is a lower pair, k an endomorphism.
struct VariationPair {
  Tensor h;
  Tensor k;
};

VariationPair flow_rhs(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra);
VariationPair flow_rhs(const AlmostHermitianPair& pair, const FlowTensorSet& set);

struct VariationResiduals {
  double asymmetry = 0.0;  // |h - h^T|
  double k_11 = 0.0;       // |K^{(1,1)}|, i.e. KJ + JK
  double coupling = 0.0;   // |K^{sym} J - h^{(0,2)+(2,0)}|
  double max() const;
};

VariationResiduals check_variation(const AlmostHermitianPair& pair, const VariationPair& v);

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

struct ReductionReport {
  double tolerance = 1e-10;
  double norm_d_omega = 0.0;
  double norm_n = 0.0;
  bool closed_branch = false;      // |d omega| <= tolerance
  bool integrable_branch = false;  // |N| <= tolerance
  std::vector<NamedResidual> closed_checks;
  std::vector<NamedResidual> integrable_checks;

  bool any_branch() const { return closed_branch || integrable_branch; }
  /// True when every applicable check is within tolerance (vacuously true
  /// when no branch applies).
  bool passed() const;
  std::string describe() const;
};

ReductionReport check_reduction(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra,
                                double tolerance = 1e-10);

struct GaugeReport {
  /// |L_theta J - (Delta J + Q_script + R_script + K_script + N_bar)|
  double residual = 0.0;
  /// |gauge_correction|, the term by which the identity above can fail when N != 0.
  double correction_norm = 0.0;
  /// Residual after also subtracting gauge_correction.
  double completed_residual = 0.0;
};

GaugeReport check_gauge(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra);

}  // namespace hermiflow

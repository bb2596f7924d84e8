#pragma once

// Left-invariant Riemannian and almost Hermitian geometry on a Lie algebra
// frame. Every tensor has constant components, so derivatives reduce to
// algebra in the connection coefficients.

#include "hermiflow/lie_algebra.hpp"
#include "hermiflow/tensor.hpp"

#include <cstdint>
#include <vector>

namespace hermiflow {

/// Levi-Civita coefficients: gamma(k, i, j) = Gamma^k_{ij}, so that
/// nabla_{e_i} e_j = sum_k Gamma^k_{ij} e_k.
struct Connection {
  Tensor gamma;
  std::uint64_t source = 0;
};

Connection levi_civita(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair);

/// max |Gamma^k_{ij} - Gamma^k_{ji} - c^k_{ij}|.
double torsion_residual(const Connection& conn, const LieAlgebraSpec& algebra);
/// max |g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)|.
double metric_residual(const Connection& conn, const Metric& metric);

/// Rm(X, Y, Z, W) = g(R(X, Y)Z, W) with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y];
/// ric(X, Y) = sum_a Rm(f_a, X, Y, f_a) over a g-orthonormal frame.
struct CurvatureData {
  Tensor rm;
  Tensor ric;
  std::uint64_t source = 0;
};

CurvatureData curvature(const Connection& conn, const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair);

struct CurvatureResiduals {
  double antisym_12 = 0.0;
  double antisym_34 = 0.0;
  double pair_symmetry = 0.0;
  double bianchi = 0.0;
  double ric_symmetry = 0.0;
  double max() const;
};
CurvatureResiduals curvature_residuals(const CurvatureData& curv);

/// Covariant derivative of a left-invariant tensor. The result has a new
/// lower slot in front: (DT)(e_k; ...) = (nabla_{e_k} T)(...).
Tensor cov_derivative(const Tensor& t, const Connection& conn);

/// Iterated covariant derivatives of J and its rough Laplacian.
/// derivatives[0] = DJ with slots (Lower; Upper, Lower) so that
/// DJ(i, a, b) is the a-component of (D_{e_i} J) e_b.
struct DJBundle {
  std::vector<Tensor> derivatives;  // DJ, D^2 J, ..., D^{k_max} J
  Tensor d2j;                       // always present, needed for the Laplacian
  Tensor laplacian;                 // endomorphism (Upper, Lower)
  std::uint64_t source = 0;

  const Tensor& dj() const { return derivatives.front(); }
};

DJBundle dj_bundle(const AlmostHermitianPair& pair, const Connection& conn, const LieAlgebraSpec& algebra,
                   int k_max);

/// N(X, Y) = [JX, JY] - [X, Y] - J[JX, Y] - J[X, JY].
/// endo(x, y, z) is the z-component of N(e_x, e_y); low(x, y, z) = g(N(e_x, e_y), e_z).
struct Nijenhuis {
  Tensor endo;
  Tensor low;
  std::uint64_t source = 0;
};

Nijenhuis nijenhuis(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra);

/// d omega from the covariant formula, cross-checked against the
/// Chevalley-Eilenberg differential; plus (d omega)^+ and H = d^c omega.
struct OmegaDerivatives {
  Tensor d_omega;
  Tensor d_omega_algebraic;
  Tensor d_omega_plus;
  Tensor h;
  double route_residual = 0.0;
  std::uint64_t source = 0;
};

OmegaDerivatives omega_derivatives(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra,
                                   const Connection& conn);

/// Lie derivatives along a left-invariant field x (frame components).
struct LieDerivatives {
  Tensor of_metric;  // (L_X g)(Y, Z), lower pair
  Tensor of_j;       // (L_X J), endomorphism
};

LieDerivatives lie_derivative(const Vector& x, const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra);

/// [DRm, D^2 Rm, ..., D^{k_max} Rm]; empty for k_max = 0.
std::vector<Tensor> higher_rm(const Connection& conn, const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair,
                              int k_max);
std::vector<Tensor> higher_rm(const Connection& conn, const CurvatureData& curv, int k_max);

/// <(D_X J)Y, Z> as an all-lower order-3 tensor, slots (X, Y, Z).
Tensor lower_dj(const Tensor& dj, const Metric& metric);

/// Everything above evaluated once for a single state.
struct Geometry {
  Connection conn;
  CurvatureData curv;
  DJBundle dj;
  Nijenhuis n;
  OmegaDerivatives omega;
};

Geometry compute_geometry(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair, int k_max = 2);

}  // namespace hermiflow

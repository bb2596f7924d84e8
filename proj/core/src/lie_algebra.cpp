#include "hermiflow/lie_algebra.hpp"

#include "hermiflow/error.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

namespace hermiflow {

namespace {

// FNV-1a over the raw bytes of the doubles.
std::uint64_t hash_doubles(std::uint64_t h, const double* p, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, p + i, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;

}  // namespace

LieAlgebraSpec::LieAlgebraSpec(std::string name, Tensor structure)
    : name_(std::move(name)), structure_(std::move(structure)) {
  const std::vector<Variance> expected{Variance::Upper, Variance::Lower, Variance::Lower};
  if (structure_.variance() != expected) {
    throw Error(ErrorCode::VarianceMismatch, "structure constants need slots (Upper, Lower, Lower)");
  }
  const int d = structure_.dim();
  if (d < 2 || d % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "Lie algebra dimension must be even and >= 2");
  }
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (structure_(k, i, j) != -structure_(k, j, i)) {
          throw Error(ErrorCode::InvalidArgument, "structure constants are not antisymmetric in (i, j)");
        }
  const double jr = jacobi_residual_of(structure_);
  if (!(jr <= kJacobiTol)) {
    throw Error(ErrorCode::Jacobi,
                "Jacobi identity violated: residual " + std::to_string(jr) + " exceeds 1e-12");
  }
  fingerprint_ = hash_doubles(kFnvOffset, structure_.data().data(), structure_.size());
}

LieAlgebraSpec LieAlgebraSpec::from_brackets(std::string name, int dim,
                                             const std::vector<BracketEntry>& entries) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  Tensor c(dim, {Variance::Upper, Variance::Lower, Variance::Lower});
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim) {
      throw Error(ErrorCode::SlotOutOfRange, "bracket index out of range");
    }
    if (e.i >= e.j) throw Error(ErrorCode::InvalidArgument, "bracket entries need i < j");
    c(e.k, e.i, e.j) = e.value;
    c(e.k, e.j, e.i) = -e.value;
  }
  return LieAlgebraSpec(std::move(name), std::move(c));
}

LieAlgebraSpec LieAlgebraSpec::abelian(int dim, std::string name) {
  return LieAlgebraSpec(std::move(name), Tensor(dim, {Variance::Upper, Variance::Lower, Variance::Lower}));
}

Vector LieAlgebraSpec::bracket(const Vector& x, const Vector& y) const {
  const int d = dim();
  Vector out = Vector::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      const double w = x(i) * y(j);
      if (w == 0.0) continue;
      for (int k = 0; k < d; ++k) out(k) += structure_(k, i, j) * w;
    }
  }
  return out;
}

double LieAlgebraSpec::jacobi_residual_of(const Tensor& c) {
  const int d = c.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int m = 0; m < d; ++m) {
            s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
          }
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

AlmostHermitianPair::AlmostHermitianPair(Metric metric, Matrix j, double tol)
    : metric_(std::move(metric)), j_(std::move(j)), tol_(tol) {
  if (j_.rows() != metric_.dim() || j_.cols() != metric_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "J and g dimensions differ");
  }
  if (metric_.dim() % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be even");
  fingerprint_ = hash_doubles(kFnvOffset, metric_.g().data(), static_cast<std::size_t>(metric_.g().size()));
  fingerprint_ = hash_doubles(fingerprint_, j_.data(), static_cast<std::size_t>(j_.size()));
}

AlmostHermitianPair::AlmostHermitianPair(const Matrix& g, const Matrix& j, double tol)
    : AlmostHermitianPair(Metric(g), j, tol) {
  const double jsq = j_squared_residual();
  if (!(jsq <= tol)) {
    throw Error(ErrorCode::NotAlmostComplex,
                "J^2 = -I violated: max residual " + std::to_string(jsq));
  }
  const double compat = compatibility_residual();
  if (!(compat <= tol)) {
    throw Error(ErrorCode::Incompatible,
                "g(JX, JY) = g(X, Y) violated: max residual " + std::to_string(compat));
  }
}

AlmostHermitianPair AlmostHermitianPair::unchecked(const Matrix& g, const Matrix& j) {
  return AlmostHermitianPair(Metric(g), j, std::numeric_limits<double>::infinity());
}

Tensor AlmostHermitianPair::omega() const {
  return Tensor::bilinear(j_.transpose() * metric_.g());
}

Matrix standard_complex_structure(int dim) {
  if (dim < 2 || dim % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be even");
  Matrix j = Matrix::Zero(dim, dim);
  for (int a = 0; a < dim; a += 2) {
    j(a + 1, a) = 1.0;
    j(a, a + 1) = -1.0;
  }
  return j;
}

std::uint64_t source_id(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair) noexcept {
  return algebra.fingerprint() * 31u ^ pair.fingerprint();
}

}  // namespace hermiflow

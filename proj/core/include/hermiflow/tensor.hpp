#pragma once

// Dense multilinear algebra over a single real frame of dimension 2n.

#include <Eigen/Dense>

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace hermiflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default per-entry tolerance for J^2 = -I and J^T g J = g.
inline constexpr double kStructureTol = 1e-12;

enum class Variance : std::uint8_t { Lower, Upper };

/// Dense tensor with constant frame components. Storage is row-major in slot
/// order: entry (i0, i1, ..., ik) lives at ((i0 * dim + i1) * dim + ...) + ik.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, std::vector<Variance> variance);

  /// All-lower tensor of the given order.
  static Tensor covariant(int dim, int order);
  /// Bilinear form h(e_i, e_j) = m(i, j).
  static Tensor bilinear(const Matrix& m);
  /// Endomorphism A e_b = sum_a m(a, b) e_a, stored with slots (Upper, Lower).
  static Tensor endomorphism(const Matrix& m);
  static Tensor vector(const Vector& v);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const noexcept { return variance_; }
  Variance variance(int slot) const { return variance_.at(static_cast<std::size_t>(slot)); }
  std::size_t size() const noexcept { return entries_.size(); }

  std::span<double> data() noexcept { return entries_; }
  std::span<const double> data() const noexcept { return entries_; }

  std::size_t offset(std::span<const int> index) const;

  double& at(std::span<const int> index) { return entries_[offset(index)]; }
  double at(std::span<const int> index) const { return entries_[offset(index)]; }

  template <std::integral... I>
  double& operator()(I... i) {
    const int idx[] = {static_cast<int>(i)...};
    return at(std::span<const int>(idx, sizeof...(I)));
  }
  template <std::integral... I>
  double operator()(I... i) const {
    const int idx[] = {static_cast<int>(i)...};
    return at(std::span<const int>(idx, sizeof...(I)));
  }

  /// Order-2 tensors only.
  Matrix matrix() const;
  /// Order-1 tensors only.
  Vector as_vector() const;

  bool same_shape(const Tensor& other) const noexcept {
    return dim_ == other.dim_ && variance_ == other.variance_;
  }

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s) noexcept;

  double max_abs() const noexcept;
  bool all_finite() const noexcept;

 private:
  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> entries_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator-(Tensor a);
Tensor operator*(double s, Tensor a);

/// Riemannian metric on the frame with cached inverse and a g-orthonormal basis.
class Metric {
 public:
  /// g is symmetrized on entry; throws NotPositiveDefinite unless all
  /// eigenvalues are > 0.
  explicit Metric(const Matrix& g);

  int dim() const noexcept { return static_cast<int>(g_.rows()); }
  const Matrix& g() const noexcept { return g_; }
  const Matrix& inverse() const noexcept { return g_inv_; }
  /// Columns f_a = sum_i P(i, a) e_i are g-orthonormal; Gram-Schmidt on the
  /// standard frame in index order, no pivoting.
  const Matrix& orthonormal_frame() const noexcept { return frame_; }
  /// P^{-1} = P^T g.
  const Matrix& orthonormal_frame_inverse() const noexcept { return frame_inv_; }
  double min_eigenvalue() const noexcept { return min_eig_; }

 private:
  Matrix g_;
  Matrix g_inv_;
  Matrix frame_;
  Matrix frame_inv_;
  double min_eig_ = 0.0;
};

/// Components of T in the basis f_a = sum_i P(i, a) e_i. Lower slots pick up
/// P, upper slots pick up P^{-1}.
Tensor in_frame(const Tensor& t, const Matrix& p, const Matrix& p_inv);

/// Components of T in the g-orthonormal frame cached in m.
Tensor to_orthonormal(const Tensor& t, const Metric& m);
/// Inverse of to_orthonormal: components back in the coordinate frame.
Tensor from_orthonormal(const Tensor& t, const Metric& m);

/// Metric trace over two slots; the output keeps the remaining slots in order.
Tensor contract(const Tensor& t, int slot_a, int slot_b, const Metric& m);

/// Reference implementation of contract: explicit nested loops over an
/// explicitly constructed orthonormal frame.
Tensor oracle_contract(const Tensor& t, int slot_a, int slot_b, const Metric& m);

struct SymSkew {
  Tensor sym;
  Tensor skew;
};
SymSkew project_sym_skew(const Tensor& h);

struct JParts {
  Tensor h11;  // (1,1) part
  Tensor h02;  // (0,2)+(2,0) part
};
/// Splits an order-2 lower tensor under h -> h(J., J.). Throws NotAlmostComplex
/// when max |J^2 + I| exceeds j_tol.
JParts project_j(const Tensor& h, const Matrix& j, double j_tol = kStructureTol);

/// (TJ)(X, Y) = T(JX, Y).
Tensor compose_j(const Tensor& t, const Matrix& j);

/// |T| with every slot traced in a g-orthonormal frame.
double frame_norm(const Tensor& t, const Metric& m);

/// Reference implementation of frame_norm: full nested-loop contraction of T
/// with itself through g^{-1} (lower slots) and g (upper slots).
double oracle_frame_norm(const Tensor& t, const Metric& m);

/// Lowers the single upper slot of an endomorphism: A(X, Y) = g(AX, Y).
Tensor lower_endomorphism(const Tensor& a, const Metric& m);
/// Inverse of lower_endomorphism.
Tensor raise_bilinear(const Tensor& h, const Metric& m);

/// max |J^2 + I| over entries.
double j_squared_residual(const Matrix& j);
/// max |J^T g J - g| over entries.
double compatibility_residual(const Matrix& g, const Matrix& j);

}  // namespace hermiflow

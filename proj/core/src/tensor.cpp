#include "hermiflow/tensor.hpp"

#include "hermiflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hermiflow {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Writes the multi-index of flat position `flat` into idx (row-major).
void decode(std::size_t flat, int dim, std::span<int> idx) {
  for (std::size_t s = idx.size(); s-- > 0;) {
    idx[s] = static_cast<int>(flat % static_cast<std::size_t>(dim));
    flat /= static_cast<std::size_t>(dim);
  }
}

void require_slot(const Tensor& t, int slot) {
  if (slot < 0 || slot >= t.order()) {
    throw Error(ErrorCode::SlotOutOfRange,
                "slot " + std::to_string(slot) + " out of range for order " +
                    std::to_string(t.order()));
  }
}

void require_dim(const Tensor& t, const Metric& m) {
  if (t.dim() != m.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "tensor dimension " + std::to_string(t.dim()) +
                    " does not match metric dimension " + std::to_string(m.dim()));
  }
}

void require_lower_pair(const Tensor& h, const char* what) {
  if (h.order() != 2) {
    throw Error(ErrorCode::WrongOrder, std::string(what) + ": expected an order-2 tensor");
  }
  if (h.variance(0) != Variance::Lower || h.variance(1) != Variance::Lower) {
    throw Error(ErrorCode::VarianceMismatch,
                std::string(what) + ": expected both slots lower");
  }
}

// Applies a linear map to one slot: out[.., a, ..] = sum_i map(a, i) * t[.., i, ..].
Tensor transform_slot(const Tensor& t, int slot, const Matrix& map) {
  Tensor out(t.dim(), t.variance());
  const int d = t.dim();
  const std::size_t stride = ipow(d, t.order() - slot - 1);
  const std::size_t block = stride * static_cast<std::size_t>(d);
  const auto in = t.data();
  auto dst = out.data();
  for (std::size_t base = 0; base < t.size(); base += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      for (int a = 0; a < d; ++a) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
          acc += map(a, i) * in[base + static_cast<std::size_t>(i) * stride + inner];
        }
        dst[base + static_cast<std::size_t>(a) * stride + inner] = acc;
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Tensor

Tensor::Tensor(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "tensor dimension must be >= 1");
  entries_.assign(ipow(dim, order()), 0.0);
}

Tensor Tensor::covariant(int dim, int order) {
  return Tensor(dim, std::vector<Variance>(static_cast<std::size_t>(order), Variance::Lower));
}

Tensor Tensor::bilinear(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "bilinear form must be square");
  Tensor t = covariant(static_cast<int>(m.rows()), 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  return t;
}

Tensor Tensor::endomorphism(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "endomorphism must be square");
  Tensor t(static_cast<int>(m.rows()), {Variance::Upper, Variance::Lower});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  return t;
}

Tensor Tensor::vector(const Vector& v) {
  Tensor t(static_cast<int>(v.size()), {Variance::Upper});
  for (int i = 0; i < v.size(); ++i) t(i) = v(i);
  return t;
}

std::size_t Tensor::offset(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order()) {
    throw Error(ErrorCode::WrongOrder, "index arity does not match tensor order");
  }
  std::size_t off = 0;
  for (int i : index) {
    if (i < 0 || i >= dim_) throw Error(ErrorCode::SlotOutOfRange, "component index out of range");
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return off;
}

Matrix Tensor::matrix() const {
  if (order() != 2) throw Error(ErrorCode::WrongOrder, "matrix() needs an order-2 tensor");
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = entries_[static_cast<std::size_t>(i * dim_ + j)];
  return m;
}

Vector Tensor::as_vector() const {
  if (order() != 1) throw Error(ErrorCode::WrongOrder, "as_vector() needs an order-1 tensor");
  return Eigen::Map<const Vector>(entries_.data(), dim_);
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (!same_shape(other)) throw Error(ErrorCode::VarianceMismatch, "tensor shapes differ in +=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (!same_shape(other)) throw Error(ErrorCode::VarianceMismatch, "tensor shapes differ in -=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) noexcept {
  for (double& x : entries_) x *= s;
  return *this;
}

double Tensor::max_abs() const noexcept {
  double m = 0.0;
  for (double x : entries_) m = std::max(m, std::abs(x));
  return m;
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return std::isfinite(x); });
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator-(Tensor a) { return a *= -1.0; }
Tensor operator*(double s, Tensor a) { return a *= s; }

// ---------------------------------------------------------------- Metric

Metric::Metric(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "metric must be a non-empty square matrix");
  }
  g_ = 0.5 * (g + g.transpose());
  if (!g_.allFinite()) throw Error(ErrorCode::NotPositiveDefinite, "metric has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g_, Eigen::EigenvaluesOnly);
  min_eig_ = eig.eigenvalues().minCoeff();
  if (!(min_eig_ > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "metric is not positive definite (min eigenvalue " + std::to_string(min_eig_) + ")");
  }
  g_inv_ = g_.ldlt().solve(Matrix::Identity(g_.rows(), g_.cols()));
  g_inv_ = 0.5 * (g_inv_ + g_inv_.transpose()).eval();

  const int d = dim();
  frame_ = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    Vector v = Vector::Unit(d, a);
    for (int b = 0; b < a; ++b) {
      const auto fb = frame_.col(b);
      v -= fb.dot(g_ * v) * fb;
    }
    v /= std::sqrt(v.dot(g_ * v));
    frame_.col(a) = v;
  }
  frame_inv_ = frame_.transpose() * g_;
}

// ---------------------------------------------------------------- frames

Tensor in_frame(const Tensor& t, const Matrix& p, const Matrix& p_inv) {
  Tensor out = t;
  const Matrix pt = p.transpose();
  for (int s = 0; s < t.order(); ++s) {
    out = transform_slot(out, s, t.variance(s) == Variance::Lower ? pt : p_inv);
  }
  return out;
}

Tensor to_orthonormal(const Tensor& t, const Metric& m) {
  require_dim(t, m);
  return in_frame(t, m.orthonormal_frame(), m.orthonormal_frame_inverse());
}

Tensor from_orthonormal(const Tensor& t, const Metric& m) {
  require_dim(t, m);
  return in_frame(t, m.orthonormal_frame_inverse(), m.orthonormal_frame());
}

// ---------------------------------------------------------------- contraction

Tensor contract(const Tensor& t, int slot_a, int slot_b, const Metric& m) {
  require_slot(t, slot_a);
  require_slot(t, slot_b);
  if (slot_a == slot_b) throw Error(ErrorCode::SlotOutOfRange, "cannot contract a slot with itself");
  require_dim(t, m);

  const Variance va = t.variance(slot_a);
  const Variance vb = t.variance(slot_b);
  const int d = t.dim();
  Matrix weight;
  if (va == Variance::Lower && vb == Variance::Lower) {
    weight = m.inverse();
  } else if (va == Variance::Upper && vb == Variance::Upper) {
    weight = m.g();
  } else {
    weight = Matrix::Identity(d, d);
  }

  std::vector<Variance> rest;
  for (int s = 0; s < t.order(); ++s)
    if (s != slot_a && s != slot_b) rest.push_back(t.variance(s));
  Tensor out(d, rest);

  const std::size_t sa = ipow(d, t.order() - slot_a - 1);
  const std::size_t sb = ipow(d, t.order() - slot_b - 1);
  std::vector<int> out_idx(rest.size());
  std::vector<int> full(static_cast<std::size_t>(t.order()));
  const auto src = t.data();
  auto dst = out.data();
  for (std::size_t f = 0; f < out.size(); ++f) {
    decode(f, d, out_idx);
    for (int s = 0, r = 0; s < t.order(); ++s) {
      full[static_cast<std::size_t>(s)] = (s == slot_a || s == slot_b) ? 0 : out_idx[static_cast<std::size_t>(r++)];
    }
    const std::size_t base = t.offset(full);
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double w = weight(i, j);
        if (w != 0.0) acc += w * src[base + static_cast<std::size_t>(i) * sa + static_cast<std::size_t>(j) * sb];
      }
    }
    dst[f] = acc;
  }
  return out;
}

Tensor oracle_contract(const Tensor& t, int slot_a, int slot_b, const Metric& m) {
  require_slot(t, slot_a);
  require_slot(t, slot_b);
  if (slot_a == slot_b) throw Error(ErrorCode::SlotOutOfRange, "cannot contract a slot with itself");
  require_dim(t, m);

  const int d = t.dim();
  const Matrix& g = m.g();

  // Explicit Gram-Schmidt, independent of the cached frame in Metric.
  // Row a of `basis` holds f_a; row a of `dual` holds the covector g(f_a, .).
  Matrix basis = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[static_cast<std::size_t>(a)] = 1.0;
    for (int b = 0; b < a; ++b) {
      double proj = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) proj += basis(b, i) * g(i, j) * v[static_cast<std::size_t>(j)];
      for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] -= proj * basis(b, i);
    }
    double nn = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) nn += v[static_cast<std::size_t>(i)] * g(i, j) * v[static_cast<std::size_t>(j)];
    for (int i = 0; i < d; ++i) basis(a, i) = v[static_cast<std::size_t>(i)] / std::sqrt(nn);
  }
  Matrix dual = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dual(a, i) += basis(a, j) * g(j, i);
  auto slot_weight = [&](Variance v, int a, int i) {
    return v == Variance::Lower ? basis(a, i) : dual(a, i);
  };

  std::vector<Variance> rest;
  for (int s = 0; s < t.order(); ++s)
    if (s != slot_a && s != slot_b) rest.push_back(t.variance(s));
  Tensor out(d, rest);

  std::vector<int> out_idx(rest.size());
  std::vector<int> full(static_cast<std::size_t>(t.order()));
  for (std::size_t f = 0; f < out.size(); ++f) {
    decode(f, d, out_idx);
    double total = 0.0;
    for (int a = 0; a < d; ++a) {
      // T(..., f_a, ..., f_a, ...) by brute force over both slot indices.
      double term = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          for (int s = 0, r = 0; s < t.order(); ++s) {
            if (s == slot_a) full[static_cast<std::size_t>(s)] = i;
            else if (s == slot_b) full[static_cast<std::size_t>(s)] = j;
            else full[static_cast<std::size_t>(s)] = out_idx[static_cast<std::size_t>(r++)];
          }
          term += slot_weight(t.variance(slot_a), a, i) * slot_weight(t.variance(slot_b), a, j) * t.at(full);
        }
      }
      total += term;
    }
    out.data()[f] = total;
  }
  return out;
}

// ---------------------------------------------------------------- projections

SymSkew project_sym_skew(const Tensor& h) {
  require_lower_pair(h, "project_sym_skew");
  const Matrix m = h.matrix();
  const Matrix sym = 0.5 * (m + m.transpose());
  return {Tensor::bilinear(sym), Tensor::bilinear(m - sym)};
}

JParts project_j(const Tensor& h, const Matrix& j, double j_tol) {
  require_lower_pair(h, "project_j");
  if (j.rows() != h.dim() || j.cols() != h.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "project_j: J dimension does not match h");
  }
  const double r = j_squared_residual(j);
  if (!(r <= j_tol)) {
    throw Error(ErrorCode::NotAlmostComplex,
                "project_j: |J^2 + I| = " + std::to_string(r) + " exceeds tolerance");
  }
  const Matrix m = h.matrix();
  const Matrix h11 = 0.5 * (m + j.transpose() * m * j);
  return {Tensor::bilinear(h11), Tensor::bilinear(m - h11)};
}

Tensor compose_j(const Tensor& t, const Matrix& j) {
  if (t.order() != 2) throw Error(ErrorCode::WrongOrder, "compose_j: expected an order-2 tensor");
  if (j.rows() != t.dim() || j.cols() != t.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "compose_j: J dimension does not match T");
  }
  Tensor out(t.dim(), t.variance());
  const int d = t.dim();
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a) acc += j(a, x) * t(a, y);
      out(x, y) = acc;
    }
  return out;
}

// ---------------------------------------------------------------- norms

double frame_norm(const Tensor& t, const Metric& m) {
  const Tensor on = to_orthonormal(t, m);
  double acc = 0.0;
  for (double x : on.data()) acc += x * x;
  return std::sqrt(acc);
}

double oracle_frame_norm(const Tensor& t, const Metric& m) {
  require_dim(t, m);
  const int d = t.dim();
  const int r = t.order();
  std::vector<int> ia(static_cast<std::size_t>(r));
  std::vector<int> ib(static_cast<std::size_t>(r));
  double acc = 0.0;
  for (std::size_t fa = 0; fa < t.size(); ++fa) {
    decode(fa, d, ia);
    for (std::size_t fb = 0; fb < t.size(); ++fb) {
      decode(fb, d, ib);
      double w = 1.0;
      for (int s = 0; s < r && w != 0.0; ++s) {
        const auto k = static_cast<std::size_t>(s);
        w *= t.variance(s) == Variance::Lower ? m.inverse()(ia[k], ib[k]) : m.g()(ia[k], ib[k]);
      }
      acc += w * t.data()[fa] * t.data()[fb];
    }
  }
  return std::sqrt(std::max(acc, 0.0));
}

Tensor lower_endomorphism(const Tensor& a, const Metric& m) {
  if (a.order() != 2 || a.variance(0) != Variance::Upper || a.variance(1) != Variance::Lower) {
    throw Error(ErrorCode::VarianceMismatch, "lower_endomorphism: expected an (Upper, Lower) tensor");
  }
  require_dim(a, m);
  return Tensor::bilinear(a.matrix().transpose() * m.g());
}

Tensor raise_bilinear(const Tensor& h, const Metric& m) {
  require_lower_pair(h, "raise_bilinear");
  require_dim(h, m);
  return Tensor::endomorphism(m.inverse() * h.matrix().transpose());
}

double j_squared_residual(const Matrix& j) {
  return (j * j + Matrix::Identity(j.rows(), j.cols())).cwiseAbs().maxCoeff();
}

double compatibility_residual(const Matrix& g, const Matrix& j) {
  return (j.transpose() * g * j - g).cwiseAbs().maxCoeff();
}

}  // namespace hermiflow

#include "hermiflow/geometry.hpp"

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

void require_same_dim(int a, int b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

// Frame vector e_i.
Vector unit(int dim, int i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

}  // namespace

Connection levi_civita(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair) {
  const int d = algebra.dim();
  require_same_dim(d, pair.dim());
  const Matrix& g = pair.g();
  const Matrix& g_inv = pair.metric().inverse();

  // cl(a, b, z) = <[e_a, e_b], e_z>
  Tensor cl = Tensor::covariant(d, 3);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int z = 0; z < d; ++z) {
        double s = 0.0;
        for (int m = 0; m < d; ++m) s += algebra.c(m, a, b) * g(m, z);
        cl(a, b, z) = s;
      }

  // Koszul: 2<nabla_i e_j, e_l> = <[i,j],l> - <[j,l],i> + <[l,i],j>
  Connection conn{Tensor(d, {Variance::Upper, Variance::Lower, Variance::Lower}), source_id(algebra, pair)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) {
          s += g_inv(k, l) * (cl(i, j, l) - cl(j, l, i) + cl(l, i, j));
        }
        conn.gamma(k, i, j) = 0.5 * s;
      }
  return conn;
}

double torsion_residual(const Connection& conn, const LieAlgebraSpec& algebra) {
  const int d = algebra.dim();
  require_same_dim(d, conn.gamma.dim());
  double worst = 0.0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        worst = std::max(worst, std::abs(conn.gamma(k, i, j) - conn.gamma(k, j, i) - algebra.c(k, i, j)));
      }
  return worst;
}

double metric_residual(const Connection& conn, const Metric& metric) {
  const int d = metric.dim();
  require_same_dim(d, conn.gamma.dim());
  const Matrix& g = metric.g();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int m = 0; m < d; ++m) s += conn.gamma(m, i, j) * g(m, k) + conn.gamma(m, i, k) * g(j, m);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

CurvatureData curvature(const Connection& conn, const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair) {
  const int d = algebra.dim();
  require_same_dim(d, pair.dim());
  if (conn.source != 0 && conn.source != source_id(algebra, pair)) {
    throw Error(ErrorCode::InconsistentInputs, "connection was computed from a different pair");
  }
  const Tensor& gam = conn.gamma;
  const Matrix& g = pair.g();

  CurvatureData out{Tensor::covariant(d, 4), Tensor(), source_id(algebra, pair)};
  Vector r(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        // w-components of R(e_i, e_j) e_k
        r.setZero();
        for (int m = 0; m < d; ++m) {
          const double a = gam(m, j, k);
          const double b = gam(m, i, k);
          const double c = algebra.c(m, i, j);
          for (int w = 0; w < d; ++w) r(w) += a * gam(w, i, m) - b * gam(w, j, m) - c * gam(w, m, k);
        }
        const Vector low = g * r;
        for (int l = 0; l < d; ++l) out.rm(i, j, k, l) = low(l);
      }
  out.ric = contract(out.rm, 0, 3, pair.metric());
  return out;
}

double CurvatureResiduals::max() const {
  return std::max({antisym_12, antisym_34, pair_symmetry, bianchi, ric_symmetry});
}

CurvatureResiduals curvature_residuals(const CurvatureData& curv) {
  const Tensor& rm = curv.rm;
  const int d = rm.dim();
  CurvatureResiduals res;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double v = rm(i, j, k, l);
          res.antisym_12 = std::max(res.antisym_12, std::abs(v + rm(j, i, k, l)));
          res.antisym_34 = std::max(res.antisym_34, std::abs(v + rm(i, j, l, k)));
          res.pair_symmetry = std::max(res.pair_symmetry, std::abs(v - rm(k, l, i, j)));
          res.bianchi = std::max(res.bianchi, std::abs(v + rm(j, k, i, l) + rm(k, i, j, l)));
        }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      res.ric_symmetry = std::max(res.ric_symmetry, std::abs(curv.ric(i, j) - curv.ric(j, i)));
  return res;
}

Tensor cov_derivative(const Tensor& t, const Connection& conn) {
  const int d = t.dim();
  require_same_dim(d, conn.gamma.dim());
  const int r = t.order();
  std::vector<Variance> var;
  var.reserve(static_cast<std::size_t>(r) + 1);
  var.push_back(Variance::Lower);
  var.insert(var.end(), t.variance().begin(), t.variance().end());
  Tensor out(d, std::move(var));

  const auto in = t.data();
  auto dst = out.data();
  const std::size_t n = t.size();
  const Tensor& gam = conn.gamma;

  for (int k = 0; k < d; ++k) {
    const std::size_t base_out = static_cast<std::size_t>(k) * n;
    for (int s = 0; s < r; ++s) {
      // map(a, m): coefficient of T[.., m, ..] in the slot-s term at index a
      Matrix map(d, d);
      for (int a = 0; a < d; ++a)
        for (int m = 0; m < d; ++m)
          map(a, m) = t.variance(s) == Variance::Lower ? -gam(m, k, a) : gam(a, k, m);
      const std::size_t stride = ipow(d, r - s - 1);
      const std::size_t block = stride * static_cast<std::size_t>(d);
      for (std::size_t base = 0; base < n; base += block)
        for (std::size_t inner = 0; inner < stride; ++inner)
          for (int a = 0; a < d; ++a) {
            double acc = 0.0;
            for (int m = 0; m < d; ++m) {
              const double c = map(a, m);
              if (c != 0.0) acc += c * in[base + static_cast<std::size_t>(m) * stride + inner];
            }
            dst[base_out + base + static_cast<std::size_t>(a) * stride + inner] += acc;
          }
    }
  }
  return out;
}

DJBundle dj_bundle(const AlmostHermitianPair& pair, const Connection& conn, const LieAlgebraSpec& algebra,
                   int k_max) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "dj_bundle needs k_max >= 1");
  require_same_dim(algebra.dim(), pair.dim());
  const std::uint64_t src = source_id(algebra, pair);
  if (conn.source != 0 && conn.source != src) {
    throw Error(ErrorCode::InconsistentInputs, "connection was computed from a different pair");
  }
  DJBundle out;
  out.source = src;
  Tensor cur = pair.j_tensor();
  for (int k = 1; k <= std::max(k_max, 2); ++k) {
    cur = cov_derivative(cur, conn);
    if (k == 2) out.d2j = cur;
    if (k <= k_max) out.derivatives.push_back(cur);
  }
  out.laplacian = contract(out.d2j, 0, 1, pair.metric());
  return out;
}

Nijenhuis nijenhuis(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra) {
  const int d = algebra.dim();
  require_same_dim(d, pair.dim());
  const Matrix& j = pair.j();
  Nijenhuis out{Tensor(d, {Variance::Lower, Variance::Lower, Variance::Upper}), Tensor::covariant(d, 3),
                source_id(algebra, pair)};
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      const Vector ex = unit(d, x);
      const Vector ey = unit(d, y);
      const Vector jx = j.col(x);
      const Vector jy = j.col(y);
      const Vector nv = algebra.bracket(jx, jy) - algebra.bracket(ex, ey) - j * algebra.bracket(jx, ey) -
                        j * algebra.bracket(ex, jy);
      const Vector nl = pair.g() * nv;
      for (int z = 0; z < d; ++z) {
        out.endo(x, y, z) = nv(z);
        out.low(x, y, z) = nl(z);
      }
    }
  return out;
}

Tensor lower_dj(const Tensor& dj, const Metric& metric) {
  const int d = dj.dim();
  require_same_dim(d, metric.dim());
  const Matrix& g = metric.g();
  Tensor out = Tensor::covariant(d, 3);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += dj(x, a, y) * g(a, z);
        out(x, y, z) = s;
      }
  return out;
}

OmegaDerivatives omega_derivatives(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra,
                                   const Connection& conn) {
  const int d = algebra.dim();
  require_same_dim(d, pair.dim());
  const std::uint64_t src = source_id(algebra, pair);
  if (conn.source != 0 && conn.source != src) {
    throw Error(ErrorCode::InconsistentInputs, "connection was computed from a different pair");
  }
  const Matrix& j = pair.j();
  const Tensor omega = pair.omega();
  const Tensor djl = lower_dj(cov_derivative(pair.j_tensor(), conn), pair.metric());

  OmegaDerivatives out;
  out.source = src;
  out.d_omega = Tensor::covariant(d, 3);
  out.d_omega_algebraic = Tensor::covariant(d, 3);

  // omega([a, b], z)
  auto om_br = [&](int a, int b, int z) {
    double s = 0.0;
    for (int m = 0; m < d; ++m) s += algebra.c(m, a, b) * omega(m, z);
    return s;
  };
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        out.d_omega(x, y, z) = djl(x, y, z) + djl(y, z, x) + djl(z, x, y);
        out.d_omega_algebraic(x, y, z) = -om_br(x, y, z) - om_br(y, z, x) - om_br(z, x, y);
      }
  out.route_residual = (out.d_omega - out.d_omega_algebraic).max_abs();

  const Tensor& dw = out.d_omega;
  // Substitutes J into the selected slots of dw: mask bit s set means slot s takes J.
  auto with_j = [&](int mask) {
    Tensor r = Tensor::covariant(d, 3);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) {
            const double wa = (mask & 1) ? j(a, x) : (a == x ? 1.0 : 0.0);
            if (wa == 0.0) continue;
            for (int b = 0; b < d; ++b) {
              const double wb = (mask & 2) ? j(b, y) : (b == y ? 1.0 : 0.0);
              if (wb == 0.0) continue;
              for (int c = 0; c < d; ++c) {
                const double wc = (mask & 4) ? j(c, z) : (c == z ? 1.0 : 0.0);
                if (wc == 0.0) continue;
                s += wa * wb * wc * dw(a, b, c);
              }
            }
          }
          r(x, y, z) = s;
        }
    return r;
  };
  out.h = -with_j(7);
  out.d_omega_plus = 0.25 * (3.0 * dw + with_j(3) + with_j(5) + with_j(6));
  return out;
}

LieDerivatives lie_derivative(const Vector& x, const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra) {
  const int d = algebra.dim();
  require_same_dim(d, pair.dim());
  require_same_dim(d, static_cast<int>(x.size()));
  const Matrix& j = pair.j();
  const Matrix& g = pair.g();

  Matrix lj(d, d);
  Matrix br(d, d);  // column y = [X, e_y]
  for (int y = 0; y < d; ++y) {
    br.col(y) = algebra.bracket(x, unit(d, y));
    lj.col(y) = algebra.bracket(x, j.col(y)) - j * br.col(y);
  }
  const Matrix lg = -(br.transpose() * g) - (g * br);
  return LieDerivatives{Tensor::bilinear(lg), Tensor::endomorphism(lj)};
}

std::vector<Tensor> higher_rm(const Connection& conn, const CurvatureData& curv, int k_max) {
  if (k_max < 0) throw Error(ErrorCode::InvalidArgument, "higher_rm needs k_max >= 0");
  std::vector<Tensor> out;
  const Tensor* cur = &curv.rm;
  for (int k = 1; k <= k_max; ++k) {
    out.push_back(cov_derivative(*cur, conn));
    cur = &out.back();
  }
  return out;
}

std::vector<Tensor> higher_rm(const Connection& conn, const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair,
                              int k_max) {
  return higher_rm(conn, curvature(conn, algebra, pair), k_max);
}

Geometry compute_geometry(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair, int k_max) {
  Geometry geo;
  geo.conn = levi_civita(algebra, pair);
  geo.curv = curvature(geo.conn, algebra, pair);
  geo.dj = dj_bundle(pair, geo.conn, algebra, std::max(k_max, 1));
  geo.n = nijenhuis(pair, algebra);
  geo.omega = omega_derivatives(pair, algebra, geo.conn);
  return geo;
}

}  // namespace hermiflow

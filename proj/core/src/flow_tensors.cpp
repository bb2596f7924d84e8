#include "hermiflow/flow_tensors.hpp"

#include "hermiflow/error.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hermiflow {

namespace {

// Inputs expressed in the g-orthonormal frame, where upper and lower indices
// coincide and frame sums are plain sums.
struct OnFrame {
  int d = 0;
  Matrix j;
  std::vector<Matrix> dj;  // dj[i](a, b): a-component of (D_i J) e_b
  Tensor n;                // n(x, y, z) = <N(e_x, e_y), e_z>
  Tensor dn;               // dn(k, x, y, z) = (D_k N)(e_x, e_y, e_z)
  Tensor h;
  Matrix ric;
  Matrix laplacian;  // endomorphism components

  // (D_X J) Y
  Vector djv(const Vector& x, const Vector& y) const {
    Vector out = Vector::Zero(d);
    for (int i = 0; i < d; ++i)
      if (x(i) != 0.0) out += x(i) * (dj[static_cast<std::size_t>(i)] * y);
    return out;
  }
};

Matrix p11(const Matrix& h, const Matrix& j) { return 0.5 * (h + j.transpose() * h * j); }
Matrix p02(const Matrix& h, const Matrix& j) { return 0.5 * (h - j.transpose() * h * j); }
Matrix sym(const Matrix& h) { return 0.5 * (h + h.transpose()); }
// (TJ)(X, Y) = T(JX, Y)
Matrix comp(const Matrix& t, const Matrix& j) { return j.transpose() * t; }

Tensor back(const Matrix& on, const Metric& m) { return from_orthonormal(Tensor::bilinear(on), m); }

void require_source(std::uint64_t expected, std::uint64_t got, const char* what) {
  if (got != expected) {
    throw Error(ErrorCode::InconsistentInputs, std::string(what) + " was computed from a different pair");
  }
}

}  // namespace

FlowTensorSet assemble(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra, const Connection& conn,
                       const CurvatureData& curv, const DJBundle& dj, const Nijenhuis& n,
                       const OmegaDerivatives& omega) {
  const std::uint64_t src = source_id(algebra, pair);
  require_source(src, conn.source, "connection");
  require_source(src, curv.source, "curvature");
  require_source(src, dj.source, "DJ bundle");
  require_source(src, n.source, "Nijenhuis tensor");
  require_source(src, omega.source, "d omega");

  const Metric& m = pair.metric();
  const int d = pair.dim();

  OnFrame on;
  on.d = d;
  on.j = to_orthonormal(pair.j_tensor(), m).matrix();
  const Tensor dj_on = to_orthonormal(dj.dj(), m);
  on.dj.assign(static_cast<std::size_t>(d), Matrix::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) on.dj[static_cast<std::size_t>(i)](a, b) = dj_on(i, a, b);
  on.n = to_orthonormal(n.low, m);
  on.dn = to_orthonormal(cov_derivative(n.low, conn), m);
  on.h = to_orthonormal(omega.h, m);
  on.ric = to_orthonormal(curv.ric, m).matrix();
  on.laplacian = to_orthonormal(dj.laplacian, m).matrix();

  const Matrix& J = on.j;
  const auto& D = on.dj;
  auto Di = [&](int i) -> const Matrix& { return D[static_cast<std::size_t>(i)]; };

  // E[i] = D_{J e_i} J
  std::vector<Matrix> E(static_cast<std::size_t>(d), Matrix::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < d; ++c) E[static_cast<std::size_t>(i)] += J(c, i) * Di(c);

  Matrix b1 = Matrix::Zero(d, d), b2 = Matrix::Zero(d, d), b3 = Matrix::Zero(d, d), b4 = Matrix::Zero(d, d);
  Matrix b1_bar = Matrix::Zero(d, d), b2_bar = Matrix::Zero(d, d), corr = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    b2 += Di(i).transpose() * Di(i);
    b2_bar += Di(i).transpose() * E[static_cast<std::size_t>(i)];
  }
  std::vector<Matrix> dj_j(static_cast<std::size_t>(d));  // (D_y J) J
  for (int y = 0; y < d; ++y) dj_j[static_cast<std::size_t>(y)] = Di(y) * J;
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      double s1 = 0, s3 = 0, s4 = 0, s1b = 0, st = 0;
      for (int i = 0; i < d; ++i) {
        for (int a = 0; a < d; ++a) {
          s1 += Di(x)(a, i) * Di(y)(a, i);
          s3 += Di(i)(a, x) * Di(a)(y, i);
          s4 += Di(x)(a, i) * Di(i)(a, y);
          s1b += Di(x)(a, i) * dj_j[static_cast<std::size_t>(y)](a, i);
          st += E[static_cast<std::size_t>(i)](y, a) * Di(x)(a, i);
        }
      }
      b1(x, y) = s1;
      b3(x, y) = s3;
      b4(x, y) = s4;
      b1_bar(x, y) = s1b;
      corr(x, y) = st;
    }
  }

  const Matrix q1 = -0.5 * p11(b1, J) - p02(b3, J) + 4.0 * sym(p11(b4, J)) - p11(comp(b1_bar, J), J) -
                    comp(b2_bar, J);
  const Matrix q2 = comp(p02(b3, J), J);
  const Matrix n_script = comp(b2, J);
  const Matrix r_script = comp(on.ric, J) + on.ric * J;
  const Matrix q_script = comp(b2, J) + comp(b3, J);

  Matrix b_script = Matrix::Zero(d, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) s += on.h(x, i, k) * on.h(y, i, k);
      b_script(x, y) = s;
    }

  Vector v = Vector::Zero(d);  // sum_i (D_i J) e_i
  for (int i = 0; i < d; ++i) v += Di(i).col(i);
  const Vector theta = -(J * v);

  // N_bar and K_script
  const Tensor& N = on.n;
  Matrix n_bar = Matrix::Zero(d, d);
  Matrix k_script = Matrix::Zero(d, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double t1 = 0.0, t2 = 0.0, t3 = 0.0, ks = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int a = 0; a < d; ++a) {
          const double u = Di(i)(a, x);  // ((D_i J) e_x)^a
          const double w = Di(x)(a, i);  // ((D_x J) e_i)^a
          t1 += u * (N(a, i, y) + N(y, a, i) - N(i, y, a));
          t2 += w * (N(i, a, y) + N(y, i, a) - N(a, y, i));
          t3 += Di(i)(y, a) * N(x, i, a);
          ks += J(a, i) * on.dn(i, a, x, y);
        }
      }
      n_bar(x, y) = 0.5 * t1 - 0.5 * t2 - t3;
      k_script(x, y) = ks;
    }

  // Seven-term expansion of Q_script.
  Matrix q_expanded = Matrix::Zero(d, d);
  const Vector jv = J * v;
  for (int x = 0; x < d; ++x) {
    const Vector ex = Vector::Unit(d, x);
    const Vector jx = J.col(x);
    Vector q = Vector::Zero(d);
    for (int i = 0; i < d; ++i) {
      const Vector ei = Vector::Unit(d, i);
      q -= Di(i) * on.djv(jx, ei);
      q -= J * on.djv(Di(i).col(x), ei);
      q += Di(i) * (E[static_cast<std::size_t>(i)] * ex);
    }
    q += -on.djv(jv, ex) + J * on.djv(v, ex) + on.djv(jx, v) - J * on.djv(ex, v);
    q_expanded.row(x) = q.transpose();
  }

  FlowTensorSet out;
  out.source = src;
  out.b1 = back(b1, m);
  out.b2 = back(b2, m);
  out.b3 = back(b3, m);
  out.b4 = back(b4, m);
  out.b1_bar = back(b1_bar, m);
  out.b2_bar = back(b2_bar, m);
  out.q1 = back(q1, m);
  out.q2 = back(q2, m);
  out.n_script = back(n_script, m);
  out.r_script = back(r_script, m);
  out.q_script = back(q_script, m);
  out.b_script = back(b_script, m);
  out.theta_sharp = from_orthonormal(Tensor::vector(theta), m);
  out.n_bar = back(n_bar, m);
  out.k_script = back(k_script, m);
  out.h = omega.h;
  out.d_omega_plus = omega.d_omega_plus;
  out.ric = curv.ric;
  out.laplacian_j = back(on.laplacian.transpose(), m);
  out.gauge_correction = back(corr, m);
  out.q_script_expanded = back(q_expanded, m);
  return out;
}

FlowTensorSet assemble(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra, const Geometry& geo) {
  return assemble(pair, algebra, geo.conn, geo.curv, geo.dj, geo.n, geo.omega);
}

FlowTensorSet assemble(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra) {
  return assemble(pair, algebra, compute_geometry(algebra, pair, 2));
}

VariationPair flow_rhs(const AlmostHermitianPair& pair, const FlowTensorSet& set) {
  Tensor h = -2.0 * set.ric + set.q1;
  const Tensor k_bil = set.laplacian_j + set.n_script + set.r_script + set.q2;
  return VariationPair{std::move(h), raise_bilinear(k_bil, pair.metric())};
}

VariationPair flow_rhs(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra) {
  return flow_rhs(pair, assemble(pair, algebra));
}

double VariationResiduals::max() const { return std::max({asymmetry, k_11, coupling}); }

VariationResiduals check_variation(const AlmostHermitianPair& pair, const VariationPair& v) {
  const Metric& m = pair.metric();
  const double tol = pair.structure_tolerance();
  const Tensor k_bil = lower_endomorphism(v.k, m);
  VariationResiduals r;
  r.asymmetry = frame_norm(project_sym_skew(v.h).skew, m);
  r.k_11 = frame_norm(project_j(k_bil, pair.j(), tol).h11, m);
  const Tensor k_sym_j = compose_j(project_sym_skew(k_bil).sym, pair.j());
  r.coupling = frame_norm(k_sym_j - project_j(v.h, pair.j(), tol).h02, m);
  return r;
}

bool ReductionReport::passed() const {
  auto ok = [&](const std::vector<NamedResidual>& checks) {
    return std::all_of(checks.begin(), checks.end(), [&](const NamedResidual& c) { return c.value <= tolerance; });
  };
  return (!closed_branch || ok(closed_checks)) && (!integrable_branch || ok(integrable_checks));
}

std::string ReductionReport::describe() const {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "|d omega| = %.3e, |N| = %.3e, tolerance %.1e\n", norm_d_omega, norm_n, tolerance);
  os << buf;
  if (!any_branch()) {
    os << "no reduction applies: neither d omega = 0 nor N = 0 at tolerance\n";
    return os.str();
  }
  auto section = [&](const char* title, const std::vector<NamedResidual>& checks) {
    os << title << '\n';
    for (const auto& c : checks) {
      std::snprintf(buf, sizeof buf, "  %-36s %.3e  %s\n", c.name.c_str(), c.value,
                    c.value <= tolerance ? "ok" : "FAIL");
      os << buf;
    }
  };
  if (closed_branch) section("closed branch (d omega = 0):", closed_checks);
  if (integrable_branch) section("integrable branch (N = 0):", integrable_checks);
  return os.str();
}

ReductionReport check_reduction(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra, double tolerance) {
  const Geometry geo = compute_geometry(algebra, pair, 2);
  const FlowTensorSet f = assemble(pair, algebra, geo);
  const Metric& m = pair.metric();
  const double jtol = pair.structure_tolerance();

  ReductionReport rep;
  rep.tolerance = tolerance;
  rep.norm_d_omega = frame_norm(geo.omega.d_omega, m);
  rep.norm_n = frame_norm(geo.n.low, m);
  rep.closed_branch = rep.norm_d_omega <= tolerance;
  rep.integrable_branch = rep.norm_n <= tolerance;

  auto nrm = [&](const Tensor& t) { return frame_norm(t, m); };
  if (rep.closed_branch) {
    rep.closed_checks = {
        {"Q1 - (B1/2 - B2)", nrm(f.q1 - (0.5 * f.b1 - f.b2))},
        {"Q2", nrm(f.q2)},
        {"B4 - B1/2", nrm(f.b4 - 0.5 * f.b1)},
        {"B1 (0,2)+(2,0) part", nrm(project_j(f.b1, pair.j(), jtol).h02)},
        {"B3 (0,2)+(2,0) part", nrm(project_j(f.b3, pair.j(), jtol).h02)},
    };
  }
  if (rep.integrable_branch) {
    rep.integrable_checks = {
        {"Q1 - B/2", nrm(f.q1 - 0.5 * f.b_script)},
        {"Q2 - (Q - N)", nrm(f.q2 - (f.q_script - f.n_script))},
        {"B4", nrm(f.b4)},
        {"B/2 - (B1/2 + B2 - B3)", nrm(0.5 * f.b_script - (0.5 * f.b1 + f.b2 - f.b3))},
        {"Q - seven-term expansion", nrm(f.q_script - f.q_script_expanded)},
    };
  }
  return rep;
}

GaugeReport check_gauge(const AlmostHermitianPair& pair, const LieAlgebraSpec& algebra) {
  const FlowTensorSet f = assemble(pair, algebra);
  const Metric& m = pair.metric();
  const LieDerivatives lie = lie_derivative(f.theta_sharp.as_vector(), pair, algebra);
  const Tensor lhs = lower_endomorphism(lie.of_j, m);
  const Tensor rhs = f.laplacian_j + f.q_script + f.r_script + f.k_script + f.n_bar;
  GaugeReport r;
  r.residual = frame_norm(lhs - rhs, m);
  r.correction_norm = frame_norm(f.gauge_correction, m);
  r.completed_residual = frame_norm(lhs - rhs - f.gauge_correction, m);
  return r;
}

}  // namespace hermiflow

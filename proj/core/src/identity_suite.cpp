#include "hermiflow/identity_suite.hpp"

#include "hermiflow/geometry.hpp"

#include <algorithm>
#include <map>

namespace hermiflow {

namespace {

// Substitutes J into the slots of an all-lower order-3 tensor selected by
// mask (bit s for slot s).
Tensor with_j(const Tensor& t, const Matrix& j, int mask) {
  const int d = t.dim();
  Tensor out = Tensor::covariant(d, 3);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) {
          const double wa = (mask & 1) ? j(a, x) : double(a == x);
          if (wa == 0.0) continue;
          for (int b = 0; b < d; ++b) {
            const double wb = (mask & 2) ? j(b, y) : double(b == y);
            if (wb == 0.0) continue;
            for (int c = 0; c < d; ++c) {
              const double wc = (mask & 4) ? j(c, z) : double(c == z);
              if (wc != 0.0) s += wa * wb * wc * t(a, b, c);
            }
          }
        }
        out(x, y, z) = s;
      }
  return out;
}

Tensor transpose2(const Tensor& t) { return Tensor::bilinear(t.matrix().transpose()); }

// Distance of a symmetric form from being positive semidefinite.
double psd_defect(const Tensor& h, const Metric& m) {
  const Matrix on = to_orthonormal(h, m).matrix();
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (on + on.transpose()));
  return std::max(0.0, -es.eigenvalues().minCoeff());
}

}  // namespace

std::vector<NamedResidual> identity_residuals(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair,
                                              const Vector& x) {
  const Metric& m = pair.metric();
  const Matrix& J = pair.j();
  const double jtol = pair.structure_tolerance();
  const int d = pair.dim();
  const Geometry geo = compute_geometry(algebra, pair, 2);
  const FlowTensorSet f = assemble(pair, algebra, geo);
  auto nrm = [&](const Tensor& t) { return frame_norm(t, m); };

  std::vector<NamedResidual> out;
  auto add = [&](std::string name, double v) { out.push_back({std::move(name), v}); };

  add("connection torsion-free", torsion_residual(geo.conn, algebra));
  add("connection metric-compatible", metric_residual(geo.conn, m));
  add("curvature symmetries and Bianchi", curvature_residuals(geo.curv).max());
  add("d omega covariant vs algebraic", geo.omega.route_residual);

  // DJ identities
  const Tensor& dj = geo.dj.dj();
  const Tensor djl = lower_dj(dj, m);
  {
    Tensor skew = Tensor::covariant(d, 3);
    Tensor anti(d, {Variance::Lower, Variance::Upper, Variance::Lower});
    for (int i = 0; i < d; ++i) {
      Matrix di(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) di(a, b) = dj(i, a, b);
      const Matrix ac = di * J + J * di;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          skew(i, a, b) = djl(i, a, b) + djl(i, b, a);
          anti(i, a, b) = ac(a, b);
        }
    }
    add("<(D_X J)Y,Z> skew in Y,Z", nrm(skew));
    add("(D_X J)J + J(D_X J) = 0", nrm(anti));
  }

  // <(D_{JX} J)Y, Z> and <J (D_X J) Y, Z>
  const Tensor djx = with_j(djl, J, 1);
  Tensor jdj = Tensor::covariant(d, 3);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        // <J v, e_z> = sum_a (J v)^a g_az with v = (D_x J) e_y
        double s = 0.0;
        for (int a = 0; a < d; ++a) {
          double jv = 0.0;
          for (int b = 0; b < d; ++b) jv += J(a, b) * dj(x, b, y);
          s += jv * m.g()(a, z);
        }
        jdj(x, y, z) = s;
      }
  {
    const Tensor& n = geo.n.low;
    Tensor ncomb = Tensor::covariant(d, 3);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) ncomb(a, b, c) = 0.5 * (n(a, b, c) + n(c, a, b) - n(b, c, a));
    add("D_{JX}J - J D_X J in terms of N", nrm(djx - jdj - ncomb));

    const Tensor& wp = geo.omega.d_omega_plus;
    add("D_{JX}J + J D_X J in terms of (d omega)^+", nrm(djx + jdj - (with_j(wp, J, 1) - with_j(wp, J, 7))));

    if (nrm(n) <= kGateTol) add("N = 0 implies D_{JX}J = J D_X J", nrm(djx - jdj));
    if (nrm(wp) <= kGateTol) add("(d omega)^+ = 0 implies D_{JX}J = -J D_X J", nrm(djx + jdj));
  }

  // Laplacian and flow tensors
  add("Laplacian of J skew", nrm(f.laplacian_j + transpose2(f.laplacian_j)));
  add("N_script = -(Laplacian J)^(1,1)", nrm(f.n_script + project_j(f.laplacian_j, J, jtol).h11));
  add("Q1 symmetric", nrm(project_sym_skew(f.q1).skew));
  add("Q2 is (0,2)+(2,0)", nrm(project_j(f.q2, J, jtol).h11));
  add("Q1^(0,2)+(2,0) = -B3^(0,2)+(2,0)",
      nrm(project_j(f.q1, J, jtol).h02 + project_j(f.b3, J, jtol).h02));
  add("B1 symmetric positive semidefinite",
      std::max(nrm(project_sym_skew(f.b1).skew), psd_defect(f.b1, m)));
  add("B2 symmetric positive semidefinite",
      std::max(nrm(project_sym_skew(f.b2).skew), psd_defect(f.b2, m)));
  add("R_script symmetric and (0,2)+(2,0)",
      std::max(nrm(project_sym_skew(f.r_script).skew), nrm(project_j(f.r_script, J, jtol).h11)));
  add("R_script J = -2 Ric^(0,2)+(2,0)",
      nrm(compose_j(f.r_script, J) + 2.0 * project_j(f.ric, J, jtol).h02));

  const VariationResiduals flow = check_variation(pair, flow_rhs(pair, f));
  add("flow RHS: h symmetric", flow.asymmetry);
  add("flow RHS: KJ + JK = 0", flow.k_11);
  add("flow RHS: K^sym J = h^(0,2)+(2,0)", flow.coupling);

  // Lie derivative along x is a variation of compatible pairs.
  const LieDerivatives lie = lie_derivative(x, pair, algebra);
  const VariationResiduals lv = check_variation(pair, VariationPair{lie.of_metric, lie.of_j});
  add("Lie derivative: L_X g symmetric", lv.asymmetry);
  add("Lie derivative: L_X J is (0,2)+(2,0)", lv.k_11);
  add("Lie derivative: (L_X J)^sym J = (L_X g)^(0,2)+(2,0)", lv.coupling);

  // A (0,2)+(2,0) form raises to an endomorphism anticommuting with J.
  {
    const Tensor k02 = project_j(lie.of_metric, J, jtol).h02;
    const Matrix k = raise_bilinear(k02, m).matrix();
    add("(0,2)+(2,0) part anticommutes with J",
        nrm(Tensor::endomorphism(k * J + J * k)));
  }
  return out;
}

double SuiteReport::worst() const {
  double w = 0.0;
  for (const auto& i : identities) w = std::max(w, i.worst);
  return w;
}

SuiteReport run_identity_suite(const LieAlgebraSpec& algebra, const AlmostHermitianPair& pair, int n_random,
                               std::uint64_t seed) {
  SuiteReport rep;
  rep.seed = seed;
  Rng rng(seed);
  std::map<std::string, std::size_t> index;

  auto absorb = [&](const std::vector<NamedResidual>& rs) {
    for (const auto& r : rs) {
      auto it = index.find(r.name);
      if (it == index.end()) {
        it = index.emplace(r.name, rep.identities.size()).first;
        rep.identities.push_back({r.name, 0.0, 0});
      }
      auto& s = rep.identities[it->second];
      s.worst = std::max(s.worst, r.value);
      ++s.evaluated;
    }
    ++rep.pairs;
  };

  absorb(identity_residuals(algebra, pair, random_vector(algebra.dim(), rng)));
  for (int i = 0; i < n_random; ++i) {
    const AlmostHermitianPair p = random_compatible_pair(algebra.dim(), rng);
    absorb(identity_residuals(algebra, p, random_vector(algebra.dim(), rng)));
  }
  return rep;
}

}  // namespace hermiflow

#include "support.hpp"

#include "hermiflow/error.hpp"
#include "hermiflow/flow_tensors.hpp"
#include "hermiflow/identity_suite.hpp"

#include <cmath>

using namespace hermiflow;
using namespace hermiflow::test;

namespace {

/// aff(R) x aff(R) with the product complex structure: a Kahler Lie algebra
/// with nonzero Ricci curvature.
LieAlgebraSpec aff_squared() {
  return LieAlgebraSpec::from_brackets("aff2", 4, {{0, 1, 1, 1.0}, {2, 3, 3, 1.0}});
}

/// Block-diagonal metric a I + b I with rotations inside each J-line keeps
/// the standard J Kahler on aff_squared.
AlmostHermitianPair random_block_pair(Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Matrix g = Matrix::Zero(4, 4);
  g(0, 0) = g(1, 1) = u(rng);
  g(2, 2) = g(3, 3) = u(rng);
  return AlmostHermitianPair(g, standard_complex_structure(4));
}

double entry_max(const Tensor& t) { return t.max_abs(); }

}  // namespace

TEST(FlowTensors, VanishOnFlatTorus) {
  const auto s = flat();
  const auto f = assemble(s.pair, s.algebra);
  for (const Tensor* t : {&f.b1, &f.b2, &f.b3, &f.b4, &f.b1_bar, &f.b2_bar, &f.q1, &f.q2, &f.n_script, &f.r_script,
                          &f.q_script, &f.b_script, &f.n_bar, &f.k_script, &f.h, &f.ric, &f.laplacian_j}) {
    EXPECT_EQ(entry_max(*t), 0.0);
  }
}

TEST(FlowTensors, KodairaThurstonValues) {
  const auto s = kt();
  const auto f = assemble(s.pair, s.algebra);
  EXPECT_LE(entry_max(f.q2), 1e-15);
  Matrix ric = Matrix::Zero(4, 4);
  ric.diagonal() << -0.5, -0.5, 0.5, 0.0;
  EXPECT_LE((f.ric.matrix() - ric).cwiseAbs().maxCoeff(), 1e-15);
  Matrix q1 = Matrix::Zero(4, 4);
  q1.diagonal() << 0.0, -0.5, 0.0, -0.5;
  EXPECT_LE((f.q1.matrix() - q1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(max_diff(f.q1, 0.5 * f.b1 - f.b2), 1e-15);
  EXPECT_LE(max_diff(f.b4, 0.5 * f.b1), 1e-15);
}

TEST(FlowTensors, HopfValues) {
  const auto s = hopf();
  const auto f = assemble(s.pair, s.algebra);
  EXPECT_LE(entry_max(f.b4), 1e-15);
  EXPECT_LE(max_diff(f.q1, 0.5 * f.b_script), 1e-15);
  EXPECT_LE(max_diff(f.q2, f.q_script - f.n_script), 1e-15);
  EXPECT_LE(max_diff(f.q_script, f.q_script_expanded), 1e-15);
  Matrix ric = Matrix::Zero(4, 4);
  ric.diagonal() << 0.5, 0.5, 0.5, 0.0;
  EXPECT_LE((f.ric.matrix() - ric).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FlowTensors, RejectsMismatchedGeometry) {
  const auto s = kt();
  const auto h = hopf();
  const auto geo = compute_geometry(h.algebra, h.pair);
  try {
    assemble(s.pair, s.algebra, geo);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentInputs);
  }
}

TEST(FlowRhs, KodairaThurston) {
  const auto s = kt();
  const auto v = flow_rhs(s.pair, s.algebra);
  Matrix h = Matrix::Zero(4, 4);
  h.diagonal() << 1.0, 0.5, -1.0, -0.5;
  EXPECT_LE((v.h.matrix() - h).cwiseAbs().maxCoeff(), 1e-14);
  Matrix k = Matrix::Zero(4, 4);
  k(0, 2) = k(2, 0) = 1.0;
  k(1, 3) = k(3, 1) = 0.5;
  EXPECT_LE((v.k.matrix() - k).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(check_variation(s.pair, v).max(), 1e-14);
}

TEST(FlowRhs, HopfIsStationary) {
  const auto s = hopf();
  const auto v = flow_rhs(s.pair, s.algebra);
  EXPECT_LE(entry_max(v.h), 1e-15);
  EXPECT_LE(entry_max(v.k), 1e-15);
}

TEST(FlowRhs, KahlerRicciOnFlatAndAbelian) {
  const auto s = flat();
  auto v = flow_rhs(s.pair, s.algebra);
  EXPECT_EQ(entry_max(v.h), 0.0);
  EXPECT_EQ(entry_max(v.k), 0.0);
  Rng rng(1);
  const auto ab = LieAlgebraSpec::abelian(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pair = random_compatible_pair(4, rng);
    v = flow_rhs(pair, ab);
    EXPECT_LE(entry_max(v.k), 1e-12);
    EXPECT_LE(entry_max(v.h), 1e-12);
  }
}

TEST(FlowRhs, KahlerRicciWithCurvature) {
  Rng rng(2);
  const auto alg = aff_squared();
  for (int trial = 0; trial < 10; ++trial) {
    const auto pair = random_block_pair(rng);
    const auto f = assemble(pair, alg);
    const auto v = flow_rhs(pair, f);
    EXPECT_GT(entry_max(f.ric), 0.1);
    EXPECT_LE(entry_max(v.k), 1e-12);
    EXPECT_LE(max_diff(v.h, -2.0 * f.ric), 1e-12);
  }
}

TEST(FlowRhs, ScalingCovariance) {
  // g -> lambda g leaves h unchanged and scales K by 1 / lambda.
  Rng rng(3);
  const auto alg = sl2_r();
  const auto pair = random_compatible_pair(4, rng);
  const double lambda = 3.0;
  const AlmostHermitianPair scaled(lambda * pair.g(), pair.j(), 1e-10);
  const auto a = flow_rhs(pair, alg);
  const auto b = flow_rhs(scaled, alg);
  const double sh = std::max(1.0, a.h.max_abs());
  const double sk = std::max(1.0, a.k.max_abs());
  EXPECT_LE(max_diff(a.h, b.h) / sh, 1e-11);
  EXPECT_LE(max_diff((1.0 / lambda) * a.k, b.k) / sk, 1e-11);
}

TEST(Variation, AcceptsZeroAndLieDerivatives) {
  const auto s = kt();
  VariationPair zero{Tensor::covariant(4, 2), Tensor::endomorphism(Matrix::Zero(4, 4))};
  EXPECT_EQ(check_variation(s.pair, zero).max(), 0.0);
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pair = random_compatible_pair(4, rng);
    const auto lie = lie_derivative(random_vector(4, rng), pair, sl2_r());
    EXPECT_LE(check_variation(pair, {lie.of_metric, lie.of_j}).max(), 1e-11);
  }
}

TEST(Variation, RejectsJItself) {
  // (0, J) is not tangent: J commutes with itself.
  const auto s = kt();
  const VariationPair bad{Tensor::covariant(4, 2), s.pair.j_tensor()};
  const auto r = check_variation(s.pair, bad);
  EXPECT_GT(r.k_11, 1.0);
  EXPECT_EQ(r.asymmetry, 0.0);
}

TEST(Variation, DetectsAsymmetry) {
  const auto s = kt();
  Tensor h = Tensor::covariant(4, 2);
  h(0, 1) = 1.0;
  const auto r = check_variation(s.pair, {h, Tensor::endomorphism(Matrix::Zero(4, 4))});
  EXPECT_GT(r.asymmetry, 0.5);
}

TEST(Reduction, ClosedBranchOnKodairaThurston) {
  const auto s = kt();
  const auto r = check_reduction(s.pair, s.algebra);
  EXPECT_TRUE(r.closed_branch);
  EXPECT_FALSE(r.integrable_branch);
  EXPECT_EQ(r.closed_checks.size(), 5u);
  for (const auto& c : r.closed_checks) EXPECT_LE(c.value, 1e-10) << c.name;
  EXPECT_TRUE(r.passed());
}

TEST(Reduction, IntegrableBranchOnHopf) {
  const auto s = hopf();
  const auto r = check_reduction(s.pair, s.algebra);
  EXPECT_FALSE(r.closed_branch);
  EXPECT_TRUE(r.integrable_branch);
  EXPECT_EQ(r.integrable_checks.size(), 5u);
  for (const auto& c : r.integrable_checks) EXPECT_LE(c.value, 1e-10) << c.name;
  EXPECT_TRUE(r.passed());
}

TEST(Reduction, BothBranchesOnFlat) {
  const auto s = flat();
  const auto r = check_reduction(s.pair, s.algebra);
  EXPECT_TRUE(r.closed_branch);
  EXPECT_TRUE(r.integrable_branch);
  EXPECT_TRUE(r.passed());
}

TEST(Reduction, GenericPairHasNoBranch) {
  Rng rng(5);
  const auto pair = random_compatible_pair(4, rng);
  const auto r = check_reduction(pair, sl2_r());
  EXPECT_FALSE(r.any_branch());
  EXPECT_TRUE(r.closed_checks.empty());
  EXPECT_TRUE(r.integrable_checks.empty());
  EXPECT_NE(r.describe().find("no reduction applies"), std::string::npos);
}

TEST(Reduction, ClosedBranchOnRandomAlmostKahler) {
  // Kodaira-Thurston algebra with a random metric compatible with its
  // symplectic form stays almost Kahler.
  Rng rng(6);
  const auto s = kt();
  for (int trial = 0; trial < 5; ++trial) {
    // conjugate by a symplectic diagonal scaling
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const double a = u(rng), b = u(rng);
    Matrix p = Matrix::Zero(4, 4);
    p(0, 0) = a;
    p(2, 2) = 1.0 / a;
    p(1, 1) = b;
    p(3, 3) = 1.0 / b;
    const Matrix j = p * s.pair.j() * p.inverse();
    const Matrix g = -(j.transpose() * s.pair.omega().matrix()).eval();
    const AlmostHermitianPair pair(g, j, 1e-10);
    const auto r = check_reduction(pair, s.algebra);
    ASSERT_TRUE(r.closed_branch);
    for (const auto& c : r.closed_checks) EXPECT_LE(c.value, 1e-10) << c.name;
  }
}

TEST(Gauge, LiteralResidualPerCatalog) {
  EXPECT_LE(check_gauge(flat().pair, flat().algebra).residual, 1e-12);
  EXPECT_LE(check_gauge(hopf().pair, hopf().algebra).residual, 1e-12);
  const auto g = check_gauge(kt().pair, kt().algebra);
  EXPECT_NEAR(g.residual, std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(g.correction_norm, std::sqrt(0.5), 1e-12);
  EXPECT_LE(g.completed_residual, 1e-12);
}

TEST(Gauge, CompletedResidualOnRandomPairs) {
  Rng rng(7);
  for (const auto& alg : {heisenberg(), su2_r(), sl2_r()}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto pair = random_compatible_pair(4, rng);
      const auto g = check_gauge(pair, alg);
      EXPECT_LE(g.completed_residual, 1e-9 * std::max(1.0, g.correction_norm));
    }
  }
}

TEST(Gauge, IntegrableRandomPairsNeedNoCorrection) {
  // su(2) + R with the standard J conjugated by a complex-linear map stays integrable.
  Rng rng(8);
  const auto alg = su2_r();
  const Matrix j0 = standard_complex_structure(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_matrix(4, 4, rng);
    const Matrix c = 0.5 * (a - j0 * a * j0);  // commutes with J
    const Matrix g = c.transpose() * c + 0.1 * Matrix::Identity(4, 4);
    const Matrix gs = 0.5 * (g + j0.transpose() * g * j0);
    const AlmostHermitianPair pair(gs, j0, 1e-10);
    const auto r = check_gauge(pair, alg);
    EXPECT_LE(r.correction_norm, 1e-10);
    EXPECT_LE(r.residual, 1e-9);
  }
}

TEST(IdentitySuite, CatalogAndRandomPairs4d) {
  for (const auto& s : catalog()) {
    const auto rep = run_identity_suite(s.algebra, s.pair, 20, 11);
    EXPECT_EQ(rep.pairs, 21);
    for (const auto& i : rep.identities) EXPECT_LE(i.worst, 1e-10) << s.label << ": " << i.name;
  }
  for (const auto& alg : {heisenberg(), sl2_r()}) {
    Rng rng(12);
    const auto rep = run_identity_suite(alg, random_compatible_pair(4, rng), 20, 13);
    EXPECT_TRUE(rep.passed(1e-10)) << alg.name() << " worst " << rep.worst();
  }
}

TEST(IdentitySuite, RandomPairs6d) {
  Rng rng(14);
  const auto alg = iwasawa();
  const auto rep = run_identity_suite(alg, random_compatible_pair(6, rng), 10, 15);
  for (const auto& i : rep.identities) EXPECT_LE(i.worst, 1e-9) << i.name;
}

TEST(IdentitySuite, GatedIdentitiesApplyOnlyWhenHypothesisHolds) {
  const auto kt_rep = run_identity_suite(kt().algebra, kt().pair, 0, 1);
  const auto hopf_rep = run_identity_suite(hopf().algebra, hopf().pair, 0, 1);
  auto has = [](const SuiteReport& r, const std::string& prefix) {
    for (const auto& i : r.identities)
      if (i.name.rfind(prefix, 0) == 0) return true;
    return false;
  };
  EXPECT_FALSE(has(kt_rep, "N = 0 implies"));
  EXPECT_TRUE(has(hopf_rep, "N = 0 implies"));
  EXPECT_FALSE(has(hopf_rep, "(d omega)^+ = 0 implies"));
}

TEST(IdentitySuite, DeterministicForSeed) {
  const auto a = run_identity_suite(hopf().algebra, hopf().pair, 5, 99);
  const auto b = run_identity_suite(hopf().algebra, hopf().pair, 5, 99);
  ASSERT_EQ(a.identities.size(), b.identities.size());
  for (std::size_t i = 0; i < a.identities.size(); ++i) EXPECT_EQ(a.identities[i].worst, b.identities[i].worst);
}

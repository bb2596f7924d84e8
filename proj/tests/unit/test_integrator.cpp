#include "support.hpp"

#include "hermiflow/error.hpp"
#include "hermiflow/flow_tensors.hpp"
#include "hermiflow/integrator.hpp"

#include <cmath>
#include <limits>

using namespace hermiflow;
using namespace hermiflow::test;

namespace {

IntegratorConfig config(double dt, double t_end) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

double state_error(const TrajectorySample& a, const TrajectorySample& b) {
  return std::max((a.g - b.g).cwiseAbs().maxCoeff(), (a.j - b.j).cwiseAbs().maxCoeff());
}

TrajectorySample blank_sample(double t, double rm, double dj) {
  TrajectorySample s;
  s.t = t;
  s.g = Matrix::Identity(4, 4);
  s.j = standard_complex_structure(4);
  s.rm_norm = rm;
  s.dj_norm = dj;
  return s;
}

}  // namespace

TEST(Integrator, ConfigValidation) {
  EXPECT_NO_THROW(IntegratorConfig{}.validate());
  auto c = config(0.0, 1.0);
  EXPECT_THROW(c.validate(), Error);
  c = config(1e-3, -1.0);
  EXPECT_THROW(c.validate(), Error);
  c = config(1e-3, 1.0);
  c.sample_stride = 0;
  EXPECT_THROW(c.validate(), Error);
  c = config(1e-3, 1.0);
  c.blowup_threshold = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Integrator, FlatTorusIsStationary) {
  const auto s = flat();
  const auto traj = integrate(s, config(0.01, 0.1));
  EXPECT_EQ(traj.status, TerminationStatus::Completed);
  ASSERT_EQ(traj.samples.size(), 11u);
  for (const auto& smp : traj.samples) {
    EXPECT_EQ((smp.g - s.pair.g()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((smp.j - s.pair.j()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(smp.rm_norm, 0.0);
    EXPECT_EQ(smp.dj_norm, 0.0);
  }
  ASSERT_TRUE(traj.samples.back().status.has_value());
  EXPECT_EQ(*traj.samples.back().status, TerminationStatus::Completed);
  EXPECT_FALSE(traj.samples.front().status.has_value());
}

TEST(Integrator, HopfIsStationary) {
  const auto s = hopf();
  const auto traj = integrate(s, config(0.05, 0.5));
  EXPECT_EQ(traj.status, TerminationStatus::Completed);
  EXPECT_LE(state_error(traj.samples.front(), traj.samples.back()), 1e-14);
}

TEST(Integrator, KodairaThurstonPreservesStructure) {
  const auto s = kt();
  const auto traj = integrate(s, config(1e-2, 1.0));
  EXPECT_EQ(traj.status, TerminationStatus::Completed);
  EXPECT_NEAR(traj.samples.back().t, 1.0, 1e-12);
  for (const auto& smp : traj.samples) {
    EXPECT_LE(smp.compat_residual, 1e-8);
    EXPECT_LE(smp.jsq_residual, 1e-8);
    EXPECT_LE(smp.d_omega_norm, 1e-8);
    EXPECT_TRUE(std::isfinite(smp.rm_norm));
  }
  // g changes: the metric is not a fixed point
  EXPECT_GT((traj.samples.back().g - s.pair.g()).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Integrator, StepMatchesFirstOrderTaylor) {
  const auto s = kt();
  const double dt = 1e-5;
  const auto next = step(FlowState{0.0, s.pair}, dt, s.algebra);
  const auto rhs = flow_rhs(s.pair, s.algebra);
  EXPECT_NEAR(next.t, dt, 1e-18);
  EXPECT_LE(((next.pair.g() - s.pair.g()) / dt - rhs.h.matrix()).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_LE(((next.pair.j() - s.pair.j()) / dt - rhs.k.matrix()).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Integrator, FourthOrderConvergence) {
  const auto s = kt();
  const double t = 0.5, dt = 0.05;
  // Coarse steps drift past the default monitor; measure the error instead of stopping.
  auto run = [&](double h) {
    auto c = config(h, t);
    c.drift_tolerance = 1.0;
    const auto traj = integrate(s, c);
    EXPECT_EQ(traj.status, TerminationStatus::Completed);
    return traj.samples.back();
  };
  const auto ref = run(dt / 8);
  const double e1 = state_error(run(dt), ref);
  const double e2 = state_error(run(dt / 2), ref);
  const double ratio = e1 / e2;
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Integrator, Deterministic) {
  const auto s = kt();
  const auto a = integrate(s, config(0.02, 0.2));
  const auto b = integrate(s, config(0.02, 0.2));
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].t, b.samples[i].t);
    EXPECT_TRUE((a.samples[i].g.array() == b.samples[i].g.array()).all());
    EXPECT_TRUE((a.samples[i].j.array() == b.samples[i].j.array()).all());
  }
}

TEST(Integrator, RefinementDoesNotInflateDrift) {
  const auto s = kt();
  const double coarse = integrate(s, config(0.02, 0.4)).samples.back().compat_residual;
  const double fine = integrate(s, config(0.01, 0.4)).samples.back().compat_residual;
  EXPECT_LE(fine, std::max(2.0 * coarse, 1e-15));
}

TEST(Integrator, KahlerKeepsJConstant) {
  const auto alg = LieAlgebraSpec::from_brackets("aff2", 4, {{0, 1, 1, 1.0}, {2, 3, 3, 1.0}});
  const AlmostHermitianPair pair(Matrix::Identity(4, 4), standard_complex_structure(4));
  const auto traj = integrate(alg, pair, config(0.01, 0.2), "aff2");
  EXPECT_EQ(traj.status, TerminationStatus::Completed);
  for (const auto& smp : traj.samples) EXPECT_LE((smp.j - pair.j()).cwiseAbs().maxCoeff(), 1e-12);
  // aff(R) has Ric = -g, so g(t) = (1 + 2t) g0.
  EXPECT_NEAR(traj.samples.back().g(0, 0), 1.4, 1e-10);
  EXPECT_NEAR(traj.samples.back().g(2, 2), 1.4, 1e-10);
}

TEST(Integrator, ScaledDiagnostics) {
  const auto traj = integrate(kt(), config(0.05, 0.5));
  for (const auto& smp : traj.samples) {
    EXPECT_NEAR(smp.t_half_dj, std::sqrt(smp.t) * smp.dj_norm, 1e-15);
    EXPECT_NEAR(smp.t_rm, smp.t * smp.rm_norm, 1e-15);
    EXPECT_NEAR(smp.t_d2j, smp.t * smp.d2j_norm, 1e-15);
    ASSERT_EQ(smp.scaled_d_rm.size(), 2u);
    ASSERT_EQ(smp.scaled_d_j.size(), 2u);
    EXPECT_NEAR(smp.scaled_d_j[0], smp.t_half_dj, 1e-15);
  }
  EXPECT_EQ(traj.samples.front().t_rm, 0.0);
}

TEST(Integrator, SampleStride) {
  auto c = config(0.01, 0.1);
  c.sample_stride = 3;
  const auto traj = integrate(flat(), c);
  EXPECT_EQ(traj.steps, 10);
  // t = 0, 0.03, 0.06, 0.09 and the final sample
  EXPECT_EQ(traj.samples.size(), 5u);
  EXPECT_NEAR(traj.samples.back().t, 0.1, 1e-12);
}

TEST(Integrator, AdaptiveReachesEndAndAgreesWithFixed) {
  const auto s = kt();
  auto c = config(0.1, 0.5);
  c.scheme = Scheme::AdaptiveHalving;
  const auto a = integrate(s, c);
  EXPECT_EQ(a.status, TerminationStatus::Completed);
  EXPECT_NEAR(a.samples.back().t, 0.5, 1e-12);
  const auto ref = integrate(s, config(0.005, 0.5));
  EXPECT_LE(state_error(a.samples.back(), ref.samples.back()), 1e-7);
}

TEST(Integrator, BlowupStatus) {
  auto c = config(0.01, 0.2);
  c.blowup_threshold = 0.1;
  const auto traj = integrate(kt(), c);
  EXPECT_EQ(traj.status, TerminationStatus::Blowup);
  ASSERT_TRUE(traj.samples.back().status.has_value());
  EXPECT_EQ(*traj.samples.back().status, TerminationStatus::Blowup);
}

TEST(Integrator, StructureDriftStatus) {
  auto c = config(0.01, 0.2);
  c.drift_tolerance = 1e-20;
  const auto traj = integrate(kt(), c);
  EXPECT_EQ(traj.status, TerminationStatus::StructureDrift);
}

TEST(Integrator, StatusNames) {
  for (auto s : {TerminationStatus::Completed, TerminationStatus::Blowup, TerminationStatus::MetricDegenerate,
                 TerminationStatus::StructureDrift}) {
    EXPECT_EQ(parse_status(status_name(s)), s);
  }
  EXPECT_FALSE(parse_status("bogus").has_value());
}

TEST(BlowupDetector, InjectedSample) {
  Trajectory traj;
  traj.dim = 4;
  for (int i = 0; i < 5; ++i) traj.samples.push_back(blank_sample(0.1 * i, 1.0, 1.0));
  traj.samples.push_back(blank_sample(0.5, 2e6, 1.0));
  traj.samples.push_back(blank_sample(0.6, 1.0, 1.0));
  const auto v = detect_blowup(traj, 1e6);
  EXPECT_TRUE(v.fired);
  ASSERT_TRUE(v.t_last_valid.has_value());
  EXPECT_DOUBLE_EQ(*v.t_last_valid, 0.4);
  EXPECT_EQ(v.index, 5u);
  EXPECT_EQ(v.quantity, "|Rm|");
}

TEST(BlowupDetector, DjSampleAndFirstSample) {
  Trajectory traj;
  traj.dim = 4;
  traj.samples.push_back(blank_sample(0.0, 1.0, 5.0));
  auto v = detect_blowup(traj, 2.0);
  EXPECT_TRUE(v.fired);
  EXPECT_FALSE(v.t_last_valid.has_value());
  EXPECT_EQ(v.quantity, "|DJ|");
  traj.samples.front().dj_norm = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(detect_blowup(traj, 2.0).fired);
}

TEST(BlowupDetector, CatalogDoesNotFire) {
  for (const auto& s : catalog()) {
    const auto traj = integrate(s, config(0.01, 1.0));
    const auto v = detect_blowup(traj, 1e6);
    EXPECT_FALSE(v.fired) << s.label;
    ASSERT_TRUE(v.t_last_valid.has_value());
    EXPECT_NEAR(*v.t_last_valid, 1.0, 1e-12);
  }
}

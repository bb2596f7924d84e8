#include "hermiflow/integrator.hpp"

#include "hermiflow/flow_tensors.hpp"
#include "hermiflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hermiflow {

std::string_view status_name(TerminationStatus s) noexcept {
  switch (s) {
    case TerminationStatus::Completed: return "completed";
    case TerminationStatus::Blowup: return "blowup";
    case TerminationStatus::MetricDegenerate: return "metric_degenerate";
    case TerminationStatus::StructureDrift: return "structure_drift";
  }
  return "completed";
}

std::optional<TerminationStatus> parse_status(std::string_view s) noexcept {
  for (auto st : {TerminationStatus::Completed, TerminationStatus::Blowup, TerminationStatus::MetricDegenerate,
                  TerminationStatus::StructureDrift}) {
    if (s == status_name(st)) return st;
  }
  return std::nullopt;
}

void IntegratorConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a positive finite number");
    }
  };
  positive(dt, "dt");
  positive(t_end, "t_end");
  positive(blowup_threshold, "blowup_threshold");
  positive(drift_tolerance, "drift_tolerance");
  positive(adaptive_tolerance, "adaptive_tolerance");
  positive(min_eigenvalue_floor, "min_eigenvalue_floor");
  if (sample_stride < 1) throw Error(ErrorCode::InvalidArgument, "sample_stride must be >= 1");
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 1");
}

namespace {

struct Derivative {
  Matrix g;
  Matrix j;
};

Derivative rhs(const Matrix& g, const Matrix& j, const LieAlgebraSpec& algebra) {
  const VariationPair v = flow_rhs(AlmostHermitianPair::unchecked(g, j), algebra);
  return {v.h.matrix(), v.k.matrix()};
}

double max_diff(const FlowState& a, const FlowState& b) {
  return std::max((a.pair.g() - b.pair.g()).cwiseAbs().maxCoeff(), (a.pair.j() - b.pair.j()).cwiseAbs().maxCoeff());
}

}  // namespace

FlowState step(const FlowState& state, double dt, const LieAlgebraSpec& algebra) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  const Matrix& g0 = state.pair.g();
  const Matrix& j0 = state.pair.j();

  auto stage = [&](const Matrix& g, const Matrix& j) {
    if (!g.allFinite() || !j.allFinite()) throw NonFiniteStep(state);
    Derivative d = rhs(g, j, algebra);
    if (!d.g.allFinite() || !d.j.allFinite()) throw NonFiniteStep(state);
    return d;
  };
  const Derivative k1 = stage(g0, j0);
  const Derivative k2 = stage(g0 + 0.5 * dt * k1.g, j0 + 0.5 * dt * k1.j);
  const Derivative k3 = stage(g0 + 0.5 * dt * k2.g, j0 + 0.5 * dt * k2.j);
  const Derivative k4 = stage(g0 + dt * k3.g, j0 + dt * k3.j);

  Matrix g = g0 + (dt / 6.0) * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
  const Matrix j = j0 + (dt / 6.0) * (k1.j + 2.0 * k2.j + 2.0 * k3.j + k4.j);
  g = 0.5 * (g + g.transpose()).eval();
  if (!g.allFinite() || !j.allFinite()) throw NonFiniteStep(state);
  return FlowState{state.t + dt, AlmostHermitianPair::unchecked(g, j)};
}

TrajectorySample diagnostics(const FlowState& state, const LieAlgebraSpec& algebra, int k_max) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 1");
  const AlmostHermitianPair& pair = state.pair;
  const Metric& m = pair.metric();
  const Geometry geo = compute_geometry(algebra, pair, k_max);

  TrajectorySample s;
  s.t = state.t;
  s.g = pair.g();
  s.j = pair.j();
  s.rm_norm = frame_norm(geo.curv.rm, m);
  s.dj_norm = frame_norm(geo.dj.dj(), m);
  s.d2j_norm = frame_norm(geo.dj.d2j, m);
  s.n_norm = frame_norm(geo.n.low, m);
  s.d_omega_norm = frame_norm(geo.omega.d_omega, m);
  s.compat_residual = pair.compatibility_residual();
  s.jsq_residual = pair.j_squared_residual();
  s.min_eig_g = m.min_eigenvalue();

  const double t = state.t;
  s.t_half_dj = std::sqrt(t) * s.dj_norm;
  s.t_rm = t * s.rm_norm;
  s.t_d2j = t * s.d2j_norm;
  const auto drm = higher_rm(geo.conn, geo.curv, k_max);
  for (int k = 1; k <= k_max; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    s.scaled_d_rm.push_back(std::pow(t, 0.5 * (k + 2)) * frame_norm(drm[idx], m));
    s.scaled_d_j.push_back(std::pow(t, 0.5 * k) * frame_norm(geo.dj.derivatives[idx], m));
  }
  return s;
}

namespace {

bool sample_finite(const TrajectorySample& s) {
  auto fin = [](double v) { return std::isfinite(v); };
  return fin(s.rm_norm) && fin(s.dj_norm) && fin(s.d2j_norm) && fin(s.n_norm) && fin(s.d_omega_norm) &&
         fin(s.compat_residual) && fin(s.jsq_residual) && fin(s.min_eig_g) &&
         std::all_of(s.scaled_d_rm.begin(), s.scaled_d_rm.end(), fin) &&
         std::all_of(s.scaled_d_j.begin(), s.scaled_d_j.end(), fin);
}

// Termination reason implied by a sample, if any.
std::optional<std::pair<TerminationStatus, std::string>> verdict(const TrajectorySample& s,
                                                                 const IntegratorConfig& cfg) {
  char buf[160];
  if (s.min_eig_g < cfg.min_eigenvalue_floor) {
    std::snprintf(buf, sizeof buf, "min eigenvalue of g %.3e below %.1e", s.min_eig_g, cfg.min_eigenvalue_floor);
    return std::pair{TerminationStatus::MetricDegenerate, std::string(buf)};
  }
  if (std::max(s.rm_norm, s.dj_norm) > cfg.blowup_threshold) {
    const bool rm = s.rm_norm >= s.dj_norm;
    std::snprintf(buf, sizeof buf, "%s = %.3e exceeds threshold %.1e", rm ? "|Rm|" : "|DJ|",
                  rm ? s.rm_norm : s.dj_norm, cfg.blowup_threshold);
    return std::pair{TerminationStatus::Blowup, std::string(buf)};
  }
  if (s.jsq_residual > cfg.drift_tolerance || s.compat_residual > cfg.drift_tolerance) {
    std::snprintf(buf, sizeof buf, "structure drift: |J^2 + I| = %.3e, |J^T g J - g| = %.3e, tolerance %.1e",
                  s.jsq_residual, s.compat_residual, cfg.drift_tolerance);
    return std::pair{TerminationStatus::StructureDrift, std::string(buf)};
  }
  return std::nullopt;
}

}  // namespace

Trajectory integrate(const LieAlgebraSpec& algebra, const AlmostHermitianPair& initial, const IntegratorConfig& config,
                     std::string label) {
  config.validate();
  Trajectory traj;
  traj.label = label.empty() ? algebra.name() : std::move(label);
  traj.dim = algebra.dim();

  FlowState state{0.0, initial};
  TrajectorySample last = diagnostics(state, algebra, config.k_max);

  auto finish = [&](TerminationStatus st, std::string detail, TrajectorySample s) {
    traj.status = st;
    traj.detail = std::move(detail);
    if (!traj.samples.empty() && traj.samples.back().t == s.t) {
      traj.samples.back().status = st;
    } else {
      s.status = st;
      traj.samples.push_back(std::move(s));
    }
    return traj;
  };
  // The finished trajectory if the run must stop at this sample.
  auto check = [&](const TrajectorySample& s) -> std::optional<Trajectory> {
    if (!sample_finite(s)) return finish(TerminationStatus::Blowup, "non-finite diagnostics", last);
    if (auto v = verdict(s, config)) return finish(v->first, v->second, s);
    return std::nullopt;
  };

  if (!sample_finite(last)) throw Error(ErrorCode::InvalidArgument, "initial state has non-finite diagnostics");
  if (auto v = verdict(last, config)) return finish(v->first, v->second, last);
  traj.samples.push_back(last);

  const double t_end = config.t_end;
  const double eps = 1e-12 * std::max(1.0, t_end);
  int steps = 0;
  double h = config.dt;

  while (state.t < t_end - eps) {
    FlowState next = state;
    try {
      if (config.scheme == Scheme::Rk4) {
        const int n_next = steps + 1;
        const double t_target = std::min(t_end, n_next * config.dt);
        next = step(state, t_target - state.t, algebra);
        next.t = t_target;
      } else {
        h = std::min(h, t_end - state.t);
        for (;;) {
          const FlowState full = step(state, h, algebra);
          const FlowState half = step(step(state, 0.5 * h, algebra), 0.5 * h, algebra);
          const double err = max_diff(full, half);
          if (err <= config.adaptive_tolerance) {
            next = half;
            next.t = (t_end - state.t - h <= eps) ? t_end : state.t + h;
            if (err < config.adaptive_tolerance / 64.0) h *= 2.0;
            break;
          }
          h *= 0.5;
          if (h < 1e-14 * std::max(1.0, t_end)) {
            traj.steps = steps;
            return finish(TerminationStatus::Blowup, "adaptive step size underflow", last);
          }
        }
      }
    } catch (const NonFiniteStep&) {
      traj.steps = steps;
      return finish(TerminationStatus::Blowup, "non-finite value during step", last);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotPositiveDefinite) throw;
      traj.steps = steps;
      return finish(TerminationStatus::MetricDegenerate, e.what(), last);
    }
    state = std::move(next);
    ++steps;
    traj.steps = steps;

    TrajectorySample s = diagnostics(state, algebra, config.k_max);
    if (auto done = check(s)) return *done;
    const bool at_end = state.t >= t_end - eps;
    if (at_end) return finish(TerminationStatus::Completed, "reached t_end", std::move(s));
    if (steps % config.sample_stride == 0) traj.samples.push_back(s);
    last = std::move(s);
  }
  return finish(TerminationStatus::Completed, "reached t_end", last);
}

Trajectory integrate(const Scenario& scenario, const IntegratorConfig& config) {
  return integrate(scenario.algebra, scenario.pair, config, scenario.label);
}

BlowupVerdict detect_blowup(const Trajectory& traj, double threshold) {
  BlowupVerdict v;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    if (std::max(s.rm_norm, s.dj_norm) > threshold) {
      v.fired = true;
      v.index = i;
      v.quantity = s.rm_norm >= s.dj_norm ? "|Rm|" : "|DJ|";
      if (i > 0) v.t_last_valid = traj.samples[i - 1].t;
      return v;
    }
  }
  if (!traj.samples.empty()) v.t_last_valid = traj.samples.back().t;
  return v;
}

}  // namespace hermiflow

#include "cli.hpp"

#include "hermiflow/catalog.hpp"
#include "hermiflow/error.hpp"
#include "hermiflow/flow_tensors.hpp"
#include "hermiflow/identity_suite.hpp"
#include "hermiflow/integrator.hpp"
#include "hermiflow/trajectory_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string_view>

namespace hermiflow::cli {

namespace {

using json = nlohmann::json;

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

CommandOutcome input_error(const Error& e) {
  CommandOutcome out;
  out.exit_code = kInputError;
  out.report = "error [" + std::string(code_name(e.code())) + "] " + e.what() + "\n";
  return out;
}

template <typename Fn>
CommandOutcome guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return input_error(e);
  }
}

const char* verdict(bool ok) { return ok ? "ok" : "FAIL"; }

}  // namespace

double resolve_verify_tolerance(std::optional<double> flag) {
  if (flag) return *flag;
  const char* env = std::getenv("HERMIFLOW_TOL");
  if (env == nullptr || *env == '\0') return kDefaultVerifyTol;
  const std::string_view s(env);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !(v > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "HERMIFLOW_TOL must be a positive number, got '" + std::string(s) + "'");
  }
  return v;
}

CommandOutcome cmd_verify(const std::string& scenario_ref, int n_random, std::uint64_t seed, double tol, bool as_json) {
  return guarded([&] {
    if (n_random < 0) throw Error(ErrorCode::InvalidArgument, "--random must be >= 0");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    const Scenario sc = load_scenario(scenario_ref);
    const SuiteReport rep = run_identity_suite(sc.algebra, sc.pair, n_random, seed);
    const bool ok = rep.passed(tol);

    CommandOutcome out;
    out.exit_code = ok ? kPass : kCheckFailed;
    if (as_json) {
      json doc;
      doc["scenario"] = sc.label;
      doc["pairs"] = rep.pairs;
      doc["seed"] = seed;
      doc["tolerance"] = tol;
      doc["passed"] = ok;
      for (const auto& i : rep.identities) {
        doc["identities"].push_back({{"name", i.name}, {"worst", i.worst}, {"evaluated", i.evaluated}});
      }
      out.report = doc.dump(2) + "\n";
      return out;
    }
    std::string r = format("scenario %s (dim %d): 1 scenario pair + %d random pairs, seed %llu, tolerance %.1e\n",
                           sc.label.c_str(), sc.algebra.dim(), n_random, static_cast<unsigned long long>(seed), tol);
    r += format("%-56s %-10s %s\n", "identity", "worst", "pairs");
    for (const auto& i : rep.identities) {
      r += format("%-56s %.3e  %-5d %s\n", i.name.c_str(), i.worst, i.evaluated, verdict(i.worst <= tol));
    }
    r += format("%s: worst residual %.3e\n", ok ? "PASS" : "FAIL", rep.worst());
    out.report = std::move(r);
    return out;
  });
}

CommandOutcome cmd_reduce(const std::string& scenario_ref, bool as_json) {
  return guarded([&] {
    const Scenario sc = load_scenario(scenario_ref);
    const ReductionReport rep = check_reduction(sc.pair, sc.algebra, kReduceTol);
    CommandOutcome out;
    out.exit_code = rep.passed() ? kPass : kCheckFailed;
    if (as_json) {
      json doc;
      doc["scenario"] = sc.label;
      doc["tolerance"] = rep.tolerance;
      doc["norm_domega"] = rep.norm_d_omega;
      doc["norm_N"] = rep.norm_n;
      doc["closed_branch"] = rep.closed_branch;
      doc["integrable_branch"] = rep.integrable_branch;
      for (const auto& c : rep.closed_checks) doc["closed_checks"][c.name] = c.value;
      for (const auto& c : rep.integrable_checks) doc["integrable_checks"][c.name] = c.value;
      doc["passed"] = rep.passed();
      out.report = doc.dump(2) + "\n";
      return out;
    }
    out.report = "scenario " + sc.label + "\n" + rep.describe() + (rep.passed() ? "PASS\n" : "FAIL\n");
    return out;
  });
}

CommandOutcome cmd_gauge(const std::string& scenario_ref, bool as_json) {
  return guarded([&] {
    const Scenario sc = load_scenario(scenario_ref);
    const GaugeReport g = check_gauge(sc.pair, sc.algebra);
    const bool ok = g.residual <= kGaugeTol;
    CommandOutcome out;
    out.exit_code = ok ? kPass : kCheckFailed;
    if (as_json) {
      json doc{{"scenario", sc.label},
               {"residual", g.residual},
               {"correction_norm", g.correction_norm},
               {"completed_residual", g.completed_residual},
               {"tolerance", kGaugeTol},
               {"passed", ok}};
      out.report = doc.dump(2) + "\n";
      return out;
    }
    std::string r = "scenario " + sc.label + "\n";
    r += format("residual |L_theta J - (Delta J + Q + R + K + N_bar)| = %.3e  %s (tolerance %.0e)\n", g.residual,
                verdict(ok), kGaugeTol);
    r += format("correction term |sum_i (D_{J e_i} J)(D_X J) e_i| = %.3e\n", g.correction_norm);
    r += format("residual including the correction term = %.3e\n", g.completed_residual);
    r += ok ? "PASS\n" : "FAIL\n";
    out.report = std::move(r);
    return out;
  });
}

CommandOutcome cmd_flow(const std::string& scenario_ref, const FlowOptions& opts) {
  return guarded([&] {
    const auto fmt = parse_format(opts.format);
    if (!fmt) throw Error(ErrorCode::InvalidArgument, "--format must be csv or json, got '" + opts.format + "'");
    IntegratorConfig cfg;
    cfg.dt = opts.dt;
    cfg.t_end = opts.t_end;
    cfg.scheme = opts.adaptive ? Scheme::AdaptiveHalving : Scheme::Rk4;
    cfg.k_max = opts.k_max;
    cfg.sample_stride = opts.stride;
    cfg.blowup_threshold = opts.blowup_threshold;
    cfg.validate();

    const Scenario sc = load_scenario(scenario_ref);
    const Trajectory traj = integrate(sc, cfg);

    CommandOutcome out;
    out.exit_code = traj.status == TerminationStatus::Completed ? kPass : kCheckFailed;
    if (!opts.out.empty()) {
      std::string text = write_trajectory(traj, *fmt);
      if (opts.out == "-") {
        out.payload = std::move(text);
      } else {
        std::ofstream f(opts.out, std::ios::binary);
        if (!f || !(f << text) || !f.flush()) throw Error(ErrorCode::Io, "cannot write '" + opts.out + "'");
      }
    }

    const TrajectorySample& last = traj.samples.back();
    double max_compat = 0, max_jsq = 0, max_dw = 0, max_n = 0;
    for (const auto& s : traj.samples) {
      max_compat = std::max(max_compat, s.compat_residual);
      max_jsq = std::max(max_jsq, s.jsq_residual);
      max_dw = std::max(max_dw, s.d_omega_norm);
      max_n = std::max(max_n, s.n_norm);
    }
    if (opts.json) {
      json doc{{"scenario", sc.label},
               {"status", std::string(status_name(traj.status))},
               {"detail", traj.detail},
               {"t", last.t},
               {"steps", traj.steps},
               {"samples", traj.samples.size()},
               {"final", {{"|Rm|", last.rm_norm}, {"|DJ|", last.dj_norm}, {"|D2J|", last.d2j_norm},
                          {"norm_N", last.n_norm}, {"norm_domega", last.d_omega_norm},
                          {"min_eig_g", last.min_eig_g}, {"t_half_DJ", last.t_half_dj}, {"t_Rm", last.t_rm},
                          {"scaled_DkRm", last.scaled_d_rm}, {"scaled_DkJ", last.scaled_d_j}}},
               {"max", {{"compat_residual", max_compat}, {"jsq_residual", max_jsq},
                        {"norm_domega", max_dw}, {"norm_N", max_n}}}};
      out.report = doc.dump(2) + "\n";
      return out;
    }
    std::string r = format("scenario %s: status %s (%s) at t = %.6g after %d steps, %zu samples\n",
                           sc.label.c_str(), std::string(status_name(traj.status)).c_str(), traj.detail.c_str(),
                           last.t, traj.steps, traj.samples.size());
    r += format("final: |Rm| = %.6e  |DJ| = %.6e  |D2J| = %.6e  min_eig_g = %.6e\n", last.rm_norm, last.dj_norm,
                last.d2j_norm, last.min_eig_g);
    r += format("final: t|Rm| = %.6e  t^1/2|DJ| = %.6e  t|D2J| = %.6e\n", last.t_rm, last.t_half_dj, last.t_d2j);
    for (std::size_t k = 0; k < last.scaled_d_rm.size(); ++k) {
      r += format("final: t^%g|D^%zu Rm| = %.6e  t^%g|D^%zu J| = %.6e\n", 0.5 * static_cast<double>(k + 3), k + 1,
                  last.scaled_d_rm[k], 0.5 * static_cast<double>(k + 1), k + 1, last.scaled_d_j[k]);
    }
    r += format("max over run: compat_residual = %.3e  jsq_residual = %.3e  norm_domega = %.3e  norm_N = %.3e\n",
                max_compat, max_jsq, max_dw, max_n);
    out.report = std::move(r);
    return out;
  });
}

}  // namespace hermiflow::cli

#include "cli.hpp"

#include "hermiflow/error.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

namespace cli = hermiflow::cli;

int main(int argc, char** argv) {
  CLI::App app{"hermiflow: almost Hermitian curvature flow on Lie groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hermiflow 0.1.0");

  std::string scenario;
  bool json = false;

  auto* verify = app.add_subcommand("verify", "Run the identity suite on a scenario and random pairs");
  int n_random = 0;
  std::uint64_t seed = cli::kDefaultSeed;
  std::optional<double> tol;
  verify->add_option("scenario", scenario, "Builtin name or scenario file")->required();
  verify->add_option("--random", n_random, "Number of seeded random compatible pairs")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", seed, "Random seed")->capture_default_str();
  verify->add_option("--tol", tol, "Pass tolerance (default: HERMIFLOW_TOL or 1e-10)")->check(CLI::PositiveNumber);
  verify->add_flag("--json", json, "Emit a JSON report");

  auto* reduce = app.add_subcommand("reduce", "Check the closed / integrable reduction identities");
  reduce->add_option("scenario", scenario, "Builtin name or scenario file")->required();
  reduce->add_flag("--json", json, "Emit a JSON report");

  auto* gauge = app.add_subcommand("gauge", "Check the Lee-field gauge identity");
  gauge->add_option("scenario", scenario, "Builtin name or scenario file")->required();
  gauge->add_flag("--json", json, "Emit a JSON report");

  auto* flow = app.add_subcommand("flow", "Integrate the flow and monitor diagnostics");
  cli::FlowOptions fo;
  flow->add_option("scenario", scenario, "Builtin name or scenario file")->required();
  flow->add_option("--dt", fo.dt, "Step size (initial step when adaptive)")->capture_default_str();
  flow->add_option("--t-end", fo.t_end, "Final time")->capture_default_str();
  flow->add_flag("--adaptive", fo.adaptive, "Step-halving adaptive RK4");
  flow->add_option("--out", fo.out, "Trajectory output file ('-' for stdout)");
  flow->add_option("--format", fo.format, "Trajectory format")->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  flow->add_option("--kmax", fo.k_max, "Highest derivative order in the scaled diagnostics")
      ->check(CLI::PositiveNumber)->capture_default_str();
  flow->add_option("--stride", fo.stride, "Record every N-th step")->check(CLI::PositiveNumber)->capture_default_str();
  flow->add_option("--threshold", fo.blowup_threshold, "Blow-up threshold on max(|Rm|, |DJ|)")->capture_default_str();
  flow->add_flag("--json", fo.json, "Emit a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kInputError;
  }

  cli::CommandOutcome out;
  if (verify->parsed()) {
    try {
      out = cli::cmd_verify(scenario, n_random, seed, cli::resolve_verify_tolerance(tol), json);
    } catch (const hermiflow::Error& e) {
      std::cerr << "error [" << hermiflow::code_name(e.code()) << "] " << e.what() << '\n';
      return cli::kInputError;
    }
  } else if (reduce->parsed()) {
    out = cli::cmd_reduce(scenario, json);
  } else if (gauge->parsed()) {
    out = cli::cmd_gauge(scenario, json);
  } else {
    out = cli::cmd_flow(scenario, fo);
  }

  if (!out.payload.empty()) {
    std::cout << out.payload << std::flush;
    std::cerr << out.report;
  } else if (out.exit_code == cli::kInputError) {
    std::cerr << out.report;
  } else {
    std::cout << out.report;
  }
  return out.exit_code;
}

#pragma once

// Time integration of the flow ODE (g(t), J(t)) with structure monitoring.

#include "hermiflow/catalog.hpp"
#include "hermiflow/error.hpp"
#include "hermiflow/lie_algebra.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermiflow {

struct FlowState {
  double t = 0.0;
  AlmostHermitianPair pair;
};

enum class TerminationStatus { Completed, Blowup, MetricDegenerate, StructureDrift };

std::string_view status_name(TerminationStatus s) noexcept;
std::optional<TerminationStatus> parse_status(std::string_view s) noexcept;

struct TrajectorySample {
  double t = 0.0;
  Matrix g;
  Matrix j;
  double rm_norm = 0.0;
  double dj_norm = 0.0;
  double d2j_norm = 0.0;
  double n_norm = 0.0;
  double d_omega_norm = 0.0;
  double compat_residual = 0.0;
  double jsq_residual = 0.0;
  double min_eig_g = 0.0;
  double t_half_dj = 0.0;  // t^{1/2} |DJ|
  double t_rm = 0.0;       // t |Rm|
  double t_d2j = 0.0;      // t |D^2 J|
  /// t^{(k+2)/2} |D^k Rm| for k = 1..k_max.
  std::vector<double> scaled_d_rm;
  /// t^{k/2} |D^k J| for k = 1..k_max.
  std::vector<double> scaled_d_j;
  /// Set on the sample recorded at termination.
  std::optional<TerminationStatus> status;
};

struct Trajectory {
  std::string label;
  int dim = 0;
  std::vector<TrajectorySample> samples;
  TerminationStatus status = TerminationStatus::Completed;
  std::string detail;
  int steps = 0;
};

enum class Scheme { Rk4, AdaptiveHalving };

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::Rk4;
  double blowup_threshold = 1e6;
  double drift_tolerance = 1e-8;
  int sample_stride = 1;
  int k_max = 2;
  /// Local error target of the adaptive scheme (max-norm over g and J).
  double adaptive_tolerance = 1e-9;
  /// Runs stop once the smallest eigenvalue of g falls below this.
  double min_eigenvalue_floor = 1e-10;

  /// Throws InvalidArgument on non-positive values.
  void validate() const;
};

/// Raised by step() when a stage produces non-finite values.
class NonFiniteStep : public Error {
 public:
  explicit NonFiniteStep(FlowState last_valid)
      : Error(ErrorCode::InvalidArgument, "non-finite value during step"), last_valid_(std::move(last_valid)) {}
  const FlowState& last_valid() const noexcept { return last_valid_; }

 private:
  FlowState last_valid_;
};

/// One classical RK4 step. g is symmetrized afterwards; J is left as is.
FlowState step(const FlowState& state, double dt, const LieAlgebraSpec& algebra);

TrajectorySample diagnostics(const FlowState& state, const LieAlgebraSpec& algebra, int k_max);

Trajectory integrate(const LieAlgebraSpec& algebra, const AlmostHermitianPair& initial, const IntegratorConfig& config,
                     std::string label = {});
Trajectory integrate(const Scenario& scenario, const IntegratorConfig& config);

struct BlowupVerdict {
  bool fired = false;
  /// Time of the last sample before the first over-threshold sample (or of the
  /// final sample if none fired); empty if the very first sample fires.
  std::optional<double> t_last_valid;
  std::string quantity;  // "|Rm|" or "|DJ|" for the firing sample
  std::size_t index = 0;
};

BlowupVerdict detect_blowup(const Trajectory& traj, double threshold);

}  // namespace hermiflow

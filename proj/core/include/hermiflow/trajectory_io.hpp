#pragma once

// CSV and JSON serialization of trajectories.

#include "hermiflow/integrator.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermiflow {

enum class TrajectoryFormat { Csv, Json };

std::optional<TrajectoryFormat> parse_format(std::string_view s) noexcept;

/// Header of the CSV form: t, g_ij (i <= j, row-major), J_ij (all,
/// row-major), then the ten diagnostic columns. Indices are 1-based.
std::vector<std::string> csv_columns(int dim);

/// CSV numbers use the shortest scientific form that round-trips exactly.
std::string write_trajectory(const Trajectory& traj, TrajectoryFormat format);

/// Inverse of the JSON writer; bit-exact.
Trajectory parse_trajectory_json(std::string_view text);
/// Inverse of the CSV writer for the columns it carries (no status, no
/// higher-derivative arrays). Throws ParseError(Syntax) on malformed input.
Trajectory parse_trajectory_csv(std::string_view text);

}  // namespace hermiflow

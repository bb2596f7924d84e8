#pragma once

// Built-in test geometries and the plain-text scenario format.

#include "hermiflow/lie_algebra.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermiflow {

/// Advisory class of the initial data; checked at load time.
enum class ExpectedClass { Kahler, AlmostKahler, HermitianPluriclosed, Generic };

std::string_view class_name(ExpectedClass c) noexcept;
std::optional<ExpectedClass> parse_class(std::string_view s) noexcept;

/// Tolerance for the |d omega| and |N| class checks.
inline constexpr double kClassTol = 1e-10;

struct Scenario {
  std::string label;
  LieAlgebraSpec algebra;
  AlmostHermitianPair pair;
  ExpectedClass expected_class = ExpectedClass::Generic;
};

/// Validates every invariant including the expected class; throws
/// Error(ClassMismatch) when the class claim does not hold.
Scenario make_scenario(std::string label, LieAlgebraSpec algebra, const Matrix& g, const Matrix& j,
                       ExpectedClass cls);

std::vector<std::string> builtin_names();
/// flat_torus_4, kodaira_thurston or hopf_s3s1; throws UnknownScenario otherwise.
Scenario builtin(std::string_view name);

/// Parses the scenario format (see docs/scenario_format.md). Throws
/// ParseError with a 1-based line number for syntax problems and line 0 for
/// failed invariants.
Scenario parse_scenario(std::string_view text);
std::string write_scenario(const Scenario& s);

/// A builtin name, or else a path to a scenario file.
Scenario load_scenario(const std::string& ref);

}  // namespace hermiflow

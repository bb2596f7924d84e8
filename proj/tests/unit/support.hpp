#pragma once

#include "hermiflow/catalog.hpp"
#include "hermiflow/random_pairs.hpp"
#include "hermiflow/tensor.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

namespace hermiflow::test {

inline Scenario flat() { return builtin("flat_torus_4"); }
inline Scenario kt() { return builtin("kodaira_thurston"); }
inline Scenario hopf() { return builtin("hopf_s3s1"); }

inline std::vector<Scenario> catalog() { return {flat(), kt(), hopf()}; }

/// Heisenberg x R without a complex structure attached.
inline LieAlgebraSpec heisenberg() { return LieAlgebraSpec::from_brackets("heis", 4, {{0, 1, 2, 1.0}}); }

inline LieAlgebraSpec su2_r() {
  return LieAlgebraSpec::from_brackets("su2", 4, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}});
}

/// sl(2, R) + R: [e1, e2] = 2 e2, [e1, e3] = -2 e3, [e2, e3] = e1.
inline LieAlgebraSpec sl2_r() {
  return LieAlgebraSpec::from_brackets("sl2", 4, {{0, 1, 1, 2.0}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}});
}

/// 6-dimensional nilpotent algebra of Iwasawa type:
/// [e1, e3] = -e5, [e2, e4] = e5, [e1, e4] = -e6, [e2, e3] = -e6.
inline LieAlgebraSpec iwasawa() {
  return LieAlgebraSpec::from_brackets("iwasawa", 6,
                                       {{0, 2, 4, -1.0}, {1, 3, 4, 1.0}, {0, 3, 5, -1.0}, {1, 2, 5, -1.0}});
}

inline double max_diff(const Tensor& a, const Tensor& b) { return (a - b).max_abs(); }

inline Matrix kt_j() { return kt().pair.j(); }

}  // namespace hermiflow::test

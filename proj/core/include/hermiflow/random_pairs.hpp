#pragma once

// Seeded random test data.

#include "hermiflow/lie_algebra.hpp"
#include "hermiflow/tensor.hpp"

#include <random>
#include <vector>

namespace hermiflow {

using Rng = std::mt19937_64;

Matrix random_matrix(int rows, int cols, Rng& rng);
Vector random_vector(int dim, Rng& rng);
Tensor random_tensor(int dim, std::vector<Variance> variance, Rng& rng);

/// g = A A^T + delta I; J is the block rotation carried into a g-orthonormal
/// frame, so both pair invariants hold by construction.
AlmostHermitianPair random_compatible_pair(int dim, Rng& rng, double delta = 0.1);

}  // namespace hermiflow

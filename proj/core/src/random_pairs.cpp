#include "hermiflow/random_pairs.hpp"

#include "hermiflow/error.hpp"

namespace hermiflow {

Matrix random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  return m;
}

Vector random_vector(int dim, Rng& rng) { return random_matrix(dim, 1, rng).col(0); }

Tensor random_tensor(int dim, std::vector<Variance> variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor t(dim, std::move(variance));
  for (double& v : t.data()) v = normal(rng);
  return t;
}

AlmostHermitianPair random_compatible_pair(int dim, Rng& rng, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  const Matrix a = random_matrix(dim, dim, rng);
  const Matrix g = a * a.transpose() + delta * Matrix::Identity(dim, dim);
  const Metric metric(g);
  const Matrix j = metric.orthonormal_frame() * standard_complex_structure(dim) * metric.orthonormal_frame_inverse();
  return AlmostHermitianPair(metric.g(), j);
}

}  // namespace hermiflow

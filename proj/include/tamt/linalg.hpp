#pragma once

#include <cstdint>
#include <vector>

#include "tamt/mat.hpp"

namespace tamt::linalg {

// Eigendecomposition of a real symmetric matrix: Householder reduction to
// tridiagonal form followed by implicit-shift QL. Eigenvalues ascending,
// eigenvectors in the matching columns of `vectors`.
struct SymEig {
  std::vector<double> values;
  Mat vectors;
};

SymEig sym_eig(const Mat& a);

// Lloyd k-means over the rows of `points` with deterministic
// farthest-point initialization: the seed picks the first center, each
// following center maximizes the min distance to those already chosen
// (ties resolve to the lowest index).
std::vector<int> kmeans(const Mat& points, int k, uint64_t seed, int max_iter = 100);

}  // namespace tamt::linalg

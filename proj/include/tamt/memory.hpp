#pragma once

#include <vector>

#include "tamt/mat.hpp"

namespace tamt::memory {

// Hebbian storage over bipolar patterns: X = (1/N) sum x x^T with the
// diagonal zeroed.
struct BinaryMemory {
  Mat x;  // n x n, symmetric, zero diagonal
  int nodes() const { return x.rows; }
};

BinaryMemory hebb_store(const std::vector<std::vector<double>>& patterns);

struct RecallResult {
  std::vector<double> state;  // +-1 entries
  bool converged = false;
  int iterations = 0;
};

// Synchronous recall: x <- sign(x X), sign(0) keeps the previous value,
// until a fixed point or max_iter. Non-convergence returns the last state
// with converged = false.
RecallResult hopfield_recall(const BinaryMemory& mem, const std::vector<double>& probe,
                             int max_iter = 32);

// Network energy -1/2 x X x^T.
double hopfield_energy(const BinaryMemory& mem, const std::vector<double>& state);

// Continuous Hebb memory over note-probability-weighted embeddings:
// U = rownormalize(V) .* Y (zero rows stay zero), M = U^T U / sum(Y).
struct MemoryMatrix {
  Mat m;  // D x D, symmetric PSD
};

MemoryMatrix weighted_memory(const Mat& v, const std::vector<double>& y);

// One association pass: V_hat = V M.
Mat associate(const Mat& v, const MemoryMatrix& mem);

// Fused V (U^T U) / sum(Y) without materializing MemoryMatrix; runs in the
// O(K D^2) association order and matches associate(weighted_memory(...)).
Mat associate_once(const Mat& v, const std::vector<double>& y);

// Quadratic (V U^T) U / sum(Y) attention-order reference. Same value by
// associativity; kept serial for tests and the benchmark.
Mat associate_attention_order(const Mat& v, const std::vector<double>& y);

}  // namespace tamt::memory

#pragma once

#include <vector>

#include "tamt/types.hpp"

namespace tamt::eval {

// Frame-level multipitch counts and ratios. acc is the multipitch
// accuracy TP / (TP + FP + FN); f1 the harmonic mean of P and R. Ratios
// with an empty denominator are 0.
struct FrameScores {
  int64_t tp = 0, fp = 0, fn = 0;
  double acc = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
};

FrameScores frame_metrics(const Pianoroll& reference, const Pianoroll& estimate,
                          double threshold = 0.5);

struct PitResult {
  std::vector<int> permutation;  // estimate index assigned to each reference
  std::vector<FrameScores> per_source;
  FrameScores mean;  // counts summed, ratios macro-averaged
};

// Evaluates all M! reference-to-estimate assignments (M <= 6), picks the
// one minimizing total MSE between the continuous note rolls, and reports
// binarized metrics under it.
PitResult pit_match(const std::vector<Pianoroll>& references,
                    const std::vector<Pianoroll>& estimates, double threshold = 0.5);

}  // namespace tamt::eval

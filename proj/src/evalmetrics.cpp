#include "tamt/evalmetrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tamt::eval {

namespace {

double roll_mse(const Pianoroll& a, const Pianoroll& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.notes.size(); ++i) {
    const double d = a.notes.data[i] - b.notes.data[i];
    s += d * d;
  }
  return s / static_cast<double>(a.notes.size());
}

}  // namespace

FrameScores frame_metrics(const Pianoroll& reference, const Pianoroll& estimate,
                          double threshold) {
  if (!reference.notes.same_shape(estimate.notes))
    throw std::invalid_argument("frame_metrics: shape mismatch");

  int64_t tp = 0, fp = 0, fn = 0;
  const size_t n = reference.notes.size();
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, fn)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
    const bool r = reference.notes.data[i] >= threshold;
    const bool e = estimate.notes.data[i] >= threshold;
    if (r && e) ++tp;
    else if (!r && e) ++fp;
    else if (r && !e) ++fn;
  }

  FrameScores s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.acc = (tp + fp + fn) > 0 ? static_cast<double>(tp) / (tp + fp + fn) : 0.0;
  s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

PitResult pit_match(const std::vector<Pianoroll>& references,
                    const std::vector<Pianoroll>& estimates, double threshold) {
  const int m = static_cast<int>(references.size());
  if (m != static_cast<int>(estimates.size()))
    throw std::invalid_argument("pit_match: list length mismatch");
  if (m < 1) throw std::invalid_argument("pit_match: empty input");
  if (m > 6) throw std::invalid_argument("pit_match: M > 6 unsupported");
  for (const auto& r : references) {
    if (!r.notes.same_shape(references[0].notes))
      throw std::invalid_argument("pit_match: reference shape mismatch");
  }
  for (const auto& e : estimates) {
    if (!e.notes.same_shape(references[0].notes))
      throw std::invalid_argument("pit_match: estimate shape mismatch");
  }

  // Pairwise MSE table, then a serial scan over the M! assignments.
  Mat cost(m, m);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < m * m; ++idx) {
    cost(idx / m, idx % m) = roll_mse(references[idx / m], estimates[idx % m]);
  }

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int i = 0; i < m; ++i) c += cost(i, perm[i]);
    if (c < best_cost - 1e-15) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  PitResult out;
  out.permutation = best;
  out.per_source.reserve(m);
  for (int i = 0; i < m; ++i) {
    out.per_source.push_back(frame_metrics(references[i], estimates[best[i]], threshold));
  }
  for (const FrameScores& s : out.per_source) {
    out.mean.tp += s.tp;
    out.mean.fp += s.fp;
    out.mean.fn += s.fn;
    out.mean.acc += s.acc / m;
    out.mean.precision += s.precision / m;
    out.mean.recall += s.recall / m;
    out.mean.f1 += s.f1 / m;
  }
  return out;
}

}  // namespace tamt::eval

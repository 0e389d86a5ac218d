#include "tamt/memory.hpp"

#include <cmath>
#include <stdexcept>

namespace tamt::memory {

namespace {

// Row-normalized V scaled per-row by Y. Zero-norm rows stay zero: silent
// bins carry no memory.
Mat weighted_rows(const Mat& v, const std::vector<double>& y) {
  if (static_cast<size_t>(v.rows) != y.size())
    throw std::invalid_argument("weighted_memory: V rows and Y length differ");
  Mat u(v.rows, v.cols);
  for (int k = 0; k < v.rows; ++k) {
    double norm_sq = 0.0;
    for (int d = 0; d < v.cols; ++d) {
      const double x = v(k, d);
      if (!std::isfinite(x)) throw std::invalid_argument("weighted_memory: non-finite V");
      norm_sq += x * x;
    }
    if (norm_sq == 0.0) continue;
    const double scale = y[k] / std::sqrt(norm_sq);
    for (int d = 0; d < v.cols; ++d) u(k, d) = v(k, d) * scale;
  }
  return u;
}

double weight_sum(const std::vector<double>& y) {
  double s = 0.0;
  for (double w : y) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("weighted_memory: weights must be finite and >= 0");
    s += w;
  }
  if (s <= 0.0) throw std::invalid_argument("no salient bins");
  return s;
}

// U^T U / s, accumulated cell-by-cell (thread-count independent).
Mat scaled_gram(const Mat& u, double s) {
  const int d = u.cols;
  Mat m(d, d);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < d * d; ++idx) {
    const int a = idx / d;
    const int b = idx % d;
    if (b < a) continue;  // fill upper triangle, mirror below
    double acc = 0.0;
    for (int k = 0; k < u.rows; ++k) acc += u(k, a) * u(k, b);
    m(a, b) = acc / s;
  }
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < a; ++b) m(a, b) = m(b, a);
  }
  return m;
}

}  // namespace

BinaryMemory hebb_store(const std::vector<std::vector<double>>& patterns) {
  if (patterns.empty()) throw std::invalid_argument("hebb_store: empty pattern list");
  const size_t n = patterns[0].size();
  if (n == 0) throw std::invalid_argument("hebb_store: zero-length pattern");
  for (const auto& p : patterns) {
    if (p.size() != n) throw std::invalid_argument("hebb_store: mixed pattern lengths");
    for (double x : p) {
      if (x != 1.0 && x != -1.0)
        throw std::invalid_argument("hebb_store: entries must be +-1");
    }
  }
  BinaryMemory mem;
  mem.x = Mat(static_cast<int>(n), static_cast<int>(n));
  const double inv_count = 1.0 / static_cast<double>(patterns.size());
  for (const auto& p : patterns) {
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        mem.x(static_cast<int>(i), static_cast<int>(j)) += p[i] * p[j] * inv_count;
      }
    }
  }
  for (size_t i = 0; i < n; ++i) mem.x(static_cast<int>(i), static_cast<int>(i)) = 0.0;
  return mem;
}

RecallResult hopfield_recall(const BinaryMemory& mem, const std::vector<double>& probe,
                             int max_iter) {
  const int n = mem.nodes();
  if (static_cast<int>(probe.size()) != n)
    throw std::invalid_argument("hopfield_recall: probe length mismatch");

  RecallResult out;
  out.state.resize(n);
  // Previous values for resolving sign(0); a zero probe entry starts at +1.
  for (int i = 0; i < n; ++i) out.state[i] = probe[i] > 0 ? 1.0 : (probe[i] < 0 ? -1.0 : 1.0);

  std::vector<double> field(n);
  std::vector<double> input(probe);
  for (int it = 0; it < max_iter; ++it) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += input[i] * mem.x(i, j);
      field[j] = s;
    }
    bool changed = false;
    for (int j = 0; j < n; ++j) {
      double next = out.state[j];
      if (field[j] > 0) next = 1.0;
      else if (field[j] < 0) next = -1.0;
      if (next != out.state[j]) changed = true;
      out.state[j] = next;
    }
    out.iterations = it + 1;
    // Fixed point once the binarized state reproduces itself; the first
    // pass may be a no-op for a probe that is already a stored pattern.
    bool probe_was_binary = (it > 0) || input == out.state;
    if (!changed && probe_was_binary) {
      out.converged = true;
      return out;
    }
    input = out.state;
  }
  return out;
}

double hopfield_energy(const BinaryMemory& mem, const std::vector<double>& state) {
  const int n = mem.nodes();
  if (static_cast<int>(state.size()) != n)
    throw std::invalid_argument("hopfield_energy: state length mismatch");
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) e += state[i] * mem.x(i, j) * state[j];
  }
  return -0.5 * e;
}

MemoryMatrix weighted_memory(const Mat& v, const std::vector<double>& y) {
  const double s = weight_sum(y);
  const Mat u = weighted_rows(v, y);
  return {scaled_gram(u, s)};
}

Mat associate(const Mat& v, const MemoryMatrix& mem) {
  if (v.cols != mem.m.rows)
    throw std::invalid_argument("associate: dimension mismatch");
  const int d = v.cols;
  Mat out(v.rows, d);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < v.rows; ++k) {
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a) acc += v(k, a) * mem.m(a, b);
      out(k, b) = acc;
    }
  }
  return out;
}

Mat associate_once(const Mat& v, const std::vector<double>& y) {
  const double s = weight_sum(y);
  const Mat u = weighted_rows(v, y);
  const Mat m = scaled_gram(u, s);
  return associate(v, MemoryMatrix{m});
}

Mat associate_attention_order(const Mat& v, const std::vector<double>& y) {
  const double s = weight_sum(y);
  const Mat u = weighted_rows(v, y);
  const int k = v.rows;
  const int d = v.cols;
  // (V U^T) U / s, materializing the K x K score row by row.
  Mat out(k, d);
  std::vector<double> scores(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a) acc += v(i, a) * u(j, a);
      scores[j] = acc;
    }
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += scores[j] * u(j, b);
      out(i, b) = acc / s;
    }
  }
  return out;
}

}  // namespace tamt::memory

#include "tamt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tamt::linalg {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form,
// accumulating the transformation in v. Classic tred2.
void tred2(Mat& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = v.rows;
  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::fabs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0.0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), rotating v's columns along.
void tql2(Mat& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = v.rows;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0, tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
    int m = l;
    while (m < n) {
      if (std::fabs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        ++iter;
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0.0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::fabs(e[l]) > eps * tst1 && iter < 60);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  // Sort eigenvalues ascending, permuting columns with them.
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    double p = d[i];
    for (int j = i + 1; j < n; ++j) {
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      for (int j = 0; j < n; ++j) std::swap(v(j, i), v(j, k));
    }
  }
}

double sq_dist(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

}  // namespace

SymEig sym_eig(const Mat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("sym_eig: matrix not square");
  if (a.rows == 0) return {{}, Mat()};
  SymEig out;
  out.vectors = a;
  out.values.assign(a.rows, 0.0);
  std::vector<double> e(a.rows, 0.0);
  tred2(out.vectors, out.values, e);
  tql2(out.vectors, out.values, e);
  return out;
}

namespace {

double kmeans_inertia(const Mat& points, const std::vector<int>& labels, int k) {
  const int dim = points.cols;
  Mat centers(k, dim);
  std::vector<int> counts(k, 0);
  for (int i = 0; i < points.rows; ++i) {
    ++counts[labels[i]];
    for (int d = 0; d < dim; ++d) centers(labels[i], d) += points(i, d);
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      for (int d = 0; d < dim; ++d) centers(c, d) /= counts[c];
    }
  }
  double total = 0.0;
  for (int i = 0; i < points.rows; ++i) {
    total += sq_dist(points.row(i), centers.row(labels[i]), dim);
  }
  return total;
}

std::vector<int> kmeans_single(const Mat& points, int k, uint64_t seed, int max_iter);

}  // namespace

std::vector<int> kmeans(const Mat& points, int k, uint64_t seed, int max_iter) {
  // Three deterministic restarts (seed-derived first centers); keep the
  // labeling with the lowest within-cluster sum of squares.
  std::vector<int> best;
  double best_inertia = std::numeric_limits<double>::infinity();
  for (uint64_t r = 0; r < 3; ++r) {
    const auto labels = kmeans_single(points, k, seed + r * 0x9e3779b97f4a7c15ull, max_iter);
    const double inertia = kmeans_inertia(points, labels, k);
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best = labels;
    }
  }
  return best;
}

namespace {

std::vector<int> kmeans_single(const Mat& points, int k, uint64_t seed, int max_iter) {
  const int n = points.rows;
  const int dim = points.cols;
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (n < k) throw std::invalid_argument("kmeans: fewer points than clusters");

  // Farthest-point init.
  std::vector<int> center_idx;
  center_idx.push_back(static_cast<int>(seed % static_cast<uint64_t>(n)));
  std::vector<double> min_d(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(center_idx.size()) < k) {
    const int last = center_idx.back();
    for (int i = 0; i < n; ++i) {
      min_d[i] = std::min(min_d[i], sq_dist(points.row(i), points.row(last), dim));
    }
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i) {
      if (min_d[i] > best_d) {
        best_d = min_d[i];
        best = i;
      }
    }
    center_idx.push_back(best);
  }

  Mat centers(k, dim);
  for (int c = 0; c < k; ++c) {
    for (int d = 0; d < dim; ++d) centers(c, d) = points(center_idx[c], d);
  }

  std::vector<int> labels(n, -1);
  std::vector<int> counts(k, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points.row(i), centers.row(0), dim);
      for (int c = 1; c < k; ++c) {
        const double dd = sq_dist(points.row(i), centers.row(c), dim);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::fill(centers.data.begin(), centers.data.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) {
      ++counts[labels[i]];
      for (int d = 0; d < dim; ++d) centers(labels[i], d) += points(i, d);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (int d = 0; d < dim; ++d) centers(c, d) /= counts[c];
      }
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Re-seed an empty cluster at the point farthest from its own center.
      int far_i = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[labels[i]] == 0) continue;
        const double dd = sq_dist(points.row(i), centers.row(labels[i]), dim);
        if (dd > far_d) {
          far_d = dd;
          far_i = i;
        }
      }
      for (int d = 0; d < dim; ++d) centers(c, d) = points(far_i, d);
    }
  }
  return labels;
}

}  // namespace

}  // namespace tamt::linalg

#include "tamt/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tamt::losses {

namespace {

constexpr double kClamp = 1e-7;

void check_one_hot(const Mat& z) {
  for (int i = 0; i < z.rows; ++i) {
    int ones = 0;
    for (int j = 0; j < z.cols; ++j) {
      const double x = z(i, j);
      if (x == 1.0) {
        ++ones;
      } else if (x != 0.0) {
        throw std::invalid_argument("deep_cluster_loss: Z is not one-hot");
      }
    }
    if (ones != 1) throw std::invalid_argument("deep_cluster_loss: Z is not one-hot");
  }
}

double frob_sq(const Mat& m) {
  double s = 0.0;
  for (double x : m.data) s += x * x;
  return s;
}

// A^T B for A (K x P), B (K x Q), accumulated cell-by-cell so the result
// is independent of thread count.
Mat gram(const Mat& a, const Mat& b) {
  Mat out(a.cols, b.cols);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < a.cols * b.cols; ++idx) {
    const int p = idx / b.cols;
    const int q = idx % b.cols;
    double s = 0.0;
    for (int k = 0; k < a.rows; ++k) s += a(k, p) * b(k, q);
    out(p, q) = s;
  }
  return out;
}

}  // namespace

double deep_cluster_loss(const Mat& v, const Mat& z) {
  if (v.rows != z.rows) throw std::invalid_argument("deep_cluster_loss: K mismatch");
  if (v.rows < 1) throw std::invalid_argument("deep_cluster_loss: empty input");
  check_one_hot(z);
  const Mat vtv = gram(v, v);
  const Mat vtz = gram(v, z);
  const Mat ztz = gram(z, z);
  return frob_sq(vtv) - 2.0 * frob_sq(vtz) + frob_sq(ztz);
}

double deep_cluster_loss_naive(const Mat& v, const Mat& z) {
  if (v.rows != z.rows) throw std::invalid_argument("deep_cluster_loss: K mismatch");
  if (v.rows < 1) throw std::invalid_argument("deep_cluster_loss: empty input");
  check_one_hot(z);
  const int k = v.rows;
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double vv = 0.0;
      for (int d = 0; d < v.cols; ++d) vv += v(i, d) * v(j, d);
      double zz = 0.0;
      for (int m = 0; m < z.cols; ++m) zz += z(i, m) * z(j, m);
      const double diff = vv - zz;
      s += diff * diff;
    }
  }
  return s;
}

double focal_loss(const Mat& p, const Mat& y, double alpha, double gamma) {
  if (!p.same_shape(y)) throw std::invalid_argument("focal_loss: shape mismatch");
  if (p.size() == 0) throw std::invalid_argument("focal_loss: empty input");
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double target = y.data[i];
    if (target != 0.0 && target != 1.0)
      throw std::invalid_argument("focal_loss: targets must be 0 or 1");
    const double pc = std::clamp(p.data[i], kClamp, 1.0 - kClamp);
    const double pt = (target == 1.0) ? pc : 1.0 - pc;
    const double at = (target == 1.0) ? alpha : 1.0 - alpha;
    sum += -at * std::pow(1.0 - pt, gamma) * std::log(pt);
  }
  return sum / static_cast<double>(p.size());
}

Mat focal_loss_grad(const Mat& p, const Mat& y, double alpha, double gamma) {
  if (!p.same_shape(y)) throw std::invalid_argument("focal_loss_grad: shape mismatch");
  Mat g(p.rows, p.cols);
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    const double target = y.data[i];
    const double pc = std::clamp(p.data[i], kClamp, 1.0 - kClamp);
    double d;
    if (target == 1.0) {
      // f = -alpha (1-p)^g log p
      d = -alpha * (-gamma * std::pow(1.0 - pc, gamma - 1.0) * std::log(pc) +
                    std::pow(1.0 - pc, gamma) / pc);
    } else {
      // f = -(1-alpha) p^g log(1-p)
      d = -(1.0 - alpha) * (gamma * std::pow(pc, gamma - 1.0) * std::log(1.0 - pc) -
                            std::pow(pc, gamma) / (1.0 - pc));
    }
    g.data[i] = d * inv_n;
  }
  return g;
}

LossHistory::LossHistory(int n_losses) : n_(n_losses) {
  if (n_losses < 1) throw std::invalid_argument("LossHistory: need at least one loss");
  alpha_smooth.assign(n_, 0.0);
}

void LossHistory::push_epoch(const std::vector<double>& epoch_means) {
  if (static_cast<int>(epoch_means.size()) != n_)
    throw std::invalid_argument("LossHistory: epoch size mismatch");
  for (double x : epoch_means) {
    if (!(x > 0.0)) throw std::invalid_argument("LossHistory: losses must be > 0");
  }
  buf_[0] = buf_[1];
  buf_[1] = epoch_means;
  if (recorded_ < 2) ++recorded_;
}

std::vector<double> magnitude_balance(const std::vector<double>& losses,
                                      LossHistory& state, double beta) {
  const int n = static_cast<int>(losses.size());
  if (n != state.n_losses())
    throw std::invalid_argument("magnitude_balance: loss count mismatch");
  double inv_sum = 0.0;
  for (double l : losses) {
    if (!(l > 0.0)) throw std::invalid_argument("magnitude_balance: nonpositive loss");
    inv_sum += 1.0 / l;
  }
  std::vector<double> raw(n);
  for (int i = 0; i < n; ++i) raw[i] = (1.0 / losses[i]) / inv_sum;

  if (!state.alpha_seeded) {
    state.alpha_smooth = raw;
    state.alpha_seeded = true;
  } else {
    for (int i = 0; i < n; ++i) {
      state.alpha_smooth[i] = beta * state.alpha_smooth[i] + (1.0 - beta) * raw[i];
    }
  }
  return state.alpha_smooth;
}

std::vector<double> dwa_weights(const LossHistory& history, double temperature) {
  const int n = history.n_losses();
  if (history.epochs_recorded() < 2) {
    return std::vector<double>(n, 1.0 / n);
  }
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = history.last()[i] / history.second_last()[i];

  double mx = r[0] / temperature;
  for (int i = 1; i < n; ++i) mx = std::max(mx, r[i] / temperature);
  double denom = 0.0;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = std::exp(r[i] / temperature - mx);
    denom += w[i];
  }
  for (int i = 0; i < n; ++i) w[i] /= denom;
  return w;
}

}  // namespace tamt::losses

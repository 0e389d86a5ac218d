#pragma once

#include <vector>

#include "tamt/mat.hpp"

namespace tamt::losses {

// ||V V^T - Z Z^T||_F^2 for embeddings V (K x D) and one-hot assignments
// Z (K x M), computed as ||V^T V||^2 - 2 ||V^T Z||^2 + ||Z^T Z||^2 in
// O(K (D^2 + M^2)). The naive form materializes the K x K difference and
// is kept as the serial reference.
double deep_cluster_loss(const Mat& v, const Mat& z);
double deep_cluster_loss_naive(const Mat& v, const Mat& z);

// Mean focal loss -alpha_t (1 - p_t)^gamma log(p_t) over all elements,
// with p clamped to [1e-7, 1 - 1e-7]. alpha weights the positive class,
// 1 - alpha the negative class.
double focal_loss(const Mat& p, const Mat& y, double alpha, double gamma);

// Elementwise d(mean focal loss)/dp, for finite-difference checks.
Mat focal_loss_grad(const Mat& p, const Mat& y, double alpha, double gamma);

// Rolling record of per-loss epoch means (last two epochs) plus the IIR
// state used by magnitude balancing.
class LossHistory {
 public:
  explicit LossHistory(int n_losses);

  void push_epoch(const std::vector<double>& epoch_means);

  int n_losses() const { return n_; }
  int epochs_recorded() const { return recorded_; }
  const std::vector<double>& last() const { return buf_[1]; }
  const std::vector<double>& second_last() const { return buf_[0]; }

  std::vector<double> alpha_smooth;
  bool alpha_seeded = false;

 private:
  int n_;
  int recorded_ = 0;
  std::vector<double> buf_[2];  // [0] = L_{t-2}, [1] = L_{t-1}
};

// Inverse-magnitude weights: raw alpha_i = (1/L_i) / sum_j (1/L_j), so each
// alpha_i * L_i equals the parallel-resistor value 1 / sum_j (1/L_j). The
// returned weights are IIR-smoothed through `state` with coefficient beta
// (first call seeds the filter with the raw weights).
std::vector<double> magnitude_balance(const std::vector<double>& losses,
                                      LossHistory& state, double beta);

// Dynamic weight averaging: w = Softmax(r / temperature) with
// r_i = L_{t-1,i} / L_{t-2,i}. Uniform until two epochs are recorded.
std::vector<double> dwa_weights(const LossHistory& history, double temperature);

}  // namespace tamt::losses

// Benchmark: OpenMP kernels against their serial reference paths.
//
//   cqt        downsample-structured forward vs direct per-bin evaluation
//   associate  fused O(K D^2) association vs the O(K^2 D) attention order
//   dcl        expanded deep-clustering loss vs the naive K x K form
//
// Each section reports timings at 1 thread and at the full thread count,
// plus the agreement between the two routes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tamt/cqt.hpp"
#include "tamt/losses.hpp"
#include "tamt/memory.hpp"
#include "tamt/rng.hpp"

using namespace tamt;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int hardware_threads() {
#ifdef _OPENMP
  static const int n = omp_get_max_threads();
  return n;
#else
  return 1;
#endif
}

double rel_err(const CMat& a, const CMat& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(b.data[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

void bench_cqt(double clip_seconds) {
  GridConfig grid;
  std::vector<double> audio(static_cast<size_t>(clip_seconds * grid.sample_rate));
  Rng rng(1);
  for (size_t i = 0; i < audio.size(); ++i) {
    const double t = static_cast<double>(i) / grid.sample_rate;
    audio[i] = 0.3 * std::sin(2 * 3.14159265358979 * 220.0 * t) +
               0.2 * std::sin(2 * 3.14159265358979 * 555.0 * t) +
               0.05 * rng.uniform(-1, 1);
  }
  const auto bank = cqt::CqtKernelBank::build(grid);

  set_threads(1);
  auto t0 = Clock::now();
  const auto fast1 = cqt::cqt_forward(audio, bank);
  const double fast_serial = seconds_since(t0);

  set_threads(hardware_threads());
  t0 = Clock::now();
  const auto fastn = cqt::cqt_forward(audio, bank);
  const double fast_parallel = seconds_since(t0);

  t0 = Clock::now();
  const auto direct = cqt::cqt_direct(audio, grid);
  const double direct_serial = seconds_since(t0);

  std::printf("cqt        %5.1f s clip | direct %8.3f s | fast x1 %7.3f s | fast x%d %7.3f s | rel %.2e\n",
              clip_seconds, direct_serial, fast_serial, hardware_threads(), fast_parallel,
              rel_err(fastn.data, direct.data));
}

void bench_associate(int k) {
  Rng rng(2);
  Mat v(k, 16);
  for (double& x : v.data) x = rng.uniform(-1, 1);
  std::vector<double> y(k);
  for (double& w : y) w = rng.uniform(0.0, 1.0);

  set_threads(1);
  auto t0 = Clock::now();
  const Mat fused1 = memory::associate_once(v, y);
  const double fused_serial = seconds_since(t0);

  set_threads(hardware_threads());
  t0 = Clock::now();
  const Mat fusedn = memory::associate_once(v, y);
  const double fused_parallel = seconds_since(t0);

  // The quadratic reference is O(K^2 D); keep its K low enough to finish.
  const int kq = std::min(k, 6000);
  Mat vq(kq, 16);
  std::vector<double> yq(kq);
  for (int i = 0; i < kq; ++i) {
    yq[i] = y[i];
    for (int d = 0; d < 16; ++d) vq(i, d) = v(i, d);
  }
  t0 = Clock::now();
  const Mat quad = memory::associate_attention_order(vq, yq);
  const double quad_serial = seconds_since(t0);

  const Mat fused_small = memory::associate_once(vq, yq);
  double err = 0.0;
  for (size_t i = 0; i < quad.size(); ++i)
    err = std::max(err, std::fabs(quad.data[i] - fused_small.data[i]));

  std::printf("associate  K=%-7d      | attn-order(K=%d) %8.3f s | fused x1 %7.3f s | fused x%d %7.3f s | max err %.2e\n",
              k, kq, quad_serial, fused_serial, hardware_threads(), fused_parallel, err);
}

void bench_dcl(int k) {
  Rng rng(3);
  Mat v(k, 16), z(k, 4);
  for (double& x : v.data) x = rng.uniform(-1, 1);
  for (int i = 0; i < k; ++i) z(i, static_cast<int>(rng.uniform_int(0, 3))) = 1.0;

  set_threads(1);
  auto t0 = Clock::now();
  const double fast1 = losses::deep_cluster_loss(v, z);
  const double fast_serial = seconds_since(t0);

  set_threads(hardware_threads());
  t0 = Clock::now();
  const double fastn = losses::deep_cluster_loss(v, z);
  const double fast_parallel = seconds_since(t0);
  (void)fastn;

  const int kq = std::min(k, 8000);
  Mat vq(kq, 16), zq(kq, 4);
  for (int i = 0; i < kq; ++i) {
    for (int d = 0; d < 16; ++d) vq(i, d) = v(i, d);
    for (int m = 0; m < 4; ++m) zq(i, m) = z(i, m);
  }
  t0 = Clock::now();
  const double naive = losses::deep_cluster_loss_naive(vq, zq);
  const double naive_serial = seconds_since(t0);
  const double fast_small = losses::deep_cluster_loss(vq, zq);

  std::printf("dcl        K=%-7d      | naive(K=%d) %8.3f s      | expanded x1 %5.3f s | x%d %7.3f s | rel %.2e\n",
              k, kq, naive_serial, fast_serial, hardware_threads(), fast_parallel,
              std::fabs(naive - fast_small) / naive);
}

}  // namespace

int main(int argc, char** argv) {
  double clip_seconds = 4.0;
  int k = 50000;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seconds" && i + 1 < argc) clip_seconds = std::stod(argv[++i]);
    else if (arg == "--k" && i + 1 < argc) k = std::stoi(argv[++i]);
    else {
      std::printf("usage: tamt-bench [--seconds S] [--k K]\n");
      return 1;
    }
  }
  std::printf("threads available: %d\n", hardware_threads());
  bench_cqt(clip_seconds);
  bench_associate(k);
  bench_dcl(k);
  return 0;
}

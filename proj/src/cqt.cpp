#include "tamt/cqt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tamt::cqt {

namespace {

constexpr double kTwoPi = 6.283185307179586;

double bessel_i0(double x) {
  // Power series; converges fast for the Kaiser betas used here.
  double sum = 1.0, term = 1.0;
  const double x2 = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= x2 / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Kaiser-windowed sinc lowpass for decimation by two: passband flat to
// ~0.19 fs, stopband from ~0.30 fs, which protects everything the deeper
// octaves analyze (at most 0.186 fs after the downsample).
std::vector<double> design_halfband(int n_taps, double beta, double cutoff) {
  std::vector<double> h(n_taps);
  const double m = (n_taps - 1) / 2.0;
  const double denom = bessel_i0(beta);
  for (int k = 0; k < n_taps; ++k) {
    const double t = k - m;
    const double sinc = t == 0.0 ? 2.0 * cutoff
                                 : std::sin(kTwoPi * cutoff * t) / (3.141592653589793 * t);
    const double r = t / m;
    const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
    h[k] = sinc * w;
  }
  double g = 0.0;
  for (double x : h) g += x;
  for (double& x : h) x /= g;
  return h;
}

std::vector<double> decimate2(const std::vector<double>& x, const std::vector<double>& h) {
  const int half = static_cast<int>(h.size()) / 2;
  const size_t out_len = x.size() / 2;
  std::vector<double> y(out_len, 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t m = 0; m < static_cast<int64_t>(out_len); ++m) {
    double acc = 0.0;
    const int64_t base = 2 * m - half;
    for (size_t k = 0; k < h.size(); ++k) {
      const int64_t idx = base + static_cast<int64_t>(k);
      if (idx >= 0 && idx < static_cast<int64_t>(x.size())) acc += h[k] * x[idx];
    }
    y[m] = acc;
  }
  return y;
}

// Windowed kernel dot product centered at sample `center`, zero-padded.
std::complex<double> eval_kernel(const std::vector<double>& x,
                                 const std::vector<std::complex<double>>& taps,
                                 int64_t center) {
  const int n = static_cast<int>(taps.size());
  const int64_t start = center - (n - 1) / 2;
  int64_t lo = std::max<int64_t>(0, -start);
  int64_t hi = std::min<int64_t>(n, static_cast<int64_t>(x.size()) - start);
  std::complex<double> acc{0.0, 0.0};
  for (int64_t k = lo; k < hi; ++k) acc += x[start + k] * taps[k];
  return acc;
}

std::vector<std::complex<double>> make_kernel(double norm_freq, double q) {
  // Odd length keeps the window, the exponential's phase reference, and
  // the sample grid symmetric about one center sample; an even kernel
  // would sit half a sample off and tilt the phase of off-bin responses.
  int n = std::max(3, static_cast<int>(std::lround(q / norm_freq)));
  n |= 1;
  std::vector<std::complex<double>> taps(n);
  double wsum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = 0.5 * (1.0 - std::cos(kTwoPi * k / (n - 1)));
    const double arg = -kTwoPi * norm_freq * (k - (n - 1) / 2.0);
    taps[k] = std::polar(w, arg);
    wsum += w;
  }
  for (auto& t : taps) t /= wsum;
  return taps;
}

}  // namespace

CqtKernelBank CqtKernelBank::build(const GridConfig& grid) {
  grid.validate();
  CqtKernelBank bank;
  bank.grid = grid;
  bank.q = 1.0 / (std::exp2(1.0 / (12.0 * grid.bins_per_semitone)) - 1.0);
  bank.lowpass = design_halfband(95, 9.0, 0.24);

  const int bins_per_octave = 12 * grid.bins_per_semitone;
  const int top_row0 = grid.f_bins - bins_per_octave;
  size_t longest = 0;
  for (int j = 0; j < bins_per_octave; ++j) {
    const double nu = grid.bin_freq(top_row0 + j) / grid.sample_rate;
    bank.kernels.push_back({make_kernel(nu, bank.q)});
    longest = std::max(longest, bank.kernels.back().taps.size());
  }
  // Deepest octave sees the longest effective support at the full rate.
  bank.min_samples = longest << (grid.n_octaves_cqt - 1);
  return bank;
}

CqtSpectrogram cqt_forward(const std::vector<double>& audio, const CqtKernelBank& bank) {
  const GridConfig& grid = bank.grid;
  if (audio.size() < bank.min_samples)
    throw std::invalid_argument("cqt_forward: audio too short");

  const int frames = grid.num_frames(audio.size());
  const int bins_per_octave = 12 * grid.bins_per_semitone;
  const int n_oct = grid.n_octaves_cqt;

  // Progressive decimation chain; level o is audio decimated o times.
  std::vector<std::vector<double>> levels;
  levels.reserve(n_oct);
  levels.push_back(audio);
  for (int o = 1; o < n_oct; ++o) levels.push_back(decimate2(levels.back(), bank.lowpass));

  CqtSpectrogram out;
  out.grid = grid;
  out.data = CMat(grid.f_bins, frames);

#pragma omp parallel for schedule(dynamic)
  for (int row = 0; row < grid.f_bins; ++row) {
    const int oct = (grid.f_bins - 1 - row) / bins_per_octave;  // 0 = top octave
    const int slot = row - (grid.f_bins - bins_per_octave * (oct + 1));
    const auto& taps = bank.kernels[slot].taps;
    const auto& x = levels[oct];
    const int shift = oct;  // frame centers are exactly representable: hop = 256
    for (int t = 0; t < frames; ++t) {
      const int64_t center_full = static_cast<int64_t>(t) * grid.hop + grid.hop / 2;
      out.data(row, t) = eval_kernel(x, taps, center_full >> shift);
    }
  }
  return out;
}

CqtSpectrogram cqt_forward(const std::vector<double>& audio, const GridConfig& grid) {
  return cqt_forward(audio, CqtKernelBank::build(grid));
}

CqtSpectrogram cqt_direct(const std::vector<double>& audio, const GridConfig& grid) {
  grid.validate();
  const double q = 1.0 / (std::exp2(1.0 / (12.0 * grid.bins_per_semitone)) - 1.0);
  const double lowest_nu = grid.bin_freq(0) / grid.sample_rate;
  const size_t longest = static_cast<size_t>(std::lround(q / lowest_nu));
  if (audio.size() < longest) throw std::invalid_argument("cqt_direct: audio too short");

  const int frames = grid.num_frames(audio.size());
  CqtSpectrogram out;
  out.grid = grid;
  out.data = CMat(grid.f_bins, frames);

  for (int row = 0; row < grid.f_bins; ++row) {
    const auto taps = make_kernel(grid.bin_freq(row) / grid.sample_rate, q);
    for (int t = 0; t < frames; ++t) {
      const int64_t center = static_cast<int64_t>(t) * grid.hop + grid.hop / 2;
      out.data(row, t) = eval_kernel(audio, taps, center);
    }
  }
  return out;
}

CqtSpectrogram energy_normalize(const CqtSpectrogram& q) {
  const int frames = q.n_frames();
  if (frames < 2)
    throw std::invalid_argument("energy_normalize: need at least two frames");

  std::vector<double> energy(frames, 0.0);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < frames; ++t) {
    double e = 0.0;
    for (int i = 0; i < q.n_bins(); ++i) e += std::norm(q.data(i, t));
    energy[t] = e;
  }
  double mean = 0.0;
  for (double e : energy) mean += e;
  mean /= frames;
  double var = 0.0;
  for (double e : energy) var += (e - mean) * (e - mean);
  const double sigma = std::sqrt(var / (frames - 1));

  CqtSpectrogram out = q;
  if (sigma < 1e-12) return out;  // silence guard
  const double scale = 1.0 / std::sqrt(sigma);
  for (auto& z : out.data.data) z *= scale;
  return out;
}

int harmonic_row_shift(double harmonic, const GridConfig& grid) {
  static const double allowed[] = {0.5, 1, 2, 3, 4, 5, 6, 7, 8};
  bool ok = false;
  for (double a : allowed) ok = ok || harmonic == a;
  if (!ok) throw std::invalid_argument("harmonic_stack: unknown harmonic");
  return static_cast<int>(
      std::lround(12.0 * grid.bins_per_semitone * std::log2(harmonic)));
}

std::vector<CMat> harmonic_stack(const CqtSpectrogram& q_norm,
                                 const std::vector<double>& harmonics,
                                 const GridConfig& grid) {
  const int note_rows = grid.bins_per_semitone * grid.n_pitches;  // 252
  const int frames = q_norm.n_frames();
  std::vector<CMat> channels;
  channels.reserve(harmonics.size());
  for (double h : harmonics) {
    const int shift = harmonic_row_shift(h, grid);
    CMat ch(note_rows, frames);
    for (int r = 0; r < note_rows; ++r) {
      const int src = r + shift;
      if (src < 0 || src >= q_norm.n_bins()) continue;
      for (int t = 0; t < frames; ++t) ch(r, t) = q_norm.data(src, t);
    }
    channels.push_back(std::move(ch));
  }
  return channels;
}

}  // namespace tamt::cqt

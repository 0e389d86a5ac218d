#pragma once

#include <complex>
#include <vector>

#include "tamt/types.hpp"

namespace tamt::cqt {

// Constant-Q analysis bank. Only the top octave's 36 kernels are built;
// lower octaves reuse them on progressively decimated audio. Kernels are
// Hann-windowed complex exponentials of length round(Q * fs / f), unit DC
// window gain, phase referenced to the kernel center.
struct CqtKernelBank {
  struct Kernel {
    std::vector<std::complex<double>> taps;
  };
  std::vector<Kernel> kernels;   // 36 entries, lowest top-octave bin first
  std::vector<double> lowpass;   // linear-phase decimation FIR, odd length
  double q = 0.0;                // 1 / (2^(1/36) - 1)
  size_t min_samples = 0;        // shortest audio forward() accepts
  GridConfig grid;

  static CqtKernelBank build(const GridConfig& grid);
};

// Downsample-structured CQT: octave o is analyzed on audio decimated o
// times with the shared kernels, evaluated directly on the common frame
// grid (hop 256 full-rate samples, T = floor(len / 256)). Row 0 is the
// lowest bin; row 3k+1 centers MIDI pitch 24+k.
CqtSpectrogram cqt_forward(const std::vector<double>& audio, const CqtKernelBank& bank);
CqtSpectrogram cqt_forward(const std::vector<double>& audio, const GridConfig& grid);

// Serial reference: every bin evaluated at the full sample rate with its
// own kernel, no decimation. Kept for tests and the benchmark.
CqtSpectrogram cqt_direct(const std::vector<double>& audio, const GridConfig& grid);

// Scales Q so the sample standard deviation of per-frame energies is one:
// E_t = sum_i |q_it|^2, sigma = std(E), Q_norm = Q / sqrt(sigma). Phase is
// untouched. Near-silent input (sigma < 1e-12) passes through unchanged.
CqtSpectrogram energy_normalize(const CqtSpectrogram& q);

// Channel h is Q shifted down by round(36 log2 h) rows and cropped to the
// 252 note-range rows; vacated rows are zero. Allowed harmonics:
// 0.5 and 1..8.
std::vector<CMat> harmonic_stack(const CqtSpectrogram& q_norm,
                                 const std::vector<double>& harmonics,
                                 const GridConfig& grid);

int harmonic_row_shift(double harmonic, const GridConfig& grid);

}  // namespace tamt::cqt

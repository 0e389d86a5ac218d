#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tamt/types.hpp"

namespace tamt::synth {

// Additive-synthesis voice: 8 harmonic amplitudes (normalized so
// sum a_h^2 = 1), an ADSR envelope, and vibrato/tremolo expression.
// Tremolo shares the vibrato rate.
struct Timbre {
  std::array<double, 8> harmonic_amps = {1, 0, 0, 0, 0, 0, 0, 0};
  double attack = 0.01;         // seconds
  double decay = 0.1;           // seconds
  double sustain_level = 0.8;   // [0, 1]
  double release = 0.05;        // seconds
  double vibrato_rate = 5.0;    // Hz
  double vibrato_depth = 0.0;   // cents, <= 50
  double tremolo_depth = 0.0;   // ratio [0, 1)

  void validate() const;
  Timbre normalized() const;  // harmonic amplitudes scaled to unit energy
};

// Per-note microtonal drift: a bounded random walk over pitch, one step
// per control interval. max_drift_cents = 0 disables it.
struct RenderOptions {
  double max_drift_cents = 20.0;
  double drift_step_cents = 1.0;
  int control_interval = 256;  // samples between drift/vibrato updates
};

// Renders a score with one timbre. n_samples = 0 sizes the buffer to the
// last note end plus release. Harmonics that would cross Nyquist are
// dropped per note. Output peak is at most 0.9 (scaled down only).
std::vector<double> render_track(const Score& score, const Timbre& timbre,
                                 const GridConfig& grid, uint64_t seed,
                                 size_t n_samples = 0,
                                 const RenderOptions& opts = {});

// Elementwise sum (shorter tracks zero-padded); optional white Gaussian
// noise at the requested SNR versus the mixture; peak limited to 0.99.
std::vector<double> mix_tracks(const std::vector<std::vector<double>>& tracks,
                               std::optional<double> snr_db = std::nullopt,
                               uint64_t seed = 0);

// Frame-center rasterization: notes[n, t] = 1 when frame t's center lies
// in [onset, onset + duration); onsets mark each event's first such frame.
// Overlapping same-pitch events union.
Pianoroll score_to_pianoroll(const Score& score, const GridConfig& grid,
                             int total_frames);

// Nine named timbre archetypes with distinct harmonic profiles, plus a
// seeded variant generator for "similar instrument" pairs.
struct NamedTimbre {
  std::string name;
  Timbre timbre;
};

const std::vector<NamedTimbre>& timbre_bank();
Timbre make_variant(const Timbre& base, uint64_t seed);

}  // namespace tamt::synth

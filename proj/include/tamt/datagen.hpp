#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "tamt/types.hpp"

namespace tamt::datagen {

// Pitch arrangement: full-range shuffle cycles with a forward-looking
// candidate pool, plus chord-tone insertion at the harmonically colliding
// intervals (M3, P4, P5, P8).
struct PitchGenConfig {
  int pitch_low = 48;    // C3
  int pitch_high = 83;   // B5
  int pool_size = 8;
  double p_nearest = 0.7;
  double p_chord = 0.3;
  std::vector<int> chord_intervals = {4, 5, 7, 12};

  void validate() const;
};

// Markov states for note-to-note timing.
enum class TimingState { kSequential = 0, kOverlap = 1, kRest = 2 };

struct TimingConfig {
  double bpm = 90.0;
  double duration_sigma_ratio = 0.3;
  double offset_sigma = 0.05;  // seconds
  // Row-stochastic transitions over {sequential, overlap, rest}.
  std::array<std::array<double, 3>, 3> markov = {{{0.6, 0.2, 0.2},
                                                  {0.6, 0.2, 0.2},
                                                  {0.6, 0.2, 0.2}}};

  void validate() const;
};

// Cycle-shuffled pitch walk: each full cycle contains every in-range pitch
// exactly once; within a cycle the next pitch comes from the first
// pool_size remaining entries, nearest-to-previous with probability
// p_nearest (ties to the lower pitch), else uniform.
std::vector<int> generate_pitch_sequence(const PitchGenConfig& cfg, int count,
                                         uint64_t seed);

// With probability p_chord per event, appends one simultaneous event at
// pitch + interval (uniform over chord_intervals); skipped when the new
// pitch leaves [pitch_low, pitch_high]. Added events copy every field of
// their source except pitch.
Score insert_chord_tones(const Score& events, const PitchGenConfig& cfg, uint64_t seed);

struct Timing {
  std::vector<double> onsets;     // non-decreasing, >= 0
  std::vector<double> durations;  // truncated Gaussian around the beat
};

Timing generate_timing(int n, const TimingConfig& cfg, uint64_t seed);

// Pitch walk + Markov timing + chord insertion; per-note detune
// ~ U(-20, 20) cents and velocity ~ U(0.5, 1). Single track.
Score generate_score(const PitchGenConfig& pitch_cfg, const TimingConfig& timing_cfg,
                     int n_notes, uint64_t seed);

// One element of an M-way mix: (instrument index, song index).
using MixTuple = std::vector<std::pair<int, int>>;

// All M-way mixes of N instruments with n songs each: n^M * C(N, M)
// tuples, instruments strictly ascending within a tuple.
std::vector<MixTuple> enumerate_mixes(int n_instruments, int songs_per, int m);

}  // namespace tamt::datagen

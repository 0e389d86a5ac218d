#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "tamt/mat.hpp"

namespace tamt {

// Analysis grid shared by every stage: 22.05 kHz audio, 256-sample frames,
// 84 semitone pitches spanning C1..B7, and an 8-octave CQT at 3 bins per
// semitone (288 rows). Row 3k+1 is centered on MIDI pitch 24+k, so row 0
// sits a third of a semitone below C1.
struct GridConfig {
  double sample_rate = 22050.0;
  int hop = 256;
  int n_pitches = 84;
  int bins_per_semitone = 3;
  int n_octaves_cqt = 8;
  int f_bins = 288;
  double f_min = 32.70319566257483;  // C1

  static constexpr int midi_base = 24;  // pitch index 0 <-> MIDI 24 (C1)

  void validate() const {
    if (f_bins != n_octaves_cqt * 12 * bins_per_semitone)
      throw std::invalid_argument("GridConfig: f_bins != octaves * 12 * bins_per_semitone");
    if (n_pitches != 7 * 12)
      throw std::invalid_argument("GridConfig: n_pitches must be 84 (C1..B7)");
    if (hop <= 0 || sample_rate <= 0)
      throw std::invalid_argument("GridConfig: hop and sample_rate must be positive");
  }

  double pitch_freq(int midi) const {
    return f_min * std::exp2((midi - midi_base) / 12.0);
  }

  // CQT row index of a pitch's fundamental (center bin of its semitone).
  int pitch_row(int pitch_index) const {
    return bins_per_semitone * pitch_index + bins_per_semitone / 2;
  }

  double bin_freq(int row) const {
    const int center = bins_per_semitone / 2;
    return f_min * std::exp2((row - center) / (12.0 * bins_per_semitone));
  }

  // Frame t covers samples [t*hop, (t+1)*hop); its center in seconds.
  double frame_time(int t) const { return (t + 0.5) * hop / sample_rate; }

  int num_frames(size_t n_samples) const { return static_cast<int>(n_samples / hop); }
};

struct NoteEvent {
  double onset = 0.0;     // seconds, >= 0
  double duration = 0.0;  // seconds, > 0
  int pitch = 60;         // MIDI, 24..107
  double detune = 0.0;    // cents
  double velocity = 1.0;  // [0, 1]
  int track = 0;

  void validate() const {
    if (!(duration > 0.0)) throw std::invalid_argument("NoteEvent: duration must be > 0");
    if (!(onset >= 0.0) || !std::isfinite(onset))
      throw std::invalid_argument("NoteEvent: onset must be finite and >= 0");
    if (pitch < 24 || pitch > 107)
      throw std::invalid_argument("NoteEvent: pitch outside C1..B7 (MIDI 24..107)");
  }
};

using Score = std::vector<NoteEvent>;

// Pitch-by-time activation matrices in [0, 1]. For ground-truth rolls the
// onset matrix is nonzero only where the note matrix is.
struct Pianoroll {
  Mat notes;   // N x T
  Mat onsets;  // N x T
  GridConfig grid;

  Pianoroll() = default;
  Pianoroll(int n, int t, GridConfig g = {})
      : notes(n, t), onsets(n, t), grid(g) {}

  int n_pitches() const { return notes.rows; }
  int n_frames() const { return notes.cols; }
};

struct CqtSpectrogram {
  CMat data;  // F x T, row 0 = lowest frequency
  GridConfig grid;

  int n_bins() const { return data.rows; }
  int n_frames() const { return data.cols; }
};

// Per-bin embedding vectors over the pitch/time grid. The vector stored at
// (n, t) is direction * note_probability: direction carries timbre identity,
// the norm carries the note activation.
struct EmbeddingField {
  int dim = 16;
  int n_pitches = 0;
  int frames = 0;
  std::vector<double> data;  // layout: ((n * frames) + t) * dim + d

  EmbeddingField() = default;
  EmbeddingField(int d, int n, int t)
      : dim(d), n_pitches(n), frames(t),
        data(static_cast<size_t>(d) * n * t, 0.0) {}

  std::span<double> at(int n, int t) {
    return {data.data() + (static_cast<size_t>(n) * frames + t) * dim,
            static_cast<size_t>(dim)};
  }
  std::span<const double> at(int n, int t) const {
    return {data.data() + (static_cast<size_t>(n) * frames + t) * dim,
            static_cast<size_t>(dim)};
  }
};

}  // namespace tamt

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tamt/cqt.hpp"
#include "tamt/types.hpp"

namespace tamt::sep {

// Harmonic-salience transcription: a fixed, training-free stand-in for a
// note-probability predictor. Whitened CQT magnitudes are summed over
// weighted harmonic positions (3-bin max pooling per semitone), octave
// ghosts are suppressed by subtracting a fraction of the sub-octave
// salience (half-wave rectified), and the result is peak-normalized.
struct SalienceOptions {
  double whitening_exponent = 0.4;
  // Overtone-ghost subtraction: a note at pitch p leaks salience to the
  // rows of its harmonics h = 2..8 (p + 12, 19, 24, 28, 31, 34, 36
  // semitones); the ghost row loses this fraction of the parent salience.
  std::array<double, 7> ghost_suppression = {0.72, 0.51, 0.40, 0.0, 0.0, 0.0, 0.0};
  // Each harmonic counts only up to this multiple of the fundamental's own
  // (whitened) energy, which silences undertone ghosts: a row whose only
  // evidence is some real note's harmonic has no fundamental of its own.
  double harmonic_cap = 1.5;
  // Rows that are not a pitch-local maximum within +-1 semitone keep this
  // fraction of their salience (mainlobe leakage of neighbors).
  double lateral_keep = 0.25;
  // Onset detection lag in frames; attacks are smeared over several frames
  // by the analysis kernels, so single-frame differences are too weak.
  int onset_lag = 6;
  std::array<double, 8> harmonic_weights = {1.0, 0.8, 0.6, 0.45, 0.35, 0.25, 0.18, 0.12};
};

Pianoroll salience_transcribe(const CqtSpectrogram& q_norm, const GridConfig& grid,
                              const SalienceOptions& opts = {});

// Per-bin auditory encoding: where Y_n > 0 the direction is the unit
// 16-feature harmonic profile (8 max-pooled harmonic magnitudes plus their
// local log-tilts) and the stored vector is direction * Y_n. dim != 16
// zero-pads or truncates the profile.
EmbeddingField bin_embeddings(const CqtSpectrogram& q_norm, const Pianoroll& y,
                              const GridConfig& grid, int dim = 16);

// Cosine-affinity spectral clustering: A = max(0, <v_i, v_j>), symmetric
// normalized Laplacian, k smallest eigenvectors, row-normalized, k-means
// with deterministic farthest-point init.
std::vector<int> spectral_cluster(const Mat& unit_vectors, int k, uint64_t seed);

struct SeparationResult {
  std::vector<Pianoroll> sources;
  std::vector<Score> source_events;  // per source, empty for the frame path
  std::vector<int> labels;           // per selected bin or per note event
  std::vector<int> permutation;      // filled when matched against references
};

struct FrameSeparateOptions {
  double threshold = 0.5;
  bool associate = true;   // memory sharpening before clustering
  int max_cluster_bins = 800;  // landmark cap; extra bins join by cosine
  uint64_t seed = 0;
};

SeparationResult frame_separate(const EmbeddingField& field, const Pianoroll& y,
                                int n_sources, const FrameSeparateOptions& opts = {});

struct NoteExtractOptions {
  double on_thresh = 0.5;
  double off_thresh = 0.3;
  int min_frames = 3;
  // Onset peaks sit at the end of the attack ramp; the event start walks
  // back over active frames by at most this many frames.
  int backtrack = 6;
  // Release-knee cut: once the level is below on_thresh and has fallen to
  // less than release_ratio of its value release_lag frames ago, the event
  // ends. Catches analysis ring-out past the true note end before the
  // level reaches off_thresh. release_ratio = 0 disables.
  double release_ratio = 0.8;
  int release_lag = 4;
};

// Events seed at onset-roll local maxima >= on_thresh and extend forward
// while the note roll stays >= off_thresh; shorter-than-min events drop,
// same-pitch events separated by < 2 frames merge.
Score extract_note_events(const Pianoroll& y, const NoteExtractOptions& opts = {});

// Activation-weighted mean of the event's frame directions, unit length.
std::vector<double> note_embedding(const NoteEvent& event, const EmbeddingField& field,
                                   const Mat& y_n, const GridConfig& grid);

struct NoteSeparateOptions {
  NoteExtractOptions extract;
  bool associate = true;  // memory sharpening of bin embeddings before pooling
  uint64_t seed = 0;
};

SeparationResult note_separate(const Pianoroll& y, const EmbeddingField& field,
                               int n_sources, const NoteSeparateOptions& opts = {});

}  // namespace tamt::sep

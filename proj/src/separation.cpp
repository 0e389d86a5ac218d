#include "tamt/separation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tamt/linalg.hpp"
#include "tamt/memory.hpp"
#include "tamt/synth.hpp"

namespace tamt::sep {

namespace {

// Max over the 3 bins of one semitone at `row_center` (center +- 1).
double pool3(const Mat& w, int row_center, int t) {
  double best = 0.0;
  for (int r = row_center - 1; r <= row_center + 1; ++r) {
    if (r < 0 || r >= w.rows) continue;
    best = std::max(best, w(r, t));
  }
  return best;
}

Mat whitened_magnitude(const CqtSpectrogram& q, double exponent) {
  Mat w(q.n_bins(), q.n_frames());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < q.n_bins(); ++r) {
    for (int t = 0; t < q.n_frames(); ++t) {
      w(r, t) = std::pow(std::abs(q.data(r, t)), exponent);
    }
  }
  return w;
}

void unit_normalize(std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  if (n <= 0.0) return;
  const double s = 1.0 / std::sqrt(n);
  for (double& x : v) x *= s;
}

// 16-feature harmonic profile at (pitch n, frame t): max-pooled magnitudes
// of harmonics 1..8 normalized by their peak, then local log-tilts. The
// tilt logs are floored at 2% of the peak so noise-floor harmonics give
// stable tilts instead of tracking whatever leaked into those rows.
void harmonic_profile(const Mat& mag, const GridConfig& grid, int n, int t,
                      std::vector<double>& out) {
  double m[8];
  const int base = grid.pitch_row(n);
  for (int h = 1; h <= 8; ++h) {
    const int shift = static_cast<int>(
        std::lround(12.0 * grid.bins_per_semitone * std::log2(static_cast<double>(h))));
    const int row = base + shift;
    m[h - 1] = (row >= 0 && row < mag.rows) ? pool3(mag, row, t) : 0.0;
  }
  double peak = 0.0;
  for (double x : m) peak = std::max(peak, x);
  out.assign(16, 0.0);
  if (peak <= 0.0) return;
  const double floor = 0.02 * peak;
  for (int h = 0; h < 8; ++h) out[h] = m[h] / peak;
  for (int h = 0; h < 8; ++h) {
    const int next = std::min(h + 1, 7);
    const int cur = next == h ? h - 1 : h;  // last tilt reuses the 7->8 slope
    const double tilt =
        std::log(std::max(m[next], floor) / std::max(m[cur], floor));
    out[8 + h] = 0.35 * std::clamp(tilt, -4.0, 4.0);
  }
  unit_normalize(out);
}

// One association pass over every active bin, writing the sharpened
// vectors back into a copy of the field.
EmbeddingField associate_field(const EmbeddingField& field, const Pianoroll& y) {
  struct Bin {
    int n, t;
  };
  std::vector<Bin> bins;
  for (int n = 0; n < y.n_pitches(); ++n) {
    for (int t = 0; t < y.n_frames(); ++t) {
      if (y.notes(n, t) > 0.0) bins.push_back({n, t});
    }
  }
  if (bins.empty()) return field;
  Mat v(static_cast<int>(bins.size()), field.dim);
  std::vector<double> weights(bins.size());
  for (size_t i = 0; i < bins.size(); ++i) {
    auto src = field.at(bins[i].n, bins[i].t);
    for (int d = 0; d < field.dim; ++d) v(static_cast<int>(i), d) = src[d];
    weights[i] = y.notes(bins[i].n, bins[i].t);
  }
  const Mat sharpened = memory::associate_once(v, weights);
  EmbeddingField out = field;
  for (size_t i = 0; i < bins.size(); ++i) {
    auto dst = out.at(bins[i].n, bins[i].t);
    for (int d = 0; d < field.dim; ++d) dst[d] = sharpened(static_cast<int>(i), d);
  }
  return out;
}

Mat row_normalized(const Mat& v) {
  Mat out = v;
  for (int i = 0; i < out.rows; ++i) {
    double n = 0.0;
    for (int d = 0; d < out.cols; ++d) n += out(i, d) * out(i, d);
    if (n <= 0.0) continue;
    const double s = 1.0 / std::sqrt(n);
    for (int d = 0; d < out.cols; ++d) out(i, d) *= s;
  }
  return out;
}

}  // namespace

Pianoroll salience_transcribe(const CqtSpectrogram& q_norm, const GridConfig& grid,
                              const SalienceOptions& opts) {
  const int frames = q_norm.n_frames();
  const Mat white = whitened_magnitude(q_norm, opts.whitening_exponent);

  Mat raw(grid.n_pitches, frames);
  Mat odd_raw(grid.n_pitches, frames);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < grid.n_pitches; ++n) {
    const int base = grid.pitch_row(n);
    for (int t = 0; t < frames; ++t) {
      const double fund = pool3(white, base, t);
      const double cap = opts.harmonic_cap * fund;
      double s = opts.harmonic_weights[0] * fund;
      double odd = opts.harmonic_weights[0] * fund;
      for (int h = 2; h <= 8; ++h) {
        const int shift = static_cast<int>(std::lround(
            12.0 * grid.bins_per_semitone * std::log2(static_cast<double>(h))));
        const int row = base + shift;
        if (row >= white.rows) break;
        const double contrib =
            opts.harmonic_weights[h - 1] * std::min(pool3(white, row, t), cap);
        s += contrib;
        // Odd harmonics cannot carry energy from a note an octave up, so
        // they measure the note's own presence for ghost subtraction.
        if (h % 2 == 1) odd += contrib;
      }
      raw(n, t) = s;
      odd_raw(n, t) = odd;
    }
  }

  // Overtone-ghost suppression, then lateral suppression of rows beaten
  // by a neighboring semitone (mainlobe leakage).
  Mat clean(grid.n_pitches, frames);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < grid.n_pitches; ++n) {
    for (int t = 0; t < frames; ++t) {
      double v = raw(n, t);
      for (int h = 2; h <= 8; ++h) {
        const int interval =
            static_cast<int>(std::lround(12.0 * std::log2(static_cast<double>(h))));
        if (n >= interval) v -= opts.ghost_suppression[h - 2] * odd_raw(n - interval, t);
      }
      clean(n, t) = std::max(0.0, v);
    }
  }

  Pianoroll roll(grid.n_pitches, frames, grid);
  double peak = 0.0;
  for (int n = 0; n < grid.n_pitches; ++n) {
    for (int t = 0; t < frames; ++t) {
      const double left = n > 0 ? clean(n - 1, t) : 0.0;
      const double right = n + 1 < grid.n_pitches ? clean(n + 1, t) : 0.0;
      double v = clean(n, t);
      if (v < std::max(left, right)) v *= opts.lateral_keep;
      roll.notes(n, t) = v;
      peak = std::max(peak, v);
    }
  }
  if (peak > 0.0) {
    for (double& v : roll.notes.data) v /= peak;
  }

  // Onset strength: rise over the last onset_lag frames (analysis kernels
  // smear attacks across frames), scaled by the level the attack reaches
  // so soft notes still spike near 1 while low-level flutter stays small.
  const int lag = std::max(1, opts.onset_lag);
  double onset_peak = 0.0;
  for (int n = 0; n < grid.n_pitches; ++n) {
    for (int t = 0; t < frames; ++t) {
      const double before = t >= lag ? roll.notes(n, t - lag) : 0.0;
      const double d = std::max(0.0, roll.notes(n, t) - before);
      roll.onsets(n, t) = d / std::sqrt(std::max(roll.notes(n, t), 0.25));
      onset_peak = std::max(onset_peak, roll.onsets(n, t));
    }
  }
  if (onset_peak > 0.0) {
    for (double& v : roll.onsets.data) v /= onset_peak;
  }
  return roll;
}

EmbeddingField bin_embeddings(const CqtSpectrogram& q_norm, const Pianoroll& y,
                              const GridConfig& grid, int dim) {
  if (dim < 1) throw std::invalid_argument("bin_embeddings: dim must be >= 1");
  if (y.n_pitches() != grid.n_pitches || y.n_frames() != q_norm.n_frames())
    throw std::invalid_argument("bin_embeddings: dimension mismatch");

  Mat mag(q_norm.n_bins(), q_norm.n_frames());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < q_norm.n_bins(); ++r) {
    for (int t = 0; t < q_norm.n_frames(); ++t) mag(r, t) = std::abs(q_norm.data(r, t));
  }

  EmbeddingField field(dim, y.n_pitches(), y.n_frames());
#pragma omp parallel for schedule(dynamic)
  for (int n = 0; n < y.n_pitches(); ++n) {
    std::vector<double> profile;
    for (int t = 0; t < y.n_frames(); ++t) {
      const double prob = y.notes(n, t);
      if (prob <= 0.0) continue;
      harmonic_profile(mag, grid, n, t, profile);
      auto dst = field.at(n, t);
      for (int d = 0; d < dim; ++d) {
        dst[d] = (d < static_cast<int>(profile.size()) ? profile[d] : 0.0);
      }
      // Truncation can leave a non-unit direction; restore it.
      if (dim < static_cast<int>(profile.size())) {
        double norm = 0.0;
        for (int d = 0; d < dim; ++d) norm += dst[d] * dst[d];
        if (norm > 0.0) {
          const double s = 1.0 / std::sqrt(norm);
          for (int d = 0; d < dim; ++d) dst[d] *= s;
        }
      }
    }
  }

  // Harmonic profiles of real instruments share a large common component
  // (energy falls with harmonic number for all of them), which crowds all
  // directions into a narrow cone. Removing most of the clip's weighted
  // mean direction spreads the timbres apart without touching what makes
  // them differ.
  constexpr double kCommonRemoval = 0.80;
  std::vector<double> mean_dir(dim, 0.0);
  for (int n = 0; n < y.n_pitches(); ++n) {
    for (int t = 0; t < y.n_frames(); ++t) {
      if (y.notes(n, t) <= 0.0) continue;
      auto v = field.at(n, t);
      for (int d = 0; d < dim; ++d) mean_dir[d] += y.notes(n, t) * v[d];
    }
  }
  double mu_norm = 0.0;
  for (double x : mean_dir) mu_norm += x * x;
  if (mu_norm > 0.0) {
    const double s = 1.0 / std::sqrt(mu_norm);
    for (double& x : mean_dir) x *= s;
  }

#pragma omp parallel for schedule(static)
  for (int n = 0; n < y.n_pitches(); ++n) {
    for (int t = 0; t < y.n_frames(); ++t) {
      const double prob = y.notes(n, t);
      if (prob <= 0.0) continue;
      auto v = field.at(n, t);
      double along = 0.0;
      for (int d = 0; d < dim; ++d) along += v[d] * mean_dir[d];
      double norm = 0.0;
      for (int d = 0; d < dim; ++d) {
        v[d] -= kCommonRemoval * along * mean_dir[d];
        norm += v[d] * v[d];
      }
      const double s = norm > 1e-12 ? prob / std::sqrt(norm) : 0.0;
      for (int d = 0; d < dim; ++d) v[d] *= s;
    }
  }
  return field;
}

std::vector<int> spectral_cluster(const Mat& unit_vectors, int k, uint64_t seed) {
  const int n = unit_vectors.rows;
  if (k < 1) throw std::invalid_argument("spectral_cluster: k must be >= 1");
  if (k > n) throw std::invalid_argument("spectral_cluster: k > count");
  if (k == 1) return std::vector<int>(n, 0);

  // Cosine affinity, negative similarities clipped.
  Mat a(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double dot = 0.0;
      for (int d = 0; d < unit_vectors.cols; ++d)
        dot += unit_vectors(i, d) * unit_vectors(j, d);
      const double v = std::max(0.0, dot);
      a(i, j) = v;
      a(j, i) = v;
    }
  }

  std::vector<double> inv_sqrt_deg(n);
  for (int i = 0; i < n; ++i) {
    double deg = 0.0;
    for (int j = 0; j < n; ++j) deg += a(i, j);
    inv_sqrt_deg[i] = deg > 1e-12 ? 1.0 / std::sqrt(deg) : 0.0;
  }

  // L_sym = I - D^-1/2 A D^-1/2
  Mat lap(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lap(i, j) = (i == j ? 1.0 : 0.0) - inv_sqrt_deg[i] * a(i, j) * inv_sqrt_deg[j];
    }
  }

  const auto eig = linalg::sym_eig(lap);
  Mat embed(n, k);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) embed(i, c) = eig.vectors(i, c);
  }
  embed = row_normalized(embed);
  return linalg::kmeans(embed, k, seed);
}

SeparationResult frame_separate(const EmbeddingField& field, const Pianoroll& y,
                                int n_sources, const FrameSeparateOptions& opts) {
  if (n_sources < 1) throw std::invalid_argument("frame_separate: need at least one source");

  struct Bin {
    int n, t;
  };
  std::vector<Bin> bins;
  for (int n = 0; n < y.n_pitches(); ++n) {
    for (int t = 0; t < y.n_frames(); ++t) {
      if (y.notes(n, t) >= opts.threshold) bins.push_back({n, t});
    }
  }
  const int count = static_cast<int>(bins.size());
  if (count < n_sources) throw std::runtime_error("fewer selected bins than M");

  Mat v(count, field.dim);
  std::vector<double> weights(count);
  for (int i = 0; i < count; ++i) {
    auto src = field.at(bins[i].n, bins[i].t);
    for (int d = 0; d < field.dim; ++d) v(i, d) = src[d];
    weights[i] = y.notes(bins[i].n, bins[i].t);
  }

  if (opts.associate) v = memory::associate_once(v, weights);
  const Mat dirs = row_normalized(v);

  std::vector<int> labels(count);
  if (count <= opts.max_cluster_bins) {
    labels = spectral_cluster(dirs, n_sources, opts.seed);
  } else {
    // Landmark subset (uniform stride over the bin list), then cosine
    // assignment of the rest to the landmark cluster centroids.
    const int l = opts.max_cluster_bins;
    Mat land(l, field.dim);
    std::vector<int> land_idx(l);
    for (int i = 0; i < l; ++i) {
      const int src = static_cast<int>(static_cast<int64_t>(i) * count / l);
      land_idx[i] = src;
      for (int d = 0; d < field.dim; ++d) land(i, d) = dirs(src, d);
    }
    const auto land_labels = spectral_cluster(land, n_sources, opts.seed);
    Mat centroids(n_sources, field.dim);
    for (int i = 0; i < l; ++i) {
      for (int d = 0; d < field.dim; ++d)
        centroids(land_labels[i], d) += land(i, d);
    }
    centroids = row_normalized(centroids);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < count; ++i) {
      int best = 0;
      double best_dot = -2.0;
      for (int c = 0; c < n_sources; ++c) {
        double dot = 0.0;
        for (int d = 0; d < field.dim; ++d) dot += dirs(i, d) * centroids(c, d);
        if (dot > best_dot) {
          best_dot = dot;
          best = c;
        }
      }
      labels[i] = best;
    }
    for (int i = 0; i < l; ++i) labels[land_idx[i]] = land_labels[i];
  }

  SeparationResult result;
  result.labels = labels;
  result.sources.reserve(n_sources);
  for (int c = 0; c < n_sources; ++c) result.sources.emplace_back(y.n_pitches(), y.n_frames(), y.grid);
  for (int i = 0; i < count; ++i) {
    Pianoroll& roll = result.sources[labels[i]];
    roll.notes(bins[i].n, bins[i].t) = y.notes(bins[i].n, bins[i].t);
    roll.onsets(bins[i].n, bins[i].t) = y.onsets(bins[i].n, bins[i].t);
  }
  result.source_events.resize(n_sources);
  return result;
}

Score extract_note_events(const Pianoroll& y, const NoteExtractOptions& opts) {
  if (opts.on_thresh <= 0.0 || opts.on_thresh >= 1.0 || opts.off_thresh <= 0.0 ||
      opts.off_thresh >= 1.0 || opts.on_thresh < opts.off_thresh)
    throw std::invalid_argument("extract_note_events: need 0 < off <= on < 1");

  const int frames = y.n_frames();
  const double sec_per_frame = y.grid.hop / y.grid.sample_rate;

  Score events;
  for (int n = 0; n < y.n_pitches(); ++n) {
    struct Span {
      int start, end;  // [start, end)
      double weight;
    };
    // Onset-seed test shared by seeding and by the extension stop below.
    auto is_seed = [&](int t) {
      const double o = y.onsets(n, t);
      if (o < opts.on_thresh) return false;
      const bool rising = t == 0 || o > y.onsets(n, t - 1);
      const bool crest = t == frames - 1 || o >= y.onsets(n, t + 1);
      return rising && crest;
    };
    std::vector<Span> spans;
    for (int t = 0; t < frames; ++t) {
      if (!is_seed(t)) continue;
      int start = t;
      while (start > 0 && t - start < opts.backtrack &&
             y.notes(n, start - 1) >= opts.off_thresh) {
        --start;
      }
      int end = t;
      double weight = 0.0;
      while (end < frames) {
        const double level = y.notes(n, end);
        if (level < opts.off_thresh) break;
        // A fresh attack past this seed's neighborhood starts its own
        // event; stopping here keeps back-to-back notes separable.
        if (end - t >= opts.min_frames && is_seed(end)) break;
        if (opts.release_ratio > 0.0 && level < opts.on_thresh && end - opts.release_lag >= start &&
            level < opts.release_ratio * y.notes(n, end - opts.release_lag)) {
          break;
        }
        weight += level;
        ++end;
      }
      if (end == t) continue;
      for (int b = start; b < t; ++b) weight += y.notes(n, b);
      spans.push_back({start, end, weight});
    }
    // Sustained activation whose onset was masked (a note starting while
    // the same pitch already sounds in another source) still becomes an
    // event: recover uncovered runs at or above on_thresh.
    std::vector<bool> covered(frames, false);
    for (const Span& s : spans) {
      for (int t = s.start; t < s.end; ++t) covered[t] = true;
    }
    for (int t = 0; t < frames; ++t) {
      if (covered[t] || y.notes(n, t) < opts.on_thresh) continue;
      int end = t;
      double weight = 0.0;
      while (end < frames && !covered[end] && y.notes(n, end) >= opts.off_thresh) {
        weight += y.notes(n, end);
        ++end;
      }
      int strong = 0;
      for (int u = t; u < end; ++u) {
        if (y.notes(n, u) >= opts.on_thresh) ++strong;
      }
      if (strong >= opts.min_frames) spans.push_back({t, end, weight});
      t = end;
    }
    std::sort(spans.begin(), spans.end(),
              [](const Span& a, const Span& b) { return a.start < b.start; });

    // Drop short events, then merge same-pitch events separated by < 2 frames.
    std::erase_if(spans, [&](const Span& s) { return s.end - s.start < opts.min_frames; });
    // Overlapping duplicate seeds and one-frame dropouts merge; exactly
    // contiguous spans stay separate (back-to-back notes split at the
    // second attack by the extension stop above).
    std::vector<Span> merged;
    for (const Span& s : spans) {
      const bool overlap = !merged.empty() && s.start < merged.back().end;
      const bool dropout = !merged.empty() && s.start == merged.back().end + 1;
      if (overlap || dropout) {
        merged.back().end = std::max(merged.back().end, s.end);
        merged.back().weight += s.weight;
      } else {
        merged.push_back(s);
      }
    }
    for (const Span& s : merged) {
      NoteEvent e;
      e.pitch = n + GridConfig::midi_base;
      e.onset = s.start * sec_per_frame;
      e.duration = (s.end - s.start) * sec_per_frame;
      e.velocity = std::min(1.0, s.weight / (s.end - s.start));
      e.track = 0;
      events.push_back(e);
    }
  }
  std::sort(events.begin(), events.end(), [](const NoteEvent& a, const NoteEvent& b) {
    return a.onset < b.onset || (a.onset == b.onset && a.pitch < b.pitch);
  });
  return events;
}

std::vector<double> note_embedding(const NoteEvent& event, const EmbeddingField& field,
                                   const Mat& y_n, const GridConfig& grid) {
  const int n = event.pitch - GridConfig::midi_base;
  if (n < 0 || n >= field.n_pitches)
    throw std::invalid_argument("note_embedding: pitch outside field");
  const double frames_per_sec = grid.sample_rate / grid.hop;
  const int start = static_cast<int>(std::lround(event.onset * frames_per_sec));
  const int end = start + static_cast<int>(std::lround(event.duration * frames_per_sec));
  if (start < 0 || end > field.frames || end <= start)
    throw std::invalid_argument("note_embedding: event frames outside field");

  std::vector<double> acc(field.dim, 0.0);
  for (int t = start; t < end; ++t) {
    auto v = field.at(n, t);
    double norm = 0.0;
    for (int d = 0; d < field.dim; ++d) norm += v[d] * v[d];
    if (norm <= 0.0) continue;
    const double w = y_n(n, t) / std::sqrt(norm);
    for (int d = 0; d < field.dim; ++d) acc[d] += w * v[d];
  }
  double total = 0.0;
  for (double x : acc) total += x * x;
  if (total <= 0.0) throw std::runtime_error("note_embedding: zero total weight");
  unit_normalize(acc);
  return acc;
}

SeparationResult note_separate(const Pianoroll& y, const EmbeddingField& field,
                               int n_sources, const NoteSeparateOptions& opts) {
  if (n_sources < 1) throw std::invalid_argument("note_separate: need at least one source");
  Score events = extract_note_events(y, opts.extract);
  if (static_cast<int>(events.size()) < n_sources)
    throw std::runtime_error("note_separate: fewer events than sources");

  const EmbeddingField* used = &field;
  EmbeddingField sharpened;
  if (opts.associate) sharpened = associate_field(field, y), used = &sharpened;

  Mat vectors(static_cast<int>(events.size()), field.dim);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(events.size()); ++i) {
    const auto v = note_embedding(events[i], *used, y.notes, y.grid);
    for (int d = 0; d < field.dim; ++d) vectors(i, d) = v[d];
  }

  if (opts.associate) {
    // Second association pass at the note level: the memory formed from
    // event encodings (weighted by event mass) pulls ambiguous events
    // toward the dominant timbre directions before clustering.
    std::vector<double> mass(events.size());
    for (size_t i = 0; i < events.size(); ++i) mass[i] = events[i].duration;
    vectors = memory::associate_once(vectors, mass);
    for (int i = 0; i < vectors.rows; ++i) {
      double norm = 0.0;
      for (int d = 0; d < vectors.cols; ++d) norm += vectors(i, d) * vectors(i, d);
      if (norm > 0.0) {
        const double s = 1.0 / std::sqrt(norm);
        for (int d = 0; d < vectors.cols; ++d) vectors(i, d) *= s;
      }
    }
  }

  SeparationResult result;
  result.labels = spectral_cluster(vectors, n_sources, opts.seed);

  result.source_events.resize(n_sources);
  for (size_t i = 0; i < events.size(); ++i) {
    NoteEvent e = events[i];
    e.track = result.labels[i];
    result.source_events[result.labels[i]].push_back(e);
  }
  result.sources.reserve(n_sources);
  for (int c = 0; c < n_sources; ++c) {
    result.sources.push_back(
        synth::score_to_pianoroll(result.source_events[c], y.grid, y.n_frames()));
  }
  return result;
}

}  // namespace tamt::sep

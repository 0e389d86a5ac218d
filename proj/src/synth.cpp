#include "tamt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tamt/rng.hpp"

namespace tamt::synth {

namespace {

constexpr double kTwoPi = 6.283185307179586;

enum Stream : uint64_t {
  kNoteStream = 0x21,
  kNoiseStream = 0x22,
};

struct NoteRender {
  size_t start = 0;
  std::vector<double> samples;
};

// ADSR value at note-relative time tau; the release ramps down from
// whatever level the gate reached at `duration`.
double adsr(double tau, double duration, const Timbre& tb) {
  auto gate = [&](double x) {
    if (x < tb.attack) return tb.attack > 0 ? x / tb.attack : 1.0;
    const double past_attack = x - tb.attack;
    if (past_attack < tb.decay)
      return 1.0 + (tb.sustain_level - 1.0) * (past_attack / tb.decay);
    return tb.sustain_level;
  };
  if (tau < duration) return gate(tau);
  const double into_release = tau - duration;
  if (tb.release <= 0.0 || into_release >= tb.release) return 0.0;
  return gate(duration) * (1.0 - into_release / tb.release);
}

NoteRender render_note(const NoteEvent& note, const Timbre& tb, const GridConfig& grid,
                       uint64_t seed, size_t note_index, const RenderOptions& opts) {
  Rng rng(seed, {kNoteStream, note_index});

  const double fs = grid.sample_rate;
  const double f_base = grid.pitch_freq(note.pitch);
  const double total = note.duration + tb.release;
  const size_t n = static_cast<size_t>(std::ceil(total * fs));

  NoteRender out;
  out.start = static_cast<size_t>(std::llround(note.onset * fs));
  out.samples.assign(n, 0.0);

  // Drop harmonics that could cross Nyquist at the maximum upward excursion.
  const double max_cents = std::fabs(note.detune) + opts.max_drift_cents + tb.vibrato_depth;
  const double f_ceiling = f_base * std::exp2(max_cents / 1200.0);
  int n_harm = 0;
  for (int h = 1; h <= 8; ++h) {
    if (h * f_ceiling < 0.5 * fs) n_harm = h;
  }

  double phases[8];
  for (int h = 0; h < 8; ++h) phases[h] = rng.uniform(0.0, kTwoPi);
  const double vib_phase = rng.uniform(0.0, kTwoPi);

  const int ctrl = std::max(1, opts.control_interval);
  double drift = 0.0;
  double phase0 = 0.0;  // fundamental phase, harmonics stay locked at h * phase0

  for (size_t i = 0; i < n; ++i) {
    if (i % static_cast<size_t>(ctrl) == 0) {
      if (opts.max_drift_cents > 0.0) {
        drift = std::clamp(drift + rng.gaussian(0.0, opts.drift_step_cents),
                           -opts.max_drift_cents, opts.max_drift_cents);
      }
    }
    const double tau = static_cast<double>(i) / fs;
    const double vibrato =
        tb.vibrato_depth > 0.0
            ? tb.vibrato_depth * std::sin(kTwoPi * tb.vibrato_rate * tau + vib_phase)
            : 0.0;
    const double freq = f_base * std::exp2((note.detune + drift + vibrato) / 1200.0);

    const double env = adsr(tau, note.duration, tb);
    double tremolo = 1.0;
    if (tb.tremolo_depth > 0.0) {
      tremolo = 1.0 - tb.tremolo_depth * 0.5 *
                          (1.0 + std::sin(kTwoPi * tb.vibrato_rate * tau + vib_phase * 0.5));
    }
    double s = 0.0;
    for (int h = 1; h <= n_harm; ++h) {
      const double a = tb.harmonic_amps[h - 1];
      if (a == 0.0) continue;
      s += a * std::sin(h * phase0 + phases[h - 1]);
    }
    out.samples[i] = note.velocity * env * tremolo * s;
    phase0 += kTwoPi * freq / fs;
    if (phase0 > kTwoPi * 1e6) phase0 = std::fmod(phase0, kTwoPi);
  }
  return out;
}

}  // namespace

void Timbre::validate() const {
  if (!(harmonic_amps[0] > 0.0))
    throw std::invalid_argument("Timbre: first harmonic amplitude must be > 0");
  for (double a : harmonic_amps) {
    if (a < 0.0) throw std::invalid_argument("Timbre: negative harmonic amplitude");
  }
  if (vibrato_depth > 50.0)
    throw std::invalid_argument("Timbre: vibrato depth above 50 cents");
  if (sustain_level < 0.0 || sustain_level > 1.0)
    throw std::invalid_argument("Timbre: sustain level outside [0, 1]");
  if (attack < 0.0 || decay < 0.0 || release < 0.0)
    throw std::invalid_argument("Timbre: negative envelope time");
}

Timbre Timbre::normalized() const {
  double e = 0.0;
  for (double a : harmonic_amps) e += a * a;
  Timbre t = *this;
  if (e > 0.0) {
    const double s = 1.0 / std::sqrt(e);
    for (double& a : t.harmonic_amps) a *= s;
  }
  return t;
}

std::vector<double> render_track(const Score& score, const Timbre& timbre,
                                 const GridConfig& grid, uint64_t seed,
                                 size_t n_samples, const RenderOptions& opts) {
  const Timbre tb = timbre.normalized();
  tb.validate();
  for (const NoteEvent& e : score) e.validate();

  size_t length = n_samples;
  if (length == 0) {
    double end = 0.0;
    for (const NoteEvent& e : score)
      end = std::max(end, e.onset + e.duration + tb.release);
    length = static_cast<size_t>(std::ceil(end * grid.sample_rate));
  }
  std::vector<double> buf(length, 0.0);
  if (score.empty() || length == 0) return buf;

  // Notes render independently in parallel; accumulation stays serial and
  // in note order so output does not depend on the thread count.
  std::vector<NoteRender> parts(score.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(score.size()); ++i) {
    parts[i] = render_note(score[i], tb, grid, seed, static_cast<size_t>(i), opts);
  }
  for (const NoteRender& p : parts) {
    for (size_t i = 0; i < p.samples.size(); ++i) {
      const size_t j = p.start + i;
      if (j >= length) break;
      buf[j] += p.samples[i];
    }
  }

  double peak = 0.0;
  for (double s : buf) peak = std::max(peak, std::fabs(s));
  if (peak > 0.9) {
    const double g = 0.9 / peak;
    for (double& s : buf) s *= g;
  }
  return buf;
}

std::vector<double> mix_tracks(const std::vector<std::vector<double>>& tracks,
                               std::optional<double> snr_db, uint64_t seed) {
  if (tracks.empty()) throw std::invalid_argument("mix_tracks: no input tracks");
  size_t length = 0;
  for (const auto& t : tracks) length = std::max(length, t.size());

  std::vector<double> mix(length, 0.0);
  for (const auto& t : tracks) {
    for (size_t i = 0; i < t.size(); ++i) mix[i] += t[i];
  }

  if (snr_db.has_value() && length > 0) {
    double power = 0.0;
    for (double s : mix) power += s * s;
    power /= static_cast<double>(length);
    const double noise_power = power / std::pow(10.0, *snr_db / 10.0);
    const double sigma = std::sqrt(noise_power);
    Rng rng(seed, {kNoiseStream});
    for (double& s : mix) s += rng.gaussian(0.0, sigma);
  }

  double peak = 0.0;
  for (double s : mix) peak = std::max(peak, std::fabs(s));
  if (peak > 0.99) {
    const double g = 0.99 / peak;
    for (double& s : mix) s *= g;
  }
  return mix;
}

Pianoroll score_to_pianoroll(const Score& score, const GridConfig& grid,
                             int total_frames) {
  if (total_frames < 0) throw std::invalid_argument("score_to_pianoroll: negative frame count");
  double last_end = 0.0;
  for (const NoteEvent& e : score) {
    e.validate();
    last_end = std::max(last_end, e.onset + e.duration);
  }
  const int needed =
      static_cast<int>(std::ceil(last_end * grid.sample_rate / grid.hop - 1e-9));
  if (total_frames < needed)
    throw std::invalid_argument("score_to_pianoroll: total_frames too small for score");

  Pianoroll roll(grid.n_pitches, total_frames, grid);
  for (const NoteEvent& e : score) {
    const int n = e.pitch - GridConfig::midi_base;
    if (n < 0 || n >= grid.n_pitches) continue;
    bool first = true;
    for (int t = 0; t < total_frames; ++t) {
      const double center = grid.frame_time(t);
      if (center < e.onset) continue;
      if (center >= e.onset + e.duration) break;
      roll.notes(n, t) = 1.0;
      if (first) {
        roll.onsets(n, t) = 1.0;
        first = false;
      }
    }
  }
  return roll;
}

const std::vector<NamedTimbre>& timbre_bank() {
  // Nine archetypes chosen for mutually distinct harmonic signatures:
  // pure, all-harmonic, odd-only, even-dominant, 4-6-8 bell, h5 bump,
  // h8 mixture stop, mid-heavy, and a 3+6 formant.
  auto norm = [](Timbre t) { return t.normalized(); };
  static const std::vector<NamedTimbre> bank = {
      {"flute", norm({.harmonic_amps = {1.0, 0.10, 0.03, 0.01, 0.0, 0.0, 0.0, 0.0},
                      .attack = 0.04, .decay = 0.08, .sustain_level = 0.9,
                      .release = 0.06, .vibrato_rate = 5.0, .vibrato_depth = 8.0,
                      .tremolo_depth = 0.08})},
      {"saw", norm({.harmonic_amps = {1.0, 0.52, 0.35, 0.26, 0.21, 0.17, 0.15, 0.13},
                    .attack = 0.005, .decay = 0.05, .sustain_level = 0.85,
                    .release = 0.05, .vibrato_rate = 5.5, .vibrato_depth = 4.0,
                    .tremolo_depth = 0.0})},
      {"clarinet", norm({.harmonic_amps = {1.0, 0.04, 0.70, 0.04, 0.48, 0.03, 0.30, 0.03},
                         .attack = 0.03, .decay = 0.06, .sustain_level = 0.9,
                         .release = 0.05, .vibrato_rate = 4.5, .vibrato_depth = 3.0,
                         .tremolo_depth = 0.05})},
      {"evenreed", norm({.harmonic_amps = {1.0, 0.75, 0.06, 0.55, 0.05, 0.35, 0.03, 0.20},
                         .attack = 0.02, .decay = 0.08, .sustain_level = 0.8,
                         .release = 0.06, .vibrato_rate = 5.0, .vibrato_depth = 5.0,
                         .tremolo_depth = 0.0})},
      {"bell", norm({.harmonic_amps = {0.55, 0.08, 0.05, 1.0, 0.04, 0.72, 0.03, 0.45},
                     .attack = 0.002, .decay = 0.6, .sustain_level = 0.45,
                     .release = 0.09, .vibrato_rate = 4.0, .vibrato_depth = 0.0,
                     .tremolo_depth = 0.0})},
      {"pluck", norm({.harmonic_amps = {1.0, 0.45, 0.20, 0.10, 0.30, 0.05, 0.03, 0.02},
                      .attack = 0.003, .decay = 0.4, .sustain_level = 0.35,
                      .release = 0.1, .vibrato_rate = 5.0, .vibrato_depth = 0.0,
                      .tremolo_depth = 0.0})},
      {"organ", norm({.harmonic_amps = {0.80, 0.70, 0.04, 0.55, 0.03, 0.03, 0.02, 1.0},
                      .attack = 0.01, .decay = 0.02, .sustain_level = 1.0,
                      .release = 0.04, .vibrato_rate = 6.0, .vibrato_depth = 0.0,
                      .tremolo_depth = 0.12})},
      {"brass", norm({.harmonic_amps = {0.55, 0.75, 1.0, 0.85, 0.65, 0.50, 0.38, 0.28},
                      .attack = 0.07, .decay = 0.1, .sustain_level = 0.85,
                      .release = 0.07, .vibrato_rate = 5.0, .vibrato_depth = 6.0,
                      .tremolo_depth = 0.05})},
      {"strings", norm({.harmonic_amps = {1.0, 0.60, 0.12, 0.08, 0.06, 0.05, 0.45, 0.04},
                        .attack = 0.09, .decay = 0.1, .sustain_level = 0.8,
                        .release = 0.08, .vibrato_rate = 6.0, .vibrato_depth = 12.0,
                        .tremolo_depth = 0.1})},
  };
  return bank;
}

Timbre make_variant(const Timbre& base, uint64_t seed) {
  Rng rng(seed, {0x23});
  Timbre t = base;
  for (double& a : t.harmonic_amps) {
    if (a > 0.0) a *= rng.uniform(0.85, 1.15);
  }
  t.attack = std::max(0.001, t.attack * rng.uniform(0.8, 1.2));
  t.decay = std::max(0.01, t.decay * rng.uniform(0.8, 1.2));
  t.sustain_level = std::clamp(t.sustain_level * rng.uniform(0.85, 1.15), 0.05, 1.0);
  t.vibrato_rate = t.vibrato_rate * rng.uniform(0.9, 1.1);
  t.vibrato_depth = std::min(50.0, t.vibrato_depth * rng.uniform(0.8, 1.2));
  return t.normalized();
}

}  // namespace tamt::synth

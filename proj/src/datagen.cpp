#include "tamt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tamt/rng.hpp"

namespace tamt::datagen {

namespace {

// Sub-stream ids under the master seed (see rng.hpp).
enum Stream : uint64_t {
  kPitchStream = 0x11,
  kChordStream = 0x12,
  kTimingStream = 0x13,
  kExpressionStream = 0x14,
};

double truncated_gaussian(Rng& rng, double mean, double sigma, double lo, double hi) {
  for (int tries = 0; tries < 64; ++tries) {
    const double x = rng.gaussian(mean, sigma);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(mean, lo, hi);
}

}  // namespace

void PitchGenConfig::validate() const {
  if (pitch_low > pitch_high) throw std::invalid_argument("PitchGenConfig: empty range");
  if (pitch_low < 24 || pitch_high > 107)
    throw std::invalid_argument("PitchGenConfig: range outside MIDI 24..107");
  if (pool_size < 1) throw std::invalid_argument("PitchGenConfig: pool_size must be >= 1");
  if (p_nearest < 0.0 || p_nearest > 1.0 || p_chord < 0.0 || p_chord > 1.0)
    throw std::invalid_argument("PitchGenConfig: probabilities must be in [0, 1]");
  for (int iv : chord_intervals) {
    if (iv != 4 && iv != 5 && iv != 7 && iv != 12)
      throw std::invalid_argument("PitchGenConfig: chord interval not in {4, 5, 7, 12}");
  }
}

void TimingConfig::validate() const {
  if (!(bpm > 0.0)) throw std::invalid_argument("TimingConfig: bpm must be > 0");
  if (duration_sigma_ratio < 0.0 || offset_sigma < 0.0)
    throw std::invalid_argument("TimingConfig: sigmas must be >= 0");
  for (const auto& row : markov) {
    double s = 0.0;
    for (double p : row) {
      if (p < 0.0) throw std::invalid_argument("TimingConfig: negative transition");
      s += p;
    }
    if (std::fabs(s - 1.0) > 1e-9)
      throw std::invalid_argument("TimingConfig: markov row does not sum to 1");
  }
}

std::vector<int> generate_pitch_sequence(const PitchGenConfig& cfg, int count,
                                         uint64_t seed) {
  cfg.validate();
  if (count < 1) throw std::invalid_argument("generate_pitch_sequence: count must be >= 1");

  Rng rng(seed, {kPitchStream});
  std::vector<int> cycle;
  std::vector<int> out;
  out.reserve(count);
  int prev = -1;

  while (static_cast<int>(out.size()) < count) {
    if (cycle.empty()) {
      cycle.resize(cfg.pitch_high - cfg.pitch_low + 1);
      std::iota(cycle.begin(), cycle.end(), cfg.pitch_low);
      rng.shuffle(cycle);
    }
    const int pool = std::min<int>(cfg.pool_size, static_cast<int>(cycle.size()));
    int pick;
    if (prev >= 0 && rng.uniform() < cfg.p_nearest) {
      // Closest-to-previous within the pool; ties go to the lower pitch.
      pick = 0;
      for (int i = 1; i < pool; ++i) {
        const int di = std::abs(cycle[i] - prev);
        const int db = std::abs(cycle[pick] - prev);
        if (di < db || (di == db && cycle[i] < cycle[pick])) pick = i;
      }
    } else {
      pick = static_cast<int>(rng.uniform_int(0, pool - 1));
    }
    prev = cycle[pick];
    out.push_back(prev);
    cycle.erase(cycle.begin() + pick);
  }
  return out;
}

Score insert_chord_tones(const Score& events, const PitchGenConfig& cfg, uint64_t seed) {
  cfg.validate();
  Score out;
  out.reserve(events.size() * 2);
  for (size_t i = 0; i < events.size(); ++i) {
    out.push_back(events[i]);
    Rng rng(seed, {kChordStream, i});
    if (rng.uniform() >= cfg.p_chord || cfg.chord_intervals.empty()) continue;
    const size_t which =
        static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(cfg.chord_intervals.size()) - 1));
    const int new_pitch = events[i].pitch + cfg.chord_intervals[which];
    if (new_pitch > cfg.pitch_high || new_pitch < cfg.pitch_low) continue;
    NoteEvent tone = events[i];
    tone.pitch = new_pitch;
    out.push_back(tone);
  }
  return out;
}

Timing generate_timing(int n, const TimingConfig& cfg, uint64_t seed) {
  cfg.validate();
  if (n < 1) throw std::invalid_argument("generate_timing: n must be >= 1");

  Rng rng(seed, {kTimingStream});
  const double mean_dur = 60.0 / cfg.bpm;
  const double sigma = cfg.duration_sigma_ratio * mean_dur;

  Timing t;
  t.onsets.resize(n);
  t.durations.resize(n);

  int state = static_cast<int>(TimingState::kSequential);
  for (int i = 0; i < n; ++i) {
    t.durations[i] = truncated_gaussian(rng, mean_dur, sigma, 0.05, 4.0 * mean_dur);
    if (i == 0) {
      t.onsets[0] = 0.0;
      continue;
    }
    // Markov transition from the previous state.
    const double u = rng.uniform();
    double cum = 0.0;
    int next_state = 2;
    for (int s = 0; s < 3; ++s) {
      cum += cfg.markov[state][s];
      if (u < cum) {
        next_state = s;
        break;
      }
    }
    state = next_state;

    const double prev_end = t.onsets[i - 1] + t.durations[i - 1];
    double nominal = prev_end;
    switch (static_cast<TimingState>(state)) {
      case TimingState::kSequential:
        nominal = prev_end;
        break;
      case TimingState::kOverlap:
        nominal = prev_end - rng.uniform(0.0, t.durations[i - 1]);
        break;
      case TimingState::kRest:
        nominal = prev_end + std::fabs(rng.gaussian(0.0, cfg.offset_sigma));
        break;
    }
    const double jitter = cfg.offset_sigma > 0.0 ? rng.gaussian(0.0, cfg.offset_sigma) : 0.0;
    t.onsets[i] = std::max({nominal + jitter, t.onsets[i - 1], 0.0});
  }
  return t;
}

Score generate_score(const PitchGenConfig& pitch_cfg, const TimingConfig& timing_cfg,
                     int n_notes, uint64_t seed) {
  if (n_notes < 0) throw std::invalid_argument("generate_score: negative note count");
  if (n_notes == 0) return {};

  const auto pitches = generate_pitch_sequence(pitch_cfg, n_notes, seed);
  const auto timing = generate_timing(n_notes, timing_cfg, seed);

  Score score;
  score.reserve(n_notes);
  for (int i = 0; i < n_notes; ++i) {
    Rng rng(seed, {kExpressionStream, static_cast<uint64_t>(i)});
    NoteEvent e;
    e.pitch = pitches[i];
    e.onset = timing.onsets[i];
    e.duration = timing.durations[i];
    e.detune = rng.uniform(-20.0, 20.0);
    e.velocity = rng.uniform(0.5, 1.0);
    e.track = 0;
    score.push_back(e);
  }
  return insert_chord_tones(score, pitch_cfg, seed);
}

std::vector<MixTuple> enumerate_mixes(int n_instruments, int songs_per, int m) {
  if (m < 1 || m > n_instruments)
    throw std::invalid_argument("enumerate_mixes: need 1 <= M <= N");
  if (songs_per < 1) throw std::invalid_argument("enumerate_mixes: songs_per must be >= 1");

  // Instrument combinations, ascending.
  std::vector<std::vector<int>> combos;
  std::vector<int> pick(m);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    combos.push_back(pick);
    int i = m - 1;
    while (i >= 0 && pick[i] == n_instruments - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }

  std::vector<MixTuple> mixes;
  for (const auto& combo : combos) {
    // Cartesian product over song indices, odometer-style.
    std::vector<int> song(m, 0);
    while (true) {
      MixTuple tuple(m);
      for (int i = 0; i < m; ++i) tuple[i] = {combo[i], song[i]};
      mixes.push_back(std::move(tuple));
      int i = m - 1;
      while (i >= 0 && song[i] == songs_per - 1) {
        song[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++song[i];
    }
  }
  return mixes;
}

}  // namespace tamt::datagen

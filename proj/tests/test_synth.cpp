#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "tamt/rng.hpp"
#include "tamt/synth.hpp"

using namespace tamt;
using namespace tamt::synth;

namespace {

const GridConfig kGrid;

Timbre pure_tone_timbre() {
  Timbre t;
  t.harmonic_amps = {1, 0, 0, 0, 0, 0, 0, 0};
  t.attack = 0.01;
  t.decay = 0.01;
  t.sustain_level = 1.0;
  t.release = 0.01;
  t.vibrato_depth = 0.0;
  t.tremolo_depth = 0.0;
  return t;
}

RenderOptions no_drift() {
  RenderOptions o;
  o.max_drift_cents = 0.0;
  return o;
}

// Magnitude of the length-n DFT at integer bin k over samples [start, start+n).
double dft_mag(const std::vector<double>& x, size_t start, size_t n, size_t k) {
  std::complex<double> acc{0, 0};
  for (size_t i = 0; i < n; ++i) {
    const double arg = -2.0 * 3.141592653589793 * static_cast<double>(k * i) / n;
    acc += x[start + i] * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return std::abs(acc);
}

double mean_power(const std::vector<double>& x) {
  double p = 0.0;
  for (double s : x) p += s * s;
  return p / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("empty score renders silence of the requested length") {
  const auto buf = render_track({}, pure_tone_timbre(), kGrid, 0, 4096);
  REQUIRE(buf.size() == 4096);
  for (double s : buf) CHECK(s == 0.0);
}

TEST_CASE("pure A4 puts the dominant DFT peak at 440 Hz within one bin") {
  Score score = {{0.0, 1.0, 69, 0.0, 0.9, 0}};  // A4
  const auto buf = render_track(score, pure_tone_timbre(), kGrid, 3, 22050, no_drift());

  const size_t n = 8192;
  const size_t start = 2205;  // skip the attack
  const double bin_hz = kGrid.sample_rate / static_cast<double>(n);
  size_t best_k = 0;
  double best = -1.0;
  for (size_t k = 1; k < n / 2; ++k) {
    const double m = dft_mag(buf, start, n, k);
    if (m > best) {
      best = m;
      best_k = k;
    }
  }
  const double expected_k = 440.0 / bin_hz;
  CHECK(std::fabs(static_cast<double>(best_k) - expected_k) <= 1.0);
}

TEST_CASE("doubling velocity doubles the rendered note before normalization") {
  Score quiet = {{0.0, 0.5, 60, 0.0, 0.4, 0}};
  Score loud = {{0.0, 0.5, 60, 0.0, 0.8, 0}};
  const auto a = render_track(quiet, pure_tone_timbre(), kGrid, 7, 12000, no_drift());
  const auto b = render_track(loud, pure_tone_timbre(), kGrid, 7, 12000, no_drift());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(std::fabs(b[i] - 2.0 * a[i]) < 1e-12);
  }
}

TEST_CASE("rendered peak never exceeds 0.9") {
  Score score;
  for (int i = 0; i < 8; ++i) score.push_back({0.0, 1.0, 60 + i, 0.0, 1.0, 0});
  const auto buf = render_track(score, timbre_bank()[1].timbre, kGrid, 1, 22050);
  double peak = 0.0;
  for (double s : buf) peak = std::max(peak, std::fabs(s));
  CHECK(peak <= 0.9 + 1e-12);
}

TEST_CASE("fundamental frequency error stays within the drift+vibrato bound") {
  // 2-second C4 with 20 cents drift and 10 cents vibrato; zero-crossing
  // frequency estimate over the sustained middle must stay within 50 cents.
  Timbre t = pure_tone_timbre();
  t.vibrato_depth = 10.0;
  t.vibrato_rate = 5.0;
  Score score = {{0.0, 2.0, 60, 0.0, 0.9, 0}};
  const auto buf = render_track(score, t, kGrid, 21, 44100);

  const size_t lo = 11025, hi = 33075;  // middle second
  int crossings = 0;
  for (size_t i = lo + 1; i < hi; ++i) {
    if ((buf[i - 1] < 0.0) != (buf[i] < 0.0)) ++crossings;
  }
  const double est = crossings / 2.0 / ((hi - lo) / kGrid.sample_rate);
  const double nominal = kGrid.pitch_freq(60);
  const double cents = 1200.0 * std::log2(est / nominal);
  CHECK(std::fabs(cents) <= 50.0);
}

TEST_CASE("nyquist-crossing harmonics are dropped rather than aliased") {
  Timbre t;
  t.harmonic_amps = {1, 1, 1, 1, 1, 1, 1, 1};
  t.vibrato_depth = 0.0;
  t.tremolo_depth = 0.0;
  // B7: 3951 Hz fundamental, harmonic 3 is already above Nyquist (11025).
  Score score = {{0.0, 0.5, 107, 0.0, 0.9, 0}};
  const auto buf = render_track(score, t.normalized(), kGrid, 2, 12000, no_drift());
  // Power must sit below Nyquist: compare DFT energy near 2x fundamental
  // (in band) against the frequency of the folded 3rd harmonic.
  const size_t n = 8192, start = 1000;
  const double bin_hz = kGrid.sample_rate / static_cast<double>(n);
  const double f0 = kGrid.pitch_freq(107);
  const size_t k2 = static_cast<size_t>(std::lround(2 * f0 / bin_hz));
  const size_t k3_folded = static_cast<size_t>(std::lround((kGrid.sample_rate - 3 * f0) / bin_hz));
  CHECK(dft_mag(buf, start, n, k2) > 100.0 * dft_mag(buf, start, n, k3_folded));
}

TEST_CASE("mix of one track is the track up to the limiter") {
  Score score = {{0.0, 0.4, 64, 0.0, 0.7, 0}};
  const auto a = render_track(score, pure_tone_timbre(), kGrid, 5, 11025, no_drift());
  const auto m = mix_tracks({a});
  REQUIRE(m.size() == a.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(m[i] == doctest::Approx(a[i]).epsilon(1e-12));
}

TEST_CASE("mixing two identical tracks doubles the signal pre-normalization") {
  std::vector<double> t(1000);
  Rng rng(9);
  for (double& s : t) s = rng.uniform(-0.3, 0.3);
  const auto m = mix_tracks({t, t});
  for (size_t i = 0; i < t.size(); ++i) CHECK(m[i] == doctest::Approx(2.0 * t[i]).epsilon(1e-12));
}

TEST_CASE("shorter tracks are zero padded") {
  std::vector<double> a(100, 0.1), b(50, 0.2);
  const auto m = mix_tracks({a, b});
  REQUIRE(m.size() == 100);
  CHECK(m[10] == doctest::Approx(0.3));
  CHECK(m[80] == doctest::Approx(0.1));
}

TEST_CASE("requested SNR is realized within half a dB") {
  // 1 second of tone at moderate level so the limiter stays inactive.
  Score score = {{0.0, 1.0, 69, 0.0, 0.35, 0}};
  const auto sig = render_track(score, pure_tone_timbre(), kGrid, 8, 22050, no_drift());
  const auto noisy = mix_tracks({sig}, 20.0, 123);
  REQUIRE(noisy.size() == sig.size());
  std::vector<double> noise(sig.size());
  for (size_t i = 0; i < sig.size(); ++i) noise[i] = noisy[i] - sig[i];
  const double snr = 10.0 * std::log10(mean_power(sig) / mean_power(noise));
  CHECK(std::fabs(snr - 20.0) <= 0.5);
}

TEST_CASE("mixing is commutative and associative up to the final scalar") {
  Rng rng(14);
  // Small amplitudes keep every intermediate peak below the limiter, so
  // the mixes compose linearly.
  std::vector<std::vector<double>> tracks(3, std::vector<double>(500));
  for (auto& t : tracks) {
    for (double& s : t) s = rng.uniform(-0.15, 0.15);
  }
  auto direction = [](std::vector<double> v) {
    double n = 0.0;
    for (double s : v) n += s * s;
    const double inv = 1.0 / std::sqrt(n);
    for (double& s : v) s *= inv;
    return v;
  };
  const auto abc = direction(mix_tracks({tracks[0], tracks[1], tracks[2]}));
  const auto cba = direction(mix_tracks({tracks[2], tracks[1], tracks[0]}));
  const auto nested = direction(mix_tracks({mix_tracks({tracks[0], tracks[1]}), tracks[2]}));
  for (size_t i = 0; i < abc.size(); ++i) {
    CHECK(abc[i] == doctest::Approx(cba[i]).epsilon(1e-9));
    // Nested mixing renormalizes in between, so directions agree, samples
    // only up to that scalar.
    CHECK(nested[i] == doctest::Approx(abc[i]).epsilon(1e-9));
  }
}

TEST_CASE("mix_tracks rejects an empty list") {
  CHECK_THROWS_AS(mix_tracks({}), std::invalid_argument);
}

TEST_CASE("sub-hop note aligned to a frame center occupies exactly one frame") {
  const double hop_s = kGrid.hop / kGrid.sample_rate;
  Score score = {{4.4 * hop_s, 0.8 * hop_s, 60, 0.0, 1.0, 0}};  // spans center of frame 4
  const auto roll = score_to_pianoroll(score, kGrid, 10);
  int active = 0, onsets = 0;
  for (int t = 0; t < 10; ++t) {
    active += roll.notes(36, t) > 0 ? 1 : 0;
    onsets += roll.onsets(36, t) > 0 ? 1 : 0;
  }
  CHECK(active == 1);
  CHECK(onsets == 1);
  CHECK(roll.notes(36, 4) == 1.0);
  CHECK(roll.onsets(36, 4) == 1.0);
}

TEST_CASE("roll of a summed score equals the clipped sum of rolls") {
  Score a = {{0.0, 0.5, 60, 0, 1, 0}, {0.5, 0.5, 64, 0, 1, 0}};
  Score b = {{0.2, 0.5, 60, 0, 1, 1}, {0.6, 0.4, 67, 0, 1, 1}};
  Score sum = a;
  sum.insert(sum.end(), b.begin(), b.end());
  const auto roll_sum = score_to_pianoroll(sum, kGrid, 100);
  const auto roll_a = score_to_pianoroll(a, kGrid, 100);
  const auto roll_b = score_to_pianoroll(b, kGrid, 100);
  for (size_t i = 0; i < roll_sum.notes.size(); ++i) {
    const double want = std::min(1.0, roll_a.notes.data[i] + roll_b.notes.data[i]);
    CHECK(roll_sum.notes.data[i] == want);
  }
}

TEST_CASE("empty score rasterizes to zero matrices") {
  const auto roll = score_to_pianoroll({}, kGrid, 20);
  for (double v : roll.notes.data) CHECK(v == 0.0);
  for (double v : roll.onsets.data) CHECK(v == 0.0);
}

TEST_CASE("onsets are a subset of note support") {
  Score score = {{0.0, 0.3, 60, 0, 1, 0}, {0.31, 0.3, 60, 0, 1, 0}, {0.1, 0.5, 72, 0, 1, 0}};
  const auto roll = score_to_pianoroll(score, kGrid, 80);
  for (size_t i = 0; i < roll.notes.size(); ++i) {
    if (roll.onsets.data[i] > 0.0) CHECK(roll.notes.data[i] > 0.0);
  }
}

TEST_CASE("rasterization rejects an undersized frame budget") {
  Score score = {{0.0, 1.0, 60, 0, 1, 0}};
  CHECK_THROWS_AS(score_to_pianoroll(score, kGrid, 10), std::invalid_argument);
}

TEST_CASE("timbre bank profiles are distinct and normalized") {
  const auto& bank = timbre_bank();
  REQUIRE(bank.size() == 9);
  for (const auto& [name, t] : bank) {
    double e = 0.0;
    for (double a : t.harmonic_amps) e += a * a;
    CHECK(e == doctest::Approx(1.0).epsilon(1e-9));
    t.validate();
  }
  // Pairwise profile cosine must leave room to tell them apart.
  for (size_t i = 0; i < bank.size(); ++i) {
    for (size_t j = i + 1; j < bank.size(); ++j) {
      double dot = 0.0;
      for (int h = 0; h < 8; ++h)
        dot += bank[i].timbre.harmonic_amps[h] * bank[j].timbre.harmonic_amps[h];
      CHECK(dot < 0.999);
    }
  }
  // Variants stay close to their base but are not identical.
  const Timbre v = make_variant(bank[0].timbre, 5);
  double dot = 0.0;
  for (int h = 0; h < 8; ++h) dot += v.harmonic_amps[h] * bank[0].timbre.harmonic_amps[h];
  CHECK(dot > 0.98);
  CHECK(dot < 1.0);
}

TEST_CASE("timbre validation") {
  Timbre t;
  t.harmonic_amps[0] = 0.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  Timbre v;
  v.vibrato_depth = 60.0;
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  Timbre s;
  s.sustain_level = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "tamt/evalmetrics.hpp"
#include "tamt/rng.hpp"

using namespace tamt;
using namespace tamt::eval;

namespace {

Pianoroll random_roll(Rng& rng, int n = 20, int frames = 30, double density = 0.2) {
  Pianoroll roll(n, frames);
  for (double& v : roll.notes.data) v = rng.uniform() < density ? 1.0 : 0.0;
  return roll;
}

}  // namespace

TEST_CASE("identical rolls score perfectly") {
  Rng rng(1);
  const auto roll = random_roll(rng);
  const auto s = frame_metrics(roll, roll);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);
  CHECK(s.acc == 1.0);
  CHECK(s.fp == 0);
  CHECK(s.fn == 0);
}

TEST_CASE("empty estimate against a nonempty reference") {
  Rng rng(2);
  const auto ref = random_roll(rng);
  Pianoroll est(20, 30);
  const auto s = frame_metrics(ref, est);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.f1 == 0.0);
  CHECK(s.acc == 0.0);
  CHECK(s.tp == 0);
}

TEST_CASE("hand-counted example: 8 hits, 2 false alarms, 2 misses") {
  Pianoroll ref(5, 10), est(5, 10);
  // 10 active reference bins in distinct cells
  for (int i = 0; i < 10; ++i) ref.notes(i / 2, i % 10) = 1.0;
  // estimate hits 8 of them
  int placed = 0;
  for (int i = 0; i < 10 && placed < 8; ++i, ++placed) est.notes(i / 2, i % 10) = 1.0;
  // plus 2 false positives on untouched cells
  est.notes(4, 0) = 1.0;
  est.notes(4, 1) = 1.0;
  const auto s = frame_metrics(ref, est);
  CHECK(s.tp == 8);
  CHECK(s.fp == 2);
  CHECK(s.fn == 2);
  CHECK(s.precision == doctest::Approx(0.8));
  CHECK(s.recall == doctest::Approx(0.8));
  CHECK(s.f1 == doctest::Approx(0.8));
  CHECK(s.acc == doctest::Approx(8.0 / 12.0));
}

TEST_CASE("shape mismatch is rejected") {
  Pianoroll a(5, 10), b(5, 11);
  CHECK_THROWS_AS(frame_metrics(a, b), std::invalid_argument);
}

TEST_CASE("threshold binarizes continuous rolls") {
  Pianoroll ref(1, 4), est(1, 4);
  ref.notes.data = {0.9, 0.6, 0.4, 0.0};
  est.notes.data = {0.7, 0.4, 0.6, 0.1};
  const auto s = frame_metrics(ref, est, 0.5);
  CHECK(s.tp == 1);  // cell 0
  CHECK(s.fp == 1);  // cell 2
  CHECK(s.fn == 1);  // cell 1
}

TEST_CASE("accuracy never exceeds F1 (Jaccard vs Dice)") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ref = random_roll(rng);
    const auto est = random_roll(rng);
    const auto s = frame_metrics(ref, est);
    CHECK(s.acc <= s.f1 + 1e-12);
  }
}

TEST_CASE("metrics are invariant under a common row/column permutation") {
  Rng rng(4);
  const auto ref = random_roll(rng);
  const auto est = random_roll(rng);
  const auto base = frame_metrics(ref, est);

  std::vector<int> rows(ref.n_pitches()), cols(ref.n_frames());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  rng.shuffle(rows);
  rng.shuffle(cols);
  Pianoroll ref_p(ref.n_pitches(), ref.n_frames()), est_p(ref.n_pitches(), ref.n_frames());
  for (int r = 0; r < ref.n_pitches(); ++r) {
    for (int t = 0; t < ref.n_frames(); ++t) {
      ref_p.notes(r, t) = ref.notes(rows[r], cols[t]);
      est_p.notes(r, t) = est.notes(rows[r], cols[t]);
    }
  }
  const auto permuted = frame_metrics(ref_p, est_p);
  CHECK(permuted.tp == base.tp);
  CHECK(permuted.fp == base.fp);
  CHECK(permuted.fn == base.fn);
}

TEST_CASE("pit_match with a single source is the identity") {
  Rng rng(5);
  const auto roll = random_roll(rng);
  const auto r = pit_match({roll}, {roll});
  CHECK(r.permutation == std::vector<int>{0});
  CHECK(r.mean.f1 == 1.0);
}

TEST_CASE("pit_match recovers a planted shuffle with perfect scores") {
  Rng rng(6);
  std::vector<Pianoroll> refs;
  for (int i = 0; i < 4; ++i) refs.push_back(random_roll(rng));
  const std::vector<int> planted = {2, 0, 3, 1};
  std::vector<Pianoroll> ests(4, Pianoroll(20, 30));
  for (int i = 0; i < 4; ++i) ests[planted[i]] = refs[i];
  const auto r = pit_match(refs, ests);
  CHECK(r.permutation == planted);
  CHECK(r.mean.f1 == doctest::Approx(1.0));
  for (const auto& s : r.per_source) CHECK(s.f1 == doctest::Approx(1.0));
}

TEST_CASE("pit_match recovers every planted permutation exhaustively for M <= 4") {
  Rng rng(7);
  for (int m = 2; m <= 4; ++m) {
    std::vector<Pianoroll> refs;
    for (int i = 0; i < m; ++i) refs.push_back(random_roll(rng, 12, 15, 0.3));
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<Pianoroll> ests(m, Pianoroll(12, 15));
      for (int i = 0; i < m; ++i) ests[perm[i]] = refs[i];
      const auto r = pit_match(refs, ests);
      CHECK(r.permutation == perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("a pairwise swap strictly beats the identity assignment") {
  Rng rng(8);
  std::vector<Pianoroll> refs;
  for (int i = 0; i < 3; ++i) refs.push_back(random_roll(rng, 15, 20, 0.3));
  std::vector<Pianoroll> ests = refs;
  std::swap(ests[0], ests[2]);
  const auto r = pit_match(refs, ests);
  const std::vector<int> expected = {2, 1, 0};
  CHECK(r.permutation == expected);
  CHECK(r.mean.f1 == doctest::Approx(1.0));
}

TEST_CASE("pit_match input validation") {
  Rng rng(9);
  const auto roll = random_roll(rng);
  CHECK_THROWS_AS(pit_match({roll, roll}, {roll}), std::invalid_argument);
  CHECK_THROWS_AS(pit_match({}, {}), std::invalid_argument);
  std::vector<Pianoroll> seven(7, roll);
  CHECK_THROWS_AS(pit_match(seven, seven), std::invalid_argument);
}

TEST_CASE("pit selects by continuous MSE, metrics use binarized rolls") {
  // Binarizations of both estimates are identical; only the continuous
  // values can steer the assignment.
  Pianoroll ref_a(1, 4), ref_b(1, 4), est_a(1, 4), est_b(1, 4);
  ref_a.notes.data = {0.9, 0.9, 0.0, 0.0};
  ref_b.notes.data = {0.6, 0.6, 0.0, 0.0};
  est_a.notes.data = {0.88, 0.88, 0.0, 0.0};
  est_b.notes.data = {0.62, 0.62, 0.0, 0.0};
  const auto r = pit_match({ref_a, ref_b}, {est_b, est_a});
  const std::vector<int> expected = {1, 0};
  CHECK(r.permutation == expected);
}

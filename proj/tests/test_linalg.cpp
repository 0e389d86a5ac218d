#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tamt/linalg.hpp"
#include "tamt/rng.hpp"

using namespace tamt;

TEST_CASE("sym_eig on a known 2x2") {
  Mat a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 2;
  const auto eig = linalg::sym_eig(a);
  REQUIRE(eig.values.size() == 2);
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sym_eig residuals and orthonormality on random symmetric matrices") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 8 + trial * 7;
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double x = rng.uniform(-1, 1);
        a(i, j) = x;
        a(j, i) = x;
      }
    }
    const auto eig = linalg::sym_eig(a);
    // A v_k = lambda_k v_k
    for (int k = 0; k < n; ++k) {
      double resid = 0.0;
      for (int i = 0; i < n; ++i) {
        double av = 0.0;
        for (int j = 0; j < n; ++j) av += a(i, j) * eig.vectors(j, k);
        const double d = av - eig.values[k] * eig.vectors(i, k);
        resid += d * d;
      }
      CHECK(std::sqrt(resid) < 1e-9);
    }
    // Columns orthonormal.
    for (int p = 0; p < n; ++p) {
      for (int q = p; q < n; ++q) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += eig.vectors(i, p) * eig.vectors(i, q);
        CHECK(std::fabs(dot - (p == q ? 1.0 : 0.0)) < 1e-10);
      }
    }
    // Ascending order.
    for (int k = 1; k < n; ++k) CHECK(eig.values[k] >= eig.values[k - 1]);
  }
}

TEST_CASE("kmeans separates two blobs and is deterministic") {
  Rng rng(3);
  const int per = 30;
  Mat pts(2 * per, 2);
  for (int i = 0; i < per; ++i) {
    pts(i, 0) = 0.0 + rng.gaussian(0, 0.05);
    pts(i, 1) = 0.0 + rng.gaussian(0, 0.05);
    pts(per + i, 0) = 5.0 + rng.gaussian(0, 0.05);
    pts(per + i, 1) = 5.0 + rng.gaussian(0, 0.05);
  }
  const auto labels = linalg::kmeans(pts, 2, 9);
  for (int i = 1; i < per; ++i) CHECK(labels[i] == labels[0]);
  for (int i = 1; i < per; ++i) CHECK(labels[per + i] == labels[per]);
  CHECK(labels[0] != labels[per]);

  const auto again = linalg::kmeans(pts, 2, 9);
  CHECK(labels == again);
}

TEST_CASE("kmeans argument errors") {
  Mat pts(3, 2);
  CHECK_THROWS_AS(linalg::kmeans(pts, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(linalg::kmeans(pts, 4, 0), std::invalid_argument);
}

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tamt {

// Minimal dense row-major matrix. Value semantics, no views, no BLAS;
// everything in this project is either small (D x D) or streamed once.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
  }

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
  double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }

  size_t size() const { return data.size(); }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

struct CMat {
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> data;

  CMat() = default;
  CMat(int r, int c, std::complex<double> fill = {0.0, 0.0})
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw std::invalid_argument("CMat: negative dimension");
  }

  std::complex<double>& operator()(int r, int c) {
    return data[static_cast<size_t>(r) * cols + c];
  }
  std::complex<double> operator()(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }

  size_t size() const { return data.size(); }
};

}  // namespace tamt

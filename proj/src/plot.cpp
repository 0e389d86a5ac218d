#include "tamt/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace tamt::plot {

namespace {

constexpr unsigned char kAnchors[9][3] = {
    {68, 1, 84},    {71, 44, 122},  {59, 81, 139},  {44, 113, 142}, {33, 144, 141},
    {39, 173, 129}, {92, 200, 99},  {170, 220, 50}, {253, 231, 37}};

}  // namespace

std::array<unsigned char, 3> colormap(double v) {
  v = std::clamp(v, 0.0, 1.0);
  const double x = v * 8.0;
  const int i = std::min(7, static_cast<int>(x));
  const double f = x - i;
  std::array<unsigned char, 3> rgb;
  for (int c = 0; c < 3; ++c) {
    const double y = kAnchors[i][c] + f * (kAnchors[i + 1][c] - kAnchors[i][c]);
    rgb[c] = static_cast<unsigned char>(std::lround(y));
  }
  return rgb;
}

void write_ppm_heatmap(const std::string& path, const Mat& values) {
  if (values.rows == 0 || values.cols == 0)
    throw std::invalid_argument("write_ppm_heatmap: empty matrix");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_ppm_heatmap: cannot open " + path);
  f << "P6\n" << values.cols << " " << values.rows << "\n255\n";
  // Row 0 at the bottom of the image.
  for (int r = values.rows - 1; r >= 0; --r) {
    for (int c = 0; c < values.cols; ++c) {
      const auto rgb = colormap(values(r, c));
      f.write(reinterpret_cast<const char*>(rgb.data()), 3);
    }
  }
  if (!f) throw std::runtime_error("write_ppm_heatmap: I/O failure on " + path);
}

Mat log_magnitude_view(const CMat& q) {
  Mat out(q.rows, q.cols);
  double peak = 0.0;
  for (const auto& z : q.data) peak = std::max(peak, std::abs(z));
  if (peak <= 0.0) return out;
  for (int r = 0; r < q.rows; ++r) {
    for (int c = 0; c < q.cols; ++c) {
      const double mag = std::abs(q(r, c)) / peak;
      const double db = 20.0 * std::log10(std::max(mag, 1e-9));
      out(r, c) = std::clamp(1.0 + db / 60.0, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace tamt::plot

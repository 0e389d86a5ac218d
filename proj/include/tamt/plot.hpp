#pragma once

#include <array>
#include <string>

#include "tamt/mat.hpp"

namespace tamt::plot {

// Fixed viridis-style colormap, v in [0, 1].
std::array<unsigned char, 3> colormap(double v);

// Binary PPM (P6) heatmap of a matrix, one pixel per cell, matrix row 0
// rendered at the bottom. Values are clamped to [0, 1].
void write_ppm_heatmap(const std::string& path, const Mat& values);

// Spectrogram view: log magnitude over a 60 dB range relative to the peak.
Mat log_magnitude_view(const CMat& q);

}  // namespace tamt::plot

#pragma once

#include <string>
#include <vector>

namespace tamt {

// PCM 16-bit mono WAV. Samples are doubles in [-1, 1]; values outside are
// clipped on write.
void write_wav(const std::string& path, const std::vector<double>& samples,
               double sample_rate = 22050.0);

struct WavData {
  std::vector<double> samples;
  double sample_rate = 0.0;
};

WavData read_wav(const std::string& path);

}  // namespace tamt

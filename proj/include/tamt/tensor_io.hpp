#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tamt/mat.hpp"
#include "tamt/types.hpp"

namespace tamt {

// On-disk tensor container:
//   bytes 0..7   magic "TAMT0001"
//   bytes 8..11  u32 little-endian header length H
//   H bytes      UTF-8 JSON header {"dtype","shape","meta"}
//   payload      raw little-endian f32, row-major; complex values are
//                interleaved (re, im) pairs with dtype "c64"
struct Tensor {
  std::string dtype = "f32";       // "f32" or "c64"
  std::vector<int64_t> shape;      // empty = scalar
  std::vector<float> payload;      // interleaved for c64
  nlohmann::json meta = nlohmann::json::object();

  int64_t element_count() const {
    int64_t n = 1;
    for (int64_t s : shape) n *= s;
    return n;
  }
  int64_t floats_per_element() const { return dtype == "c64" ? 2 : 1; }
};

void write_tensor(const std::string& path, const Tensor& t);
Tensor read_tensor(const std::string& path);

// Converters between the toolkit's working types and Tensor.
Tensor tensor_from_mat(const Mat& m);
Mat mat_from_tensor(const Tensor& t);
Tensor tensor_from_cmat(const CMat& m);
CMat cmat_from_tensor(const Tensor& t);

// Pianorolls persist as a single [2, N, T] tensor (notes, onsets).
Tensor tensor_from_pianoroll(const Pianoroll& roll);
Pianoroll pianoroll_from_tensor(const Tensor& t, const GridConfig& grid);

// Embedding fields persist as [D, N, T].
Tensor tensor_from_field(const EmbeddingField& f);
EmbeddingField field_from_tensor(const Tensor& t);

}  // namespace tamt

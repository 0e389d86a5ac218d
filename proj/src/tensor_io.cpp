#include "tamt/tensor_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace tamt {

namespace {

constexpr char kMagic[8] = {'T', 'A', 'M', 'T', '0', '0', '0', '1'};

void check_finite(const std::vector<float>& v) {
  for (float x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("write_tensor: non-finite value");
  }
}

}  // namespace

void write_tensor(const std::string& path, const Tensor& t) {
  if (t.dtype != "f32" && t.dtype != "c64")
    throw std::invalid_argument("write_tensor: dtype must be f32 or c64");
  for (int64_t s : t.shape) {
    if (s < 0) throw std::invalid_argument("write_tensor: negative shape entry");
  }
  const int64_t want = t.element_count() * t.floats_per_element();
  if (want != static_cast<int64_t>(t.payload.size()))
    throw std::invalid_argument("write_tensor: shape/payload mismatch");
  check_finite(t.payload);

  nlohmann::json header;
  header["dtype"] = t.dtype;
  header["shape"] = t.shape;
  header["meta"] = t.meta;
  const std::string hs = header.dump();
  if (hs.size() > UINT32_MAX) throw std::runtime_error("write_tensor: header too large");

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_tensor: cannot open " + path);
  f.write(kMagic, 8);
  const uint32_t hlen = static_cast<uint32_t>(hs.size());
  unsigned char lenb[4] = {static_cast<unsigned char>(hlen & 0xff),
                           static_cast<unsigned char>((hlen >> 8) & 0xff),
                           static_cast<unsigned char>((hlen >> 16) & 0xff),
                           static_cast<unsigned char>((hlen >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(lenb), 4);
  f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  // Little-endian host assumed (static-asserted nowhere better to put it).
  static_assert(sizeof(float) == 4);
  f.write(reinterpret_cast<const char*>(t.payload.data()),
          static_cast<std::streamsize>(t.payload.size() * sizeof(float)));
  if (!f) throw std::runtime_error("write_tensor: I/O failure on " + path);
}

Tensor read_tensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_tensor: cannot open " + path);

  char magic[8];
  f.read(magic, 8);
  if (f.gcount() != 8 || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("read_tensor: bad magic");

  unsigned char lenb[4];
  f.read(reinterpret_cast<char*>(lenb), 4);
  if (f.gcount() != 4) throw std::runtime_error("read_tensor: truncated header");
  const uint32_t hlen = static_cast<uint32_t>(lenb[0]) | (static_cast<uint32_t>(lenb[1]) << 8) |
                        (static_cast<uint32_t>(lenb[2]) << 16) |
                        (static_cast<uint32_t>(lenb[3]) << 24);

  std::string hs(hlen, '\0');
  f.read(hs.data(), hlen);
  if (static_cast<uint32_t>(f.gcount()) != hlen)
    throw std::runtime_error("read_tensor: truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(hs);
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error("read_tensor: malformed header JSON");
  }

  Tensor t;
  t.dtype = header.value("dtype", "");
  if (t.dtype != "f32" && t.dtype != "c64")
    throw std::runtime_error("read_tensor: unknown dtype");
  t.shape = header.value("shape", std::vector<int64_t>{});
  t.meta = header.value("meta", nlohmann::json::object());

  const int64_t want = t.element_count() * t.floats_per_element();
  t.payload.resize(static_cast<size_t>(want));
  f.read(reinterpret_cast<char*>(t.payload.data()),
         static_cast<std::streamsize>(want * static_cast<int64_t>(sizeof(float))));
  if (f.gcount() != static_cast<std::streamsize>(want * static_cast<int64_t>(sizeof(float))))
    throw std::runtime_error("read_tensor: truncated payload");
  // Anything left over means the header's shape disagrees with the file.
  f.peek();
  if (!f.eof()) throw std::runtime_error("read_tensor: shape/payload mismatch");
  return t;
}

Tensor tensor_from_mat(const Mat& m) {
  Tensor t;
  t.shape = {m.rows, m.cols};
  t.payload.reserve(m.size());
  for (double x : m.data) t.payload.push_back(static_cast<float>(x));
  return t;
}

Mat mat_from_tensor(const Tensor& t) {
  if (t.dtype != "f32" || t.shape.size() != 2)
    throw std::runtime_error("mat_from_tensor: expected rank-2 f32 tensor");
  Mat m(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]));
  for (size_t i = 0; i < t.payload.size(); ++i) m.data[i] = t.payload[i];
  return m;
}

Tensor tensor_from_cmat(const CMat& m) {
  Tensor t;
  t.dtype = "c64";
  t.shape = {m.rows, m.cols};
  t.payload.reserve(m.size() * 2);
  for (const auto& z : m.data) {
    t.payload.push_back(static_cast<float>(z.real()));
    t.payload.push_back(static_cast<float>(z.imag()));
  }
  return t;
}

CMat cmat_from_tensor(const Tensor& t) {
  if (t.dtype != "c64" || t.shape.size() != 2)
    throw std::runtime_error("cmat_from_tensor: expected rank-2 c64 tensor");
  CMat m(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]));
  for (size_t i = 0; i < m.size(); ++i) {
    m.data[i] = {t.payload[2 * i], t.payload[2 * i + 1]};
  }
  return m;
}

Tensor tensor_from_pianoroll(const Pianoroll& roll) {
  Tensor t;
  t.shape = {2, roll.notes.rows, roll.notes.cols};
  t.payload.reserve(roll.notes.size() * 2);
  for (double x : roll.notes.data) t.payload.push_back(static_cast<float>(x));
  for (double x : roll.onsets.data) t.payload.push_back(static_cast<float>(x));
  t.meta["kind"] = "pianoroll";
  return t;
}

Pianoroll pianoroll_from_tensor(const Tensor& t, const GridConfig& grid) {
  if (t.dtype != "f32" || t.shape.size() != 3 || t.shape[0] != 2)
    throw std::runtime_error("pianoroll_from_tensor: expected [2, N, T] f32 tensor");
  const int n = static_cast<int>(t.shape[1]);
  const int frames = static_cast<int>(t.shape[2]);
  Pianoroll roll(n, frames, grid);
  const size_t plane = static_cast<size_t>(n) * frames;
  for (size_t i = 0; i < plane; ++i) roll.notes.data[i] = t.payload[i];
  for (size_t i = 0; i < plane; ++i) roll.onsets.data[i] = t.payload[plane + i];
  return roll;
}

Tensor tensor_from_field(const EmbeddingField& f) {
  Tensor t;
  t.shape = {f.dim, f.n_pitches, f.frames};
  t.payload.resize(static_cast<size_t>(f.dim) * f.n_pitches * f.frames);
  // Internal layout is bin-major (n, t, d); file layout is [D, N, T].
  for (int n = 0; n < f.n_pitches; ++n) {
    for (int time = 0; time < f.frames; ++time) {
      auto v = f.at(n, time);
      for (int d = 0; d < f.dim; ++d) {
        t.payload[(static_cast<size_t>(d) * f.n_pitches + n) * f.frames + time] =
            static_cast<float>(v[d]);
      }
    }
  }
  t.meta["kind"] = "embedding_field";
  return t;
}

EmbeddingField field_from_tensor(const Tensor& t) {
  if (t.dtype != "f32" || t.shape.size() != 3)
    throw std::runtime_error("field_from_tensor: expected [D, N, T] f32 tensor");
  EmbeddingField f(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]),
                   static_cast<int>(t.shape[2]));
  for (int n = 0; n < f.n_pitches; ++n) {
    for (int time = 0; time < f.frames; ++time) {
      auto v = f.at(n, time);
      for (int d = 0; d < f.dim; ++d) {
        v[d] = t.payload[(static_cast<size_t>(d) * f.n_pitches + n) * f.frames + time];
      }
    }
  }
  return f;
}

}  // namespace tamt

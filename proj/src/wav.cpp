#include "tamt/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tamt {

namespace {

void put_u32(std::ofstream& f, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(b), 4);
}

void put_u16(std::ofstream& f, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff)};
  f.write(reinterpret_cast<const char*>(b), 2);
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t get_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void write_wav(const std::string& path, const std::vector<double>& samples,
               double sample_rate) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_wav: cannot open " + path);

  const uint32_t n = static_cast<uint32_t>(samples.size());
  const uint32_t data_bytes = n * 2;
  const uint32_t rate = static_cast<uint32_t>(std::lround(sample_rate));

  f.write("RIFF", 4);
  put_u32(f, 36 + data_bytes);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  put_u32(f, 16);
  put_u16(f, 1);          // PCM
  put_u16(f, 1);          // mono
  put_u32(f, rate);
  put_u32(f, rate * 2);   // byte rate
  put_u16(f, 2);          // block align
  put_u16(f, 16);         // bits per sample
  f.write("data", 4);
  put_u32(f, data_bytes);

  for (double s : samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const int16_t q = static_cast<int16_t>(std::lround(c * 32767.0));
    unsigned char b[2] = {static_cast<unsigned char>(q & 0xff),
                          static_cast<unsigned char>((q >> 8) & 0xff)};
    f.write(reinterpret_cast<const char*>(b), 2);
  }
  if (!f) throw std::runtime_error("write_wav: I/O failure on " + path);
}

WavData read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_wav: cannot open " + path);

  unsigned char hdr[12];
  f.read(reinterpret_cast<char*>(hdr), 12);
  if (f.gcount() != 12 || std::memcmp(hdr, "RIFF", 4) != 0 ||
      std::memcmp(hdr + 8, "WAVE", 4) != 0)
    throw std::runtime_error("read_wav: not a RIFF/WAVE file: " + path);

  WavData out;
  uint16_t channels = 0, bits = 0;
  bool have_fmt = false;

  while (true) {
    unsigned char chunk[8];
    f.read(reinterpret_cast<char*>(chunk), 8);
    if (f.gcount() != 8) break;
    const uint32_t size = get_u32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      std::vector<unsigned char> fmt(size);
      f.read(reinterpret_cast<char*>(fmt.data()), size);
      if (static_cast<uint32_t>(f.gcount()) != size)
        throw std::runtime_error("read_wav: truncated fmt chunk");
      const uint16_t codec = get_u16(fmt.data());
      channels = get_u16(fmt.data() + 2);
      out.sample_rate = get_u32(fmt.data() + 4);
      bits = get_u16(fmt.data() + 14);
      if (codec != 1) throw std::runtime_error("read_wav: only PCM supported");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw std::runtime_error("read_wav: data before fmt");
      if (channels != 1 || bits != 16)
        throw std::runtime_error("read_wav: only 16-bit mono supported");
      const uint32_t count = size / 2;
      out.samples.resize(count);
      std::vector<unsigned char> raw(size);
      f.read(reinterpret_cast<char*>(raw.data()), size);
      if (static_cast<uint32_t>(f.gcount()) != size)
        throw std::runtime_error("read_wav: truncated data chunk");
      for (uint32_t i = 0; i < count; ++i) {
        const int16_t q = static_cast<int16_t>(get_u16(raw.data() + 2 * i));
        out.samples[i] = q / 32767.0;
      }
      return out;
    } else {
      f.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw std::runtime_error("read_wav: no data chunk in " + path);
}

}  // namespace tamt

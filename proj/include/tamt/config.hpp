#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tamt/datagen.hpp"
#include "tamt/separation.hpp"
#include "tamt/types.hpp"

namespace tamt {

// Resolved run configuration. Loadable from a flat TOML-style key = value
// file; unknown keys are rejected. Every run directory receives the fully
// resolved copy for reproducibility.
struct RunConfig {
  uint64_t seed = 0;
  std::string out_dir = "out";

  GridConfig grid;

  // Dataset layout: categories x variants instruments, songs_per songs
  // per instrument, song_frames frames per song.
  int categories = 9;
  int variants = 2;
  int songs_per = 6;
  int song_frames = 600;
  int notes_per_song = 0;  // 0 = fill the song span
  int mix_m = 2;
  std::optional<double> snr_db;

  datagen::PitchGenConfig pitch;
  datagen::TimingConfig timing;

  int embed_dim = 16;
  bool use_association = true;
  bool frame_level = false;
  sep::SalienceOptions salience;
  sep::FrameSeparateOptions frame_opts;
  sep::NoteExtractOptions extract;

  void apply(const std::string& key, const std::string& value);
  std::string to_toml() const;
};

RunConfig load_config(const std::string& path, RunConfig base = {});
void save_config(const std::string& path, const RunConfig& cfg);

}  // namespace tamt

#include "tamt/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tamt {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& v) {
  size_t pos = 0;
  const double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("config: bad number: " + v);
  return x;
}

int to_int(const std::string& v) {
  size_t pos = 0;
  const int x = std::stoi(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("config: bad integer: " + v);
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw std::invalid_argument("config: bad boolean: " + v);
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& raw) {
  const std::string value = unquote(trim(raw));
  if (key == "seed") seed = std::stoull(value);
  else if (key == "out") out_dir = value;
  else if (key == "grid.hop") grid.hop = to_int(value);
  else if (key == "grid.f_min") grid.f_min = to_double(value);
  else if (key == "gen.categories") categories = to_int(value);
  else if (key == "gen.variants") variants = to_int(value);
  else if (key == "gen.songs_per") songs_per = to_int(value);
  else if (key == "gen.song_frames") song_frames = to_int(value);
  else if (key == "gen.notes_per_song") notes_per_song = to_int(value);
  else if (key == "mix.m") mix_m = to_int(value);
  else if (key == "mix.snr_db") snr_db = to_double(value);
  else if (key == "pitch.low") pitch.pitch_low = to_int(value);
  else if (key == "pitch.high") pitch.pitch_high = to_int(value);
  else if (key == "pitch.pool_size") pitch.pool_size = to_int(value);
  else if (key == "pitch.p_nearest") pitch.p_nearest = to_double(value);
  else if (key == "pitch.p_chord") pitch.p_chord = to_double(value);
  else if (key == "timing.bpm") timing.bpm = to_double(value);
  else if (key == "timing.duration_sigma_ratio") timing.duration_sigma_ratio = to_double(value);
  else if (key == "timing.offset_sigma") timing.offset_sigma = to_double(value);
  else if (key == "embed.dim") embed_dim = to_int(value);
  else if (key == "sep.associate") use_association = to_bool(value);
  else if (key == "sep.frame_level") frame_level = to_bool(value);
  else if (key == "sep.threshold") frame_opts.threshold = to_double(value);
  else if (key == "sep.max_cluster_bins") frame_opts.max_cluster_bins = to_int(value);
  else if (key == "sep.on_thresh") extract.on_thresh = to_double(value);
  else if (key == "sep.off_thresh") extract.off_thresh = to_double(value);
  else if (key == "sep.min_frames") extract.min_frames = to_int(value);
  else if (key == "salience.octave_suppression") salience.ghost_suppression[0] = to_double(value);
  else if (key == "salience.whitening_exponent") salience.whitening_exponent = to_double(value);
  else throw std::invalid_argument("config: unknown key: " + key);
}

std::string RunConfig::to_toml() const {
  std::ostringstream s;
  s.precision(17);
  s << "seed = " << seed << "\n";
  s << "out = \"" << out_dir << "\"\n";
  s << "grid.hop = " << grid.hop << "\n";
  s << "grid.f_min = " << grid.f_min << "\n";
  s << "gen.categories = " << categories << "\n";
  s << "gen.variants = " << variants << "\n";
  s << "gen.songs_per = " << songs_per << "\n";
  s << "gen.song_frames = " << song_frames << "\n";
  s << "gen.notes_per_song = " << notes_per_song << "\n";
  s << "mix.m = " << mix_m << "\n";
  if (snr_db) s << "mix.snr_db = " << *snr_db << "\n";
  s << "pitch.low = " << pitch.pitch_low << "\n";
  s << "pitch.high = " << pitch.pitch_high << "\n";
  s << "pitch.pool_size = " << pitch.pool_size << "\n";
  s << "pitch.p_nearest = " << pitch.p_nearest << "\n";
  s << "pitch.p_chord = " << pitch.p_chord << "\n";
  s << "timing.bpm = " << timing.bpm << "\n";
  s << "timing.duration_sigma_ratio = " << timing.duration_sigma_ratio << "\n";
  s << "timing.offset_sigma = " << timing.offset_sigma << "\n";
  s << "embed.dim = " << embed_dim << "\n";
  s << "sep.associate = " << (use_association ? "true" : "false") << "\n";
  s << "sep.frame_level = " << (frame_level ? "true" : "false") << "\n";
  s << "sep.threshold = " << frame_opts.threshold << "\n";
  s << "sep.max_cluster_bins = " << frame_opts.max_cluster_bins << "\n";
  s << "sep.on_thresh = " << extract.on_thresh << "\n";
  s << "sep.off_thresh = " << extract.off_thresh << "\n";
  s << "sep.min_frames = " << extract.min_frames << "\n";
  s << "salience.octave_suppression = " << salience.ghost_suppression[0] << "\n";
  s << "salience.whitening_exponent = " << salience.whitening_exponent << "\n";
  return s.str();
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_config: cannot open " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("load_config: line " + std::to_string(line_no) +
                               " is not key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = t.substr(eq + 1);
    base.apply(key, value);
  }
  return base;
}

void save_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("save_config: cannot open " + path);
  f << cfg.to_toml();
  if (!f) throw std::runtime_error("save_config: I/O failure on " + path);
}

}  // namespace tamt

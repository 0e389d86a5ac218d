#include "tamt/jsonl.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tamt {

std::string score_to_jsonl(const Score& score) {
  std::string out;
  for (const NoteEvent& e : score) {
    nlohmann::json j;
    j["onset"] = e.onset;
    j["duration"] = e.duration;
    j["pitch"] = e.pitch;
    j["detune"] = e.detune;
    j["velocity"] = e.velocity;
    j["track"] = e.track;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Score score_from_jsonl(const std::string& text) {
  Score score;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw std::runtime_error("score_from_jsonl: malformed line: " + line);
    }
    NoteEvent e;
    e.onset = j.at("onset").get<double>();
    e.duration = j.at("duration").get<double>();
    e.pitch = j.at("pitch").get<int>();
    e.detune = j.at("detune").get<double>();
    e.velocity = j.at("velocity").get<double>();
    e.track = j.at("track").get<int>();
    score.push_back(e);
  }
  return score;
}

void write_score_jsonl(const std::string& path, const Score& score) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("write_score_jsonl: cannot open " + path);
  f << score_to_jsonl(score);
  if (!f) throw std::runtime_error("write_score_jsonl: I/O failure on " + path);
}

Score read_score_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_score_jsonl: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return score_from_jsonl(ss.str());
}

}  // namespace tamt

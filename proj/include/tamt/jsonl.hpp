#pragma once

#include <string>

#include "tamt/types.hpp"

namespace tamt {

// Note lists serialize to JSONL: one object per line with keys
// onset, duration, pitch, detune, velocity, track.
std::string score_to_jsonl(const Score& score);
Score score_from_jsonl(const std::string& text);

void write_score_jsonl(const std::string& path, const Score& score);
Score read_score_jsonl(const std::string& path);

}  // namespace tamt

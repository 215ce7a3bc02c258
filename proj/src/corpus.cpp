// Copyright 2026 The icl-enroll Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iclenroll/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "iclenroll/error.hpp"
#include "iclenroll/io.hpp"
#include "iclenroll/rng.hpp"
#include "iclenroll/text.hpp"

namespace iclenroll {

std::string_view severity_name(Severity severity) {
  switch (severity) {
    case Severity::kMild: return "mild";
    case Severity::kModerate: return "moderate";
    case Severity::kSevere: return "severe";
    case Severity::kUnknown: return "unknown";
  }
  return "unknown";
}

Severity severity_from_name(std::string_view name) {
  if (name == "mild") return Severity::kMild;
  if (name == "moderate") return Severity::kModerate;
  if (name == "severe") return Severity::kSevere;
  if (name == "unknown") return Severity::kUnknown;
  throw_error(ErrorCode::kSchema, "unknown severity \"" + std::string(name) + "\"");
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kTest: return "test";
    case Split::kUnassigned: return "unassigned";
  }
  return "unassigned";
}

Split split_from_name(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  if (name == "unassigned") return Split::kUnassigned;
  throw_error(ErrorCode::kSchema, "unknown split \"" + std::string(name) + "\"");
}

std::vector<std::string> Manifest::speakers() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& utterance : utterances) {
    if (seen.insert(utterance.speaker_id).second) {
      out.push_back(utterance.speaker_id);
    }
  }
  return out;
}

const Utterance* Manifest::find(std::string_view utterance_id) const {
  for (const auto& utterance : utterances) {
    if (utterance.id == utterance_id) return &utterance;
  }
  return nullptr;
}

bool Manifest::has_speaker(std::string_view speaker_id) const {
  return std::any_of(utterances.begin(), utterances.end(),
                     [&](const Utterance& u) { return u.speaker_id == speaker_id; });
}

namespace {

const char* const kKnownFields[] = {"id", "speaker_id", "transcript", "audio_ref",
                                    "severity", "split"};

std::string require_string(const nlohmann::json& row, const char* key, size_t line_no) {
  auto it = row.find(key);
  if (it == row.end() || !it->is_string()) {
    throw_error(ErrorCode::kSchema, "line " + std::to_string(line_no) +
                                        ": missing or non-string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  Manifest manifest;
  manifest.source_name = path.filename().string();
  std::unordered_set<std::string> ids;
  for_each_jsonl(path, [&](size_t line_no, const nlohmann::json& row) {
    if (!row.is_object()) {
      throw_error(ErrorCode::kSchema, "line " + std::to_string(line_no) + ": not an object");
    }
    Utterance utterance;
    utterance.id = require_string(row, "id", line_no);
    utterance.speaker_id = require_string(row, "speaker_id", line_no);
    utterance.transcript = require_string(row, "transcript", line_no);
    utterance.audio_ref = require_string(row, "audio_ref", line_no);
    if (row.contains("severity")) {
      if (!row["severity"].is_string()) {
        throw_error(ErrorCode::kSchema,
                    "line " + std::to_string(line_no) + ": non-string severity");
      }
      utterance.severity = severity_from_name(row["severity"].get<std::string>());
    }
    if (row.contains("split")) {
      if (!row["split"].is_string()) {
        throw_error(ErrorCode::kSchema, "line " + std::to_string(line_no) + ": non-string split");
      }
      utterance.split = split_from_name(row["split"].get<std::string>());
    }
    if (normalize_text(utterance.transcript).empty()) {
      throw_error(ErrorCode::kSchema, "line " + std::to_string(line_no) +
                                          ": transcript normalizes to empty for \"" +
                                          utterance.id + "\"");
    }
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (std::find_if(std::begin(kKnownFields), std::end(kKnownFields),
                       [&](const char* f) { return it.key() == f; }) ==
          std::end(kKnownFields)) {
        utterance.extra[it.key()] = it.value();
      }
    }
    if (!ids.insert(utterance.id).second) {
      throw_error(ErrorCode::kDuplicateId,
                  "duplicate utterance id \"" + utterance.id + "\" at line " +
                      std::to_string(line_no));
    }
    manifest.utterances.push_back(std::move(utterance));
  });
  return manifest;
}

nlohmann::json utterance_to_json(const Utterance& utterance) {
  nlohmann::json row = utterance.extra;
  row["id"] = utterance.id;
  row["speaker_id"] = utterance.speaker_id;
  row["transcript"] = utterance.transcript;
  row["audio_ref"] = utterance.audio_ref;
  if (utterance.severity != Severity::kUnknown) {
    row["severity"] = std::string(severity_name(utterance.severity));
  }
  if (utterance.split != Split::kUnassigned) {
    row["split"] = std::string(split_name(utterance.split));
  }
  return row;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::vector<nlohmann::json> rows;
  rows.reserve(manifest.utterances.size());
  for (const auto& utterance : manifest.utterances) {
    rows.push_back(utterance_to_json(utterance));
  }
  write_jsonl(path, rows);
}

SplitResult split_speaker_phrase_disjoint(const Manifest& manifest, double test_fraction,
                                          uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw_error(ErrorCode::kInvalidArgument, "test_fraction must be in (0,1)");
  }
  std::vector<std::string> speakers = manifest.speakers();
  if (speakers.size() < 2) {
    throw_error(ErrorCode::kInsufficientSpeakers,
                "need >= 2 distinct speakers, got " + std::to_string(speakers.size()));
  }

  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(speakers);
  auto n_test = static_cast<size_t>(std::llround(test_fraction * speakers.size()));
  n_test = std::clamp<size_t>(n_test, 1, speakers.size() - 1);
  std::unordered_set<std::string> test_speakers(speakers.begin(), speakers.begin() + n_test);

  SplitResult result;
  result.train.source_name = manifest.source_name + "/train";
  result.test.source_name = manifest.source_name + "/test";

  std::unordered_set<std::string> train_phrases;
  for (const auto& utterance : manifest.utterances) {
    if (!test_speakers.contains(utterance.speaker_id)) {
      Utterance copy = utterance;
      copy.split = Split::kTrain;
      train_phrases.insert(normalize_joined(copy.transcript));
      result.train.utterances.push_back(std::move(copy));
    }
  }
  for (const auto& utterance : manifest.utterances) {
    if (test_speakers.contains(utterance.speaker_id)) {
      if (train_phrases.contains(normalize_joined(utterance.transcript))) {
        ++result.dropped_phrase_conflicts;
        continue;
      }
      Utterance copy = utterance;
      copy.split = Split::kTest;
      result.test.utterances.push_back(std::move(copy));
    }
  }
  return result;
}

std::vector<Utterance> enrollment_pool(const Manifest& manifest, std::string_view speaker_id,
                                       const std::optional<std::string>& exclude_id) {
  if (!manifest.has_speaker(speaker_id)) {
    throw_error(ErrorCode::kUnknownSpeaker, std::string(speaker_id));
  }
  std::vector<Utterance> pool;
  for (const auto& utterance : manifest.utterances) {
    if (utterance.speaker_id != speaker_id) continue;
    if (exclude_id && utterance.id == *exclude_id) continue;
    pool.push_back(utterance);
  }
  return pool;
}

namespace {

// Small command-style vocabulary for the seeded phrase bank. Phrases built
// from it share words heavily, which gives the hashed-ngram embedder a
// usable similarity spread between same-speaker utterances.
const char* const kVocabulary[] = {
    "call",    "my",      "mom",     "dad",     "please",  "now",      "weather",
    "today",   "tomorrow", "turn",   "on",      "off",     "the",      "lights",
    "play",    "some",    "music",   "stop",    "next",    "song",     "set",
    "a",       "timer",   "for",     "ten",     "minutes", "what",     "time",
    "is",      "it",      "open",    "front",   "door",    "close",    "window",
    "read",    "new",     "messages", "send",   "text",    "to",       "john",
    "volume",  "up",      "down",    "thank",   "you",     "help",     "me",
    "find",    "phone",   "remind",  "about",   "doctor",  "appointment",
};
constexpr size_t kVocabularySize = sizeof(kVocabulary) / sizeof(kVocabulary[0]);

std::string make_phrase(Rng& rng) {
  size_t words = 3 + rng.below(4);  // 3..6 words
  std::vector<std::string> tokens;
  tokens.reserve(words);
  for (size_t i = 0; i < words; ++i) {
    tokens.push_back(kVocabulary[rng.below(kVocabularySize)]);
  }
  return join_tokens(tokens);
}

std::string format_index(const char* prefix, int index, int width) {
  std::string digits = std::to_string(index);
  std::string out(prefix);
  out.append(width > static_cast<int>(digits.size())
                 ? static_cast<size_t>(width) - digits.size()
                 : 0,
             '0');
  out += digits;
  return out;
}

}  // namespace

Manifest generate_synthetic_corpus(const SynthConfig& config) {
  if (config.n_speakers < 1 || config.utterances_per_speaker < 1 ||
      config.phrase_bank_size < 1) {
    throw_error(ErrorCode::kInvalidArgument, "all counts must be >= 1");
  }
  double weight_sum = 0.0;
  for (const auto& [severity, weight] : config.severity_mix) {
    if (weight < 0.0) {
      throw_error(ErrorCode::kInvalidDistribution, "negative severity weight");
    }
    weight_sum += weight;
  }
  if (!(weight_sum > 0.0)) {
    throw_error(ErrorCode::kInvalidDistribution, "severity weights sum to zero");
  }

  Rng bank_rng(derive_seed(config.seed, "phrase-bank"));
  std::vector<std::string> bank;
  std::unordered_set<std::string> bank_set;
  while (static_cast<int>(bank.size()) < config.phrase_bank_size) {
    std::string phrase = make_phrase(bank_rng);
    if (bank_set.insert(phrase).second) {
      bank.push_back(std::move(phrase));
    }
  }

  std::vector<Severity> severities;
  std::vector<double> weights;
  for (const auto& [severity, weight] : config.severity_mix) {
    severities.push_back(severity);
    weights.push_back(weight);
  }

  Manifest manifest;
  manifest.source_name = "synthetic";
  for (int s = 0; s < config.n_speakers; ++s) {
    std::string speaker_id = format_index("spk", s, 3);
    Rng speaker_rng(derive_seed(config.seed, "speaker", speaker_id));
    Severity severity = severities[speaker_rng.weighted(weights)];

    // Without replacement while the bank lasts; wraps around (new shuffle)
    // only when a speaker needs more phrases than the bank holds.
    std::vector<size_t> order = speaker_rng.sample_indices(bank.size(), bank.size());
    for (int u = 0; u < config.utterances_per_speaker; ++u) {
      if (u > 0 && u % static_cast<int>(bank.size()) == 0) {
        order = speaker_rng.sample_indices(bank.size(), bank.size());
      }
      Utterance utterance;
      utterance.id = speaker_id + "-" + format_index("utt", u, 4);
      utterance.speaker_id = speaker_id;
      utterance.transcript = bank[order[u % bank.size()]];
      utterance.audio_ref = "synth://" + speaker_id + "/" + format_index("utt", u, 4);
      utterance.severity = severity;
      manifest.utterances.push_back(std::move(utterance));
    }
  }
  return manifest;
}

}  // namespace iclenroll

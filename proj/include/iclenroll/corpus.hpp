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

#ifndef ICLENROLL_CORPUS_HPP_
#define ICLENROLL_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace iclenroll {

enum class Severity { kMild, kModerate, kSevere, kUnknown };
enum class Split { kTrain, kTest, kUnassigned };

std::string_view severity_name(Severity severity);
Severity severity_from_name(std::string_view name);
std::string_view split_name(Split split);
Split split_from_name(std::string_view name);

// One audio/transcript pair; the atom of every pipeline. Unknown manifest
// fields ride along in `extra` and survive a save/load round-trip.
struct Utterance {
  std::string id;
  std::string speaker_id;
  std::string transcript;
  std::string audio_ref;
  Severity severity = Severity::kUnknown;
  Split split = Split::kUnassigned;
  nlohmann::json extra = nlohmann::json::object();
};

struct Manifest {
  std::vector<Utterance> utterances;
  std::string source_name;

  // Distinct speaker ids in first-appearance order.
  std::vector<std::string> speakers() const;
  const Utterance* find(std::string_view utterance_id) const;
  bool has_speaker(std::string_view speaker_id) const;
};

// Parses one JSON object per line ({"id","speaker_id","transcript",
// "audio_ref","severity"?,"split"?}), preserving row order.
// Errors: kDuplicateId, kSchema (with line number), kIo.
Manifest load_manifest(const std::filesystem::path& path);

void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

nlohmann::json utterance_to_json(const Utterance& utterance);

struct SplitResult {
  Manifest train;
  Manifest test;
  // Test-side utterances dropped because their normalized phrase already
  // appears on the train side.
  int dropped_phrase_conflicts = 0;
};

// Seeded speaker-level partition targeting test_fraction of speakers, then
// phrase disjointness enforced on normalized transcripts (train retains,
// test drops). Requires >= 2 distinct speakers.
SplitResult split_speaker_phrase_disjoint(const Manifest& manifest, double test_fraction,
                                          uint64_t seed);

// All utterances of a speaker except exclude_id, in manifest order.
std::vector<Utterance> enrollment_pool(const Manifest& manifest, std::string_view speaker_id,
                                       const std::optional<std::string>& exclude_id = {});

struct SynthConfig {
  int n_speakers = 10;
  int utterances_per_speaker = 20;
  std::map<Severity, double> severity_mix = {
      {Severity::kMild, 1.0}, {Severity::kModerate, 1.0}, {Severity::kSevere, 1.0}};
  int phrase_bank_size = 64;
  uint64_t seed = 0;
};

// Deterministic synthetic corpus: one severity per speaker, transcripts from
// a seeded phrase bank (drawn without replacement per speaker while the bank
// lasts), audio_ref = synth://<speaker>/<utterance>.
Manifest generate_synthetic_corpus(const SynthConfig& config);

}  // namespace iclenroll

#endif  // ICLENROLL_CORPUS_HPP_

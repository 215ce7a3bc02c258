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

#ifndef ICLENROLL_PROMPT_HPP_
#define ICLENROLL_PROMPT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "iclenroll/corpus.hpp"
#include "iclenroll/curation.hpp"

namespace iclenroll {

inline constexpr std::string_view kDefaultInstruction =
    "Transcribe the final audio. Prior audio/text pairs are examples from the same speaker.";

// Support pairs in curated order followed by one query to transcribe.
// support may be empty (0-shot); the query never appears in it.
struct IclPrompt {
  std::string instruction;
  SupportSet support;
  std::string query_id;
  std::string query_audio_ref;
};

// Errors: kSpeakerMismatch when support and query disagree, kQueryLeak when
// the query id appears among support items.
IclPrompt build_prompt(const SupportSet& support, const Utterance& query,
                       std::string_view instruction = kDefaultInstruction);

enum class TrainingKind { kZeroShot, kNShot };

std::string_view training_kind_name(TrainingKind kind);

struct TrainingRecord {
  TrainingKind kind = TrainingKind::kZeroShot;
  IclPrompt prompt;
  std::string target;  // reference transcript of the query
  std::string speaker_id;
};

nlohmann::json training_record_to_json(const TrainingRecord& record);
TrainingRecord training_record_from_json(const nlohmann::json& row);

enum class ExportMode { kZeroOnly, kNShotOnly, kMixed };

ExportMode export_mode_from_name(std::string_view name);

struct ExportCounts {
  int zero = 0;
  int nshot = 0;
};

struct ExportSummary {
  int written_zero = 0;
  int written_nshot = 0;
  int skipped_speakers = 0;   // too few utterances for shots+1
  bool clipped_zero = false;  // request exceeded available unique queries
  bool clipped_nshot = false;
};

// Writes one JSON object per line: {"kind","instruction","support":
// [{"audio_ref","transcript"}...],"query_audio_ref","target","speaker_id"}.
// Eligible rows are the manifest's non-test utterances. Deterministic per
// arguments; support is sampled without replacement excluding the query.
ExportSummary export_training(const Manifest& manifest, ExportMode mode, ExportCounts counts,
                              int shots, uint64_t seed, const std::filesystem::path& out,
                              std::string_view instruction = kDefaultInstruction);

// Seeded uniform subsample of ceil(fraction * total) records preserving the
// zero/n-shot mix within one record. Selection uses per-line hash
// priorities, so for a fixed seed smaller fractions nest inside larger ones.
size_t subsample_training(const std::filesystem::path& records_path, double fraction,
                          uint64_t seed, const std::filesystem::path& out);

}  // namespace iclenroll

#endif  // ICLENROLL_PROMPT_HPP_

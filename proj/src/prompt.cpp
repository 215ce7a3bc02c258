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

#include "iclenroll/prompt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "iclenroll/error.hpp"
#include "iclenroll/io.hpp"
#include "iclenroll/rng.hpp"

namespace iclenroll {

IclPrompt build_prompt(const SupportSet& support, const Utterance& query,
                       std::string_view instruction) {
  if (!support.empty() && support.speaker_id != query.speaker_id) {
    throw_error(ErrorCode::kSpeakerMismatch, "support speaker \"" + support.speaker_id +
                                                 "\" vs query speaker \"" + query.speaker_id +
                                                 "\"");
  }
  if (support.contains(query.id)) {
    throw_error(ErrorCode::kQueryLeak, "query \"" + query.id + "\" present in support");
  }
  IclPrompt prompt;
  prompt.instruction = std::string(instruction);
  prompt.support = support;
  prompt.query_id = query.id;
  prompt.query_audio_ref = query.audio_ref;
  return prompt;
}

std::string_view training_kind_name(TrainingKind kind) {
  return kind == TrainingKind::kZeroShot ? "zero_shot" : "n_shot";
}

nlohmann::json training_record_to_json(const TrainingRecord& record) {
  nlohmann::json support = nlohmann::json::array();
  for (const auto& item : record.prompt.support.items) {
    support.push_back({{"audio_ref", item.audio_ref}, {"transcript", item.transcript}});
  }
  return nlohmann::json{{"kind", std::string(training_kind_name(record.kind))},
                        {"instruction", record.prompt.instruction},
                        {"support", support},
                        {"query_audio_ref", record.prompt.query_audio_ref},
                        {"target", record.target},
                        {"speaker_id", record.speaker_id}};
}

TrainingRecord training_record_from_json(const nlohmann::json& row) {
  TrainingRecord record;
  std::string kind = row.at("kind").get<std::string>();
  if (kind == "zero_shot") {
    record.kind = TrainingKind::kZeroShot;
  } else if (kind == "n_shot") {
    record.kind = TrainingKind::kNShot;
  } else {
    throw_error(ErrorCode::kSchema, "unknown record kind \"" + kind + "\"");
  }
  record.prompt.instruction = row.at("instruction").get<std::string>();
  for (const auto& item : row.at("support")) {
    record.prompt.support.items.push_back(
        SupportItem{"", item.at("audio_ref").get<std::string>(),
                    item.at("transcript").get<std::string>()});
  }
  record.prompt.query_audio_ref = row.at("query_audio_ref").get<std::string>();
  record.target = row.at("target").get<std::string>();
  record.speaker_id = row.at("speaker_id").get<std::string>();
  record.prompt.support.speaker_id = record.speaker_id;
  return record;
}

ExportMode export_mode_from_name(std::string_view name) {
  if (name == "zero_only") return ExportMode::kZeroOnly;
  if (name == "nshot_only") return ExportMode::kNShotOnly;
  if (name == "mixed") return ExportMode::kMixed;
  throw_error(ErrorCode::kInvalidArgument, "unknown export mode \"" + std::string(name) + "\"");
}

ExportSummary export_training(const Manifest& manifest, ExportMode mode, ExportCounts counts,
                              int shots, uint64_t seed, const std::filesystem::path& out,
                              std::string_view instruction) {
  const bool wants_zero = mode != ExportMode::kNShotOnly;
  const bool wants_nshot = mode != ExportMode::kZeroOnly;
  if (wants_nshot && shots < 1) {
    throw_error(ErrorCode::kInvalidArgument, "shots must be >= 1 for n-shot exports");
  }
  if (counts.zero < 0 || counts.nshot < 0) {
    throw_error(ErrorCode::kInvalidArgument, "record counts must be >= 0");
  }

  // Training queries and support come only from the non-test side.
  std::vector<const Utterance*> eligible;
  for (const auto& utterance : manifest.utterances) {
    if (utterance.split != Split::kTest) eligible.push_back(&utterance);
  }
  if (eligible.empty()) {
    throw_error(ErrorCode::kEmptyInput, "manifest has no train-side utterances");
  }

  std::unordered_map<std::string, std::vector<const Utterance*>> by_speaker;
  for (const Utterance* utterance : eligible) {
    by_speaker[utterance->speaker_id].push_back(utterance);
  }

  ExportSummary summary;
  std::vector<nlohmann::json> rows;

  if (wants_zero) {
    size_t want = static_cast<size_t>(counts.zero);
    if (want > eligible.size()) {
      want = eligible.size();
      summary.clipped_zero = true;
    }
    Rng rng(derive_seed(seed, "export-zero"));
    for (size_t idx : rng.sample_indices(eligible.size(), want)) {
      const Utterance& query = *eligible[idx];
      TrainingRecord record;
      record.kind = TrainingKind::kZeroShot;
      record.prompt = build_prompt(SupportSet{}, query, instruction);
      record.target = query.transcript;
      record.speaker_id = query.speaker_id;
      rows.push_back(training_record_to_json(record));
      ++summary.written_zero;
    }
  }

  if (wants_nshot) {
    std::vector<const Utterance*> nshot_queries;
    for (const Utterance* utterance : eligible) {
      if (static_cast<int>(by_speaker[utterance->speaker_id].size()) >= shots + 1) {
        nshot_queries.push_back(utterance);
      }
    }
    for (const auto& [speaker, pool] : by_speaker) {
      if (static_cast<int>(pool.size()) < shots + 1) ++summary.skipped_speakers;
    }
    if (nshot_queries.empty()) {
      throw_error(ErrorCode::kNoEligibleSpeakers,
                  "no speaker has >= " + std::to_string(shots + 1) + " utterances");
    }
    size_t want = static_cast<size_t>(counts.nshot);
    if (want > nshot_queries.size()) {
      want = nshot_queries.size();
      summary.clipped_nshot = true;
    }
    Rng rng(derive_seed(seed, "export-nshot"));
    for (size_t idx : rng.sample_indices(nshot_queries.size(), want)) {
      const Utterance& query = *nshot_queries[idx];
      const auto& speaker_pool = by_speaker[query.speaker_id];

      std::vector<const Utterance*> candidates;
      for (const Utterance* utterance : speaker_pool) {
        if (utterance->id != query.id) candidates.push_back(utterance);
      }
      SupportSet support;
      support.speaker_id = query.speaker_id;
      support.strategy = CurationStrategy::kRandom;
      support.requested_shots = shots;
      Rng support_rng(derive_seed(seed, "export-support", query.id));
      for (size_t c : support_rng.sample_indices(candidates.size(),
                                                 static_cast<size_t>(shots))) {
        support.items.push_back(SupportItem{candidates[c]->id, candidates[c]->audio_ref,
                                            candidates[c]->transcript});
      }

      TrainingRecord record;
      record.kind = TrainingKind::kNShot;
      record.prompt = build_prompt(support, query, instruction);
      record.target = query.transcript;
      record.speaker_id = query.speaker_id;
      rows.push_back(training_record_to_json(record));
      ++summary.written_nshot;
    }
  }

  write_jsonl(out, rows);
  return summary;
}

size_t subsample_training(const std::filesystem::path& records_path, double fraction,
                          uint64_t seed, const std::filesystem::path& out) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw_error(ErrorCode::kInvalidArgument, "fraction must be in (0,1]");
  }
  std::vector<std::string> lines;
  for (const std::string& line : read_lines(records_path)) {
    if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back(line);
  }
  if (lines.empty()) {
    throw_error(ErrorCode::kEmptyExport, records_path.string());
  }

  std::vector<size_t> zero_lines;
  std::vector<size_t> nshot_lines;
  for (size_t i = 0; i < lines.size(); ++i) {
    nlohmann::json row = nlohmann::json::parse(lines[i], nullptr, false);
    if (row.is_discarded() || !row.contains("kind")) {
      throw_error(ErrorCode::kSchema,
                  "line " + std::to_string(i + 1) + ": not a training record");
    }
    if (row["kind"] == "zero_shot") {
      zero_lines.push_back(i);
    } else if (row["kind"] == "n_shot") {
      nshot_lines.push_back(i);
    } else {
      throw_error(ErrorCode::kSchema, "line " + std::to_string(i + 1) + ": unknown kind");
    }
  }

  const auto total = static_cast<double>(lines.size());
  auto total_k = static_cast<size_t>(std::ceil(fraction * total));
  auto k_zero = static_cast<size_t>(std::llround(fraction * static_cast<double>(zero_lines.size())));
  k_zero = std::min(k_zero, zero_lines.size());
  size_t k_nshot = total_k > k_zero ? total_k - k_zero : 0;
  if (k_nshot > nshot_lines.size()) {
    k_zero = std::min(zero_lines.size(), k_zero + (k_nshot - nshot_lines.size()));
    k_nshot = nshot_lines.size();
  }

  // Per-line hash priorities: the k smallest per kind. Content-addressed, so
  // re-subsampling an output with the same seed selects a nested subset.
  const uint64_t salt = derive_seed(seed, "subsample");
  auto select = [&](const std::vector<size_t>& group, size_t k) {
    std::vector<std::pair<uint64_t, size_t>> ranked;
    ranked.reserve(group.size());
    for (size_t idx : group) {
      ranked.emplace_back(fnv1a64(lines[idx], salt), idx);
    }
    std::sort(ranked.begin(), ranked.end());
    ranked.resize(std::min(k, ranked.size()));
    std::vector<size_t> picked;
    picked.reserve(ranked.size());
    for (const auto& [priority, idx] : ranked) picked.push_back(idx);
    return picked;
  };

  std::vector<size_t> selected = select(zero_lines, k_zero);
  std::vector<size_t> selected_nshot = select(nshot_lines, k_nshot);
  selected.insert(selected.end(), selected_nshot.begin(), selected_nshot.end());
  std::sort(selected.begin(), selected.end());

  std::string content;
  for (size_t idx : selected) {
    content += lines[idx];
    content += '\n';
  }
  atomic_write_file(out, content);
  return selected.size();
}

}  // namespace iclenroll

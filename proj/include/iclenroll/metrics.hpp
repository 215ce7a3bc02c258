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

#ifndef ICLENROLL_METRICS_HPP_
#define ICLENROLL_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iclenroll/corpus.hpp"
#include "iclenroll/text.hpp"

namespace iclenroll {

// Edit counts for one (reference, hypothesis) pair over normalized tokens.
// wer() may exceed 1.0 when insertions dominate; it is never clipped.
struct WerBreakdown {
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
  int ref_len = 0;

  int errors() const { return substitutions + insertions + deletions; }
  double wer() const { return static_cast<double>(errors()) / ref_len; }

  bool operator==(const WerBreakdown&) const = default;
};

// Minimal-edit alignment over normalized tokens with unit costs. Among
// minimal alignments the breakdown maximizes matches (backtrace preference
// match > substitution > deletion > insertion).
// Throws Error(kEmptyReference) when the reference normalizes to nothing.
WerBreakdown wer(std::string_view reference, std::string_view hypothesis);

// Token-level variant for callers that already normalized.
WerBreakdown wer_tokens(const std::vector<std::string>& reference,
                        const std::vector<std::string>& hypothesis);

// Micro average: sum of errors over sum of reference lengths.
double corpus_wer(std::span<const WerBreakdown> items);

enum class GroupKey { kSeverity, kSpeaker };

// Micro-aggregated WER per group; utterances with an unknown severity land
// under "unknown".
std::map<std::string, double> wer_by_group(
    const std::vector<std::pair<Utterance, WerBreakdown>>& results, GroupKey key);

// Per-utterance results row: {"id","ref","hyp","S","I","D","ref_len","wer"}.
struct UtteranceResult {
  std::string id;
  std::string ref;
  std::string hyp;
  WerBreakdown breakdown;
};

nlohmann::json result_to_json(const UtteranceResult& result);
UtteranceResult result_from_json(const nlohmann::json& row);

}  // namespace iclenroll

#endif  // ICLENROLL_METRICS_HPP_

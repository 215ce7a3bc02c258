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

#include "iclenroll/metrics.hpp"

#include <cstdint>

#include "iclenroll/error.hpp"

namespace iclenroll {

namespace {

struct Cell {
  int32_t edits = 0;
  int32_t matches = 0;
};

// Lexicographic order: fewer edits first, then more matches.
bool better(const Cell& a, const Cell& b) {
  return a.edits < b.edits || (a.edits == b.edits && a.matches > b.matches);
}

}  // namespace

WerBreakdown wer_tokens(const std::vector<std::string>& reference,
                        const std::vector<std::string>& hypothesis) {
  const size_t R = reference.size();
  const size_t H = hypothesis.size();
  if (R == 0) {
    throw_error(ErrorCode::kEmptyReference, "reference normalizes to empty");
  }

  // dp[i][j]: best (edits, matches) aligning reference[0..i) to hypothesis[0..j).
  std::vector<Cell> dp((R + 1) * (H + 1));
  auto at = [&](size_t i, size_t j) -> Cell& { return dp[i * (H + 1) + j]; };
  for (size_t j = 1; j <= H; ++j) at(0, j) = {static_cast<int32_t>(j), 0};
  for (size_t i = 1; i <= R; ++i) at(i, 0) = {static_cast<int32_t>(i), 0};

  for (size_t i = 1; i <= R; ++i) {
    for (size_t j = 1; j <= H; ++j) {
      const bool eq = reference[i - 1] == hypothesis[j - 1];
      Cell diag = at(i - 1, j - 1);
      if (eq) {
        ++diag.matches;
      } else {
        ++diag.edits;
      }
      Cell del = at(i - 1, j);
      ++del.edits;
      Cell ins = at(i, j - 1);
      ++ins.edits;
      Cell best = diag;
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      at(i, j) = best;
    }
  }

  // Backtrace, preferring match > substitution > deletion > insertion among
  // moves consistent with the optimal cell.
  WerBreakdown breakdown;
  breakdown.ref_len = static_cast<int>(R);
  size_t i = R;
  size_t j = H;
  while (i > 0 || j > 0) {
    const Cell& cur = at(i, j);
    if (i > 0 && j > 0) {
      const bool eq = reference[i - 1] == hypothesis[j - 1];
      Cell diag = at(i - 1, j - 1);
      if (eq && diag.edits == cur.edits && diag.matches + 1 == cur.matches) {
        --i;
        --j;
        continue;
      }
      if (!eq && diag.edits + 1 == cur.edits && diag.matches == cur.matches) {
        ++breakdown.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0) {
      Cell del = at(i - 1, j);
      if (del.edits + 1 == cur.edits && del.matches == cur.matches) {
        ++breakdown.deletions;
        --i;
        continue;
      }
    }
    ++breakdown.insertions;
    --j;
  }
  return breakdown;
}

WerBreakdown wer(std::string_view reference, std::string_view hypothesis) {
  return wer_tokens(normalize_text(reference), normalize_text(hypothesis));
}

double corpus_wer(std::span<const WerBreakdown> items) {
  if (items.empty()) {
    throw_error(ErrorCode::kEmptyInput, "corpus_wer over empty list");
  }
  int64_t errors = 0;
  int64_t ref_len = 0;
  for (const auto& item : items) {
    errors += item.errors();
    ref_len += item.ref_len;
  }
  return static_cast<double>(errors) / static_cast<double>(ref_len);
}

std::map<std::string, double> wer_by_group(
    const std::vector<std::pair<Utterance, WerBreakdown>>& results, GroupKey key) {
  std::map<std::string, std::vector<WerBreakdown>> groups;
  for (const auto& [utterance, breakdown] : results) {
    std::string group = key == GroupKey::kSeverity
                            ? std::string(severity_name(utterance.severity))
                            : utterance.speaker_id;
    groups[group].push_back(breakdown);
  }
  std::map<std::string, double> table;
  for (const auto& [group, items] : groups) {
    table[group] = corpus_wer(items);
  }
  return table;
}

nlohmann::json result_to_json(const UtteranceResult& result) {
  return nlohmann::json{{"id", result.id},
                        {"ref", result.ref},
                        {"hyp", result.hyp},
                        {"S", result.breakdown.substitutions},
                        {"I", result.breakdown.insertions},
                        {"D", result.breakdown.deletions},
                        {"ref_len", result.breakdown.ref_len},
                        {"wer", result.breakdown.wer()}};
}

UtteranceResult result_from_json(const nlohmann::json& row) {
  UtteranceResult result;
  result.id = row.at("id").get<std::string>();
  result.ref = row.at("ref").get<std::string>();
  result.hyp = row.at("hyp").get<std::string>();
  result.breakdown.substitutions = row.at("S").get<int>();
  result.breakdown.insertions = row.at("I").get<int>();
  result.breakdown.deletions = row.at("D").get<int>();
  result.breakdown.ref_len = row.at("ref_len").get<int>();
  return result;
}

}  // namespace iclenroll

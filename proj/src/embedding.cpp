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

#include "iclenroll/embedding.hpp"

#include <cmath>

#include "iclenroll/error.hpp"
#include "iclenroll/io.hpp"
#include "iclenroll/rng.hpp"
#include "iclenroll/text.hpp"

namespace iclenroll {

Eigen::VectorXd embed_hashed_ngrams(std::string_view text, int dim, int ngram_order) {
  if (dim < 8) {
    throw_error(ErrorCode::kInvalidArgument, "embedding dim must be >= 8");
  }
  if (ngram_order < 1 || ngram_order > 5) {
    throw_error(ErrorCode::kInvalidArgument, "ngram order must be in [1,5]");
  }
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(dim);
  std::string normalized = normalize_joined(text);
  if (normalized.empty()) {
    return vec;  // canonical zero vector, deliberately un-normalized
  }
  // Pad with spaces so word boundaries contribute their own n-grams.
  std::string padded = " " + normalized + " ";
  const size_t n = static_cast<size_t>(ngram_order);
  const size_t count = padded.size() >= n ? padded.size() - n + 1 : 1;
  const size_t gram_len = padded.size() >= n ? n : padded.size();
  for (size_t i = 0; i < count; ++i) {
    uint64_t h = fnv1a64(std::string_view(padded).substr(i, gram_len));
    auto bucket = static_cast<Eigen::Index>(h % static_cast<uint64_t>(dim));
    double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
    vec[bucket] += sign;
  }
  double norm = vec.norm();
  if (norm > 0.0) vec /= norm;
  return vec;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw_error(ErrorCode::kDimMismatch, "cosine over dims " + std::to_string(a.size()) +
                                             " and " + std::to_string(b.size()));
  }
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw_error(ErrorCode::kZeroVector, "cosine with zero vector");
  }
  double value = a.dot(b) / (na * nb);
  return std::clamp(value, -1.0, 1.0);
}

const Eigen::VectorXd& EmbeddingStore::at(const std::string& utterance_id) const {
  auto it = entries.find(utterance_id);
  if (it == entries.end()) {
    throw_error(ErrorCode::kMissingEmbedding, utterance_id);
  }
  return it->second;
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  EmbeddingStore store;
  for_each_jsonl(path, [&](size_t line_no, const nlohmann::json& row) {
    if (!row.is_object() || !row.contains("id") || !row.contains("vector") ||
        !row["vector"].is_array()) {
      throw_error(ErrorCode::kSchema,
                  "line " + std::to_string(line_no) + ": expected {\"id\",\"vector\"}");
    }
    std::string id = row["id"].get<std::string>();
    const auto& values = row["vector"];
    Eigen::VectorXd vec(static_cast<Eigen::Index>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) {
      double v = values[i].get<double>();
      if (!std::isfinite(v)) {
        throw_error(ErrorCode::kSchema,
                    "line " + std::to_string(line_no) + ": non-finite entry");
      }
      vec[static_cast<Eigen::Index>(i)] = v;
    }
    if (store.dim == 0) {
      store.dim = vec.size();
    } else if (vec.size() != store.dim) {
      throw_error(ErrorCode::kDimMismatch,
                  "line " + std::to_string(line_no) + ": dim " + std::to_string(vec.size()) +
                      " != " + std::to_string(store.dim));
    }
    double norm = vec.norm();
    if (norm > 0.0) vec /= norm;
    if (!store.entries.emplace(id, std::move(vec)).second) {
      throw_error(ErrorCode::kDuplicateId, "duplicate embedding id \"" + id + "\"");
    }
  });
  return store;
}

void save_embeddings(const EmbeddingStore& store, const std::filesystem::path& path) {
  // Sorted by id so saves are reproducible.
  std::vector<std::string> ids;
  ids.reserve(store.entries.size());
  for (const auto& [id, vec] : store.entries) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  std::vector<nlohmann::json> rows;
  rows.reserve(ids.size());
  for (const auto& id : ids) {
    const Eigen::VectorXd& vec = store.entries.at(id);
    std::vector<double> values(vec.data(), vec.data() + vec.size());
    rows.push_back(nlohmann::json{{"id", id}, {"vector", values}});
  }
  write_jsonl(path, rows);
}

EmbeddingStore embed_manifest(const Manifest& manifest, int dim, int ngram_order) {
  EmbeddingStore store;
  store.dim = dim;
  for (const auto& utterance : manifest.utterances) {
    store.entries.emplace(utterance.id,
                          embed_hashed_ngrams(utterance.transcript, dim, ngram_order));
  }
  return store;
}

}  // namespace iclenroll

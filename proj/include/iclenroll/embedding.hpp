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

#ifndef ICLENROLL_EMBEDDING_HPP_
#define ICLENROLL_EMBEDDING_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>

#include <Eigen/Core>

#include "iclenroll/corpus.hpp"

namespace iclenroll {

// Deterministic sentence-embedding stand-in: character n-grams of the
// normalized text hashed into dim buckets with signed counts, L2-normalized.
// Empty normalized text yields the zero vector (norm 0, not normalizable).
Eigen::VectorXd embed_hashed_ngrams(std::string_view text, int dim = 256, int ngram_order = 3);

// dot(a,b)/(|a||b|), clamped to [-1,1]. Errors: kDimMismatch, kZeroVector.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Transcript embeddings keyed by utterance id; all vectors share dim.
struct EmbeddingStore {
  Eigen::Index dim = 0;
  std::unordered_map<std::string, Eigen::VectorXd> entries;

  const Eigen::VectorXd& at(const std::string& utterance_id) const;
  bool contains(const std::string& utterance_id) const {
    return entries.find(utterance_id) != entries.end();
  }
};

// One JSON object per line: {"id": string, "vector": [real,...]}. Vectors
// are L2-normalized on ingest (cosine is scale-invariant, rankings keep).
// Errors: kDimMismatch, kDuplicateId, kSchema, kIo.
EmbeddingStore load_embeddings(const std::filesystem::path& path);

void save_embeddings(const EmbeddingStore& store, const std::filesystem::path& path);

// Built-in embedder applied to every transcript of a manifest.
EmbeddingStore embed_manifest(const Manifest& manifest, int dim = 256, int ngram_order = 3);

}  // namespace iclenroll

#endif  // ICLENROLL_EMBEDDING_HPP_

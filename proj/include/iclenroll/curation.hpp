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

#ifndef ICLENROLL_CURATION_HPP_
#define ICLENROLL_CURATION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "iclenroll/corpus.hpp"
#include "iclenroll/embedding.hpp"

namespace iclenroll {

enum class CurationStrategy {
  kRandom,
  kDiversityCentroid,
  kUncertaintySorted,
  kSimilarityOracle,
};

// Report row label ("Random", "Diversity (Cluster Centroid)", ...).
std::string_view strategy_label(CurationStrategy strategy);
// Short CLI/config name (random, diversity, uncertainty, similarity).
std::string_view strategy_name(CurationStrategy strategy);
CurationStrategy strategy_from_name(std::string_view name);

struct SupportItem {
  std::string utterance_id;
  std::string audio_ref;
  std::string transcript;
};

// N same-speaker enrollment examples in curated order. oracle_only marks
// selections that used the query's reference transcript.
struct SupportSet {
  std::string speaker_id;
  std::vector<SupportItem> items;
  CurationStrategy strategy = CurationStrategy::kRandom;
  int requested_shots = 0;

  bool oracle_only() const { return strategy == CurationStrategy::kSimilarityOracle; }
  size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  bool contains(std::string_view utterance_id) const;
};

nlohmann::json support_set_to_json(const SupportSet& support);

// Seeded uniform sample without replacement; the first n of one seeded
// permutation, so selections nest across shot counts for a fixed seed.
SupportSet curate_random(const std::vector<Utterance>& pool, int n, uint64_t seed);

// k-means with k = n over pool embeddings; each cluster contributes its
// member nearest the centroid (ties by ascending utterance id), ordered by
// cluster index.
SupportSet curate_diversity(const std::vector<Utterance>& pool, const EmbeddingStore& store,
                            int n, uint64_t seed);

// Pool sorted by cached zero-shot WER descending, ties ascending by id.
SupportSet curate_uncertainty(const std::vector<Utterance>& pool,
                              const std::map<std::string, double>& zero_shot_wer, int n);

// Pool sorted by cosine to the query embedding descending, ties ascending by
// id. Oracle-only: the query embedding comes from its reference transcript.
SupportSet curate_similarity(const std::vector<Utterance>& pool, const EmbeddingStore& store,
                             const Eigen::VectorXd& query_embedding, int n);

struct KMeansResult {
  std::vector<int> assignments;   // one cluster index per point
  Eigen::MatrixXd centroids;      // dim x k
};

// Lloyd iterations from a seeded farthest-first initialization until the
// assignment fixpoint or max_iters. Empty clusters are reseeded with the
// point farthest from its current centroid. Points are matrix columns.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed, int max_iters = 100);

double kmeans_objective(const Eigen::MatrixXd& points, const KMeansResult& result);

// Zero-shot WER cache file: one JSON object per line {"id","wer"}.
std::map<std::string, double> load_wer_cache(const std::filesystem::path& path);
void save_wer_cache(const std::map<std::string, double>& cache,
                    const std::filesystem::path& path);

}  // namespace iclenroll

#endif  // ICLENROLL_CURATION_HPP_

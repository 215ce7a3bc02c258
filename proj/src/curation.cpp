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

#include "iclenroll/curation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "iclenroll/error.hpp"
#include "iclenroll/io.hpp"
#include "iclenroll/rng.hpp"

namespace iclenroll {

std::string_view strategy_label(CurationStrategy strategy) {
  switch (strategy) {
    case CurationStrategy::kRandom: return "Random";
    case CurationStrategy::kDiversityCentroid: return "Diversity (Cluster Centroid)";
    case CurationStrategy::kUncertaintySorted: return "Sorted (desc.) by Uncertainty";
    case CurationStrategy::kSimilarityOracle: return "Sorted (desc.) by Similarity";
  }
  return "Random";
}

std::string_view strategy_name(CurationStrategy strategy) {
  switch (strategy) {
    case CurationStrategy::kRandom: return "random";
    case CurationStrategy::kDiversityCentroid: return "diversity";
    case CurationStrategy::kUncertaintySorted: return "uncertainty";
    case CurationStrategy::kSimilarityOracle: return "similarity";
  }
  return "random";
}

CurationStrategy strategy_from_name(std::string_view name) {
  if (name == "random") return CurationStrategy::kRandom;
  if (name == "diversity") return CurationStrategy::kDiversityCentroid;
  if (name == "uncertainty") return CurationStrategy::kUncertaintySorted;
  if (name == "similarity") return CurationStrategy::kSimilarityOracle;
  throw_error(ErrorCode::kInvalidArgument, "unknown strategy \"" + std::string(name) + "\"");
}

bool SupportSet::contains(std::string_view utterance_id) const {
  return std::any_of(items.begin(), items.end(),
                     [&](const SupportItem& item) { return item.utterance_id == utterance_id; });
}

nlohmann::json support_set_to_json(const SupportSet& support) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : support.items) {
    items.push_back({{"utterance_id", item.utterance_id},
                     {"audio_ref", item.audio_ref},
                     {"transcript", item.transcript}});
  }
  return nlohmann::json{{"speaker_id", support.speaker_id},
                        {"strategy", std::string(strategy_name(support.strategy))},
                        {"requested_shots", support.requested_shots},
                        {"oracle_only", support.oracle_only()},
                        {"items", items}};
}

namespace {

SupportItem to_item(const Utterance& utterance) {
  return SupportItem{utterance.id, utterance.audio_ref, utterance.transcript};
}

SupportSet make_set(const std::vector<Utterance>& pool, CurationStrategy strategy, int n) {
  SupportSet support;
  support.speaker_id = pool.empty() ? std::string{} : pool.front().speaker_id;
  support.strategy = strategy;
  support.requested_shots = n;
  return support;
}

// Indices of the pool sorted descending by score, ties ascending by id.
std::vector<size_t> rank_descending(const std::vector<Utterance>& pool,
                                    const std::vector<double>& scores) {
  std::vector<size_t> order(pool.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return pool[a].id < pool[b].id;
  });
  return order;
}

}  // namespace

SupportSet curate_random(const std::vector<Utterance>& pool, int n, uint64_t seed) {
  if (n < 0) {
    throw_error(ErrorCode::kInvalidArgument, "shot count must be >= 0");
  }
  SupportSet support = make_set(pool, CurationStrategy::kRandom, n);
  Rng rng(derive_seed(seed, "curate-random"));
  for (size_t idx : rng.sample_indices(pool.size(), static_cast<size_t>(n))) {
    support.items.push_back(to_item(pool[idx]));
  }
  return support;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed, int max_iters) {
  const auto n = points.cols();
  if (k < 1 || k > n) {
    throw_error(ErrorCode::kInvalidK,
                "k=" + std::to_string(k) + " for " + std::to_string(n) + " points");
  }
  if (max_iters < 1) {
    throw_error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  }

  KMeansResult result;
  result.centroids.resize(points.rows(), k);
  result.assignments.assign(static_cast<size_t>(n), 0);

  // Farthest-first init: seeded first pick, then the point with the largest
  // distance to its nearest chosen centroid (ties to the lowest index).
  Rng rng(derive_seed(seed, "kmeans-init"));
  Eigen::VectorXd min_dist = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::max());
  Eigen::Index first = static_cast<Eigen::Index>(rng.below(static_cast<uint64_t>(n)));
  result.centroids.col(0) = points.col(first);
  for (int c = 1; c < k; ++c) {
    min_dist = min_dist.cwiseMin(
        (points.colwise() - result.centroids.col(c - 1)).colwise().squaredNorm().transpose());
    Eigen::Index next = 0;
    min_dist.maxCoeff(&next);
    result.centroids.col(c) = points.col(next);
  }

  // Assignment: nearest centroid, ties to the lowest cluster index.
  auto assign = [&]() {
    bool changed = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      int best = 0;
      double best_dist = (points.col(p) - result.centroids.col(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        double d = (points.col(p) - result.centroids.col(c)).squaredNorm();
        if (d < best_dist) {
          best_dist = d;
          best = c;
        }
      }
      if (result.assignments[static_cast<size_t>(p)] != best) {
        result.assignments[static_cast<size_t>(p)] = best;
        changed = true;
      }
    }
    return changed;
  };

  bool converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = assign();
    if (!changed && iter > 0) {
      converged = true;
      break;
    }

    // Update step: centroid = member mean; empty clusters grab the point
    // farthest from its current centroid.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(points.rows(), k);
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (Eigen::Index p = 0; p < n; ++p) {
      sums.col(result.assignments[static_cast<size_t>(p)]) += points.col(p);
      ++counts[static_cast<size_t>(result.assignments[static_cast<size_t>(p)])];
    }
    std::unordered_set<Eigen::Index> reseeded;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] > 0) {
        result.centroids.col(c) = sums.col(c) / counts[static_cast<size_t>(c)];
      }
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] > 0) continue;
      Eigen::Index farthest = -1;
      double farthest_dist = -1.0;
      for (Eigen::Index p = 0; p < n; ++p) {
        if (reseeded.contains(p)) continue;
        int a = result.assignments[static_cast<size_t>(p)];
        double d = (points.col(p) - result.centroids.col(a)).squaredNorm();
        if (d > farthest_dist) {
          farthest_dist = d;
          farthest = p;
        }
      }
      if (farthest >= 0) {
        result.centroids.col(c) = points.col(farthest);
        reseeded.insert(farthest);
      }
    }
  }
  if (!converged) {
    assign();  // sync assignments with the last centroid update
  }
  return result;
}

double kmeans_objective(const Eigen::MatrixXd& points, const KMeansResult& result) {
  double total = 0.0;
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    total += (points.col(p) - result.centroids.col(result.assignments[static_cast<size_t>(p)]))
                 .squaredNorm();
  }
  return total;
}

SupportSet curate_diversity(const std::vector<Utterance>& pool, const EmbeddingStore& store,
                            int n, uint64_t seed) {
  if (n < 0) {
    throw_error(ErrorCode::kInvalidArgument, "shot count must be >= 0");
  }
  const int k = std::min<int>(n, static_cast<int>(pool.size()));
  SupportSet support = make_set(pool, CurationStrategy::kDiversityCentroid, n);
  if (k == 0) return support;

  Eigen::MatrixXd points(store.dim, static_cast<Eigen::Index>(pool.size()));
  for (size_t i = 0; i < pool.size(); ++i) {
    points.col(static_cast<Eigen::Index>(i)) = store.at(pool[i].id);
  }

  KMeansResult clusters = kmeans(points, k, seed);

  std::unordered_set<size_t> selected;
  for (int c = 0; c < k; ++c) {
    size_t best = pool.size();  // sentinel: empty cluster
    double best_dist = std::numeric_limits<double>::max();
    for (size_t p = 0; p < pool.size(); ++p) {
      if (clusters.assignments[p] != c) continue;
      double d = (points.col(static_cast<Eigen::Index>(p)) - clusters.centroids.col(c))
                     .squaredNorm();
      if (d < best_dist || (d == best_dist && best < pool.size() && pool[p].id < pool[best].id)) {
        best_dist = d;
        best = p;
      }
    }
    if (best < pool.size()) {
      selected.insert(best);
      support.items.push_back(to_item(pool[best]));
    }
  }

  // Degenerate pools (duplicated embeddings) can leave clusters empty even
  // after reseeding; backfill by ascending id so |items| == min(n, |pool|).
  if (static_cast<int>(support.items.size()) < k) {
    std::vector<size_t> rest;
    for (size_t p = 0; p < pool.size(); ++p) {
      if (!selected.contains(p)) rest.push_back(p);
    }
    std::sort(rest.begin(), rest.end(),
              [&](size_t a, size_t b) { return pool[a].id < pool[b].id; });
    for (size_t p : rest) {
      if (static_cast<int>(support.items.size()) >= k) break;
      support.items.push_back(to_item(pool[p]));
    }
  }
  return support;
}

SupportSet curate_uncertainty(const std::vector<Utterance>& pool,
                              const std::map<std::string, double>& zero_shot_wer, int n) {
  if (n < 0) {
    throw_error(ErrorCode::kInvalidArgument, "shot count must be >= 0");
  }
  std::vector<double> scores;
  scores.reserve(pool.size());
  for (const auto& utterance : pool) {
    auto it = zero_shot_wer.find(utterance.id);
    if (it == zero_shot_wer.end()) {
      throw_error(ErrorCode::kMissingScore, utterance.id);
    }
    scores.push_back(it->second);
  }
  SupportSet support = make_set(pool, CurationStrategy::kUncertaintySorted, n);
  std::vector<size_t> order = rank_descending(pool, scores);
  for (size_t i = 0; i < std::min<size_t>(order.size(), static_cast<size_t>(n)); ++i) {
    support.items.push_back(to_item(pool[order[i]]));
  }
  return support;
}

SupportSet curate_similarity(const std::vector<Utterance>& pool, const EmbeddingStore& store,
                             const Eigen::VectorXd& query_embedding, int n) {
  if (n < 0) {
    throw_error(ErrorCode::kInvalidArgument, "shot count must be >= 0");
  }
  if (query_embedding.norm() == 0.0) {
    throw_error(ErrorCode::kZeroVector, "query embedding is zero");
  }
  std::vector<double> scores;
  scores.reserve(pool.size());
  for (const auto& utterance : pool) {
    scores.push_back(cosine(query_embedding, store.at(utterance.id)));
  }
  SupportSet support = make_set(pool, CurationStrategy::kSimilarityOracle, n);
  std::vector<size_t> order = rank_descending(pool, scores);
  for (size_t i = 0; i < std::min<size_t>(order.size(), static_cast<size_t>(n)); ++i) {
    support.items.push_back(to_item(pool[order[i]]));
  }
  return support;
}

std::map<std::string, double> load_wer_cache(const std::filesystem::path& path) {
  std::map<std::string, double> cache;
  for_each_jsonl(path, [&](size_t line_no, const nlohmann::json& row) {
    if (!row.is_object() || !row.contains("id") || !row.contains("wer")) {
      throw_error(ErrorCode::kSchema,
                  "line " + std::to_string(line_no) + ": expected {\"id\",\"wer\"}");
    }
    std::string id = row["id"].get<std::string>();
    double value = row["wer"].get<double>();
    if (value < 0.0) {
      throw_error(ErrorCode::kSchema, "line " + std::to_string(line_no) + ": negative wer");
    }
    if (!cache.emplace(id, value).second) {
      throw_error(ErrorCode::kDuplicateId, "duplicate wer cache id \"" + id + "\"");
    }
  });
  return cache;
}

void save_wer_cache(const std::map<std::string, double>& cache,
                    const std::filesystem::path& path) {
  std::vector<nlohmann::json> rows;
  rows.reserve(cache.size());
  for (const auto& [id, value] : cache) {
    rows.push_back(nlohmann::json{{"id", id}, {"wer", value}});
  }
  write_jsonl(path, rows);
}

}  // namespace iclenroll

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

#include "iclenroll/backend.hpp"

#include <cmath>

#include "iclenroll/embedding.hpp"
#include "iclenroll/error.hpp"
#include "iclenroll/rng.hpp"
#include "iclenroll/text.hpp"

namespace iclenroll {

double default_base_error_rate(Severity severity) {
  switch (severity) {
    case Severity::kMild: return 0.10;
    case Severity::kModerate: return 0.25;
    case Severity::kSevere: return 0.45;
    case Severity::kUnknown: return 0.25;
  }
  return 0.25;
}

std::string_view backend_kind_name(BackendKind kind) {
  return kind == BackendKind::kSimulator ? "simulator" : "remote";
}

BackendKind backend_kind_from_name(std::string_view name) {
  if (name == "simulator") return BackendKind::kSimulator;
  if (name == "remote") return BackendKind::kRemote;
  throw_error(ErrorCode::kInvalidArgument, "unknown backend kind \"" + std::string(name) + "\"");
}

nlohmann::json backend_config_to_json(const BackendConfig& config) {
  return nlohmann::json{
      {"kind", std::string(backend_kind_name(config.kind))},
      {"endpoint", config.endpoint},
      {"auth_token_env", config.auth_token_env},
      {"max_in_flight", config.max_in_flight},
      {"retry",
       {{"max_attempts", config.retry.max_attempts},
        {"base_backoff_ms", config.retry.base_backoff_ms},
        {"jitter_fraction", config.retry.jitter_fraction}}},
      {"timeout_ms", config.timeout_ms},
      {"simulator",
       {{"icl_gain", config.simulator.icl_gain},
        {"competence", config.simulator.competence},
        {"shot_pseudocount", config.simulator.shot_pseudocount},
        {"embed_dim", config.simulator.embed_dim},
        {"embed_order", config.simulator.embed_order}}}};
}

BackendConfig backend_config_from_json(const nlohmann::json& row) {
  BackendConfig config;
  if (row.contains("kind")) {
    config.kind = backend_kind_from_name(row["kind"].get<std::string>());
  }
  config.endpoint = row.value("endpoint", config.endpoint);
  config.auth_token_env = row.value("auth_token_env", config.auth_token_env);
  config.max_in_flight = row.value("max_in_flight", config.max_in_flight);
  if (row.contains("retry")) {
    const auto& retry = row["retry"];
    config.retry.max_attempts = retry.value("max_attempts", config.retry.max_attempts);
    config.retry.base_backoff_ms = retry.value("base_backoff_ms", config.retry.base_backoff_ms);
    config.retry.jitter_fraction = retry.value("jitter_fraction", config.retry.jitter_fraction);
  }
  config.timeout_ms = row.value("timeout_ms", config.timeout_ms);
  if (row.contains("simulator")) {
    const auto& sim = row["simulator"];
    config.simulator.icl_gain = sim.value("icl_gain", config.simulator.icl_gain);
    config.simulator.competence = sim.value("competence", config.simulator.competence);
    config.simulator.shot_pseudocount =
        sim.value("shot_pseudocount", config.simulator.shot_pseudocount);
    config.simulator.embed_dim = sim.value("embed_dim", config.simulator.embed_dim);
    config.simulator.embed_order = sim.value("embed_order", config.simulator.embed_order);
  }
  if (config.kind == BackendKind::kRemote && config.endpoint.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "remote backend requires an endpoint");
  }
  if (config.max_in_flight < 1) {
    throw_error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");
  }
  return config;
}

double effective_error_rate(const SpeakerProfile& profile, double relevance) {
  return profile.base_error_rate * (1.0 - profile.icl_gain * relevance) *
         (1.0 - profile.competence);
}

double support_relevance(std::string_view query_transcript, const SupportSet& support,
                         const SimulatorParams& params) {
  if (support.empty()) return 0.0;
  Eigen::VectorXd query_vec =
      embed_hashed_ngrams(query_transcript, params.embed_dim, params.embed_order);
  if (query_vec.norm() == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& item : support.items) {
    Eigen::VectorXd vec =
        embed_hashed_ngrams(item.transcript, params.embed_dim, params.embed_order);
    if (vec.norm() == 0.0) continue;
    sum += std::max(0.0, cosine(query_vec, vec));
  }
  return sum / (static_cast<double>(support.size()) + params.shot_pseudocount);
}

double competence_from_fraction(double fraction, double c_max, double lambda) {
  if (fraction < 0.0) fraction = 0.0;
  return c_max * (1.0 - std::exp(-lambda * fraction));
}

double expected_simulated_wer(double p_eff) { return 1.1 * p_eff; }

namespace {

// Deterministic pseudo-word: four consonant-vowel syllables derived from the
// word and the speaker's confusion seed. The same word garbles the same way
// for one speaker (a consistent confusion lexicon) and the CVCVCVCV shape
// keeps it disjoint from real vocabulary.
std::string garble_word(std::string_view word, uint64_t confusion_seed, uint64_t salt) {
  static const char consonants[] = "bdfgklmnprstvz";
  static const char vowels[] = "aeiou";
  uint64_t h = derive_seed(confusion_seed, word, salt);
  std::string out;
  out.reserve(8);
  for (int i = 0; i < 4; ++i) {
    out.push_back(consonants[h % 14]);
    h /= 14;
    out.push_back(vowels[h % 5]);
    h /= 5;
    if (i == 1) h = fnv1a64(h);  // refresh entropy midway
  }
  return out;
}

}  // namespace

std::vector<std::string> corrupt_tokens(const std::vector<std::string>& tokens, double p_eff,
                                        uint64_t global_seed, std::string_view speaker_id,
                                        std::string_view query_id, uint64_t confusion_seed) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    double u = hash_to_unit(derive_seed(global_seed, "corrupt", speaker_id, query_id, i));
    if (u >= p_eff) {
      out.push_back(tokens[i]);
      continue;
    }
    double action = hash_to_unit(derive_seed(global_seed, "action", speaker_id, query_id, i));
    if (action < 0.7) {
      out.push_back(garble_word(tokens[i], confusion_seed, 0));
    } else if (action < 0.9) {
      // deletion
    } else {
      out.push_back(garble_word(tokens[i], confusion_seed, 0));
      out.push_back(garble_word(tokens[i], confusion_seed, 1));
    }
  }
  return out;
}

SimulatorBackend::SimulatorBackend(const Manifest& manifest, const SimulatorParams& params,
                                   uint64_t global_seed)
    : params_(params), global_seed_(global_seed) {
  for (const auto& utterance : manifest.utterances) {
    by_audio_ref_[utterance.audio_ref] =
        ReferenceEntry{utterance.transcript, utterance.speaker_id};
    if (!profiles_.contains(utterance.speaker_id)) {
      SpeakerProfile profile;
      profile.speaker_id = utterance.speaker_id;
      profile.severity = utterance.severity;
      profile.base_error_rate = default_base_error_rate(utterance.severity);
      profile.icl_gain = params.icl_gain;
      profile.competence = params.competence;
      profile.confusion_seed = derive_seed(global_seed, "confusion", utterance.speaker_id);
      profiles_[utterance.speaker_id] = profile;
    }
  }
}

const SimulatorBackend::ReferenceEntry& SimulatorBackend::lookup(const IclPrompt& prompt) const {
  auto it = by_audio_ref_.find(prompt.query_audio_ref);
  if (it == by_audio_ref_.end()) {
    throw_error(ErrorCode::kUnknownSpeaker,
                "no reference for audio \"" + prompt.query_audio_ref + "\"");
  }
  return it->second;
}

const SpeakerProfile& SimulatorBackend::profile(const std::string& speaker_id) const {
  auto it = profiles_.find(speaker_id);
  if (it == profiles_.end()) {
    throw_error(ErrorCode::kUnknownSpeaker, speaker_id);
  }
  return it->second;
}

void SimulatorBackend::set_profile(const SpeakerProfile& profile) {
  profiles_[profile.speaker_id] = profile;
}

void SimulatorBackend::set_competence_all(double competence) {
  for (auto& [speaker_id, profile] : profiles_) {
    profile.competence = competence;
  }
}

double SimulatorBackend::relevance(const IclPrompt& prompt) const {
  const ReferenceEntry& entry = lookup(prompt);
  return support_relevance(entry.transcript, prompt.support, params_);
}

std::string SimulatorBackend::transcribe(const IclPrompt& prompt) {
  const ReferenceEntry& entry = lookup(prompt);
  const SpeakerProfile& speaker = profile(entry.speaker_id);
  double rel = support_relevance(entry.transcript, prompt.support, params_);
  double p_eff = effective_error_rate(speaker, rel);
  std::vector<std::string> tokens = normalize_text(entry.transcript);
  std::vector<std::string> corrupted =
      corrupt_tokens(tokens, p_eff, global_seed_, entry.speaker_id, prompt.query_id,
                     speaker.confusion_seed);
  return join_tokens(corrupted);
}

}  // namespace iclenroll

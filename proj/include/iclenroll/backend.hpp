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

#ifndef ICLENROLL_BACKEND_HPP_
#define ICLENROLL_BACKEND_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iclenroll/corpus.hpp"
#include "iclenroll/prompt.hpp"

namespace iclenroll {

double default_base_error_rate(Severity severity);

// Parameters of the deterministic speaker-confusion channel. competence
// stands in for training-data volume; icl_gain for how well the simulated
// model exploits in-context examples.
struct SpeakerProfile {
  std::string speaker_id;
  Severity severity = Severity::kUnknown;
  double base_error_rate = 0.25;  // per-token corruption probability
  double icl_gain = 0.7;
  double competence = 0.0;
  uint64_t confusion_seed = 0;
};

// Simulator calibration. shot_pseudocount shapes the diminishing-returns
// curve of support-set size; embed_* configure the internal relevance
// embedder. Chosen so synthetic sweeps reproduce the direction and rough
// spacing of published n-shot trends; not a scientific claim.
struct SimulatorParams {
  double icl_gain = 0.7;
  double competence = 0.0;
  double shot_pseudocount = 6.0;
  int embed_dim = 256;
  int embed_order = 3;
};

struct RetryPolicy {
  int max_attempts = 5;
  int base_backoff_ms = 200;
  double jitter_fraction = 0.2;
};

inline constexpr std::string_view kDefaultTokenEnv = "ICL_ENROLL_TOKEN";

enum class BackendKind { kSimulator, kRemote };

std::string_view backend_kind_name(BackendKind kind);
BackendKind backend_kind_from_name(std::string_view name);

struct BackendConfig {
  BackendKind kind = BackendKind::kSimulator;
  std::string endpoint;  // required for remote
  std::string auth_token_env = std::string(kDefaultTokenEnv);
  int max_in_flight = 4;
  RetryPolicy retry;
  int timeout_ms = 30000;
  SimulatorParams simulator;
};

nlohmann::json backend_config_to_json(const BackendConfig& config);
BackendConfig backend_config_from_json(const nlohmann::json& row);

// p_eff = base_error_rate * (1 - icl_gain * relevance) * (1 - competence).
double effective_error_rate(const SpeakerProfile& profile, double relevance);

// Shot-weighted support relevance: sum over support items of
// max(0, cosine(query transcript embedding, support transcript embedding))
// divided by (n + shot_pseudocount). Empty support yields 0. The pseudocount
// makes expected relevance grow with shot count (saturating), which is what
// drives the simulated n-shot improvement trend.
double support_relevance(std::string_view query_transcript, const SupportSet& support,
                         const SimulatorParams& params);

// Maps a training-data fraction to simulator competence via a saturating
// curve c(p) = c_max * (1 - exp(-lambda * p)). The default lambda puts ~70%
// of the total gain inside the first 2% of data (front-loaded curve).
double competence_from_fraction(double fraction, double c_max = 0.55, double lambda = 60.0);

// Expected WER of the corruption channel at per-token rate p_eff. Each
// corrupted token contributes 0.7*1 (substitution) + 0.2*1 (deletion) +
// 0.1*2 (substitution plus insertion) = 1.1 expected errors. Alignment can
// occasionally merge adjacent delete/insert events, a small O(p^2) downward
// bias, so Monte Carlo means sit within ~0.01 of this for p_eff <= 0.45.
double expected_simulated_wer(double p_eff);

// Per-token corruption of a normalized token sequence. Draws are keyed by
// (global_seed, speaker_id, query_id, token index) only — common random
// numbers across strategies and shot counts — and the confusion lexicon is a
// deterministic per-word garbling keyed by confusion_seed.
std::vector<std::string> corrupt_tokens(const std::vector<std::string>& tokens, double p_eff,
                                        uint64_t global_seed, std::string_view speaker_id,
                                        std::string_view query_id, uint64_t confusion_seed);

class TranscriptionBackend {
 public:
  virtual ~TranscriptionBackend() = default;
  virtual std::string transcribe(const IclPrompt& prompt) = 0;
  virtual std::string_view kind() const = 0;
  virtual void shutdown() {}
};

// Deterministic offline stand-in for a real transcription service: corrupts
// the query's reference transcript at the profile's effective error rate.
// Pure function of (prompt, profiles, seed); safe for arbitrary parallelism.
class SimulatorBackend : public TranscriptionBackend {
 public:
  SimulatorBackend(const Manifest& manifest, const SimulatorParams& params,
                   uint64_t global_seed);

  std::string transcribe(const IclPrompt& prompt) override;
  std::string_view kind() const override { return "simulator"; }

  double relevance(const IclPrompt& prompt) const;

  const SpeakerProfile& profile(const std::string& speaker_id) const;
  void set_profile(const SpeakerProfile& profile);
  void set_competence_all(double competence);

 private:
  struct ReferenceEntry {
    std::string transcript;
    std::string speaker_id;
  };

  const ReferenceEntry& lookup(const IclPrompt& prompt) const;

  std::map<std::string, ReferenceEntry> by_audio_ref_;
  std::map<std::string, SpeakerProfile> profiles_;
  SimulatorParams params_;
  uint64_t global_seed_;
};

}  // namespace iclenroll

#endif  // ICLENROLL_BACKEND_HPP_

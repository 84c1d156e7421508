//
// Copyright 2026 The mia-audit Authors
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
//

// Seeded synthetic log-probability data. Members draw every token from one
// normal; non-members mix a normal with a low-mean outlier component, the
// structure under which single low tokens dominate token-level scores.

#ifndef MIA_SYNTHETIC_HPP_
#define MIA_SYNTHETIC_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "mia/random.hpp"
#include "mia/sample.hpp"
#include "mia/status.hpp"

namespace mia {

struct SynthConfig {
  uint64_t seed = 7;
  int n_members = 350;
  int n_nonmembers = 350;
  int seq_len = 32;
  double member_mean = -2.0;
  double nonmember_mean = -2.5;
  double sigma = 1.0;
  double outlier_rate = 0.1;
  double outlier_mean = -8.0;
  double outlier_sigma = 1.0;
  // Auxiliary data so that every attack can run on synthetic samples:
  // a word-level text, lowercase log-probs drawn from the sample's own label
  // distribution, and `aux_neighbors` neighbor sequences drawn from the
  // non-member distribution. Drawn from a separate stream, so toggling these
  // never changes token_logprobs.
  bool with_aux = true;
  int aux_neighbors = 8;

  absl::Status Validate() const {
    auto bad = [](absl::string_view what) {
      return MakeError(ErrorKind::kInvalidConfig, what);
    };
    if (n_members < 1 || n_nonmembers < 1) {
      return bad("n_members and n_nonmembers must be positive");
    }
    if (seq_len < 1) return bad("seq_len must be positive");
    if (!(sigma > 0.0) || !(outlier_sigma > 0.0)) {
      return bad("sigma and outlier_sigma must be positive");
    }
    if (!(outlier_rate >= 0.0 && outlier_rate <= 1.0)) {
      return bad("outlier_rate must lie in [0, 1]");
    }
    if (!std::isfinite(member_mean) || !std::isfinite(nonmember_mean) ||
        !std::isfinite(outlier_mean) || !std::isfinite(sigma) ||
        !std::isfinite(outlier_sigma)) {
      return bad("distribution parameters must be finite");
    }
    if (with_aux && aux_neighbors < 1) {
      return bad("aux_neighbors must be positive when with_aux is set");
    }
    return absl::OkStatus();
  }

  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

// Config with identical member and non-member distributions and no outliers.
inline SynthConfig NullSynthConfig(uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.nonmember_mean = cfg.member_mean;
  cfg.outlier_rate = 0.0;
  return cfg;
}

namespace internal {

inline constexpr std::array<const char*, 24> kSynthVocabulary = {
    "The",    "market", "Model",  "river",  "Paris", "quiet",
    "signal", "NEWS",   "engine", "garden", "Alice", "report",
    "winter", "data",   "Bridge", "motion", "light", "Token",
    "forest", "Senate", "copper", "window", "Ocean", "ledger"};

inline LogprobSequence DrawMember(PortableRng& rng, const SynthConfig& cfg) {
  LogprobSequence seq(cfg.seq_len);
  for (double& lp : seq) {
    lp = std::min(0.0, rng.Normal(cfg.member_mean, cfg.sigma));
  }
  return seq;
}

inline LogprobSequence DrawNonmember(PortableRng& rng,
                                     const SynthConfig& cfg) {
  LogprobSequence seq(cfg.seq_len);
  for (double& lp : seq) {
    const bool outlier = rng.Uniform() < cfg.outlier_rate;
    lp = std::min(0.0, outlier ? rng.Normal(cfg.outlier_mean, cfg.outlier_sigma)
                               : rng.Normal(cfg.nonmember_mean, cfg.sigma));
  }
  return seq;
}

}  // namespace internal

inline absl::StatusOr<std::vector<ScoredSample>> GenerateSynthetic(
    const SynthConfig& cfg) {
  MIA_RETURN_IF_ERROR(cfg.Validate());
  PortableRng tokens(cfg.seed);
  PortableRng aux(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<ScoredSample> samples;
  samples.reserve(static_cast<size_t>(cfg.n_members + cfg.n_nonmembers));
  for (int group = 0; group < 2; ++group) {
    const bool member = group == 0;
    const int count = member ? cfg.n_members : cfg.n_nonmembers;
    for (int i = 0; i < count; ++i) {
      ScoredSample::Fields fields;
      fields.id = absl::StrCat(member ? "m" : "n", i);
      fields.label = member ? Label::kMember : Label::kNonmember;
      fields.token_logprobs = member ? internal::DrawMember(tokens, cfg)
                                     : internal::DrawNonmember(tokens, cfg);
      if (cfg.with_aux) {
        std::string text;
        for (int t = 0; t <= cfg.seq_len; ++t) {
          if (t > 0) text.push_back(' ');
          text += internal::kSynthVocabulary[aux.Index(
              internal::kSynthVocabulary.size())];
        }
        fields.text = std::move(text);
        fields.lowercase_logprobs = member
                                        ? internal::DrawMember(aux, cfg)
                                        : internal::DrawNonmember(aux, cfg);
        std::vector<LogprobSequence> neighbors;
        neighbors.reserve(cfg.aux_neighbors);
        for (int n = 0; n < cfg.aux_neighbors; ++n) {
          neighbors.push_back(internal::DrawNonmember(aux, cfg));
        }
        fields.neighbor_logprobs = std::move(neighbors);
      }
      MIA_ASSIGN_OR_RETURN(ScoredSample sample,
                           ScoredSample::Create(std::move(fields)));
      samples.push_back(std::move(sample));
    }
  }
  return samples;
}

// Reads a SynthConfig from JSON; absent keys keep their defaults.
inline absl::StatusOr<SynthConfig> SynthConfigFromJson(
    const nlohmann::json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kInvalidConfig,
                     "synthetic config must be a JSON object");
  }
  SynthConfig cfg;
  try {
    cfg.seed = json.value("seed", cfg.seed);
    cfg.n_members = json.value("n_members", cfg.n_members);
    cfg.n_nonmembers = json.value("n_nonmembers", cfg.n_nonmembers);
    cfg.seq_len = json.value("seq_len", cfg.seq_len);
    cfg.member_mean = json.value("member_mean", cfg.member_mean);
    cfg.nonmember_mean = json.value("nonmember_mean", cfg.nonmember_mean);
    cfg.sigma = json.value("sigma", cfg.sigma);
    cfg.outlier_rate = json.value("outlier_rate", cfg.outlier_rate);
    cfg.outlier_mean = json.value("outlier_mean", cfg.outlier_mean);
    cfg.outlier_sigma = json.value("outlier_sigma", cfg.outlier_sigma);
    cfg.with_aux = json.value("with_aux", cfg.with_aux);
    cfg.aux_neighbors = json.value("aux_neighbors", cfg.aux_neighbors);
  } catch (const nlohmann::json::exception& e) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("synthetic config: ", e.what()));
  }
  MIA_RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

}  // namespace mia

#endif  // MIA_SYNTHETIC_HPP_

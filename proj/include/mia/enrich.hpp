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

#ifndef MIA_ENRICH_HPP_
#define MIA_ENRICH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mia/http_client.hpp"
#include "mia/parallel.hpp"
#include "mia/sample.hpp"
#include "mia/status.hpp"
#include "mia/text.hpp"

namespace mia {

struct EnrichNeeds {
  bool lowercase = false;
  bool neighbors = false;

  bool any() const { return lowercase || neighbors; }
};

// Perturbation seed for one sample: FNV-1a of the id folded into the run
// seed, so a sample gets the same neighbors whatever dataset it sits in.
inline uint64_t SampleSeed(uint64_t run_seed, absl::string_view sample_id) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : sample_id) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return run_seed ^ hash;
}

namespace internal {

struct FetchJob {
  size_t sample = 0;
  // Neighbor index, or nullopt for the lowercase text.
  std::optional<size_t> neighbor;
  std::string text;
};

}  // namespace internal

// Fills the requested auxiliary sequences of every sample through the
// scoring endpoint, with up to endpoint.max_parallel requests in flight.
// Aux fields already present are kept as they are. Any failure discards
// the whole batch; results never depend on request completion order.
inline absl::StatusOr<std::vector<ScoredSample>> EnrichAll(
    const std::vector<ScoredSample>& samples, const ScoringEndpoint& endpoint,
    EnrichNeeds needs, int n_neighbors, uint64_t perturb_seed) {
  MIA_RETURN_IF_ERROR(endpoint.Validate());
  if (needs.neighbors && n_neighbors < 1) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("n_neighbors = ", n_neighbors,
                                  " is below 1"));
  }

  std::vector<internal::FetchJob> jobs;
  for (size_t s = 0; s < samples.size(); ++s) {
    const ScoredSample& sample = samples[s];
    const bool want_lower =
        needs.lowercase && !sample.lowercase_logprobs().has_value();
    const bool want_neighbors =
        needs.neighbors && !sample.neighbor_logprobs().has_value();
    if (!want_lower && !want_neighbors) continue;
    if (!sample.text().has_value() || sample.text()->empty()) {
      return MakeError(ErrorKind::kMissingText,
                       absl::StrCat("sample '", sample.id(),
                                    "' has no text to enrich"));
    }
    if (want_lower) {
      absl::StatusOr<std::string> lower = Utf8ToLower(*sample.text());
      if (!lower.ok()) {
        return MakeError(ErrorKind::kSchemaError,
                         absl::StrCat("sample '", sample.id(), "': ",
                                      lower.status().message()));
      }
      jobs.push_back({.sample = s, .neighbor = std::nullopt,
                      .text = *std::move(lower)});
    }
    if (want_neighbors) {
      MIA_ASSIGN_OR_RETURN(
          std::vector<std::string> texts,
          PerturbWords(*sample.text(), n_neighbors,
                       SampleSeed(perturb_seed, sample.id())));
      for (size_t n = 0; n < texts.size(); ++n) {
        jobs.push_back({.sample = s, .neighbor = n,
                        .text = std::move(texts[n])});
      }
    }
  }

  std::vector<LogprobSequence> results(jobs.size());
  MIA_RETURN_IF_ERROR(ParallelFor(
      jobs.size(), endpoint.max_parallel, [&](size_t j) -> absl::Status {
        const internal::FetchJob& job = jobs[j];
        const std::string& id = samples[job.sample].id();
        absl::StatusOr<FetchedLogprobs> fetched =
            FetchLogprobs(endpoint, job.text);
        if (!fetched.ok()) {
          return MakeError(
              ErrorKindOf(fetched.status()).value_or(ErrorKind::kProtocolError),
              absl::StrCat("sample '", id, "': ", fetched.status().message()));
        }
        if (fetched->token_logprobs.empty()) {
          return MakeError(ErrorKind::kEmptySequence,
                           absl::StrCat("sample '", id,
                                        "': endpoint returned no scored "
                                        "tokens"));
        }
        results[j] = std::move(fetched->token_logprobs);
        return absl::OkStatus();
      }));

  std::vector<std::optional<LogprobSequence>> lowercase(samples.size());
  std::vector<std::vector<LogprobSequence>> neighbors(samples.size());
  for (size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].neighbor.has_value()) {
      neighbors[jobs[j].sample].push_back(std::move(results[j]));
    } else {
      lowercase[jobs[j].sample] = std::move(results[j]);
    }
  }

  std::vector<ScoredSample> enriched;
  enriched.reserve(samples.size());
  for (size_t s = 0; s < samples.size(); ++s) {
    ScoredSample sample = samples[s];
    if (lowercase[s].has_value()) {
      MIA_ASSIGN_OR_RETURN(sample,
                           sample.WithLowercase(*std::move(lowercase[s])));
    }
    if (!neighbors[s].empty()) {
      MIA_ASSIGN_OR_RETURN(sample,
                           sample.WithNeighbors(std::move(neighbors[s])));
    }
    enriched.push_back(std::move(sample));
  }
  return enriched;
}

inline absl::StatusOr<ScoredSample> Enrich(const ScoredSample& sample,
                                           const ScoringEndpoint& endpoint,
                                           EnrichNeeds needs, int n_neighbors,
                                           uint64_t perturb_seed) {
  MIA_ASSIGN_OR_RETURN(std::vector<ScoredSample> enriched,
                       EnrichAll({sample}, endpoint, needs, n_neighbors,
                                 perturb_seed));
  return std::move(enriched.front());
}

}  // namespace mia

#endif  // MIA_ENRICH_HPP_

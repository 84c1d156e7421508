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

// The six membership scoring functions. Everything here is a pure function
// of its inputs.

#ifndef MIA_ATTACKS_HPP_
#define MIA_ATTACKS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "mia/compress.hpp"
#include "mia/sample.hpp"
#include "mia/status.hpp"

namespace mia {

namespace internal {

// Absorbs representation error in k * n for decimal k (0.57 * 100 is
// 56.999999999999993 in binary floating point).
inline constexpr double kSelectionSlack = 1e-9;

inline MembershipScore Oriented(const ScoredSample& sample, AttackKind attack,
                                double raw) {
  return MembershipScore{.sample_id = sample.id(),
                         .attack = attack,
                         .value = OrientationSign(attack) * raw,
                         .raw = raw};
}

inline absl::Status CheckK(double k) {
  if (!(k > 0.0 && k <= 1.0)) {
    return MakeError(ErrorKind::kInvalidK,
                     absl::StrCat("k = ", k, " is outside (0, 1]"));
  }
  return absl::OkStatus();
}

}  // namespace internal

// Number of entries selected from a list of `count` scores at fraction k:
// max(1, floor(k * count)), never more than count.
inline size_t SelectionCount(double k, size_t count) {
  const double scaled =
      std::floor(k * static_cast<double>(count) + internal::kSelectionSlack);
  const size_t gamma = scaled < 1.0 ? 1 : static_cast<size_t>(scaled);
  return std::clamp<size_t>(gamma, 1, count);
}

// Mean of the SelectionCount(k, |values|) smallest values, summed in
// ascending order. Shared by min-k and win-k so that win-k with w = 1 is
// bit-identical to min-k.
inline absl::StatusOr<double> MeanOfLowestFraction(std::vector<double> values,
                                                   double k) {
  MIA_RETURN_IF_ERROR(internal::CheckK(k));
  if (values.empty()) {
    return MakeError(ErrorKind::kEmptySequence, "no scores to select from");
  }
  const size_t gamma = SelectionCount(k, values.size());
  std::partial_sort(values.begin(), values.begin() + gamma, values.end());
  double sum = 0.0;
  for (size_t i = 0; i < gamma; ++i) sum += values[i];
  return sum / static_cast<double>(gamma);
}

// Mean negative log-likelihood per scored token. Always >= 0 for valid
// log-probabilities.
inline absl::StatusOr<double> MeanNll(std::span<const double> logprobs) {
  if (logprobs.empty()) {
    return MakeError(ErrorKind::kEmptySequence,
                     "mean NLL of an empty log-probability sequence");
  }
  double sum = 0.0;
  for (double lp : logprobs) sum += lp;
  return -sum / static_cast<double>(logprobs.size());
}

inline absl::StatusOr<double> MeanNll(const ScoredSample& sample) {
  return MeanNll(sample.token_logprobs());
}

inline absl::StatusOr<MembershipScore> ScoreLoss(const ScoredSample& sample) {
  MIA_ASSIGN_OR_RETURN(const double nll, MeanNll(sample));
  return internal::Oriented(sample, AttackKind::kLoss, nll);
}

// Ratio of the lowercased text's loss to the original loss.
inline absl::StatusOr<MembershipScore> ScoreLowercase(
    const ScoredSample& sample) {
  if (!sample.lowercase_logprobs().has_value()) {
    return MakeError(ErrorKind::kMissingAux,
                     absl::StrCat("sample '", sample.id(),
                                  "' has no aux.lowercase_logprobs"));
  }
  MIA_ASSIGN_OR_RETURN(const double original, MeanNll(sample));
  MIA_ASSIGN_OR_RETURN(const double lowered,
                       MeanNll(*sample.lowercase_logprobs()));
  if (original == 0.0) {
    return MakeError(ErrorKind::kDivisionByZero,
                     absl::StrCat("sample '", sample.id(),
                                  "' has zero original loss"));
  }
  return internal::Oriented(sample, AttackKind::kLowercase,
                            lowered / original);
}

// Loss divided by the zlib-compressed byte length of the UTF-8 text.
inline absl::StatusOr<MembershipScore> ScoreZlib(const ScoredSample& sample) {
  if (!sample.text().has_value() || sample.text()->empty()) {
    return MakeError(ErrorKind::kMissingText,
                     absl::StrCat("sample '", sample.id(), "' has no text"));
  }
  MIA_ASSIGN_OR_RETURN(const double nll, MeanNll(sample));
  MIA_ASSIGN_OR_RETURN(const size_t compressed, ZlibLength(*sample.text()));
  return internal::Oriented(sample, AttackKind::kZlib,
                            nll / static_cast<double>(compressed));
}

// Original loss minus the mean loss over the neighbor texts.
inline absl::StatusOr<MembershipScore> ScoreNeighborhood(
    const ScoredSample& sample) {
  const auto& neighbors = sample.neighbor_logprobs();
  if (!neighbors.has_value() || neighbors->empty()) {
    return MakeError(ErrorKind::kMissingAux,
                     absl::StrCat("sample '", sample.id(),
                                  "' has no aux.neighbor_logprobs"));
  }
  MIA_ASSIGN_OR_RETURN(const double original, MeanNll(sample));
  double neighbor_sum = 0.0;
  for (size_t i = 0; i < neighbors->size(); ++i) {
    const auto& seq = (*neighbors)[i];
    if (seq.empty()) {
      return MakeError(ErrorKind::kEmptySequence,
                       absl::StrCat("sample '", sample.id(), "' neighbor ", i,
                                    " is empty"));
    }
    MIA_ASSIGN_OR_RETURN(const double nll, MeanNll(seq));
    neighbor_sum += nll;
  }
  const double raw =
      original - neighbor_sum / static_cast<double>(neighbors->size());
  return internal::Oriented(sample, AttackKind::kNeighborhood, raw);
}

inline absl::StatusOr<MembershipScore> ScoreMinK(const ScoredSample& sample,
                                                 double k) {
  const auto logprobs = sample.token_logprobs();
  MIA_ASSIGN_OR_RETURN(
      const double raw,
      MeanOfLowestFraction(std::vector<double>(logprobs.begin(),
                                               logprobs.end()),
                           k));
  return internal::Oriented(sample, AttackKind::kMinK, raw);
}

// Sliding windows of w consecutive log-probabilities, ascending start index.
// Each window sum is accumulated directly (not by a running difference) so
// that w = 1 reproduces the token values exactly.
inline absl::StatusOr<std::vector<WindowScore>> WindowScores(
    std::span<const double> logprobs, int w) {
  if (w < 1) {
    return MakeError(ErrorKind::kInvalidWindow,
                     absl::StrCat("window size w = ", w, " is below 1"));
  }
  if (logprobs.empty()) {
    return MakeError(ErrorKind::kEmptySequence,
                     "windows over an empty log-probability sequence");
  }
  const size_t width = static_cast<size_t>(w);
  if (width > logprobs.size()) {
    return MakeError(ErrorKind::kWindowTooLarge,
                     absl::StrCat("window size ", w, " exceeds sequence length ",
                                  logprobs.size()));
  }
  std::vector<WindowScore> windows;
  windows.reserve(logprobs.size() - width + 1);
  for (size_t j = 0; j + width <= logprobs.size(); ++j) {
    double sum = 0.0;
    for (size_t i = j; i < j + width; ++i) sum += logprobs[i];
    windows.push_back(WindowScore{.start_index = j,
                                  .logprob_sum = sum,
                                  .score = sum / static_cast<double>(w)});
  }
  return windows;
}

inline absl::StatusOr<std::vector<WindowScore>> WindowScores(
    const ScoredSample& sample, int w) {
  return WindowScores(sample.token_logprobs(), w);
}

// Mean of the lowest k-fraction of window scores. The selection count is
// taken from the number of windows, not the number of tokens.
inline absl::StatusOr<MembershipScore> ScoreWinK(const ScoredSample& sample,
                                                 int w, double k) {
  MIA_RETURN_IF_ERROR(internal::CheckK(k));
  MIA_ASSIGN_OR_RETURN(const std::vector<WindowScore> windows,
                       WindowScores(sample, w));
  std::vector<double> scores;
  scores.reserve(windows.size());
  for (const WindowScore& window : windows) scores.push_back(window.score);
  MIA_ASSIGN_OR_RETURN(const double raw,
                       MeanOfLowestFraction(std::move(scores), k));
  return internal::Oriented(sample, AttackKind::kWinK, raw);
}

// Dispatches on config.attack; hyperparameters irrelevant to the attack are
// ignored.
inline absl::StatusOr<MembershipScore> Score(const ScoredSample& sample,
                                             const AttackConfig& config) {
  switch (config.attack) {
    case AttackKind::kLoss:
      return ScoreLoss(sample);
    case AttackKind::kLowercase:
      return ScoreLowercase(sample);
    case AttackKind::kZlib:
      return ScoreZlib(sample);
    case AttackKind::kNeighborhood:
      return ScoreNeighborhood(sample);
    case AttackKind::kMinK:
      return ScoreMinK(sample, config.k);
    case AttackKind::kWinK:
      return ScoreWinK(sample, config.w, config.k);
  }
  return MakeError(ErrorKind::kInvalidConfig, "unknown attack");
}

}  // namespace mia

#endif  // MIA_ATTACKS_HPP_

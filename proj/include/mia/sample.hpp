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

#ifndef MIA_SAMPLE_HPP_
#define MIA_SAMPLE_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mia/status.hpp"

namespace mia {

enum class Label { kMember, kNonmember, kUnknown };

inline absl::string_view LabelName(Label label) {
  switch (label) {
    case Label::kMember:
      return "member";
    case Label::kNonmember:
      return "nonmember";
    case Label::kUnknown:
      return "unknown";
  }
  return "unknown";
}

inline std::optional<Label> ParseLabel(absl::string_view name) {
  if (name == "member") return Label::kMember;
  if (name == "nonmember") return Label::kNonmember;
  if (name == "unknown") return Label::kUnknown;
  return std::nullopt;
}

using LogprobSequence = std::vector<double>;

// Checks the shared log-probability invariant: every value finite and <= 0.
// `what` names the sequence in the error message.
inline absl::Status ValidateLogprobs(std::span<const double> logprobs,
                                     absl::string_view what) {
  for (size_t i = 0; i < logprobs.size(); ++i) {
    if (!std::isfinite(logprobs[i])) {
      return MakeError(ErrorKind::kNonFiniteValue,
                       absl::StrCat(what, "[", i, "] is not finite"));
    }
    if (logprobs[i] > 0.0) {
      return MakeError(ErrorKind::kSchemaError,
                       absl::StrCat(what, "[", i, "] = ", logprobs[i],
                                    " is a positive log-probability"));
    }
  }
  return absl::OkStatus();
}

// One text sample with its conditional token log-probabilities. The first
// token of a text has no conditional probability under a causal model, so
// token_logprobs usually holds T - 1 values; attacks run on whatever is
// stored here.
class ScoredSample {
 public:
  struct Fields {
    std::string id;
    Label label = Label::kUnknown;
    std::optional<std::string> text;
    LogprobSequence token_logprobs;
    std::optional<LogprobSequence> lowercase_logprobs;
    std::optional<std::vector<LogprobSequence>> neighbor_logprobs;
  };

  static absl::StatusOr<ScoredSample> Create(Fields fields) {
    if (fields.token_logprobs.empty()) {
      return MakeError(ErrorKind::kEmptySequence,
                       absl::StrCat("sample '", fields.id,
                                    "' has no token log-probabilities"));
    }
    MIA_RETURN_IF_ERROR(ValidateLogprobs(fields.token_logprobs,
                                         "token_logprobs"));
    if (fields.lowercase_logprobs.has_value()) {
      MIA_RETURN_IF_ERROR(ValidateLogprobs(*fields.lowercase_logprobs,
                                           "aux.lowercase_logprobs"));
    }
    if (fields.neighbor_logprobs.has_value()) {
      for (size_t i = 0; i < fields.neighbor_logprobs->size(); ++i) {
        MIA_RETURN_IF_ERROR(
            ValidateLogprobs((*fields.neighbor_logprobs)[i],
                             absl::StrCat("aux.neighbor_logprobs[", i, "]")));
      }
    }
    return ScoredSample(std::move(fields));
  }

  const std::string& id() const { return fields_.id; }
  Label label() const { return fields_.label; }
  const std::optional<std::string>& text() const { return fields_.text; }
  std::span<const double> token_logprobs() const {
    return fields_.token_logprobs;
  }
  const std::optional<LogprobSequence>& lowercase_logprobs() const {
    return fields_.lowercase_logprobs;
  }
  const std::optional<std::vector<LogprobSequence>>& neighbor_logprobs()
      const {
    return fields_.neighbor_logprobs;
  }
  const Fields& fields() const { return fields_; }

  // Copies with one auxiliary field filled. Label and id carry over.
  absl::StatusOr<ScoredSample> WithLowercase(LogprobSequence logprobs) const {
    Fields copy = fields_;
    copy.lowercase_logprobs = std::move(logprobs);
    return Create(std::move(copy));
  }
  absl::StatusOr<ScoredSample> WithNeighbors(
      std::vector<LogprobSequence> neighbors) const {
    Fields copy = fields_;
    copy.neighbor_logprobs = std::move(neighbors);
    return Create(std::move(copy));
  }

  friend bool operator==(const ScoredSample& a, const ScoredSample& b) {
    const Fields& x = a.fields_;
    const Fields& y = b.fields_;
    return x.id == y.id && x.label == y.label && x.text == y.text &&
           x.token_logprobs == y.token_logprobs &&
           x.lowercase_logprobs == y.lowercase_logprobs &&
           x.neighbor_logprobs == y.neighbor_logprobs;
  }

 private:
  explicit ScoredSample(Fields fields) : fields_(std::move(fields)) {}

  Fields fields_;
};

enum class AttackKind { kLoss, kLowercase, kZlib, kNeighborhood, kMinK, kWinK };

inline constexpr AttackKind kAllAttacks[] = {
    AttackKind::kLoss,         AttackKind::kLowercase, AttackKind::kZlib,
    AttackKind::kNeighborhood, AttackKind::kMinK,      AttackKind::kWinK};

inline absl::string_view AttackName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kLoss:
      return "loss";
    case AttackKind::kLowercase:
      return "lowercase";
    case AttackKind::kZlib:
      return "zlib";
    case AttackKind::kNeighborhood:
      return "neighborhood";
    case AttackKind::kMinK:
      return "min_k";
    case AttackKind::kWinK:
      return "win_k";
  }
  return "";
}

inline std::optional<AttackKind> ParseAttackName(absl::string_view name) {
  for (AttackKind kind : kAllAttacks) {
    if (AttackName(kind) == name) return kind;
  }
  return std::nullopt;
}

// Sign mapping the raw score to "higher means more likely member".
inline double OrientationSign(AttackKind kind) {
  switch (kind) {
    case AttackKind::kLowercase:
    case AttackKind::kMinK:
    case AttackKind::kWinK:
      return 1.0;
    case AttackKind::kLoss:
    case AttackKind::kZlib:
    case AttackKind::kNeighborhood:
      return -1.0;
  }
  return 1.0;
}

inline bool UsesK(AttackKind kind) {
  return kind == AttackKind::kMinK || kind == AttackKind::kWinK;
}
inline bool UsesWindow(AttackKind kind) { return kind == AttackKind::kWinK; }

struct AttackConfig {
  AttackKind attack = AttackKind::kLoss;
  double k = 0.3;
  int w = 3;
  int n_neighbors = 100;

  absl::Status Validate() const {
    if (!(k > 0.0 && k <= 1.0)) {
      return MakeError(ErrorKind::kInvalidK,
                       absl::StrCat("k = ", k, " is outside (0, 1]"));
    }
    if (w < 1) {
      return MakeError(ErrorKind::kInvalidWindow,
                       absl::StrCat("window size w = ", w, " is below 1"));
    }
    if (n_neighbors < 1) {
      return MakeError(ErrorKind::kInvalidConfig,
                       absl::StrCat("n_neighbors = ", n_neighbors,
                                    " is below 1"));
    }
    return absl::OkStatus();
  }

  friend bool operator==(const AttackConfig&, const AttackConfig&) = default;
};

struct MembershipScore {
  std::string sample_id;
  AttackKind attack = AttackKind::kLoss;
  double value = 0.0;  // canonical: higher means more likely member
  double raw = 0.0;

  friend bool operator==(const MembershipScore&,
                         const MembershipScore&) = default;
};

struct WindowScore {
  size_t start_index = 0;
  double logprob_sum = 0.0;
  double score = 0.0;  // logprob_sum / w
};

}  // namespace mia

#endif  // MIA_SAMPLE_HPP_

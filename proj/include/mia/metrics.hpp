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

// Threshold-sweep evaluation of membership scores. A sample is predicted a
// member iff its canonical score is >= the threshold; samples with equal
// scores always flip together.

#ifndef MIA_METRICS_HPP_
#define MIA_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mia/sample.hpp"
#include "mia/status.hpp"

namespace mia {

struct ScoreEntry {
  std::string sample_id;
  bool member = false;
  double value = 0.0;
};

class LabeledScoreSet {
 public:
  static absl::StatusOr<LabeledScoreSet> Create(
      std::vector<ScoreEntry> entries) {
    size_t members = 0;
    for (const ScoreEntry& entry : entries) {
      if (!std::isfinite(entry.value)) {
        return MakeError(ErrorKind::kNonFiniteValue,
                         absl::StrCat("score for '", entry.sample_id,
                                      "' is not finite"));
      }
      if (entry.member) ++members;
    }
    const size_t nonmembers = entries.size() - members;
    if (members == 0 || nonmembers == 0) {
      return MakeError(ErrorKind::kDegenerateLabels,
                       absl::StrCat("need at least one member and one "
                                    "nonmember, got ",
                                    members, " and ", nonmembers));
    }
    return LabeledScoreSet(std::move(entries), members, nonmembers);
  }

  // Builds a set from scores and the labels of the samples they came from.
  // Samples labelled unknown are rejected.
  static absl::StatusOr<LabeledScoreSet> FromScores(
      const std::vector<MembershipScore>& scores,
      const std::vector<Label>& labels) {
    if (scores.size() != labels.size()) {
      return MakeError(ErrorKind::kInvalidConfig,
                       "score and label counts differ");
    }
    std::vector<ScoreEntry> entries;
    entries.reserve(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) {
      if (labels[i] == Label::kUnknown) {
        return MakeError(ErrorKind::kSchemaError,
                         absl::StrCat("sample '", scores[i].sample_id,
                                      "' has label 'unknown'"));
      }
      entries.push_back(ScoreEntry{.sample_id = scores[i].sample_id,
                                   .member = labels[i] == Label::kMember,
                                   .value = scores[i].value});
    }
    return Create(std::move(entries));
  }

  const std::vector<ScoreEntry>& entries() const { return entries_; }
  size_t members() const { return members_; }
  size_t nonmembers() const { return nonmembers_; }

 private:
  LabeledScoreSet(std::vector<ScoreEntry> entries, size_t members,
                  size_t nonmembers)
      : entries_(std::move(entries)),
        members_(members),
        nonmembers_(nonmembers) {}

  std::vector<ScoreEntry> entries_;
  size_t members_;
  size_t nonmembers_;
};

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
  // Cumulative counts predicted member at this threshold.
  size_t false_positives = 0;
  size_t true_positives = 0;
};

// Points in ascending FPR order: (0, 0) at threshold +inf, one point per
// distinct score value (descending threshold), then (1, 1) at -inf.
struct RocCurve {
  std::vector<RocPoint> points;
  size_t members = 0;
  size_t nonmembers = 0;
};

inline RocCurve ComputeRocCurve(const LabeledScoreSet& scores) {
  std::vector<std::pair<double, bool>> ranked;
  ranked.reserve(scores.entries().size());
  for (const ScoreEntry& entry : scores.entries()) {
    ranked.emplace_back(entry.value, entry.member);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve curve{.points = {},
                 .members = scores.members(),
                 .nonmembers = scores.nonmembers()};
  const double pos = static_cast<double>(scores.members());
  const double neg = static_cast<double>(scores.nonmembers());
  curve.points.push_back(
      RocPoint{.threshold = std::numeric_limits<double>::infinity()});
  size_t tp = 0;
  size_t fp = 0;
  for (size_t i = 0; i < ranked.size();) {
    const double threshold = ranked[i].first;
    while (i < ranked.size() && ranked[i].first == threshold) {
      ranked[i].second ? ++tp : ++fp;
      ++i;
    }
    curve.points.push_back(RocPoint{.threshold = threshold,
                                    .fpr = static_cast<double>(fp) / neg,
                                    .tpr = static_cast<double>(tp) / pos,
                                    .false_positives = fp,
                                    .true_positives = tp});
  }
  curve.points.push_back(
      RocPoint{.threshold = -std::numeric_limits<double>::infinity(),
               .fpr = 1.0,
               .tpr = 1.0,
               .false_positives = scores.nonmembers(),
               .true_positives = scores.members()});
  return curve;
}

// Trapezoidal area under the ROC curve. Integer counts keep the result equal
// to the Mann-Whitney statistic with half credit for ties.
inline double Auroc(const RocCurve& curve) {
  double twice_area = 0.0;  // in units of (count x count)
  for (size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    twice_area += static_cast<double>(b.false_positives - a.false_positives) *
                  static_cast<double>(a.true_positives + b.true_positives);
  }
  return twice_area / (2.0 * static_cast<double>(curve.members) *
                       static_cast<double>(curve.nonmembers));
}

inline double Auroc(const LabeledScoreSet& scores) {
  return Auroc(ComputeRocCurve(scores));
}

// Largest TPR among curve points with FPR <= fpr_cap. No interpolation.
inline double TprAtFpr(const RocCurve& curve, double fpr_cap) {
  double best = 0.0;
  for (const RocPoint& point : curve.points) {
    if (static_cast<double>(point.false_positives) <=
        fpr_cap * static_cast<double>(curve.nonmembers) + 1e-9) {
      best = std::max(best, point.tpr);
    }
  }
  return best;
}

// Smallest FPR among curve points with TPR >= tpr_floor. The (1, 1) endpoint
// makes this always feasible.
inline double FprAtTpr(const RocCurve& curve, double tpr_floor) {
  double best = 1.0;
  for (const RocPoint& point : curve.points) {
    if (static_cast<double>(point.true_positives) >=
        tpr_floor * static_cast<double>(curve.members) - 1e-9) {
      best = std::min(best, point.fpr);
    }
  }
  return best;
}

inline absl::Status ValidateRate(double rate, absl::string_view what) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat(what, " = ", rate, " is outside [0, 1]"));
  }
  return absl::OkStatus();
}

inline absl::StatusOr<double> TprAtFpr(const LabeledScoreSet& scores,
                                       double fpr_cap) {
  MIA_RETURN_IF_ERROR(ValidateRate(fpr_cap, "fpr_cap"));
  return TprAtFpr(ComputeRocCurve(scores), fpr_cap);
}

inline absl::StatusOr<double> FprAtTpr(const LabeledScoreSet& scores,
                                       double tpr_floor) {
  MIA_RETURN_IF_ERROR(ValidateRate(tpr_floor, "tpr_floor"));
  return FprAtTpr(ComputeRocCurve(scores), tpr_floor);
}

struct MetricReport {
  double auroc = 0.0;
  std::map<double, double> tpr_at_fpr;
  std::map<double, double> fpr_at_tpr;
  size_t n_members = 0;
  size_t n_nonmembers = 0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

inline absl::StatusOr<MetricReport> Evaluate(
    const LabeledScoreSet& scores, const std::vector<double>& fpr_caps,
    const std::vector<double>& tpr_floors) {
  const RocCurve curve = ComputeRocCurve(scores);
  MetricReport report{.auroc = Auroc(curve),
                      .tpr_at_fpr = {},
                      .fpr_at_tpr = {},
                      .n_members = scores.members(),
                      .n_nonmembers = scores.nonmembers()};
  for (double cap : fpr_caps) {
    MIA_RETURN_IF_ERROR(ValidateRate(cap, "fpr_cap"));
    report.tpr_at_fpr[cap] = TprAtFpr(curve, cap);
  }
  for (double floor : tpr_floors) {
    MIA_RETURN_IF_ERROR(ValidateRate(floor, "tpr_floor"));
    report.fpr_at_tpr[floor] = FprAtTpr(curve, floor);
  }
  return report;
}

}  // namespace mia

#endif  // MIA_METRICS_HPP_

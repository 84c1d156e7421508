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

// Shared helpers for the test suites: sample construction, seeded random
// inputs, and brute-force oracles that do not go through the library code
// they check.

#ifndef MIA_TESTS_TEST_UTIL_HPP_
#define MIA_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mia/metrics.hpp"
#include "mia/sample.hpp"

namespace mia::testing {

inline ScoredSample MakeSample(std::vector<double> logprobs,
                               std::string id = "s",
                               Label label = Label::kMember) {
  ScoredSample::Fields fields;
  fields.id = std::move(id);
  fields.label = label;
  fields.token_logprobs = std::move(logprobs);
  return ScoredSample::Create(std::move(fields)).value();
}

inline ScoredSample MakeSample(ScoredSample::Fields fields) {
  return ScoredSample::Create(std::move(fields)).value();
}

// Sequence of length in [min_len, max_len], values uniform in [lo, 0].
inline std::vector<double> RandomLogprobs(std::mt19937_64& rng, int min_len,
                                          int max_len, double lo = -20.0) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_real_distribution<double> value(lo, 0.0);
  std::vector<double> out(static_cast<size_t>(len(rng)));
  for (double& v : out) v = value(rng);
  return out;
}

inline ScoredSample RandomSample(std::mt19937_64& rng, const std::string& id,
                                 bool with_aux) {
  ScoredSample::Fields fields;
  fields.id = id;
  fields.label = static_cast<Label>(rng() % 3);
  fields.token_logprobs = RandomLogprobs(rng, 1, 40);
  if (rng() % 2) fields.text = "Text of " + id + " \xc3\xa9t\xc3\xa9 \"q\"\n";
  if (with_aux && rng() % 2) fields.lowercase_logprobs = RandomLogprobs(rng, 1, 20);
  if (with_aux && rng() % 2) {
    std::vector<LogprobSequence> neighbors(1 + rng() % 4);
    for (auto& n : neighbors) n = RandomLogprobs(rng, 1, 10);
    fields.neighbor_logprobs = std::move(neighbors);
  }
  return MakeSample(std::move(fields));
}

// Mann-Whitney over all member/nonmember pairs, half credit for ties.
inline double PairwiseAuroc(const std::vector<ScoreEntry>& entries) {
  double credit = 0.0;
  double pairs = 0.0;
  for (const ScoreEntry& m : entries) {
    if (!m.member) continue;
    for (const ScoreEntry& n : entries) {
      if (n.member) continue;
      pairs += 1.0;
      if (m.value > n.value) {
        credit += 1.0;
      } else if (m.value == n.value) {
        credit += 0.5;
      }
    }
  }
  return credit / pairs;
}

inline LabeledScoreSet MakeSet(const std::vector<double>& members,
                               const std::vector<double>& nonmembers) {
  std::vector<ScoreEntry> entries;
  for (size_t i = 0; i < members.size(); ++i) {
    entries.push_back({"m" + std::to_string(i), true, members[i]});
  }
  for (size_t i = 0; i < nonmembers.size(); ++i) {
    entries.push_back({"n" + std::to_string(i), false, nonmembers[i]});
  }
  return LabeledScoreSet::Create(std::move(entries)).value();
}

// Random score set with values drawn from a small grid so ties are common.
inline std::vector<ScoreEntry> RandomTiedEntries(std::mt19937_64& rng,
                                                 int max_per_class) {
  std::uniform_int_distribution<int> count(1, max_per_class);
  std::uniform_int_distribution<int> grid(-15, 15);
  std::vector<ScoreEntry> entries;
  const int members = count(rng);
  const int nonmembers = count(rng);
  for (int i = 0; i < members + nonmembers; ++i) {
    const bool member = i < members;
    entries.push_back({std::to_string(i), member,
                       grid(rng) * 0.25 + (member ? 0.5 : 0.0)});
  }
  return entries;
}

}  // namespace mia::testing

#endif  // MIA_TESTS_TEST_UTIL_HPP_

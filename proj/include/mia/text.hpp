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

#ifndef MIA_TEXT_HPP_
#define MIA_TEXT_HPP_

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mia/random.hpp"
#include "mia/status.hpp"

namespace mia {

// Lowercases UTF-8 text code point by code point with the Unicode default
// simple case mapping (locale-independent, length may change in bytes but
// never in code points).
inline absl::StatusOr<std::string> Utf8ToLower(absl::string_view text) {
  std::string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      return MakeError(ErrorKind::kSchemaError,
                       absl::StrCat("invalid UTF-8 at byte ", start));
    }
    const UChar32 lower = u_tolower(c);
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, lower, error);
    if (error) {
      return MakeError(ErrorKind::kSchemaError,
                       absl::StrCat("cannot encode code point at byte ", start));
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<size_t>(n));
  }
  return out;
}

namespace internal {

inline bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Splits into alternating runs; words[i] is a maximal non-space run and
// gaps[i] the whitespace before it (gaps has one extra trailing entry).
struct WordSplit {
  std::vector<std::string> gaps;
  std::vector<std::string> words;

  std::string Join() const {
    std::string out;
    for (size_t i = 0; i < words.size(); ++i) out += gaps[i] + words[i];
    out += gaps.back();
    return out;
  }
};

inline WordSplit SplitWords(absl::string_view text) {
  WordSplit split;
  size_t i = 0;
  while (true) {
    const size_t gap_start = i;
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    split.gaps.emplace_back(text.substr(gap_start, i - gap_start));
    if (i == text.size()) break;
    const size_t word_start = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    split.words.emplace_back(text.substr(word_start, i - word_start));
  }
  return split;
}

}  // namespace internal

// `count` neighbors of `text`, each differing by one word substitution: a
// uniformly chosen word position is replaced with a different word drawn
// uniformly from the text's own distinct words. Whitespace is preserved.
// When the text has a single distinct word no substitution is possible and
// the neighbor equals the text.
inline absl::StatusOr<std::vector<std::string>> PerturbWords(
    absl::string_view text, int count, uint64_t seed) {
  if (count < 1) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("neighbor count ", count, " is below 1"));
  }
  const internal::WordSplit split = internal::SplitWords(text);
  if (split.words.empty()) {
    return MakeError(ErrorKind::kMissingText, "text has no words to perturb");
  }
  std::vector<std::string> vocabulary;
  std::unordered_set<std::string> seen;
  for (const std::string& word : split.words) {
    if (seen.insert(word).second) vocabulary.push_back(word);
  }

  PortableRng rng(seed);
  std::vector<std::string> neighbors;
  neighbors.reserve(static_cast<size_t>(count));
  for (int n = 0; n < count; ++n) {
    internal::WordSplit edited = split;
    const size_t position = rng.Index(split.words.size());
    if (vocabulary.size() > 1) {
      // Draw from the vocabulary minus the current word.
      std::string& target = edited.words[position];
      size_t pick = rng.Index(vocabulary.size() - 1);
      for (size_t v = 0; v < vocabulary.size(); ++v) {
        if (vocabulary[v] == target) continue;
        if (pick-- == 0) {
          target = vocabulary[v];
          break;
        }
      }
    }
    neighbors.push_back(edited.Join());
  }
  return neighbors;
}

}  // namespace mia

#endif  // MIA_TEXT_HPP_

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

// `.mia.jsonl` dumps: one JSON object per line, e.g.
//
//   {"id":"a","label":"member","text":"...","token_logprobs":[-1.0,-2.0],
//    "aux":{"lowercase_logprobs":[...],"neighbor_logprobs":[[...],[...]]}}
//
// Unknown keys are ignored. Log-probabilities in (0, 1e-9] are clamped to 0;
// larger positives and non-finite values reject the whole stream.

#ifndef MIA_JSONL_HPP_
#define MIA_JSONL_HPP_

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "mia/sample.hpp"
#include "mia/status.hpp"

namespace mia {

inline constexpr double kPositiveNoiseTolerance = 1e-9;
inline constexpr absl::string_view kDumpExtension = ".mia.jsonl";

namespace internal {

inline bool IsNonFiniteSpelling(absl::string_view s) {
  return s == "NaN" || s == "nan" || s == "Infinity" || s == "-Infinity" ||
         s == "inf" || s == "-inf";
}

// Replaces bare NaN / Infinity / -Infinity tokens outside string literals by
// `null`. Used only to tell a non-finite number apart from malformed JSON.
inline std::string ReplaceBareNonFinite(absl::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < line.size()) {
        out.push_back(line[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    bool replaced = false;
    for (absl::string_view token : {"-Infinity", "Infinity", "NaN"}) {
      if (line.substr(i, token.size()) == token) {
        out += "null";
        i += token.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(c);
  }
  return out;
}

inline absl::Status LineError(ErrorKind kind, size_t line_no,
                              absl::string_view detail) {
  return MakeError(kind, absl::StrCat("line ", line_no, ": ", detail));
}

// Reads a log-probability array, applying the clamp rule.
inline absl::StatusOr<LogprobSequence> ReadLogprobArray(
    const nlohmann::json& value, size_t line_no, absl::string_view field) {
  if (!value.is_array()) {
    return LineError(ErrorKind::kSchemaError, line_no,
                     absl::StrCat("field '", field, "' must be an array"));
  }
  LogprobSequence out;
  out.reserve(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    const nlohmann::json& item = value[i];
    if (item.is_string() &&
        IsNonFiniteSpelling(item.get_ref<const std::string&>())) {
      return LineError(ErrorKind::kNonFiniteValue, line_no,
                       absl::StrCat("field '", field, "'[", i,
                                    "] is not finite"));
    }
    if (!item.is_number()) {
      return LineError(ErrorKind::kSchemaError, line_no,
                       absl::StrCat("field '", field, "'[", i,
                                    "] must be a number"));
    }
    double lp = item.get<double>();
    if (!std::isfinite(lp)) {
      return LineError(ErrorKind::kNonFiniteValue, line_no,
                       absl::StrCat("field '", field, "'[", i,
                                    "] is not finite"));
    }
    if (lp > kPositiveNoiseTolerance) {
      return LineError(ErrorKind::kSchemaError, line_no,
                       absl::StrCat("field '", field, "'[", i, "] = ", lp,
                                    " is a positive log-probability"));
    }
    if (lp > 0.0) lp = 0.0;
    out.push_back(lp);
  }
  return out;
}

}  // namespace internal

// Converts one parsed record. `line_no` is only used in error messages.
inline absl::StatusOr<ScoredSample> SampleFromJson(const nlohmann::json& record,
                                                   size_t line_no = 0) {
  using internal::LineError;
  if (!record.is_object()) {
    return LineError(ErrorKind::kSchemaError, line_no,
                     "record is not a JSON object");
  }
  ScoredSample::Fields fields;

  auto id = record.find("id");
  if (id == record.end() || !id->is_string()) {
    return LineError(ErrorKind::kSchemaError, line_no,
                     "field 'id' is missing or not a string");
  }
  fields.id = id->get<std::string>();

  auto label = record.find("label");
  if (label == record.end() || !label->is_string()) {
    return LineError(ErrorKind::kSchemaError, line_no,
                     "field 'label' is missing or not a string");
  }
  std::optional<Label> parsed_label =
      ParseLabel(label->get_ref<const std::string&>());
  if (!parsed_label.has_value()) {
    return LineError(ErrorKind::kSchemaError, line_no,
                     "field 'label' must be member, nonmember or unknown");
  }
  fields.label = *parsed_label;

  if (auto text = record.find("text"); text != record.end()) {
    if (!text->is_string()) {
      return LineError(ErrorKind::kSchemaError, line_no,
                       "field 'text' must be a string");
    }
    fields.text = text->get<std::string>();
  }

  auto logprobs = record.find("token_logprobs");
  if (logprobs == record.end()) {
    return LineError(ErrorKind::kSchemaError, line_no,
                     "field 'token_logprobs' is missing");
  }
  MIA_ASSIGN_OR_RETURN(fields.token_logprobs,
                       internal::ReadLogprobArray(*logprobs, line_no,
                                                  "token_logprobs"));
  if (fields.token_logprobs.empty()) {
    return LineError(ErrorKind::kSchemaError, line_no,
                     "field 'token_logprobs' is empty");
  }

  if (auto aux = record.find("aux"); aux != record.end() && !aux->is_null()) {
    if (!aux->is_object()) {
      return LineError(ErrorKind::kSchemaError, line_no,
                       "field 'aux' must be an object");
    }
    if (auto lower = aux->find("lowercase_logprobs"); lower != aux->end()) {
      MIA_ASSIGN_OR_RETURN(fields.lowercase_logprobs,
                           internal::ReadLogprobArray(
                               *lower, line_no, "aux.lowercase_logprobs"));
    }
    if (auto neighbors = aux->find("neighbor_logprobs");
        neighbors != aux->end()) {
      if (!neighbors->is_array()) {
        return LineError(ErrorKind::kSchemaError, line_no,
                         "field 'aux.neighbor_logprobs' must be an array");
      }
      std::vector<LogprobSequence> seqs;
      seqs.reserve(neighbors->size());
      for (size_t i = 0; i < neighbors->size(); ++i) {
        MIA_ASSIGN_OR_RETURN(
            LogprobSequence seq,
            internal::ReadLogprobArray(
                (*neighbors)[i], line_no,
                absl::StrCat("aux.neighbor_logprobs[", i, "]")));
        seqs.push_back(std::move(seq));
      }
      fields.neighbor_logprobs = std::move(seqs);
    }
  }

  absl::StatusOr<ScoredSample> sample = ScoredSample::Create(std::move(fields));
  if (!sample.ok()) {
    return LineError(ErrorKindOf(sample.status()).value_or(
                         ErrorKind::kSchemaError),
                     line_no, sample.status().message());
  }
  return sample;
}

inline nlohmann::ordered_json SampleToJson(const ScoredSample& sample) {
  nlohmann::ordered_json record;
  record["id"] = sample.id();
  record["label"] = std::string(LabelName(sample.label()));
  if (sample.text().has_value()) record["text"] = *sample.text();
  record["token_logprobs"] = sample.fields().token_logprobs;
  if (sample.lowercase_logprobs().has_value() ||
      sample.neighbor_logprobs().has_value()) {
    nlohmann::ordered_json aux = nlohmann::ordered_json::object();
    if (sample.lowercase_logprobs().has_value()) {
      aux["lowercase_logprobs"] = *sample.lowercase_logprobs();
    }
    if (sample.neighbor_logprobs().has_value()) {
      aux["neighbor_logprobs"] = *sample.neighbor_logprobs();
    }
    record["aux"] = std::move(aux);
  }
  return record;
}

// Parses a whole stream. Blank lines are skipped; line numbers are 1-based.
// Either every record is accepted or an error is returned.
inline absl::StatusOr<std::vector<ScoredSample>> ParseJsonl(
    std::istream& in) {
  using internal::LineError;
  std::vector<ScoredSample> samples;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::out_of_range& e) {
      return LineError(ErrorKind::kNonFiniteValue, line_no, e.what());
    } catch (const nlohmann::json::parse_error& e) {
      if (nlohmann::json::accept(internal::ReplaceBareNonFinite(line))) {
        return LineError(ErrorKind::kNonFiniteValue, line_no,
                         "record contains a NaN or Infinity literal");
      }
      return LineError(ErrorKind::kParseError, line_no, e.what());
    }
    MIA_ASSIGN_OR_RETURN(ScoredSample sample, SampleFromJson(record, line_no));
    if (!seen.insert(sample.id()).second) {
      return MakeError(ErrorKind::kDuplicateId,
                       absl::StrCat("line ", line_no, ": duplicate id '",
                                    sample.id(), "'"));
    }
    samples.push_back(std::move(sample));
  }
  if (in.bad()) {
    return MakeError(ErrorKind::kIoError, "read failure on JSONL stream");
  }
  return samples;
}

inline absl::Status EmitJsonl(const std::vector<ScoredSample>& samples,
                              std::ostream& out) {
  for (const ScoredSample& sample : samples) {
    out << SampleToJson(sample).dump() << '\n';
  }
  out.flush();
  if (!out) return MakeError(ErrorKind::kIoError, "write failure on JSONL sink");
  return absl::OkStatus();
}

inline absl::StatusOr<std::vector<ScoredSample>> ReadJsonlFile(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIoError,
                     absl::StrCat("cannot open '", path, "' for reading"));
  }
  return ParseJsonl(in);
}

inline absl::Status WriteJsonlFile(const std::vector<ScoredSample>& samples,
                                   const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIoError,
                     absl::StrCat("cannot open '", path, "' for writing"));
  }
  return EmitJsonl(samples, out);
}

}  // namespace mia

#endif  // MIA_JSONL_HPP_

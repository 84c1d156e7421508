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

// Client for the log-probability scoring endpoint:
//
//   POST {base_url}/v1/logprobs   {"text": "..."}
//   200 {"tokens": ["..."], "token_logprobs": [null, -1.5, ...]}
//   non-200 {"error": "..."}
//
// A null first log-probability (no conditional probability for the first
// token) is dropped.

#ifndef MIA_HTTP_CLIENT_HPP_
#define MIA_HTTP_CLIENT_HPP_

#include <chrono>
#include <cmath>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "httplib.h"
#include "json.hpp"
#include "mia/jsonl.hpp"
#include "mia/sample.hpp"
#include "mia/status.hpp"

namespace mia {

inline constexpr absl::string_view kLogprobsPath = "/v1/logprobs";

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{100};
};

struct ScoringEndpoint {
  std::string base_url;
  std::chrono::milliseconds timeout{30000};
  int max_parallel = 4;
  RetryPolicy retry;

  absl::Status Validate() const {
    if (max_parallel < 1) {
      return MakeError(ErrorKind::kInvalidConfig, "max_parallel must be >= 1");
    }
    if (retry.max_attempts < 1) {
      return MakeError(ErrorKind::kInvalidConfig, "max_attempts must be >= 1");
    }
    if (timeout.count() <= 0) {
      return MakeError(ErrorKind::kInvalidConfig, "timeout must be positive");
    }
    return absl::OkStatus();
  }
};

struct FetchedLogprobs {
  std::vector<std::string> tokens;
  LogprobSequence token_logprobs;
  int attempts = 0;  // 1 when the first request succeeded
};

namespace internal {

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

inline absl::StatusOr<SplitUrl> SplitBaseUrl(absl::string_view url) {
  constexpr absl::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("endpoint '", url,
                                  "' must be an http:// URL"));
  }
  const size_t slash = url.find('/', kScheme.size());
  SplitUrl split;
  split.scheme_host_port = std::string(url.substr(0, slash));
  if (slash != absl::string_view::npos) {
    split.path_prefix = std::string(url.substr(slash));
    while (!split.path_prefix.empty() && split.path_prefix.back() == '/') {
      split.path_prefix.pop_back();
    }
  }
  if (split.scheme_host_port.size() == kScheme.size()) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("endpoint '", url, "' has no host"));
  }
  return split;
}

inline absl::StatusOr<FetchedLogprobs> DecodeLogprobsBody(
    absl::string_view body) {
  nlohmann::json json = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    return MakeError(ErrorKind::kProtocolError,
                     "response body is not a JSON object");
  }
  auto tokens = json.find("tokens");
  auto logprobs = json.find("token_logprobs");
  if (tokens == json.end() || !tokens->is_array() || logprobs == json.end() ||
      !logprobs->is_array()) {
    return MakeError(ErrorKind::kProtocolError,
                     "response needs 'tokens' and 'token_logprobs' arrays");
  }
  if (tokens->size() != logprobs->size()) {
    return MakeError(ErrorKind::kProtocolError,
                     absl::StrCat("response has ", tokens->size(),
                                  " tokens but ", logprobs->size(),
                                  " log-probabilities"));
  }
  FetchedLogprobs out;
  for (const nlohmann::json& token : *tokens) {
    if (!token.is_string()) {
      return MakeError(ErrorKind::kProtocolError, "token is not a string");
    }
    out.tokens.push_back(token.get<std::string>());
  }
  for (size_t i = 0; i < logprobs->size(); ++i) {
    const nlohmann::json& item = (*logprobs)[i];
    if (item.is_null() && i == 0) continue;
    if (item.is_string() &&
        IsNonFiniteSpelling(item.get_ref<const std::string&>())) {
      return MakeError(ErrorKind::kNonFiniteValue,
                       absl::StrCat("token_logprobs[", i, "] is not finite"));
    }
    if (!item.is_number()) {
      return MakeError(ErrorKind::kProtocolError,
                       absl::StrCat("token_logprobs[", i,
                                    "] is not a number"));
    }
    double lp = item.get<double>();
    if (!std::isfinite(lp)) {
      return MakeError(ErrorKind::kNonFiniteValue,
                       absl::StrCat("token_logprobs[", i, "] is not finite"));
    }
    if (lp > kPositiveNoiseTolerance) {
      return MakeError(ErrorKind::kProtocolError,
                       absl::StrCat("token_logprobs[", i, "] = ", lp,
                                    " is a positive log-probability"));
    }
    out.token_logprobs.push_back(lp > 0.0 ? 0.0 : lp);
  }
  return out;
}

inline std::string ErrorMessageFromBody(absl::string_view body) {
  nlohmann::json json = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
  if (json.is_object()) {
    auto error = json.find("error");
    if (error != json.end() && error->is_string()) {
      return error->get<std::string>();
    }
  }
  return std::string(body.substr(0, 200));
}

}  // namespace internal

// One scoring request with retries. Transport failures and 5xx responses
// are retried with exponential backoff (base, 2 x base, 4 x base, ...);
// any other non-200 status is a protocol error and is not retried.
inline absl::StatusOr<FetchedLogprobs> FetchLogprobs(
    const ScoringEndpoint& endpoint, absl::string_view text) {
  MIA_RETURN_IF_ERROR(endpoint.Validate());
  if (text.empty()) {
    return MakeError(ErrorKind::kMissingText, "cannot score empty text");
  }
  MIA_ASSIGN_OR_RETURN(const internal::SplitUrl url,
                       internal::SplitBaseUrl(endpoint.base_url));

  httplib::Client client(url.scheme_host_port);
  const auto seconds =
      std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      endpoint.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  const std::string path = url.path_prefix + std::string(kLogprobsPath);
  const std::string body = nlohmann::json{{"text", std::string(text)}}.dump();

  std::string last_failure;
  for (int attempt = 1; attempt <= endpoint.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(endpoint.retry.backoff_base *
                                  (int64_t{1} << (attempt - 2)));
    }
    httplib::Result result = client.Post(path, body, "application/json");
    if (!result) {
      last_failure = httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_failure =
          absl::StrCat("HTTP ", result->status, ": ",
                       internal::ErrorMessageFromBody(result->body));
      continue;
    }
    if (result->status != 200) {
      return MakeError(ErrorKind::kProtocolError,
                       absl::StrCat("HTTP ", result->status, " from ",
                                    endpoint.base_url, ": ",
                                    internal::ErrorMessageFromBody(
                                        result->body)));
    }
    MIA_ASSIGN_OR_RETURN(FetchedLogprobs fetched,
                         internal::DecodeLogprobsBody(result->body));
    fetched.attempts = attempt;
    return fetched;
  }
  return MakeError(ErrorKind::kTransportError,
                   absl::StrCat(endpoint.base_url, path, " failed after ",
                                endpoint.retry.max_attempts,
                                " attempt(s): ", last_failure));
}

}  // namespace mia

#endif  // MIA_HTTP_CLIENT_HPP_

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

#ifndef MIA_STATUS_HPP_
#define MIA_STATUS_HPP_

#include <array>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace mia {

// Domain error kinds. Every error produced by this library is an absl::Status
// carrying one of these as a payload, so callers can branch on the kind
// without parsing messages.
enum class ErrorKind {
  kEmptySequence,
  kMissingAux,
  kMissingText,
  kDivisionByZero,
  kInvalidK,
  kInvalidWindow,
  kWindowTooLarge,
  kDegenerateLabels,
  kParseError,
  kSchemaError,
  kNonFiniteValue,
  kDuplicateId,
  kTransportError,
  kProtocolError,
  kInvalidConfig,
  kIoError,
};

inline constexpr absl::string_view kErrorKindPayloadUrl = "mia.audit/error-kind";

inline constexpr std::array<absl::string_view, 16> kErrorKindNames = {
    "EmptySequence",  "MissingAux",     "MissingText",      "DivisionByZero",
    "InvalidK",       "InvalidWindow",  "WindowTooLarge",   "DegenerateLabels",
    "ParseError",     "SchemaError",    "NonFiniteValue",   "DuplicateId",
    "TransportError", "ProtocolError",  "InvalidConfig",    "IoError",
};

inline absl::string_view ErrorKindName(ErrorKind kind) {
  return kErrorKindNames[static_cast<size_t>(kind)];
}

namespace internal {

inline absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kTransportError:
      return absl::StatusCode::kUnavailable;
    case ErrorKind::kIoError:
      return absl::StatusCode::kDataLoss;
    case ErrorKind::kDivisionByZero:
    case ErrorKind::kDegenerateLabels:
    case ErrorKind::kMissingAux:
    case ErrorKind::kMissingText:
      return absl::StatusCode::kFailedPrecondition;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace internal

inline absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  absl::Status status(internal::CodeFor(kind),
                      absl::StrCat(ErrorKindName(kind), ": ", message));
  status.SetPayload(kErrorKindPayloadUrl,
                    absl::Cord(std::string(ErrorKindName(kind))));
  return status;
}

// Returns the domain kind attached by MakeError, or nullopt for OK statuses
// and statuses that did not originate here.
inline std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  if (status.ok()) return std::nullopt;
  auto payload = status.GetPayload(kErrorKindPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (size_t i = 0; i < kErrorKindNames.size(); ++i) {
    if (kErrorKindNames[i] == name) return static_cast<ErrorKind>(i);
  }
  return std::nullopt;
}

}  // namespace mia

#define MIA_RETURN_IF_ERROR(expr)              \
  do {                                         \
    ::absl::Status mia_status_ = (expr);       \
    if (!mia_status_.ok()) return mia_status_; \
  } while (false)

#define MIA_CONCAT_INNER_(a, b) a##b
#define MIA_CONCAT_(a, b) MIA_CONCAT_INNER_(a, b)
#define MIA_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                               \
  if (!tmp.ok()) return tmp.status();              \
  lhs = std::move(tmp).value()
#define MIA_ASSIGN_OR_RETURN(lhs, expr) \
  MIA_ASSIGN_OR_RETURN_IMPL_(MIA_CONCAT_(mia_statusor_, __LINE__), lhs, expr)

#endif  // MIA_STATUS_HPP_

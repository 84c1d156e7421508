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

#ifndef MIA_COMPRESS_HPP_
#define MIA_COMPRESS_HPP_

#include <cstddef>
#include <vector>

#include <zlib.h>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mia/status.hpp"

namespace mia {

inline constexpr int kZlibLevel = 6;

// Byte length of the zlib-wrapped DEFLATE stream (2-byte header, payload,
// 4-byte Adler-32 trailer) of `bytes` at compression level 6.
inline absl::StatusOr<size_t> ZlibLength(absl::string_view bytes) {
  uLongf dest_len = compressBound(static_cast<uLong>(bytes.size()));
  std::vector<Bytef> dest(dest_len);
  const int rc = compress2(dest.data(), &dest_len,
                           reinterpret_cast<const Bytef*>(bytes.data()),
                           static_cast<uLong>(bytes.size()), kZlibLevel);
  if (rc != Z_OK) {
    return MakeError(ErrorKind::kIoError,
                     absl::StrCat("zlib compress2 failed with code ", rc));
  }
  return static_cast<size_t>(dest_len);
}

}  // namespace mia

#endif  // MIA_COMPRESS_HPP_

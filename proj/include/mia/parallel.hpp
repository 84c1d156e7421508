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

#ifndef MIA_PARALLEL_HPP_
#define MIA_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "absl/status/status.h"

namespace mia {

// Runs fn(0) .. fn(count - 1) on up to `parallelism` threads. Indices are
// claimed in increasing order and no new index is claimed after a failure,
// so the returned error is always the one with the lowest failing index,
// the same error a sequential loop would report.
inline absl::Status ParallelFor(size_t count, int parallelism,
                                const std::function<absl::Status(size_t)>& fn) {
  const size_t workers = std::min<size_t>(
      count, static_cast<size_t>(std::max(parallelism, 1)));
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  size_t first_failure = std::numeric_limits<size_t>::max();
  absl::Status first_status;

  auto work = [&] {
    while (!failed.load(std::memory_order_acquire)) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      absl::Status status = fn(i);
      if (!status.ok()) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < first_failure) {
          first_failure = i;
          first_status = std::move(status);
        }
        failed.store(true, std::memory_order_release);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (size_t t = 0; t < workers; ++t) threads.emplace_back(work);
  }
  return first_status;
}

}  // namespace mia

#endif  // MIA_PARALLEL_HPP_

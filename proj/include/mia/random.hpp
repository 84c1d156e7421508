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

#ifndef MIA_RANDOM_HPP_
#define MIA_RANDOM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace mia {

// Seeded uniform, index and normal draws from a 64-bit Mersenne Twister
// (normals via Box-Muller). The standard library distributions are
// implementation-defined, so they would give different seeded output on
// different standard libraries.
class PortableRng {
 public:
  explicit PortableRng(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Normal(double mean, double stddev) {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  size_t Index(size_t n) {
    return std::min(static_cast<size_t>(Uniform() * static_cast<double>(n)),
                    n - 1);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mia

#endif  // MIA_RANDOM_HPP_

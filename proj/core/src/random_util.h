// Copyright 2026 The odsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable random helpers. The standard distributions are implementation
// defined, so draws are made directly from mt19937_64 output to keep results
// identical across standard libraries.

#ifndef ODSEL_SRC_RANDOM_UTIL_H_
#define ODSEL_SRC_RANDOM_UTIL_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace odsel {

using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be positive.
inline uint64_t UniformIndex(Rng& rng, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform integer in [lo, hi].
inline int UniformInt(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(UniformIndex(rng, static_cast<uint64_t>(hi - lo) + 1));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline bool Bernoulli(Rng& rng, double p) { return UniformUnit(rng) < p; }

template <typename T>
void Shuffle(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(UniformIndex(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

template <typename T>
const T& Choose(const std::vector<T>& v, Rng& rng) {
  return v[static_cast<size_t>(UniformIndex(rng, v.size()))];
}

}  // namespace odsel

#endif  // ODSEL_SRC_RANDOM_UTIL_H_

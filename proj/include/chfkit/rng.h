// Copyright 2026 The chfkit Authors
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

#ifndef CHFKIT_RNG_H_
#define CHFKIT_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace chfkit {

/// Seeded generator whose every derived draw is fixed by this library rather
/// than by the standard library's distributions, which are
/// implementation-defined. The engine is MT19937-64, whose output sequence
/// is fully specified by the C++ standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via the Box-Muller transform (one value per call).
  double normal();

  /// Fisher-Yates, drawing j uniformly from [0, i] for i = n-1 down to 1.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chfkit

#endif  // CHFKIT_RNG_H_

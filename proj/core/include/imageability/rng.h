//
// Copyright 2026 The Imageability Authors
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

#ifndef IMAGEABILITY_RNG_H_
#define IMAGEABILITY_RNG_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace imageability {

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes);

// The splitmix64 output function applied to a single value.
uint64_t Mix64(uint64_t value);

// Combines a base seed with a string tag into an independent stream seed.
uint64_t DeriveSeed(uint64_t base, std::string_view tag);

// Pinned splitmix64 generator. Every draw is defined purely in terms of
// 64-bit integer arithmetic so that sequences are reproducible across
// platforms and standard library implementations (unlike <random>
// distributions).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t Next();

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  uint64_t Bounded(uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();

  // Standard normal via Box-Muller. Uses libm log/cos/sin.
  double Gaussian();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(Bounded(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace imageability

#endif  // IMAGEABILITY_RNG_H_

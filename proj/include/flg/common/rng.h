// Copyright 2026 The FLG Authors.
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

#ifndef FLG_COMMON_RNG_H_
#define FLG_COMMON_RNG_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace flg {

// Counter-based keyed random stream.
//
// Output i of a stream is a keyed hash of the counter i, so a stream is fully
// determined by its 128-bit key. Child streams are derived by hashing a text
// label and up to two integer coordinates (round, client id) into the key;
// derivation never consumes output from the parent, so the order in which
// children are created or consumed cannot change any of them.
//
// Samplers (uniform, normal, integer) are implemented here rather than taken
// from <random> because the standard distributions are implementation-defined
// and the output files must be byte-stable across toolchains.
class RngStream {
 public:
  using result_type = uint64_t;

  explicit RngStream(uint64_t seed);

  // Child stream keyed by (this key, label, a, b).
  RngStream Derive(std::string_view label, uint64_t a = 0,
                   uint64_t b = 0) const;

  uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Uniform in (0, 1]; safe for log().
  double UniformPositive();
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }
  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    Shuffle(std::span<T>(items));
  }

  // UniformRandomBitGenerator surface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

  uint64_t key_hi() const { return key_hi_; }
  uint64_t key_lo() const { return key_lo_; }

 private:
  RngStream(uint64_t key_hi, uint64_t key_lo) : key_hi_(key_hi), key_lo_(key_lo) {}

  uint64_t key_hi_;
  uint64_t key_lo_;
  uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// 64-bit finalizer from SplitMix64 / MurmurHash3.
uint64_t Mix64(uint64_t x);

}  // namespace flg

#endif  // FLG_COMMON_RNG_H_

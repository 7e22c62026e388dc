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

#include "flg/common/rng.h"

#include <cmath>
#include <numbers>

#include "flg/common/error.h"

namespace flg {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t HashLabel(std::string_view label) {
  // FNV-1a, then mixed.
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return Mix64(h);
}

}  // namespace

uint64_t Mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(uint64_t seed)
    : key_hi_(Mix64(seed ^ 0x6A09E667F3BCC908ULL)),
      key_lo_(Mix64(seed + kGolden)) {}

RngStream RngStream::Derive(std::string_view label, uint64_t a,
                            uint64_t b) const {
  const uint64_t l = HashLabel(label);
  uint64_t hi = Mix64(key_hi_ ^ l);
  hi = Mix64(hi + a * kGolden);
  hi = Mix64(hi ^ (b + 0x3C6EF372FE94F82BULL));
  uint64_t lo = Mix64(key_lo_ + l);
  lo = Mix64(lo ^ (a + 0xA54FF53A5F1D36F1ULL));
  lo = Mix64(lo + b * kGolden);
  return RngStream(hi, lo);
}

uint64_t RngStream::NextU64() {
  const uint64_t c = counter_++;
  return Mix64(Mix64(c * kGolden + key_hi_) ^ key_lo_);
}

double RngStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RngStream::UniformPositive() {
  return static_cast<double>((NextU64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = UniformPositive();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

uint64_t RngStream::UniformInt(uint64_t n) {
  if (n == 0) throw InvalidArgument("UniformInt: n must be positive");
  // Rejection on the top of the range keeps the draw unbiased.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

}  // namespace flg

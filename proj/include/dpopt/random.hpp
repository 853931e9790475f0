// Copyright 2026 The dpopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPOPT_RANDOM_HPP_
#define DPOPT_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>

namespace dpopt {

// Finalizer from splitmix64. Bijective on 64-bit words, so distinct inputs
// never collide after mixing.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Folds an id into a key, producing the key of a child stream.
constexpr std::uint64_t fold_key(std::uint64_t key, std::uint64_t id) noexcept {
  return mix64(key ^ (mix64(id + kGoldenGamma) | 1ULL));
}

// Counter-based random stream. A stream is identified by a key; forking with
// an id yields an unrelated child stream. The value at any counter position
// is a pure function of (key, counter), so simulations can draw the noise for
// (trial, agent, round, component) in any order, on any thread, and always
// get the same number.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix64(seed + kGoldenGamma)) {}

  RngStream fork(std::uint64_t id) const {
    RngStream child(*this);
    child.key_ = fold_key(key_, id);
    child.counter_ = 0;
    return child;
  }

  std::uint64_t bits_at(std::uint64_t counter) const {
    return mix64(key_ ^ mix64(counter + kGoldenGamma));
  }

  // Uniform on the open interval (0,1). The offset of half an ulp keeps both
  // endpoints strictly excluded, which downstream inverse-CDF transforms rely
  // on to stay finite.
  double u01_at(std::uint64_t counter) const {
    return (static_cast<double>(bits_at(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_u01() { return u01_at(counter_++); }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_u01();
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Convenience: derive the stream for a path of ids under a root seed.
inline RngStream stream_for(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> path) {
  RngStream s(seed);
  for (std::uint64_t id : path) s = s.fork(id);
  return s;
}

}  // namespace dpopt

#endif  // DPOPT_RANDOM_HPP_

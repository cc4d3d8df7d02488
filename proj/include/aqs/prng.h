// Copyright 2026 The AQS Lab Authors.
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

#ifndef AQS_PRNG_H_
#define AQS_PRNG_H_

#include <cstdint>
#include <random>

namespace aqs {

// Seeded generator with named sub-streams. Every draw is derived from the
// raw 64-bit engine output with fixed arithmetic, so sequences are identical
// across standard libraries (the std distributions are not).
class Prng {
 public:
  explicit Prng(uint64_t seed);

  uint64_t seed() const { return seed_; }

  // Independent generator for `stream`; does not advance this one.
  Prng Split(uint64_t stream) const;

  uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Standard normal via Box-Muller.
  double Normal();
  bool Bit() { return (engine_() >> 63) != 0; }
  // Uniform on [0, bound).
  uint64_t Below(uint64_t bound);

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive stream seeds.
uint64_t Mix64(uint64_t x);

}  // namespace aqs

#endif  // AQS_PRNG_H_

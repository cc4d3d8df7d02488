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

#include "aqs/prng.h"

#include <cmath>
#include <numbers>

#include "aqs/error.h"

namespace aqs {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonNormalized:
      return "NonNormalized";
    case ErrorCode::kDeadQubit:
      return "DeadQubit";
    case ErrorCode::kGroupCapExceeded:
      return "GroupCapExceeded";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kNotFactored:
      return "NotFactored";
    case ErrorCode::kKeyTooShort:
      return "KeyTooShort";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kInvalidCase:
      return "InvalidCase";
  }
  return "Unknown";
}

uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Prng::Prng(uint64_t seed) : seed_(seed), engine_(Mix64(seed)) {}

Prng Prng::Split(uint64_t stream) const {
  return Prng(Mix64(seed_ ^ Mix64(stream + 0x5bd1e995ULL)));
}

double Prng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Prng::Normal() {
  // 1 - U keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t Prng::Below(uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  // Rejection sampling removes modulo bias.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

}  // namespace aqs

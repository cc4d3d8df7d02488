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

#ifndef AQS_QOTP_H_
#define AQS_QOTP_H_

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aqs/prng.h"
#include "aqs/qstate.h"

namespace aqs {

enum class KeyRole { kA, kB, kAT, kBT, kAB, kPad };

std::string_view KeyRoleName(KeyRole role);

// Immutable classical bit string.
class Key {
 public:
  Key(KeyRole role, std::vector<uint8_t> bits);
  // Parses "0110..." (whitespace not allowed).
  static Key FromString(KeyRole role, std::string_view bits);

  KeyRole role() const { return role_; }
  size_t size() const { return bits_.size(); }
  bool operator[](size_t i) const { return bits_.at(i) != 0; }
  std::span<const uint8_t> bits() const { return bits_; }
  std::string ToString() const;
  // Bitwise XOR; sizes must match.
  Key Xor(const Key& other) const;

  friend bool operator==(const Key& a, const Key& b) {
    return a.bits_ == b.bits_;
  }

 private:
  KeyRole role_;
  std::vector<uint8_t> bits_;
};

// Uniform random bits (stands in for a QKD-established key).
Key GenKey(size_t length, KeyRole role, Prng& rng);

// kStrict requires two key bits per qubit. kCyclic reuses the key
// cyclically, which is how one party key covers a concatenated tuple such as
// (P', S_A).
enum class PadReuse { kStrict, kCyclic };

// How the z-exponent index of M_K is chosen for qubit i (0-based) of n:
// cyclic successor (i + 1) mod n, or i XOR 1 reduced mod n.
enum class MIndexConvention { kCyclicSuccessor, kXorOne };

size_t MPartnerIndex(size_t i, size_t n, MIndexConvention convention);

// Pad exponents E_K uses on slot i of an n-qubit sequence:
// (K[2i], K[2i+1]). Validates the key length.
PauliBits PadBits(const Key& key, size_t i, size_t n, PadReuse reuse);
// Exponents M_K uses on qubit i: (K[i], K[partner(i)]).
PauliBits MBits(const Key& key, size_t i, size_t n,
                MIndexConvention convention);

// Anything that can apply sigma_x^x sigma_z^z (sigma_z first) to a qubit.
template <class T>
concept PauliTarget =
    requires(T& t, QubitId q, bool x, bool z) { t.ApplyPauli(q, x, z); };

// Applies sigma_z^z sigma_x^x, the inverse of ApplyPauli(q, x, z).
template <PauliTarget T>
void ApplyPauliInverse(T& target, QubitId q, PauliBits bits) {
  if (bits.x) target.ApplyPauli(q, true, false);
  if (bits.z) target.ApplyPauli(q, false, true);
}

// E_K: qubit i gets sigma_x^{K[2i]} sigma_z^{K[2i+1]}.
template <PauliTarget T>
void EncryptE(T& target, std::span<const QubitId> seq, const Key& key,
              PadReuse reuse = PadReuse::kStrict) {
  for (size_t i = 0; i < seq.size(); ++i) {
    const PauliBits b = PadBits(key, i, seq.size(), reuse);
    target.ApplyPauli(seq[i], b.x, b.z);
  }
}

template <PauliTarget T>
void DecryptE(T& target, std::span<const QubitId> seq, const Key& key,
              PadReuse reuse = PadReuse::kStrict) {
  for (size_t i = 0; i < seq.size(); ++i) {
    ApplyPauliInverse(target, seq[i], PadBits(key, i, seq.size(), reuse));
  }
}

// M_K: qubit i gets sigma_x^{K[i]} sigma_z^{K[partner(i)]}.
template <PauliTarget T>
void TransformM(
    T& target, std::span<const QubitId> seq, const Key& key,
    MIndexConvention convention = MIndexConvention::kCyclicSuccessor) {
  for (size_t i = 0; i < seq.size(); ++i) {
    const PauliBits b = MBits(key, i, seq.size(), convention);
    target.ApplyPauli(seq[i], b.x, b.z);
  }
}

template <PauliTarget T>
void TransformMInverse(
    T& target, std::span<const QubitId> seq, const Key& key,
    MIndexConvention convention = MIndexConvention::kCyclicSuccessor) {
  for (size_t i = 0; i < seq.size(); ++i) {
    ApplyPauliInverse(target, seq[i], MBits(key, i, seq.size(), convention));
  }
}

}  // namespace aqs

#endif  // AQS_QOTP_H_

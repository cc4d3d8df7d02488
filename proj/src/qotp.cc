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

#include "aqs/qotp.h"

#include <algorithm>

#include "aqs/error.h"

namespace aqs {

std::string_view KeyRoleName(KeyRole role) {
  switch (role) {
    case KeyRole::kA:
      return "K_A";
    case KeyRole::kB:
      return "K_B";
    case KeyRole::kAT:
      return "K_AT";
    case KeyRole::kBT:
      return "K_BT";
    case KeyRole::kAB:
      return "K_AB";
    case KeyRole::kPad:
      return "r";
  }
  return "?";
}

Key::Key(KeyRole role, std::vector<uint8_t> bits)
    : role_(role), bits_(std::move(bits)) {
  for (uint8_t& b : bits_) b = b != 0;
}

Key Key::FromString(KeyRole role, std::string_view bits) {
  std::vector<uint8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kInvalidArgument,
                  "key string must contain only 0 and 1");
    }
    out.push_back(c == '1');
  }
  return Key(role, std::move(out));
}

std::string Key::ToString() const {
  std::string s;
  s.reserve(bits_.size());
  for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

Key Key::Xor(const Key& other) const {
  if (other.size() != size()) {
    throw Error(ErrorCode::kLengthMismatch, "XOR of keys of unequal length");
  }
  std::vector<uint8_t> out(bits_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = bits_[i] ^ other.bits_[i];
  return Key(role_, std::move(out));
}

Key GenKey(size_t length, KeyRole role, Prng& rng) {
  if (length == 0) throw Error(ErrorCode::kInvalidArgument, "empty key");
  std::vector<uint8_t> bits(length);
  for (uint8_t& b : bits) b = rng.Bit();
  return Key(role, std::move(bits));
}

size_t MPartnerIndex(size_t i, size_t n, MIndexConvention convention) {
  switch (convention) {
    case MIndexConvention::kCyclicSuccessor:
      return (i + 1) % n;
    case MIndexConvention::kXorOne:
      return (i ^ 1) % n;
  }
  return i;
}

PauliBits PadBits(const Key& key, size_t i, size_t n, PadReuse reuse) {
  if (reuse == PadReuse::kStrict) {
    if (key.size() < 2 * n) {
      throw Error(ErrorCode::kKeyTooShort,
                  std::string(KeyRoleName(key.role())) + " has " +
                      std::to_string(key.size()) + " bits, need " +
                      std::to_string(2 * n));
    }
    return {key[2 * i], key[2 * i + 1]};
  }
  if (key.size() < 2 || key.size() % 2 != 0) {
    throw Error(ErrorCode::kKeyTooShort,
                "cyclic pad needs a non-empty even-length key");
  }
  return {key[(2 * i) % key.size()], key[(2 * i + 1) % key.size()]};
}

PauliBits MBits(const Key& key, size_t i, size_t n,
                MIndexConvention convention) {
  if (key.size() < n) {
    throw Error(ErrorCode::kKeyTooShort,
                std::string(KeyRoleName(key.role())) + " has " +
                    std::to_string(key.size()) + " bits, need " +
                    std::to_string(n));
  }
  return {key[i], key[MPartnerIndex(i, n, convention)]};
}

}  // namespace aqs

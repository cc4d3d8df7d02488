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

#ifndef AQS_QSTATE_H_
#define AQS_QSTATE_H_

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "aqs/prng.h"

namespace aqs {

using Amplitude = std::complex<double>;

inline constexpr int kMaxGroupQubits = 8;
// Two states are "equal" iff their fidelity is at least 1 - this.
inline constexpr double kEqualityTolerance = 1e-9;
inline constexpr double kNormTolerance = 1e-9;

struct QubitId {
  uint64_t value = 0;
  friend auto operator<=>(const QubitId&, const QubitId&) = default;
};

struct QubitAmplitudes {
  Amplitude alpha{1.0, 0.0};
  Amplitude beta{0.0, 0.0};
};

// Haar-random single-qubit state: two complex standard normals, normalized.
QubitAmplitudes RandomQubit(Prng& rng);

enum class BellOutcome : uint8_t { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

inline constexpr BellOutcome kAllBellOutcomes[] = {
    BellOutcome::kPhiPlus, BellOutcome::kPhiMinus, BellOutcome::kPsiPlus,
    BellOutcome::kPsiMinus};

// Exponents of sigma_x^x sigma_z^z.
struct PauliBits {
  bool x = false;
  bool z = false;
  friend bool operator==(const PauliBits&, const PauliBits&) = default;
};

// (x, z) such that (sigma_x^x sigma_z^z (x) I)|Phi+> is the outcome's Bell
// state up to global phase: PhiPlus (0,0), PhiMinus (0,1), PsiPlus (1,0),
// PsiMinus (1,1).
PauliBits BellOutcomeBits(BellOutcome outcome);
BellOutcome BellOutcomeFromBits(PauliBits bits);
std::string_view BellOutcomeName(BellOutcome outcome);
// Accepts the names produced by BellOutcomeName; throws on anything else.
BellOutcome ParseBellOutcome(std::string_view name);

// A detached pure state over k qubits. Basis index bit (k-1-j) is qubit j,
// i.e. the first qubit is the most significant (lexicographic order).
class StateVector {
 public:
  // Throws kNonNormalized unless the norm is 1 within kNormTolerance, and
  // kDimensionMismatch unless the size is a power of two (>= 2).
  explicit StateVector(std::vector<Amplitude> amplitudes);
  static StateVector FromQubit(QubitAmplitudes q);

  int num_qubits() const { return num_qubits_; }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  StateVector Tensor(const StateVector& other) const;

 private:
  std::vector<Amplitude> amplitudes_;
  int num_qubits_ = 0;
};

// |<a|b>|^2; throws kDimensionMismatch on unequal qubit counts.
double Fidelity(const StateVector& a, const StateVector& b);

// Sampled swap test: each shot accepts with probability (1 + F) / 2.
// Returns the accepted fraction.
double SwapTest(const StateVector& a, const StateVector& b, int shots,
                Prng& rng);

// Factored pure-state registry. Qubits live in independent groups, each an
// exact amplitude vector; groups are merged only when an operation spans
// two of them. Confined to one thread.
class Registry {
 public:
  explicit Registry(int max_group_qubits = kMaxGroupQubits);

  QubitId Alloc(Amplitude alpha, Amplitude beta);
  QubitId Alloc(QubitAmplitudes q) { return Alloc(q.alpha, q.beta); }
  // (|00> + |11>) / sqrt(2).
  std::pair<QubitId, QubitId> MakeBellPair();

  // sigma_x^x sigma_z^z: sigma_z acts first.
  void ApplyPauli(QubitId q, bool x, bool z);
  void ApplyPauli(QubitId q, PauliBits bits) { ApplyPauli(q, bits.x, bits.z); }

  // Born-rule Bell measurement with inverse-CDF sampling over the outcomes
  // in kAllBellOutcomes order. Consumes both qubits.
  BellOutcome BellMeasure(QubitId first, QubitId second, Prng& rng);
  // Postselects `outcome`, consumes both qubits, and returns the Born
  // probability the outcome had. Throws kInvalidArgument if it was zero.
  double ProjectBell(QubitId first, QubitId second, BellOutcome outcome);
  // Computational-basis measurement. Consumes the qubit.
  bool MeasureZ(QubitId q, Prng& rng);

  bool IsAlive(QubitId q) const { return owner_.contains(q.value); }
  // Number of qubits in q's group.
  int GroupSize(QubitId q) const;
  // True iff the groups of `qubits` contain no other qubits.
  bool IsFactored(std::span<const QubitId> qubits) const;
  // Joint state of `qubits` in the given order. Throws kNotFactored if they
  // share a group with any qubit outside the list.
  StateVector Snapshot(std::span<const QubitId> qubits) const;
  double Fidelity(std::span<const QubitId> a, std::span<const QubitId> b) const;
  double Fidelity(QubitId a, QubitId b) const;
  double Fidelity(QubitId a, const StateVector& reference) const;

  std::vector<QubitId> LiveQubits() const;
  size_t group_count() const { return groups_.size(); }
  // Largest |1 - sum |amp|^2| over all groups.
  double MaxNormDeviation() const;

 private:
  struct Group {
    std::vector<QubitId> members;
    std::vector<Amplitude> amplitudes;
  };

  uint64_t GroupOf(QubitId q) const;
  // Merges the groups of a and b (if distinct) and returns the survivor.
  uint64_t Merge(QubitId a, QubitId b);
  static int Position(const Group& g, QubitId q);
  std::array<double, 4> BellProbabilities(const Group& g, int pa, int pb) const;
  void CollapseBell(uint64_t gid, QubitId first, QubitId second,
                    BellOutcome outcome, double probability);

  int max_group_qubits_;
  uint64_t next_qubit_ = 1;
  uint64_t next_group_ = 1;
  std::map<uint64_t, uint64_t> owner_;  // qubit -> group
  std::map<uint64_t, Group> groups_;
};

}  // namespace aqs

#endif  // AQS_QSTATE_H_

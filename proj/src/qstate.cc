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

#include "aqs/qstate.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "aqs/error.h"

namespace aqs {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double NormSquared(std::span<const Amplitude> amps) {
  double s = 0.0;
  for (const Amplitude& a : amps) s += std::norm(a);
  return s;
}

// Mask of qubit `pos` in a k-qubit basis index (first qubit is the MSB).
size_t BitMask(int k, int pos) { return size_t{1} << (k - 1 - pos); }

}  // namespace

QubitAmplitudes RandomQubit(Prng& rng) {
  const double ar = rng.Normal(), ai = rng.Normal();
  const double br = rng.Normal(), bi = rng.Normal();
  const double norm = std::sqrt(ar * ar + ai * ai + br * br + bi * bi);
  return {Amplitude(ar / norm, ai / norm), Amplitude(br / norm, bi / norm)};
}

PauliBits BellOutcomeBits(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::kPhiPlus:
      return {false, false};
    case BellOutcome::kPhiMinus:
      return {false, true};
    case BellOutcome::kPsiPlus:
      return {true, false};
    case BellOutcome::kPsiMinus:
      return {true, true};
  }
  throw Error(ErrorCode::kInvalidArgument, "bad Bell outcome");
}

BellOutcome BellOutcomeFromBits(PauliBits bits) {
  if (bits.x) return bits.z ? BellOutcome::kPsiMinus : BellOutcome::kPsiPlus;
  return bits.z ? BellOutcome::kPhiMinus : BellOutcome::kPhiPlus;
}

std::string_view BellOutcomeName(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::kPhiPlus:
      return "PhiPlus";
    case BellOutcome::kPhiMinus:
      return "PhiMinus";
    case BellOutcome::kPsiPlus:
      return "PsiPlus";
    case BellOutcome::kPsiMinus:
      return "PsiMinus";
  }
  return "?";
}

BellOutcome ParseBellOutcome(std::string_view name) {
  for (BellOutcome o : kAllBellOutcomes) {
    if (BellOutcomeName(o) == name) return o;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown Bell outcome '" + std::string(name) + "'");
}

StateVector::StateVector(std::vector<Amplitude> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  const size_t size = amplitudes_.size();
  if (size < 2 || (size & (size - 1)) != 0) {
    throw Error(
        ErrorCode::kDimensionMismatch,
        "amplitude count " + std::to_string(size) + " is not a power of two");
  }
  num_qubits_ = std::countr_zero(size);
  if (std::abs(NormSquared(amplitudes_) - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::kNonNormalized, "state vector norm is not 1");
  }
}

StateVector StateVector::FromQubit(QubitAmplitudes q) {
  return StateVector({q.alpha, q.beta});
}

StateVector StateVector::Tensor(const StateVector& other) const {
  std::vector<Amplitude> out;
  out.reserve(amplitudes_.size() * other.amplitudes_.size());
  for (const Amplitude& a : amplitudes_) {
    for (const Amplitude& b : other.amplitudes_) out.push_back(a * b);
  }
  return StateVector(std::move(out));
}

double Fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.num_qubits()) + " vs " +
                    std::to_string(b.num_qubits()) + " qubits");
  }
  Amplitude overlap = 0.0;
  auto x = a.amplitudes(), y = b.amplitudes();
  for (size_t i = 0; i < x.size(); ++i) overlap += std::conj(x[i]) * y[i];
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

double SwapTest(const StateVector& a, const StateVector& b, int shots,
                Prng& rng) {
  if (shots < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be >= 1");
  const double accept = 0.5 * (1.0 + Fidelity(a, b));
  int accepted = 0;
  for (int s = 0; s < shots; ++s) {
    if (rng.Uniform() < accept) ++accepted;
  }
  return static_cast<double>(accepted) / shots;
}

Registry::Registry(int max_group_qubits) : max_group_qubits_(max_group_qubits) {
  if (max_group_qubits < 2) {
    throw Error(ErrorCode::kInvalidArgument, "group cap must be >= 2");
  }
}

QubitId Registry::Alloc(Amplitude alpha, Amplitude beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::kNonNormalized, "|alpha|^2 + |beta|^2 != 1");
  }
  const QubitId q{next_qubit_++};
  const uint64_t gid = next_group_++;
  groups_[gid] = Group{{q}, {alpha, beta}};
  owner_[q.value] = gid;
  return q;
}

std::pair<QubitId, QubitId> Registry::MakeBellPair() {
  const QubitId a{next_qubit_++};
  const QubitId b{next_qubit_++};
  const uint64_t gid = next_group_++;
  groups_[gid] = Group{{a, b}, {kInvSqrt2, 0.0, 0.0, kInvSqrt2}};
  owner_[a.value] = gid;
  owner_[b.value] = gid;
  return {a, b};
}

uint64_t Registry::GroupOf(QubitId q) const {
  auto it = owner_.find(q.value);
  if (it == owner_.end()) {
    throw Error(ErrorCode::kDeadQubit,
                "qubit " + std::to_string(q.value) + " is not alive");
  }
  return it->second;
}

int Registry::Position(const Group& g, QubitId q) {
  auto it = std::find(g.members.begin(), g.members.end(), q);
  return static_cast<int>(it - g.members.begin());
}

int Registry::GroupSize(QubitId q) const {
  return static_cast<int>(groups_.at(GroupOf(q)).members.size());
}

uint64_t Registry::Merge(QubitId a, QubitId b) {
  const uint64_t ga = GroupOf(a), gb = GroupOf(b);
  if (ga == gb) return ga;
  Group& left = groups_.at(ga);
  Group& right = groups_.at(gb);
  const size_t k = left.members.size() + right.members.size();
  if (k > static_cast<size_t>(max_group_qubits_)) {
    throw Error(ErrorCode::kGroupCapExceeded,
                "merge would entangle " + std::to_string(k) + " qubits");
  }
  std::vector<Amplitude> amps;
  amps.reserve(left.amplitudes.size() * right.amplitudes.size());
  for (const Amplitude& x : left.amplitudes) {
    for (const Amplitude& y : right.amplitudes) amps.push_back(x * y);
  }
  left.amplitudes = std::move(amps);
  for (QubitId m : right.members) {
    left.members.push_back(m);
    owner_[m.value] = ga;
  }
  groups_.erase(gb);
  return ga;
}

void Registry::ApplyPauli(QubitId q, bool x, bool z) {
  Group& g = groups_.at(GroupOf(q));
  const int k = static_cast<int>(g.members.size());
  const size_t mask = BitMask(k, Position(g, q));
  if (z) {
    for (size_t i = 0; i < g.amplitudes.size(); ++i) {
      if (i & mask) g.amplitudes[i] = -g.amplitudes[i];
    }
  }
  if (x) {
    for (size_t i = 0; i < g.amplitudes.size(); ++i) {
      if (!(i & mask)) std::swap(g.amplitudes[i], g.amplitudes[i | mask]);
    }
  }
}

std::array<double, 4> Registry::BellProbabilities(const Group& g, int pa,
                                                  int pb) const {
  const int k = static_cast<int>(g.members.size());
  const size_t ma = BitMask(k, pa), mb = BitMask(k, pb);
  std::array<double, 4> p{};
  for (size_t i = 0; i < g.amplitudes.size(); ++i) {
    if (i & (ma | mb)) continue;
    const Amplitude a00 = g.amplitudes[i];
    const Amplitude a01 = g.amplitudes[i | mb];
    const Amplitude a10 = g.amplitudes[i | ma];
    const Amplitude a11 = g.amplitudes[i | ma | mb];
    p[0] += 0.5 * std::norm(a00 + a11);
    p[1] += 0.5 * std::norm(a00 - a11);
    p[2] += 0.5 * std::norm(a01 + a10);
    p[3] += 0.5 * std::norm(a01 - a10);
  }
  return p;
}

void Registry::CollapseBell(uint64_t gid, QubitId first, QubitId second,
                            BellOutcome outcome, double probability) {
  Group& g = groups_.at(gid);
  const int k = static_cast<int>(g.members.size());
  const size_t ma = BitMask(k, Position(g, first));
  const size_t mb = BitMask(k, Position(g, second));
  const double scale = kInvSqrt2 / std::sqrt(probability);

  std::vector<Amplitude> rest;
  rest.reserve(g.amplitudes.size() / 4);
  // Indices with both measured bits clear enumerate the remaining basis in
  // order, so pushing in sequence yields the reduced vector directly.
  for (size_t i = 0; i < g.amplitudes.size(); ++i) {
    if (i & (ma | mb)) continue;
    const Amplitude a00 = g.amplitudes[i];
    const Amplitude a01 = g.amplitudes[i | mb];
    const Amplitude a10 = g.amplitudes[i | ma];
    const Amplitude a11 = g.amplitudes[i | ma | mb];
    Amplitude c;
    switch (outcome) {
      case BellOutcome::kPhiPlus:
        c = a00 + a11;
        break;
      case BellOutcome::kPhiMinus:
        c = a00 - a11;
        break;
      case BellOutcome::kPsiPlus:
        c = a01 + a10;
        break;
      case BellOutcome::kPsiMinus:
        c = a01 - a10;
        break;
    }
    rest.push_back(c * scale);
  }

  owner_.erase(first.value);
  owner_.erase(second.value);
  std::erase(g.members, first);
  std::erase(g.members, second);
  if (g.members.empty()) {
    groups_.erase(gid);
    return;
  }
  const double norm = std::sqrt(NormSquared(rest));
  for (Amplitude& a : rest) a /= norm;
  g.amplitudes = std::move(rest);
}

BellOutcome Registry::BellMeasure(QubitId first, QubitId second, Prng& rng) {
  if (first == second) {
    throw Error(ErrorCode::kInvalidArgument, "Bell measurement on one qubit");
  }
  GroupOf(first);
  GroupOf(second);
  const uint64_t gid = Merge(first, second);
  const Group& g = groups_.at(gid);
  const auto p = BellProbabilities(g, Position(g, first), Position(g, second));

  const double u = rng.Uniform();
  double cumulative = 0.0;
  int chosen = -1;
  for (int i = 0; i < 4; ++i) {
    if (p[i] <= 0.0) continue;
    cumulative += p[i];
    chosen = i;
    if (u < cumulative) break;
  }
  const BellOutcome outcome = kAllBellOutcomes[chosen];
  CollapseBell(gid, first, second, outcome, p[chosen]);
  return outcome;
}

double Registry::ProjectBell(QubitId first, QubitId second,
                             BellOutcome outcome) {
  if (first == second) {
    throw Error(ErrorCode::kInvalidArgument, "Bell projection on one qubit");
  }
  GroupOf(first);
  GroupOf(second);
  const uint64_t gid = Merge(first, second);
  const Group& g = groups_.at(gid);
  const auto p = BellProbabilities(g, Position(g, first), Position(g, second));
  const double prob = p[static_cast<int>(outcome)];
  if (prob <= 1e-15) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(BellOutcomeName(outcome)) + " has probability 0");
  }
  CollapseBell(gid, first, second, outcome, prob);
  return prob;
}

bool Registry::MeasureZ(QubitId q, Prng& rng) {
  const uint64_t gid = GroupOf(q);
  Group& g = groups_.at(gid);
  const int k = static_cast<int>(g.members.size());
  const size_t mask = BitMask(k, Position(g, q));
  double p1 = 0.0;
  for (size_t i = 0; i < g.amplitudes.size(); ++i) {
    if (i & mask) p1 += std::norm(g.amplitudes[i]);
  }
  const bool one = rng.Uniform() < p1;
  std::vector<Amplitude> rest;
  for (size_t i = 0; i < g.amplitudes.size(); ++i) {
    if (!(i & mask)) rest.push_back(g.amplitudes[one ? (i | mask) : i]);
  }
  owner_.erase(q.value);
  std::erase(g.members, q);
  if (g.members.empty()) {
    groups_.erase(gid);
    return one;
  }
  const double norm = std::sqrt(NormSquared(rest));
  for (Amplitude& a : rest) a /= norm;
  g.amplitudes = std::move(rest);
  return one;
}

bool Registry::IsFactored(std::span<const QubitId> qubits) const {
  std::set<uint64_t> wanted;
  for (QubitId q : qubits) wanted.insert(q.value);
  for (QubitId q : qubits) {
    for (QubitId m : groups_.at(GroupOf(q)).members) {
      if (!wanted.contains(m.value)) return false;
    }
  }
  return true;
}

StateVector Registry::Snapshot(std::span<const QubitId> qubits) const {
  if (qubits.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "empty snapshot");
  }
  std::set<uint64_t> seen;
  for (QubitId q : qubits) {
    GroupOf(q);
    if (!seen.insert(q.value).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate qubit in snapshot");
    }
  }
  if (!IsFactored(qubits)) {
    throw Error(ErrorCode::kNotFactored,
                "requested qubits are entangled with other qubits");
  }

  // Joint vector of the touched groups, in first-appearance order.
  std::vector<uint64_t> gids;
  for (QubitId q : qubits) {
    const uint64_t gid = GroupOf(q);
    if (std::find(gids.begin(), gids.end(), gid) == gids.end()) {
      gids.push_back(gid);
    }
  }
  std::vector<QubitId> order;
  std::vector<Amplitude> joint{1.0};
  for (uint64_t gid : gids) {
    const Group& g = groups_.at(gid);
    std::vector<Amplitude> next;
    next.reserve(joint.size() * g.amplitudes.size());
    for (const Amplitude& x : joint) {
      for (const Amplitude& y : g.amplitudes) next.push_back(x * y);
    }
    joint = std::move(next);
    order.insert(order.end(), g.members.begin(), g.members.end());
  }

  // Permute from `order` into the requested order.
  const int k = static_cast<int>(qubits.size());
  std::vector<int> source_pos(k);
  for (int j = 0; j < k; ++j) {
    source_pos[j] = static_cast<int>(
        std::find(order.begin(), order.end(), qubits[j]) - order.begin());
  }
  std::vector<Amplitude> out(joint.size());
  for (size_t o = 0; o < out.size(); ++o) {
    size_t src = 0;
    for (int j = 0; j < k; ++j) {
      if (o & BitMask(k, j)) src |= BitMask(k, source_pos[j]);
    }
    out[o] = joint[src];
  }
  return StateVector(std::move(out));
}

double Registry::Fidelity(std::span<const QubitId> a,
                          std::span<const QubitId> b) const {
  return aqs::Fidelity(Snapshot(a), Snapshot(b));
}

double Registry::Fidelity(QubitId a, QubitId b) const {
  return Fidelity(std::span<const QubitId>(&a, 1),
                  std::span<const QubitId>(&b, 1));
}

double Registry::Fidelity(QubitId a, const StateVector& reference) const {
  return aqs::Fidelity(Snapshot(std::span<const QubitId>(&a, 1)), reference);
}

std::vector<QubitId> Registry::LiveQubits() const {
  std::vector<QubitId> out;
  out.reserve(owner_.size());
  for (const auto& [q, gid] : owner_) out.push_back(QubitId{q});
  return out;
}

double Registry::MaxNormDeviation() const {
  double worst = 0.0;
  for (const auto& [gid, g] : groups_) {
    worst = std::max(worst, std::abs(1.0 - NormSquared(g.amplitudes)));
  }
  return worst;
}

}  // namespace aqs

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

#ifndef AQS_PROTOCOL_H_
#define AQS_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aqs/prng.h"
#include "aqs/qotp.h"
#include "aqs/qstate.h"
#include "aqs/transcript.h"

namespace aqs {

// Classical description of the product message |P> = (x)_i (a_i|0> + b_i|1>).
// Only the signer holds it; copies of |P> are prepared from it on demand.
struct MessageSpec {
  std::vector<QubitAmplitudes> qubits;

  static MessageSpec Random(int n, Prng& rng);
  int size() const { return static_cast<int>(qubits.size()); }
};

enum class ComparatorKind { kExact, kSwapTest };

// How a party decides two sequences are equal. kExact passes iff every
// index has fidelity >= 1 - kEqualityTolerance. kSwapTest runs `shots`
// sampled swap tests per index and passes iff all of them accept.
struct Comparator {
  ComparatorKind kind = ComparatorKind::kExact;
  int shots = 0;

  static Comparator Exact() { return {}; }
  static Comparator Swap(int shots);
  // "exact" or "swap:SHOTS".
  static Comparator Parse(std::string_view text);
  std::string ToString() const;
};

// One hop on a tappable channel. Taps may rewrite the payload in place but
// not change its length.
struct Transmission {
  std::string step;
  Party from = Party::kAlice;
  Party to = Party::kBob;
  std::vector<QubitId> qubits;
  std::vector<BellOutcome> outcomes;
  std::optional<bool> flag;
};

class World;
using ChannelTap = std::function<void(Transmission&, World&)>;

// Dishonest behaviour of the signer or the verifier. Index maps are
// 0-based message positions.
struct Deviations {
  // Bob reports a failed comparison whatever his check says.
  bool bob_claims_mismatch = false;
  // Scheme 1, S3: Pauli on Alice's teleportation input copy of P'.
  std::map<size_t, PauliBits> teleport_input_tamper;
  // Scheme 1, S5: XOR into the sent Bell outcome bits.
  std::map<size_t, PauliBits> outcome_tamper;
  // Scheme 2, S1': Pauli on R_AB.
  std::map<size_t, PauliBits> r_ab_tamper;
  // Both schemes: Pauli on S_A after signing (a forged signature).
  std::map<size_t, PauliBits> s_a_tamper;
  // Alice publishes r XOR mask instead of r.
  std::optional<Key> published_pad_mask;
};

struct RunConfig {
  int n = 1;
  uint64_t seed = 0;
  std::optional<MessageSpec> message;
  Comparator comparator;
  MIndexConvention convention = MIndexConvention::kCyclicSuccessor;
  std::vector<ChannelTap> taps;
  Deviations deviations;
  // Replace dealt keys / the pad r. The random draws still happen, so the
  // rest of the run sees the same streams. Each must have 2n bits.
  std::map<KeyRole, Key> fixed_keys;
  std::optional<Key> fixed_pad;
  // Record quantum amplitudes in the transcript.
  bool debug = false;
};

struct Verdict {
  // Trent's verification parameter (V in scheme 1, V_T in scheme 2).
  bool v_trent = false;
  // What Bob reported about his own comparison; empty if he never got there.
  std::optional<bool> v_bob;
  bool accepted = false;
  // Per index fidelity of Bob's recovered |P> to the intended |P>.
  std::vector<double> fidelities;
  // Per index fidelity of P'_B to P' at Bob's comparison.
  std::vector<double> check_fidelities;
  // Step at which the run stopped short of acceptance; empty if accepted.
  std::string stopped_at;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

Json VerdictToJson(const Verdict& verdict);

struct RunResult {
  Transcript transcript;
  Verdict verdict;
};

// {scheme, n, seed, events, board, verdict}.
Json RunReportToJson(const RunResult& result, bool debug = false);

// Optical layer between parties and the registry. A rider is a photon that
// shares a slot with its host; every Pauli applied to the host is also
// applied to its riders. Honest parties never attach riders.
class Optics {
 public:
  explicit Optics(Registry& registry) : registry_(&registry) {}

  void ApplyPauli(QubitId q, bool x, bool z);
  void Attach(QubitId host, QubitId rider);
  std::vector<QubitId> Detach(QubitId host);
  size_t rider_count() const;

 private:
  Registry* registry_;
  std::map<uint64_t, std::vector<QubitId>> riders_;
};

// Independent randomness sources of one run.
enum class Stream : uint64_t {
  kKeys = 1,
  kMessage,
  kPad,
  kAlice,
  kBob,
  kTrent,
  kAdversary,
};

// Everything one protocol run owns: the registry, keys, who holds which
// qubit, each party's private memory, and the transcript.
class World {
 public:
  World(int scheme, RunConfig config);
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  int scheme() const { return scheme_; }
  int n() const { return config_.n; }
  const RunConfig& config() const { return config_; }
  Registry& registry() { return registry_; }
  const Registry& registry() const { return registry_; }
  Optics& optics() { return optics_; }
  Transcript& transcript() { return transcript_; }
  const Transcript& transcript() const { return transcript_; }
  const MessageSpec& message() const { return message_; }
  Prng& stream(Stream s);

  const Key& key(KeyRole role) const;
  void SetKey(Key key);
  bool HasKey(KeyRole role) const { return keys_.contains(role); }

  QubitId Alloc(Party holder, QubitAmplitudes amplitudes);
  std::pair<QubitId, QubitId> MakeBellPair(Party holder);
  BellOutcome BellMeasure(QubitId first, QubitId second, Stream source);
  std::optional<Party> HolderOf(QubitId q) const;
  // Custody transfer over the authenticated, untappable channel.
  void Deliver(std::span<const QubitId> qubits, Party to);
  std::map<uint64_t, Party> holdings() const { return holder_; }

  Event& Log(Party actor, std::string step, std::string action,
             std::vector<Party> visibility, Json classical = Json::object(),
             std::vector<QubitId> quantum = {});

  // Logs the send (seen by the sender), runs every tap, transfers custody
  // and logs the receipt (seen by the receiver).
  Transmission Send(Transmission t);

  // Applies the configured comparator on behalf of `who`. Genuine
  // per-index fidelities are appended to `fidelities` when non-null.
  bool StatesEqual(Party who, std::span<const QubitId> a,
                   std::span<const QubitId> b,
                   std::vector<double>* fidelities = nullptr);

  // Private party memory.
  struct AliceMemory {
    std::vector<QubitId> a_halves;
    std::optional<Key> pad;
  };
  struct BobMemory {
    std::vector<QubitId> b_halves;
    std::vector<QubitId> p_prime;
    std::vector<QubitId> s_a;
    std::vector<QubitId> r_ab;
    std::vector<BellOutcome> m_a;
    std::vector<QubitId> p_prime_b;
    std::vector<QubitId> recovered;
  };
  AliceMemory alice;
  BobMemory bob;
  Verdict verdict;

 private:
  int scheme_;
  RunConfig config_;
  Registry registry_;
  Optics optics_;
  Transcript transcript_;
  MessageSpec message_;
  std::map<Stream, Prng> streams_;
  std::map<KeyRole, Key> keys_;
  std::map<uint64_t, Party> holder_;
};

// Scheme 1 (Bell states, teleportation).

struct SignaturePackage1 {
  std::vector<QubitId> p_prime;
  std::vector<QubitId> s_a;
  std::vector<BellOutcome> m_a;
};

struct TrentReply {
  bool v = false;
  std::vector<QubitId> qubits;
};

// I1-I2: deals K_A, K_B and hands Bob the B halves of n Bell pairs.
std::unique_ptr<World> InitializeScheme1(RunConfig config);
// S1-S5. Returns the package as Bob receives it.
SignaturePackage1 AliceSignScheme1(World& world);
// V2-V3 on Bob's ciphertext E_{K_B}(P', S_A). Sends the reply to Bob.
TrentReply TrentVerifyScheme1(World& world, std::vector<QubitId> y_b);
// V5 teleportation correction: PhiPlus I, PhiMinus Z, PsiPlus X,
// PsiMinus X then Z. Acts in place and returns the same qubits.
std::vector<QubitId> BobTeleportRecover(World& world,
                                        std::span<const QubitId> b_halves,
                                        std::span<const BellOutcome> m_a);
// Correction for one outcome; what BobTeleportRecover applies.
template <PauliTarget T>
void ApplyTeleportCorrection(T& target, QubitId q, BellOutcome outcome) {
  const PauliBits b = BellOutcomeBits(outcome);
  if (b.x) target.ApplyPauli(q, true, false);
  if (b.z) target.ApplyPauli(q, false, true);
}

RunResult RunScheme1(RunConfig config);
// Runs the remaining steps on an initialized world.
RunResult RunScheme1(World& world);

// Scheme 2 (no entanglement).

struct SignaturePackage2 {
  std::vector<QubitId> payload;  // E_{K_AB}(P', R_AB, S_A), length 3n
};

std::unique_ptr<World> InitializeScheme2(RunConfig config);
// S1'-S3'. Returns the payload as Bob receives it.
SignaturePackage2 AliceSignScheme2(World& world);
// V2'-V3'. Announces V_T; replies only when V_T = 1.
TrentReply TrentVerifyScheme2(World& world, std::vector<QubitId> y_b);
// V4'-V6' given Trent's reply. Requires V_T = 1 on the board.
void BobVerifyScheme2(World& world, const TrentReply& reply);

RunResult RunScheme2(RunConfig config);
RunResult RunScheme2(World& world);

RunResult RunScheme(int scheme, RunConfig config);

}  // namespace aqs

#endif  // AQS_PROTOCOL_H_

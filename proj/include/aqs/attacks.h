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

#ifndef AQS_ATTACKS_H_
#define AQS_ATTACKS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aqs/protocol.h"

namespace aqs {

// Why Bob's verification can fail while Trent's passes.
enum class DisputeCase {
  kBobLies,
  kAliceWrongPhi,  // scheme 1 only
  kAliceWrongMA,   // scheme 1 only
  kAliceWrongRAB,  // scheme 2 only
  kEveDisturbs,
};

std::string_view DisputeCaseName(DisputeCase c);
DisputeCase ParseDisputeCase(std::string_view name);
bool CaseApplies(DisputeCase c, int scheme);
std::vector<DisputeCase> ApplicableCases(int scheme);

// Runs `scheme` with the deviation that realizes `c`. All randomness of the
// honest parties comes from base.seed, so runs of different cases under one
// seed share keys, message, pad and measurement draws. The tampered index
// and Pauli are drawn from a separate seed-derived stream. Throws
// kInvalidCase when the case does not apply to the scheme.
RunResult RunDispute(DisputeCase c, int scheme, const RunConfig& base);

// Negative control: Alice forges S_A at one index, which Trent does see.
RunResult RunForgedSignature(int scheme, const RunConfig& base);

struct LabeledTranscript {
  std::string label;
  const Transcript* transcript = nullptr;
};

struct IndistinguishabilityReport {
  int scheme = 0;
  uint64_t seed = 0;
  std::vector<std::string> cases;
  std::vector<std::string> views;
  // pairwise_equal[i][j]: views i and j are byte-identical.
  std::vector<std::vector<bool>> pairwise_equal;
  // Cases whose view differs from the first case's view.
  std::vector<std::string> distinguishable;

  bool AllEqual() const { return distinguishable.empty(); }
};

// Throws kInvalidArgument if the transcripts disagree on scheme, n or seed.
IndistinguishabilityReport CompareTrentViews(
    const std::vector<LabeledTranscript>& runs);

Json ToJson(const IndistinguishabilityReport& report);

struct FalsePadReport {
  int scheme = 0;
  int n = 0;
  uint64_t seed = 0;
  std::string r;
  std::string r_published;
  // Slots whose two pad bits differ between r and the published pad.
  std::vector<size_t> differing_slots;
  // Slots recovered with fidelity below 1 - 1e-6.
  std::vector<size_t> wrong_indices;
  std::vector<double> fidelities;
  // Did any protocol check fail at or after publication?
  bool check_failed_at_publication = false;
  bool accepted = false;
  // Trent's own events are identical to the honest run: nothing he attested
  // depends on the pad.
  bool trent_attestation_unchanged = false;
};

inline constexpr double kWrongRecoveryThreshold = 1e-6;

// Mask with exactly `slots` of the n two-bit pad slots nonzero; slot choice
// and patterns are uniform.
Key RandomPadMask(int n, int slots, Prng& rng);

// Honest run up to publication, then Alice publishes r XOR mask.
FalsePadReport RunFalsePad(int scheme, const RunConfig& base, const Key& mask);

Json ToJson(const FalsePadReport& report);

// Which legitimate photon carries the invisible one.
enum class Carrier { kPPrime, kSA };

std::string_view CarrierName(Carrier c);
Carrier ParseCarrier(std::string_view name);

struct IpeReport {
  int scheme = 0;
  int n = 0;
  uint64_t seed = 0;
  Carrier carrier = Carrier::kPPrime;
  std::string recovered_bits;
  std::string true_bits;
  std::vector<BellOutcome> outcomes;
  bool success = false;
  // The attacked run's verdict differs from the honest run under the same
  // seed, or one of its checks failed.
  bool detected = false;
  int detection_events = 0;
  Verdict verdict;
  Transcript transcript{0, 0, 0};
};

// Invisible-photon Trojan horse by a malicious signer against Bob's key
// (K_B in scheme 1, K_BT in scheme 2).
IpeReport RunIpe(int scheme, const RunConfig& base,
                 Carrier carrier = Carrier::kPPrime);

Json ToJson(const IpeReport& report);

}  // namespace aqs

#endif  // AQS_ATTACKS_H_

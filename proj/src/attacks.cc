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

#include "aqs/attacks.h"

#include <memory>
#include <set>
#include <utility>

#include "aqs/error.h"

namespace aqs {
namespace {

// Stream salts for adversary choices; disjoint from the World streams.
constexpr uint64_t kAliceTamperStream = 0xa11ce;
constexpr uint64_t kEveStream = 0xe7e;

struct TamperChoice {
  size_t index;
  PauliBits pauli;
};

// Uniform index and uniform non-identity Pauli.
TamperChoice PickTamper(uint64_t seed, uint64_t salt, int n) {
  Prng rng = Prng(seed).Split(salt);
  const size_t index = rng.Below(static_cast<uint64_t>(n));
  const uint64_t p = 1 + rng.Below(3);
  return {index, PauliBits{(p & 1) != 0, (p & 2) != 0}};
}

std::unique_ptr<World> Initialize(int scheme, RunConfig config) {
  if (scheme == 1) return InitializeScheme1(std::move(config));
  if (scheme == 2) return InitializeScheme2(std::move(config));
  throw Error(ErrorCode::kInvalidArgument,
              "scheme must be 1 or 2, got " + std::to_string(scheme));
}

RunResult Run(World& w) {
  return w.scheme() == 1 ? RunScheme1(w) : RunScheme2(w);
}

Json SignatureOfTrent(const Transcript& t) {
  Json out = Json::array();
  for (const Event& e : t.events()) {
    if (e.actor != Party::kTrent) continue;
    out.push_back(
        Json{{"tag", e.step + "." + e.action}, {"classical", e.classical}});
  }
  return out;
}

}  // namespace

std::string_view DisputeCaseName(DisputeCase c) {
  switch (c) {
    case DisputeCase::kBobLies:
      return "BobLies";
    case DisputeCase::kAliceWrongPhi:
      return "AliceWrongPhi";
    case DisputeCase::kAliceWrongMA:
      return "AliceWrongMA";
    case DisputeCase::kAliceWrongRAB:
      return "AliceWrongRAB";
    case DisputeCase::kEveDisturbs:
      return "EveDisturbs";
  }
  return "?";
}

DisputeCase ParseDisputeCase(std::string_view name) {
  for (DisputeCase c : {DisputeCase::kBobLies, DisputeCase::kAliceWrongPhi,
                        DisputeCase::kAliceWrongMA, DisputeCase::kAliceWrongRAB,
                        DisputeCase::kEveDisturbs}) {
    if (DisputeCaseName(c) == name) return c;
  }
  throw Error(ErrorCode::kInvalidCase,
              "unknown dispute case '" + std::string(name) + "'");
}

bool CaseApplies(DisputeCase c, int scheme) {
  switch (c) {
    case DisputeCase::kBobLies:
    case DisputeCase::kEveDisturbs:
      return scheme == 1 || scheme == 2;
    case DisputeCase::kAliceWrongPhi:
    case DisputeCase::kAliceWrongMA:
      return scheme == 1;
    case DisputeCase::kAliceWrongRAB:
      return scheme == 2;
  }
  return false;
}

std::vector<DisputeCase> ApplicableCases(int scheme) {
  std::vector<DisputeCase> out;
  for (DisputeCase c : {DisputeCase::kBobLies, DisputeCase::kAliceWrongPhi,
                        DisputeCase::kAliceWrongMA, DisputeCase::kAliceWrongRAB,
                        DisputeCase::kEveDisturbs}) {
    if (CaseApplies(c, scheme)) out.push_back(c);
  }
  return out;
}

RunResult RunDispute(DisputeCase c, int scheme, const RunConfig& base) {
  if (!CaseApplies(c, scheme)) {
    throw Error(ErrorCode::kInvalidCase, std::string(DisputeCaseName(c)) +
                                             " does not apply to scheme " +
                                             std::to_string(scheme));
  }
  if (base.n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "message length n must be >= 1");
  }
  RunConfig config = base;
  const TamperChoice alice = PickTamper(base.seed, kAliceTamperStream, base.n);
  switch (c) {
    case DisputeCase::kBobLies:
      config.deviations.bob_claims_mismatch = true;
      break;
    case DisputeCase::kAliceWrongPhi:
      config.deviations.teleport_input_tamper[alice.index] = alice.pauli;
      break;
    case DisputeCase::kAliceWrongMA:
      config.deviations.outcome_tamper[alice.index] = alice.pauli;
      break;
    case DisputeCase::kAliceWrongRAB:
      config.deviations.r_ab_tamper[alice.index] = alice.pauli;
      break;
    case DisputeCase::kEveDisturbs: {
      const TamperChoice eve = PickTamper(base.seed, kEveStream, base.n);
      // Eve touches only what Trent never inspects: M_A in scheme 1, the
      // R_AB slice of S in scheme 2.
      config.taps.push_back([eve](Transmission& t, World& w) {
        if (t.step == "S5") {
          const PauliBits old = BellOutcomeBits(t.outcomes[eve.index]);
          t.outcomes[eve.index] =
              BellOutcomeFromBits({old.x != eve.pauli.x, old.z != eve.pauli.z});
        } else if (t.step == "S3'") {
          const QubitId q = t.qubits[w.n() + eve.index];
          w.optics().ApplyPauli(q, eve.pauli.x, eve.pauli.z);
        } else {
          return;
        }
        w.Log(Party::kEve, t.step, "disturb", {Party::kEve},
              Json{{"component", t.step == "S5" ? "M_A" : "R_AB"},
                   {"index", eve.index},
                   {"pauli", {{"x", eve.pauli.x}, {"z", eve.pauli.z}}}});
      });
      break;
    }
  }
  return RunScheme(scheme, std::move(config));
}

RunResult RunForgedSignature(int scheme, const RunConfig& base) {
  RunConfig config = base;
  const TamperChoice t = PickTamper(base.seed, kAliceTamperStream, base.n);
  config.deviations.s_a_tamper[t.index] = t.pauli;
  return RunScheme(scheme, std::move(config));
}

IndistinguishabilityReport CompareTrentViews(
    const std::vector<LabeledTranscript>& runs) {
  if (runs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no transcripts to compare");
  }
  IndistinguishabilityReport report;
  const Transcript& first = *runs.front().transcript;
  report.scheme = first.scheme();
  report.seed = first.seed();
  for (const LabeledTranscript& run : runs) {
    const Transcript& t = *run.transcript;
    if (t.scheme() != first.scheme() || t.seed() != first.seed() ||
        t.n() != first.n()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transcript '" + run.label +
                      "' was not produced under the same scheme, n and seed");
    }
    report.cases.push_back(run.label);
    report.views.push_back(TrentView(t));
  }
  const size_t k = runs.size();
  report.pairwise_equal.assign(k, std::vector<bool>(k, false));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      report.pairwise_equal[i][j] = report.views[i] == report.views[j];
    }
  }
  for (size_t i = 1; i < k; ++i) {
    if (!report.pairwise_equal[0][i]) {
      report.distinguishable.push_back(report.cases[i]);
    }
  }
  return report;
}

Json ToJson(const IndistinguishabilityReport& report) {
  Json matrix = Json::array();
  for (const auto& row : report.pairwise_equal) {
    Json r = Json::array();
    for (bool b : row) r.push_back(b);
    matrix.push_back(std::move(r));
  }
  return Json{{"scheme", report.scheme},
              {"seed", report.seed},
              {"cases", report.cases},
              {"pairwise_equal", std::move(matrix)},
              {"distinguishable", report.distinguishable}};
}

Key RandomPadMask(int n, int slots, Prng& rng) {
  if (slots < 0 || slots > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot alter " + std::to_string(slots) + " of " +
                    std::to_string(n) + " pad slots");
  }
  // Partial Fisher-Yates picks `slots` distinct positions.
  std::vector<size_t> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 0; i < slots; ++i) {
    const size_t j = i + rng.Below(static_cast<uint64_t>(n - i));
    std::swap(order[i], order[j]);
  }
  std::vector<uint8_t> bits(2 * static_cast<size_t>(n), 0);
  for (int i = 0; i < slots; ++i) {
    const uint64_t p = 1 + rng.Below(3);
    bits[2 * order[i]] = (p & 1) != 0;
    bits[2 * order[i] + 1] = (p & 2) != 0;
  }
  return Key(KeyRole::kPad, std::move(bits));
}

FalsePadReport RunFalsePad(int scheme, const RunConfig& base, const Key& mask) {
  if (mask.size() != 2 * static_cast<size_t>(base.n)) {
    throw Error(ErrorCode::kLengthMismatch, "pad mask must have 2n bits");
  }
  RunConfig honest_config = base;
  honest_config.deviations.published_pad_mask.reset();
  const RunResult honest = RunScheme(scheme, honest_config);

  RunConfig config = base;
  config.deviations.published_pad_mask = mask;
  auto world = Initialize(scheme, std::move(config));
  const RunResult run = Run(*world);

  FalsePadReport report;
  report.scheme = scheme;
  report.n = base.n;
  report.seed = base.seed;
  report.r = world->alice.pad->ToString();
  report.r_published = world->alice.pad->Xor(mask).ToString();
  for (size_t i = 0; i < static_cast<size_t>(base.n); ++i) {
    if (mask[2 * i] || mask[2 * i + 1]) report.differing_slots.push_back(i);
  }
  report.fidelities = run.verdict.fidelities;
  for (size_t i = 0; i < report.fidelities.size(); ++i) {
    if (report.fidelities[i] < 1.0 - kWrongRecoveryThreshold) {
      report.wrong_indices.push_back(i);
    }
  }
  report.accepted = run.verdict.accepted;

  bool after_publication = false;
  for (const Event& e : run.transcript.events()) {
    if (e.action == "post" && e.classical.value("tag", "") == "r") {
      after_publication = true;
    }
    if (after_publication && (e.action == "reject" || e.action == "abort")) {
      report.check_failed_at_publication = true;
    }
  }
  if (!after_publication) report.check_failed_at_publication = true;
  report.trent_attestation_unchanged =
      SignatureOfTrent(run.transcript) == SignatureOfTrent(honest.transcript);
  return report;
}

Json ToJson(const FalsePadReport& report) {
  return Json{
      {"scheme", report.scheme},
      {"n", report.n},
      {"seed", report.seed},
      {"r", report.r},
      {"r_published", report.r_published},
      {"differing_slots", report.differing_slots},
      {"wrong_indices", report.wrong_indices},
      {"fidelities", report.fidelities},
      {"check_failed_at_publication", report.check_failed_at_publication},
      {"accepted", report.accepted},
      {"trent_attestation_unchanged", report.trent_attestation_unchanged}};
}

std::string_view CarrierName(Carrier c) {
  return c == Carrier::kPPrime ? "p-prime" : "s-a";
}

Carrier ParseCarrier(std::string_view name) {
  if (name == "p-prime") return Carrier::kPPrime;
  if (name == "s-a") return Carrier::kSA;
  throw Error(
      ErrorCode::kInvalidArgument,
      "carrier must be 'p-prime' or 's-a', got '" + std::string(name) + "'");
}

IpeReport RunIpe(int scheme, const RunConfig& base, Carrier carrier) {
  if (scheme != 1 && scheme != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "scheme must be 1 or 2, got " + std::to_string(scheme));
  }
  const RunResult honest = RunScheme(scheme, base);

  struct Probe {
    std::vector<QubitId> hosts;
    std::vector<QubitId> kept;  // d_2 of each eavesdropping pair
    std::vector<BellOutcome> outcomes;
  };
  auto probe = std::make_shared<Probe>();
  const std::string inject_step = scheme == 1 ? "S5" : "S3'";
  const std::string capture_step = scheme == 1 ? "V1" : "V1'";

  RunConfig config = base;
  config.taps.push_back([=](Transmission& t, World& w) {
    const size_t n = static_cast<size_t>(w.n());
    if (t.step == inject_step) {
      // Carrier offset inside the Alice -> Bob payload.
      size_t offset = 0;
      if (carrier == Carrier::kSA) offset = scheme == 1 ? n : 2 * n;
      std::vector<QubitId> invisible;
      for (size_t i = 0; i < n; ++i) {
        auto [d1, d2] = w.MakeBellPair(Party::kAlice);
        const QubitId host = t.qubits[offset + i];
        w.optics().Attach(host, d1);
        probe->hosts.push_back(host);
        probe->kept.push_back(d2);
        invisible.push_back(d1);
      }
      w.Log(Party::kAlice, t.step, "insert_invisible", {Party::kAlice},
            Json{{"carrier", CarrierName(carrier)}, {"photons", n}}, invisible);
    } else if (t.step == capture_step) {
      for (size_t i = 0; i < probe->hosts.size(); ++i) {
        const std::vector<QubitId> riders = w.optics().Detach(probe->hosts[i]);
        if (riders.size() != 1) {
          throw Error(ErrorCode::kInvalidArgument, "lost an invisible photon");
        }
        probe->outcomes.push_back(
            w.BellMeasure(riders.front(), probe->kept[i], Stream::kAdversary));
      }
      Json names = Json::array();
      for (BellOutcome o : probe->outcomes) names.push_back(BellOutcomeName(o));
      w.Log(Party::kAlice, t.step, "capture_measure", {Party::kAlice},
            Json{{"outcomes", std::move(names)}});
    }
  });

  auto world = Initialize(scheme, std::move(config));
  RunResult run = Run(*world);
  World& w = *world;
  const size_t n = static_cast<size_t>(w.n());

  const Key& target = w.key(scheme == 1 ? KeyRole::kB : KeyRole::kBT);
  std::vector<uint8_t> recovered(target.size(), 0);
  for (size_t i = 0; i < probe->outcomes.size(); ++i) {
    PauliBits bits = BellOutcomeBits(probe->outcomes[i]);
    const size_t y_slot = carrier == Carrier::kPPrime ? i : n + i;
    if (scheme == 2) {
      // Bob's K_AB decryption also acted on the rider; Alice shares K_AB
      // and strips it.
      const size_t s_slot = carrier == Carrier::kPPrime ? i : 2 * n + i;
      const PauliBits ab =
          PadBits(w.key(KeyRole::kAB), s_slot, 3 * n, PadReuse::kCyclic);
      bits = {bits.x != ab.x, bits.z != ab.z};
    }
    recovered[(2 * y_slot) % target.size()] = bits.x;
    recovered[(2 * y_slot + 1) % target.size()] = bits.z;
  }

  IpeReport report;
  report.scheme = scheme;
  report.n = w.n();
  report.seed = base.seed;
  report.carrier = carrier;
  report.recovered_bits = Key(target.role(), recovered).ToString();
  report.true_bits = target.ToString();
  report.outcomes = probe->outcomes;
  report.success =
      probe->outcomes.size() == n && report.recovered_bits == report.true_bits;
  if (!run.verdict.v_trent) ++report.detection_events;
  if (run.verdict.v_bob == false) ++report.detection_events;
  if (!(run.verdict == honest.verdict)) ++report.detection_events;
  report.detected = report.detection_events > 0 || !run.verdict.accepted;
  report.verdict = run.verdict;
  report.transcript = std::move(run.transcript);
  return report;
}

Json ToJson(const IpeReport& report) {
  Json outcomes = Json::array();
  for (BellOutcome o : report.outcomes) outcomes.push_back(BellOutcomeName(o));
  return Json{{"scheme", report.scheme},
              {"n", report.n},
              {"seed", report.seed},
              {"carrier", CarrierName(report.carrier)},
              {"recovered_bits", report.recovered_bits},
              {"true_bits", report.true_bits},
              {"outcomes", std::move(outcomes)},
              {"success", report.success},
              {"detected", report.detected},
              {"detection_events", report.detection_events},
              {"verdict", VerdictToJson(report.verdict)}};
}

}  // namespace aqs

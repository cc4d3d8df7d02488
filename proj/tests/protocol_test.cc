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

#include "aqs/protocol.h"

#include <cmath>
#include <set>
#include <vector>

#include "aqs/error.h"
#include "gtest/gtest.h"
#include "oracle.h"

namespace aqs {
namespace {

#define EXPECT_ERROR(stmt, expected)             \
  do {                                           \
    try {                                        \
      stmt;                                      \
      ADD_FAILURE() << "no error from " #stmt;   \
    } catch (const Error& e) {                   \
      EXPECT_EQ(e.code(), expected) << e.what(); \
    }                                            \
  } while (0)

RunConfig Config(int n, uint64_t seed) {
  RunConfig c;
  c.n = n;
  c.seed = seed;
  return c;
}

Key Zeros(KeyRole role, size_t bits) {
  return Key(role, std::vector<uint8_t>(bits, 0));
}

MessageSpec Uniform(int n, QubitAmplitudes q) {
  MessageSpec m;
  m.qubits.assign(n, q);
  return m;
}

size_t HeldBy(const World& w, Party p) {
  size_t count = 0;
  for (const auto& [q, holder] : w.holdings()) count += holder == p;
  return count;
}

double MinFidelity(const Verdict& v) {
  double m = 1.0;
  for (double f : v.fidelities) m = std::min(m, f);
  return m;
}

const BoardEntry* FindTag(const Transcript& t, std::string_view tag) {
  return t.board().Find(tag);
}

// --- Scheme 1 -------------------------------------------------------------

TEST(InitializeScheme1, OnePair) {
  auto w = InitializeScheme1(Config(1, 1));
  EXPECT_EQ(HeldBy(*w, Party::kBob), 1u);
  EXPECT_EQ(HeldBy(*w, Party::kAlice), 1u);
  const std::array<QubitId, 2> pair{w->alice.a_halves[0], w->bob.b_halves[0]};
  EXPECT_NEAR(
      Fidelity(w->registry().Snapshot(pair), StateVector(oracle::Bell(0))), 1.0,
      1e-15);
  EXPECT_EQ(w->key(KeyRole::kA).size(), 2u);
  EXPECT_EQ(w->key(KeyRole::kB).size(), 2u);
}

TEST(InitializeScheme1, DisjointPairs) {
  auto w = InitializeScheme1(Config(3, 2));
  EXPECT_EQ(w->registry().group_count(), 3u);
  for (QubitId q : w->registry().LiveQubits()) {
    EXPECT_EQ(w->registry().GroupSize(q), 2);
  }
}

TEST(InitializeScheme1, SeededKeys) {
  auto a = InitializeScheme1(Config(4, 9));
  auto b = InitializeScheme1(Config(4, 9));
  auto c = InitializeScheme1(Config(4, 10));
  EXPECT_EQ(a->key(KeyRole::kA), b->key(KeyRole::kA));
  EXPECT_EQ(a->key(KeyRole::kB), b->key(KeyRole::kB));
  EXPECT_FALSE(a->key(KeyRole::kA) == c->key(KeyRole::kA) &&
               a->key(KeyRole::kB) == c->key(KeyRole::kB));
}

TEST(InitializeScheme1, RejectsEmptyMessage) {
  EXPECT_ERROR(InitializeScheme1(Config(0, 1)), ErrorCode::kInvalidArgument);
  EXPECT_ERROR(RunScheme(1, Config(0, 1)), ErrorCode::kInvalidArgument);
  EXPECT_ERROR(RunScheme(3, Config(1, 1)), ErrorCode::kInvalidArgument);
}

TEST(AliceSignScheme1, ZeroPadLeavesMessage) {
  RunConfig c = Config(3, 4);
  c.fixed_pad = Zeros(KeyRole::kPad, 6);
  auto w = InitializeScheme1(c);
  const SignaturePackage1 pkg = AliceSignScheme1(*w);
  ASSERT_EQ(pkg.p_prime.size(), 3u);
  EXPECT_EQ(pkg.s_a.size(), 3u);
  EXPECT_EQ(pkg.m_a.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(
        w->registry().Fidelity(pkg.p_prime[i],
                               StateVector::FromQubit(w->message().qubits[i])),
        1.0, 1e-12);
    EXPECT_EQ(w->HolderOf(pkg.p_prime[i]), Party::kBob);
  }
}

TEST(AliceSignScheme1, OutcomesUniformForBasisMessage) {
  std::array<int, 4> counts{};
  constexpr int kTrials = 10000;
  for (int t = 0; t < kTrials; ++t) {
    RunConfig c = Config(1, 1000 + t);
    c.message = Uniform(1, {1.0, 0.0});
    auto w = InitializeScheme1(c);
    ++counts[static_cast<int>(AliceSignScheme1(*w).m_a[0])];
  }
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(counts[k] / static_cast<double>(kTrials), 0.25, 0.02);
  }
}

TEST(BobTeleportRecover, AllOutcomesCorrectToInput) {
  // Brute force over the four projections with an oracle reference.
  Prng rng(5);
  for (int t = 0; t < 20; ++t) {
    const QubitAmplitudes q = RandomQubit(rng);
    for (BellOutcome o : kAllBellOutcomes) {
      Registry reg;
      const QubitId in = reg.Alloc(q);
      auto [a, b] = reg.MakeBellPair();
      reg.ProjectBell(in, a, o);
      if (o == BellOutcome::kPhiPlus) {
        EXPECT_NEAR(reg.Fidelity(b, StateVector::FromQubit(q)), 1.0, 1e-12);
      }
      ApplyTeleportCorrection(reg, b, o);
      EXPECT_NEAR(reg.Fidelity(b, StateVector::FromQubit(q)), 1.0, 1e-12);
    }
  }
}

TEST(BobTeleportRecover, HonestAndCorrupted) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto w = InitializeScheme1(Config(4, seed));
    SignaturePackage1 pkg = AliceSignScheme1(*w);
    std::vector<BellOutcome> bad = pkg.m_a;
    const auto good = BobTeleportRecover(*w, w->bob.b_halves, pkg.m_a);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(w->registry().Fidelity(good[i], pkg.p_prime[i]), 1.0, 1e-12);
    }
    // Undo the correction at index 2, then apply a wrong one.
    const PauliBits b = BellOutcomeBits(pkg.m_a[2]);
    if (b.z) w->registry().ApplyPauli(good[2], false, true);
    if (b.x) w->registry().ApplyPauli(good[2], true, false);
    const BellOutcome wrong = BellOutcomeFromBits({!b.x, b.z});
    ApplyTeleportCorrection(w->registry(), good[2], wrong);
    EXPECT_LT(w->registry().Fidelity(good[2], pkg.p_prime[2]), 1.0 - 1e-6);
  }
  auto w = InitializeScheme1(Config(2, 1));
  const std::vector<BellOutcome> one{BellOutcome::kPhiPlus};
  EXPECT_ERROR(BobTeleportRecover(*w, w->bob.b_halves, one),
               ErrorCode::kLengthMismatch);
}

TEST(TrentVerifyScheme1, RejectsMalformedInput) {
  auto w = InitializeScheme1(Config(2, 1));
  AliceSignScheme1(*w);
  EXPECT_ERROR(TrentVerifyScheme1(*w, {}), ErrorCode::kLengthMismatch);
  EXPECT_ERROR(TrentVerifyScheme1(*w, {w->bob.p_prime[0]}),
               ErrorCode::kLengthMismatch);
}

TEST(RunScheme1, HonestFourQubits) {
  const RunResult r = RunScheme1(Config(4, 1));
  EXPECT_TRUE(r.verdict.v_trent);
  EXPECT_EQ(r.verdict.v_bob, true);
  EXPECT_TRUE(r.verdict.accepted);
  ASSERT_EQ(r.verdict.fidelities.size(), 4u);
  EXPECT_NEAR(MinFidelity(r.verdict), 1.0, 1e-9);
  EXPECT_NE(FindTag(r.transcript, "r"), nullptr);
  EXPECT_EQ(FindTag(r.transcript, "dispute"), nullptr);
  EXPECT_TRUE(r.verdict.stopped_at.empty());
}

TEST(RunScheme1, HonestSingleQubit) {
  EXPECT_TRUE(RunScheme1(Config(1, 77)).verdict.accepted);
}

TEST(RunScheme1, FlippedVFlagMakesBobReject) {
  RunConfig c = Config(3, 8);
  c.taps.push_back([](Transmission& t, World&) {
    if (t.step == "V3") t.flag = false;
  });
  const RunResult r = RunScheme1(c);
  EXPECT_FALSE(r.verdict.accepted);
  EXPECT_EQ(r.verdict.stopped_at, "V4");
  EXPECT_FALSE(r.verdict.v_bob.has_value());
  EXPECT_EQ(FindTag(r.transcript, "r"), nullptr);
}

TEST(RunScheme1, OneFlippedKeyBitInSignatureGivesVZero) {
  // S_A = E_{K_A'}(P') with K_A' = K_A xor e_j is an S_A tamper by the
  // Pauli that bit j selects.
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    RunConfig c = Config(3, seed);
    c.deviations.s_a_tamper[seed % 3] = PauliBits{seed % 2 == 0, seed % 2 == 1};
    const RunResult r = RunScheme1(c);
    EXPECT_FALSE(r.verdict.v_trent);
    EXPECT_FALSE(r.verdict.accepted);
  }
}

TEST(RunScheme1, JsonSchema) {
  RunConfig c = Config(2, 3);
  const Json j = RunReportToJson(RunScheme1(c));
  for (const char* key :
       {"scheme", "n", "seed", "events", "board", "verdict"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  for (const char* key : {"v_trent", "v_bob", "accepted", "fidelities"}) {
    EXPECT_TRUE(j["verdict"].contains(key)) << key;
  }
  for (const char* key : {"idx", "actor", "tag", "visibility", "classical"}) {
    EXPECT_TRUE(j["events"][0].contains(key)) << key;
  }
  EXPECT_FALSE(j.dump().find("amplitudes") != std::string::npos);
  c.debug = true;
  const Json d = RunReportToJson(RunScheme1(c), true);
  EXPECT_TRUE(d.dump().find("amplitudes") != std::string::npos);
}

// --- Scheme 2 -------------------------------------------------------------

TEST(InitializeScheme2, DealsThreeKeys) {
  auto w = InitializeScheme2(Config(3, 1));
  for (KeyRole k : {KeyRole::kAT, KeyRole::kBT, KeyRole::kAB}) {
    ASSERT_TRUE(w->HasKey(k));
    EXPECT_EQ(w->key(k).size(), 6u);
  }
  EXPECT_FALSE(w->HasKey(KeyRole::kA));
}

TEST(AliceSignScheme2, PayloadAndZeroAbKey) {
  RunConfig c = Config(3, 2);
  c.fixed_keys.emplace(KeyRole::kAB, Zeros(KeyRole::kAB, 6));
  auto w = InitializeScheme2(c);
  const SignaturePackage2 pkg = AliceSignScheme2(*w);
  ASSERT_EQ(pkg.payload.size(), 9u);
  for (int i = 0; i < 3; ++i) {
    // R_AB = M_0(P') = P', and nothing else is encrypted.
    EXPECT_NEAR(w->registry().Fidelity(pkg.payload[i], pkg.payload[3 + i]), 1.0,
                1e-12);
  }
}

TEST(AliceSignScheme2, BobRecoversThreeSequences) {
  auto w = InitializeScheme2(Config(2, 3));
  SignaturePackage2 pkg = AliceSignScheme2(*w);
  DecryptE(w->registry(), pkg.payload, w->key(KeyRole::kAB), PadReuse::kCyclic);
  std::span<const QubitId> all(pkg.payload);
  auto p_prime = all.subspan(0, 2), r_ab = all.subspan(2, 2),
       s_a = all.subspan(4, 2);
  std::vector<QubitId> r_copy(r_ab.begin(), r_ab.end());
  TransformMInverse(w->registry(), r_copy, w->key(KeyRole::kAB));
  std::vector<QubitId> s_copy(s_a.begin(), s_a.end());
  DecryptE(w->registry(), s_copy, w->key(KeyRole::kAT));
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(w->registry().Fidelity(p_prime[i], r_copy[i]), 1.0, 1e-12);
    EXPECT_NEAR(w->registry().Fidelity(p_prime[i], s_copy[i]), 1.0, 1e-12);
  }
}

TEST(RunScheme2, Honest) {
  const RunResult r = RunScheme2(Config(4, 1));
  EXPECT_TRUE(r.verdict.accepted);
  EXPECT_EQ(r.verdict.v_bob, true);
  EXPECT_NEAR(MinFidelity(r.verdict), 1.0, 1e-9);
  const BoardEntry* vt = FindTag(r.transcript, "V_T");
  const BoardEntry* vb = FindTag(r.transcript, "V_B");
  const BoardEntry* pad = FindTag(r.transcript, "r");
  ASSERT_TRUE(vt && vb && pad);
  EXPECT_EQ(vt->payload["value"], 1);
  EXPECT_EQ(vb->payload["value"], 1);
  EXPECT_LT(vt->seq, vb->seq);
  EXPECT_LT(vb->seq, pad->seq);
}

TEST(RunScheme2, WrongTrentKeyAborts) {
  RunConfig c = Config(3, 4);
  c.deviations.s_a_tamper[1] = PauliBits{true, false};
  const RunResult r = RunScheme2(c);
  EXPECT_FALSE(r.verdict.v_trent);
  EXPECT_FALSE(r.verdict.accepted);
  EXPECT_FALSE(r.verdict.v_bob.has_value());
  ASSERT_NE(FindTag(r.transcript, "V_T"), nullptr);
  EXPECT_EQ(FindTag(r.transcript, "V_T")->payload["value"], 0);
  EXPECT_EQ(FindTag(r.transcript, "V_B"), nullptr);
  EXPECT_EQ(FindTag(r.transcript, "r"), nullptr);
}

TEST(RunScheme2, TamperedRabGivesVbZero) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    RunConfig c = Config(3, seed);
    c.deviations.r_ab_tamper[0] = PauliBits{true, true};
    const RunResult r = RunScheme2(c);
    EXPECT_TRUE(r.verdict.v_trent);
    EXPECT_EQ(r.verdict.v_bob, false);
    EXPECT_EQ(FindTag(r.transcript, "V_B")->payload["value"], 0);
    EXPECT_EQ(FindTag(r.transcript, "r"), nullptr);
  }
}

TEST(BobVerifyScheme2, RequiresTrentApproval) {
  RunConfig c = Config(2, 5);
  c.deviations.s_a_tamper[0] = PauliBits{false, true};
  auto w = InitializeScheme2(c);
  const SignaturePackage2 pkg = AliceSignScheme2(*w);
  std::vector<QubitId> y{pkg.payload.begin(), pkg.payload.begin() + 2};
  y.insert(y.end(), pkg.payload.begin() + 4, pkg.payload.end());
  const TrentReply reply = TrentVerifyScheme2(*w, y);
  EXPECT_FALSE(reply.v);
  EXPECT_ERROR(BobVerifyScheme2(*w, reply), ErrorCode::kInvalidArgument);
}

// --- Shared properties ----------------------------------------------------

TEST(Properties, HonestCompleteness) {
  for (int scheme : {1, 2}) {
    for (int n = 1; n <= 16; ++n) {
      for (uint64_t seed = 1; seed <= 50; ++seed) {
        const RunResult r = RunScheme(scheme, Config(n, seed * 7919 + n));
        ASSERT_TRUE(r.verdict.accepted) << scheme << " " << n << " " << seed;
        ASSERT_EQ(r.verdict.fidelities.size(), static_cast<size_t>(n));
        ASSERT_NEAR(MinFidelity(r.verdict), 1.0, 1e-9);
      }
    }
  }
}

TEST(Properties, HonestCompletenessWithSwapComparator) {
  for (int scheme : {1, 2}) {
    RunConfig c = Config(4, 21);
    c.comparator = Comparator::Swap(32);
    EXPECT_TRUE(RunScheme(scheme, c).verdict.accepted);
  }
}

TEST(Properties, SingleIndexTamperIsCaughtByTrent) {
  Prng rng(61);
  for (int scheme : {1, 2}) {
    for (int t = 0; t < 100; ++t) {
      const int n = 1 + static_cast<int>(rng.Below(6));
      const size_t i = rng.Below(n);
      const int code = 1 + static_cast<int>(rng.Below(3));
      const PauliBits p{(code & 1) != 0, (code & 2) != 0};
      RunConfig c = Config(n, rng.NextU64());
      if (t % 2 == 0) {
        c.deviations.s_a_tamper[i] = p;
      } else {
        // Tamper P' in flight, before it reaches Trent.
        const std::string step = scheme == 1 ? "S5" : "S3'";
        c.taps.push_back([=](Transmission& tx, World& w) {
          if (tx.step == step) w.registry().ApplyPauli(tx.qubits[i], p);
        });
      }
      const RunResult r = RunScheme(scheme, c);
      EXPECT_FALSE(r.verdict.v_trent) << scheme << " " << t;
    }
  }
}

TEST(Properties, SwapComparatorCatchesTamperWithHighProbability) {
  int caught = 0;
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    RunConfig c = Config(2, seed);
    c.comparator = Comparator::Swap(64);
    c.deviations.s_a_tamper[0] = PauliBits{true, true};
    caught += !RunScheme1(c).verdict.v_trent;
  }
  EXPECT_GE(caught, 36);
}

void CheckBoardAndOrder(const RunResult& r) {
  const auto entries = r.transcript.board().entries();
  size_t posts = 0;
  for (size_t k = 0; k < entries.size(); ++k) {
    EXPECT_EQ(entries[k].seq, k + 1);
  }
  int last = -1;
  bool saw_vt = false;
  for (const Event& e : r.transcript.events()) {
    const int rank = StepRank(e.step);
    EXPECT_GE(rank, last) << e.step << "." << e.action;
    last = rank;
    if (e.action == "post") {
      ASSERT_LT(posts, entries.size());
      EXPECT_EQ(e.classical["board_seq"], entries[posts].seq);
      EXPECT_EQ(e.classical["tag"], entries[posts].tag);
      ++posts;
      if (entries[posts - 1].tag == "V_T") saw_vt = true;
      if (entries[posts - 1].tag == "V_B") EXPECT_TRUE(saw_vt);
    }
  }
  EXPECT_EQ(posts, entries.size());
  const bool has_r = r.transcript.board().Find("r") != nullptr;
  EXPECT_EQ(has_r, r.verdict.v_bob == true);
}

TEST(Properties, BoardIntegrityAndStepOrder) {
  for (int scheme : {1, 2}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      CheckBoardAndOrder(RunScheme(scheme, Config(3, seed)));
      RunConfig lie = Config(3, seed);
      lie.deviations.bob_claims_mismatch = true;
      CheckBoardAndOrder(RunScheme(scheme, lie));
      RunConfig forged = Config(3, seed);
      forged.deviations.s_a_tamper[0] = PauliBits{true, false};
      CheckBoardAndOrder(RunScheme(scheme, forged));
    }
  }
}

TEST(Properties, ConservationOfQubits) {
  for (int scheme : {1, 2}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      for (bool lie : {false, true}) {
        RunConfig c = Config(4, seed);
        c.deviations.bob_claims_mismatch = lie;
        auto w = scheme == 1 ? InitializeScheme1(c) : InitializeScheme2(c);
        scheme == 1 ? RunScheme1(*w) : RunScheme2(*w);
        std::set<uint64_t> live, held;
        for (QubitId q : w->registry().LiveQubits()) live.insert(q.value);
        for (const auto& [q, holder] : w->holdings()) held.insert(q);
        EXPECT_EQ(live, held) << scheme << " " << seed;
      }
    }
  }
}

TEST(Properties, SeededRunsAreIdentical) {
  for (int scheme : {1, 2}) {
    const RunResult a = RunScheme(scheme, Config(5, 123));
    const RunResult b = RunScheme(scheme, Config(5, 123));
    EXPECT_EQ(a.transcript.ToJson().dump(), b.transcript.ToJson().dump());
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(TrentView(a.transcript), TrentView(b.transcript));
  }
}

TEST(Comparator, ParseAndPrint) {
  EXPECT_EQ(Comparator::Parse("exact").kind, ComparatorKind::kExact);
  const Comparator s = Comparator::Parse("swap:12");
  EXPECT_EQ(s.kind, ComparatorKind::kSwapTest);
  EXPECT_EQ(s.shots, 12);
  EXPECT_EQ(s.ToString(), "swap:12");
  for (const char* bad : {"swap", "swap:0", "swap:x", "fuzzy"}) {
    EXPECT_ERROR(Comparator::Parse(bad), ErrorCode::kInvalidArgument);
  }
}

TEST(Optics, RidersFollowTheirHost) {
  Registry reg;
  Optics optics(reg);
  const QubitId host = reg.Alloc(1.0, 0.0);
  const QubitId rider = reg.Alloc(1.0, 0.0);
  optics.Attach(host, rider);
  EXPECT_EQ(optics.rider_count(), 1u);
  EncryptE(optics, std::span(&host, 1), Key::FromString(KeyRole::kB, "10"));
  EXPECT_DOUBLE_EQ(reg.Fidelity(rider, StateVector({0.0, 1.0})), 1.0);
  EXPECT_EQ(optics.Detach(host).size(), 1u);
  optics.ApplyPauli(host, true, false);
  EXPECT_DOUBLE_EQ(reg.Fidelity(rider, StateVector({0.0, 1.0})), 1.0);
  EXPECT_EQ(optics.rider_count(), 0u);
}

}  // namespace
}  // namespace aqs

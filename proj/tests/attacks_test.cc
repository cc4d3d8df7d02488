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

#include <algorithm>
#include <string>
#include <vector>

#include "aqs/error.h"
#include "gtest/gtest.h"

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

const BoardEntry* Board(const RunResult& r, std::string_view tag) {
  return r.transcript.board().Find(tag);
}

// --- Dispute cases --------------------------------------------------------

TEST(DisputeCase, NamesAndApplicability) {
  for (DisputeCase c : {DisputeCase::kBobLies, DisputeCase::kAliceWrongPhi,
                        DisputeCase::kAliceWrongMA, DisputeCase::kAliceWrongRAB,
                        DisputeCase::kEveDisturbs}) {
    EXPECT_EQ(ParseDisputeCase(DisputeCaseName(c)), c);
  }
  EXPECT_ERROR(ParseDisputeCase("CarolLies"), ErrorCode::kInvalidCase);
  EXPECT_EQ(ApplicableCases(1).size(), 4u);
  EXPECT_EQ(ApplicableCases(2).size(), 3u);
  EXPECT_FALSE(CaseApplies(DisputeCase::kAliceWrongMA, 2));
  EXPECT_FALSE(CaseApplies(DisputeCase::kAliceWrongRAB, 1));
  EXPECT_ERROR(RunDispute(DisputeCase::kAliceWrongRAB, 1, Config(2, 1)),
               ErrorCode::kInvalidCase);
  EXPECT_ERROR(RunDispute(DisputeCase::kAliceWrongPhi, 2, Config(2, 1)),
               ErrorCode::kInvalidCase);
}

TEST(RunDispute, BobLiesInSchemeOne) {
  const RunResult r = RunDispute(DisputeCase::kBobLies, 1, Config(4, 3));
  EXPECT_TRUE(r.verdict.v_trent);
  EXPECT_EQ(r.verdict.v_bob, false);
  EXPECT_EQ(Board(r, "r"), nullptr);
  // His genuine check passed.
  for (double f : r.verdict.check_fidelities) EXPECT_NEAR(f, 1.0, 1e-9);
}

TEST(RunDispute, AliceWrongOutcomesBreaksBobsCopy) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const RunResult r =
        RunDispute(DisputeCase::kAliceWrongMA, 1, Config(4, seed));
    EXPECT_TRUE(r.verdict.v_trent);
    EXPECT_EQ(r.verdict.v_bob, false);
    int broken = 0;
    for (double f : r.verdict.check_fidelities) broken += f < 1.0 - 1e-6;
    EXPECT_EQ(broken, 1) << seed;
  }
}

TEST(RunDispute, AliceWrongRabInSchemeTwo) {
  const RunResult r = RunDispute(DisputeCase::kAliceWrongRAB, 2, Config(4, 3));
  ASSERT_NE(Board(r, "V_T"), nullptr);
  ASSERT_NE(Board(r, "V_B"), nullptr);
  EXPECT_EQ(Board(r, "V_T")->payload["value"], 1);
  EXPECT_EQ(Board(r, "V_B")->payload["value"], 0);
  EXPECT_EQ(Board(r, "r"), nullptr);
}

TEST(RunDispute, EveryCaseIsTrentPassBobFail) {
  for (int scheme : {1, 2}) {
    for (DisputeCase c : ApplicableCases(scheme)) {
      for (uint64_t seed = 1; seed <= 25; ++seed) {
        const RunResult r = RunDispute(c, scheme, Config(3, seed));
        EXPECT_TRUE(r.verdict.v_trent) << DisputeCaseName(c) << " " << seed;
        EXPECT_EQ(r.verdict.v_bob, false) << DisputeCaseName(c) << " " << seed;
        EXPECT_FALSE(r.verdict.accepted);
      }
    }
  }
}

IndistinguishabilityReport CompareAll(int scheme, const RunConfig& base,
                                      bool with_forgery,
                                      std::vector<RunResult>& keep) {
  keep.clear();
  std::vector<std::string> labels;
  for (DisputeCase c : ApplicableCases(scheme)) {
    keep.push_back(RunDispute(c, scheme, base));
    labels.emplace_back(DisputeCaseName(c));
  }
  if (with_forgery) {
    keep.push_back(RunForgedSignature(scheme, base));
    labels.emplace_back("ForgedSA");
  }
  std::vector<LabeledTranscript> runs;
  for (size_t i = 0; i < keep.size(); ++i) {
    runs.push_back({labels[i], &keep[i].transcript});
  }
  return CompareTrentViews(runs);
}

TEST(CompareTrentViews, DilemmaCasesAreIndistinguishable) {
  std::vector<RunResult> keep;
  for (int scheme : {1, 2}) {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      const auto report = CompareAll(scheme, Config(4, seed), false, keep);
      EXPECT_TRUE(report.AllEqual()) << scheme << " " << seed;
      for (const auto& row : report.pairwise_equal) {
        for (bool b : row) EXPECT_TRUE(b);
      }
    }
  }
}

TEST(CompareTrentViews, ForgedSignatureIsTheOnlyDistinguishableCase) {
  std::vector<RunResult> keep;
  for (int scheme : {1, 2}) {
    const auto report = CompareAll(scheme, Config(4, 11), true, keep);
    EXPECT_EQ(report.distinguishable, std::vector<std::string>{"ForgedSA"});
    const size_t k = report.cases.size();
    for (size_t i = 0; i < k; ++i) {
      EXPECT_TRUE(report.pairwise_equal[i][i]);
      for (size_t j = 0; j < k; ++j) {
        EXPECT_EQ(report.pairwise_equal[i][j], report.pairwise_equal[j][i]);
      }
    }
  }
}

TEST(CompareTrentViews, RejectsMismatchedMetadata) {
  const RunResult a = RunScheme(1, Config(2, 1));
  const RunResult b = RunScheme(1, Config(2, 2));
  const RunResult c = RunScheme(2, Config(2, 1));
  EXPECT_ERROR(CompareTrentViews({{"a", &a.transcript}, {"b", &b.transcript}}),
               ErrorCode::kInvalidArgument);
  EXPECT_ERROR(CompareTrentViews({{"a", &a.transcript}, {"c", &c.transcript}}),
               ErrorCode::kInvalidArgument);
  EXPECT_ERROR(CompareTrentViews({}), ErrorCode::kInvalidArgument);
}

size_t FirstDifference(const Json& a, const Json& b) {
  const size_t k = std::min(a.size(), b.size());
  for (size_t i = 0; i < k; ++i) {
    if (a[i] != b[i]) return i;
  }
  return k;
}

TEST(Properties, AttackMinimality) {
  // The omniscient transcripts of a dispute case and the honest run agree
  // up to the tamper point, and the first difference is the tamper itself
  // (or Bob's check for BobLies).
  for (int scheme : {1, 2}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      RunConfig base = Config(3, seed);
      base.debug = true;
      const Json honest = RunScheme(scheme, base).transcript.ToJson(true);
      for (DisputeCase c : ApplicableCases(scheme)) {
        const Json run = RunDispute(c, scheme, base).transcript.ToJson(true);
        const size_t d = FirstDifference(honest["events"], run["events"]);
        ASSERT_LT(d, run["events"].size());
        const Json& e = run["events"][d];
        const std::string tag = e["tag"];
        if (c == DisputeCase::kBobLies) {
          EXPECT_TRUE(tag == "V5.compare" || tag == "V4'.compare") << tag;
        } else if (c == DisputeCase::kEveDisturbs) {
          EXPECT_EQ(e["actor"], "Eve") << tag;
        } else {
          EXPECT_EQ(e["classical"]["index"].is_number(), true) << tag;
          EXPECT_NE(tag.find(".tamper"), std::string::npos) << tag;
        }
        // Board entries made before Bob's check are untouched.
        const size_t before_check = scheme == 1 ? 0 : 1;
        EXPECT_GE(FirstDifference(honest["board"], run["board"]), before_check);
      }
    }
  }
}

TEST(Properties, DisputeTapsOnlyTouchTheDesignatedComponent) {
  // Trent's own events match the honest run up to Bob's check: nothing
  // Trent inspects was altered.
  for (int scheme : {1, 2}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      const RunResult honest = RunScheme(scheme, Config(3, seed));
      const int check = StepRank(scheme == 1 ? "V5" : "V4'");
      auto trent_events = [check](const Transcript& t) {
        std::vector<std::string> out;
        for (const Event& e : t.events()) {
          if (e.actor == Party::kTrent && StepRank(e.step) < check) {
            out.push_back(e.step + "." + e.action + e.classical.dump());
          }
        }
        return out;
      };
      for (DisputeCase c : ApplicableCases(scheme)) {
        const RunResult run = RunDispute(c, scheme, Config(3, seed));
        const auto a = trent_events(honest.transcript);
        const auto b = trent_events(run.transcript);
        EXPECT_EQ(a, b) << DisputeCaseName(c);
      }
    }
  }
}

// --- False pad ------------------------------------------------------------

TEST(RunFalsePad, FirstSlotFlip) {
  for (int scheme : {1, 2}) {
    const Key mask = Key::FromString(KeyRole::kPad, "10000000");
    const FalsePadReport r = RunFalsePad(scheme, Config(4, 6), mask);
    EXPECT_EQ(r.differing_slots, std::vector<size_t>{0});
    EXPECT_EQ(r.wrong_indices, std::vector<size_t>{0});
    EXPECT_TRUE(r.accepted);
    EXPECT_FALSE(r.check_failed_at_publication);
    EXPECT_TRUE(r.trent_attestation_unchanged);
    EXPECT_NE(r.r, r.r_published);
  }
}

TEST(RunFalsePad, IdentityMaskIsHarmless) {
  const FalsePadReport r =
      RunFalsePad(1, Config(3, 7), Key::FromString(KeyRole::kPad, "000000"));
  EXPECT_EQ(r.r, r.r_published);
  EXPECT_TRUE(r.wrong_indices.empty());
  for (double f : r.fidelities) EXPECT_NEAR(f, 1.0, 1e-9);
}

TEST(RunFalsePad, WrongIndicesTrackDifferingSlots) {
  Prng rng(71);
  for (int scheme : {1, 2}) {
    for (int t = 0; t < 30; ++t) {
      const int n = 1 + static_cast<int>(rng.Below(8));
      const int slots = 1 + static_cast<int>(rng.Below(n));
      const Key mask = RandomPadMask(n, slots, rng);
      const FalsePadReport r =
          RunFalsePad(scheme, Config(n, rng.NextU64()), mask);
      EXPECT_EQ(r.differing_slots.size(), static_cast<size_t>(slots));
      EXPECT_EQ(r.wrong_indices, r.differing_slots);
      EXPECT_TRUE(r.accepted);
      EXPECT_FALSE(r.check_failed_at_publication);
      EXPECT_TRUE(r.trent_attestation_unchanged);
    }
  }
  EXPECT_ERROR(RandomPadMask(2, 3, rng), ErrorCode::kInvalidArgument);
  EXPECT_ERROR(
      RunFalsePad(1, Config(2, 1), Key::FromString(KeyRole::kPad, "10")),
      ErrorCode::kLengthMismatch);
}

// --- Invisible photons ----------------------------------------------------

TEST(RunIpe, RecoversSixteenBitsUndetected) {
  const IpeReport r = RunIpe(1, Config(8, 3));
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.recovered_bits.size(), 16u);
  EXPECT_EQ(r.recovered_bits, r.true_bits);
  EXPECT_TRUE(r.verdict.accepted);
  EXPECT_FALSE(r.detected);
  EXPECT_EQ(r.detection_events, 0);
}

TEST(RunIpe, ZeroKeySlotGivesPhiPlus) {
  RunConfig c = Config(4, 5);
  c.fixed_keys.emplace(KeyRole::kB, Key::FromString(KeyRole::kB, "00100111"));
  const IpeReport r = RunIpe(1, c);
  ASSERT_EQ(r.outcomes.size(), 4u);
  EXPECT_EQ(r.outcomes[0], BellOutcome::kPhiPlus);
  EXPECT_EQ(r.outcomes[1], BellOutcome::kPsiPlus);
  EXPECT_EQ(r.outcomes[2], BellOutcome::kPhiMinus);
  EXPECT_EQ(r.outcomes[3], BellOutcome::kPsiMinus);
  EXPECT_EQ(r.recovered_bits, "00100111");
}

TEST(RunIpe, SchemeTwoRecoversTheBobTrentKey) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const IpeReport r = RunIpe(2, Config(4, seed));
    EXPECT_TRUE(r.success) << seed;
    EXPECT_FALSE(r.detected) << seed;
    EXPECT_EQ(r.true_bits.size(), 8u);
  }
}

TEST(RunIpe, SignatureCarrierWorksToo) {
  for (int scheme : {1, 2}) {
    const IpeReport r = RunIpe(scheme, Config(4, 9), Carrier::kSA);
    EXPECT_TRUE(r.success);
    EXPECT_FALSE(r.detected);
  }
  EXPECT_EQ(ParseCarrier(CarrierName(Carrier::kSA)), Carrier::kSA);
  EXPECT_ERROR(ParseCarrier("m-a"), ErrorCode::kInvalidArgument);
}

TEST(Properties, IpeDeterminism) {
  for (int scheme : {1, 2}) {
    for (int n : {1, 4, 8}) {
      for (uint64_t seed = 1; seed <= 100; ++seed) {
        const RunConfig c = Config(n, seed);
        const IpeReport r = RunIpe(scheme, c);
        ASSERT_TRUE(r.success) << scheme << " " << n << " " << seed;
        ASSERT_EQ(r.verdict, RunScheme(scheme, c).verdict);
        ASSERT_FALSE(r.detected);
      }
    }
  }
}

TEST(Reports, JsonFields) {
  const IpeReport ipe = RunIpe(1, Config(2, 1));
  const Json j = ToJson(ipe);
  EXPECT_EQ(j["recovered_bits"], ipe.recovered_bits);
  EXPECT_EQ(j["carrier"], "p-prime");
  const FalsePadReport fp =
      RunFalsePad(1, Config(2, 1), Key::FromString(KeyRole::kPad, "0100"));
  EXPECT_EQ(ToJson(fp)["wrong_indices"], Json::array({0}));
}

}  // namespace
}  // namespace aqs

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

#include "aqs/checks.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "aqs/protocol.h"
#include "aqs/qstate.h"

namespace aqs {
namespace {

using Density = std::array<Amplitude, 4>;  // row-major 2x2

Density Outer(const StateVector& s) {
  const auto a = s.amplitudes();
  return {a[0] * std::conj(a[0]), a[0] * std::conj(a[1]),
          a[1] * std::conj(a[0]), a[1] * std::conj(a[1])};
}

std::string Fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

CheckResult PadRoundTrip(const CheckConfig& cfg) {
  Prng rng = Prng(cfg.seed).Split(1);
  double worst = 1.0;
  for (int t = 0; t < cfg.trials; ++t) {
    Registry reg;
    const int n = 1 + static_cast<int>(rng.Below(8));
    std::vector<QubitId> seq;
    std::vector<StateVector> ref;
    for (int i = 0; i < n; ++i) {
      const QubitAmplitudes q = RandomQubit(rng);
      seq.push_back(reg.Alloc(q));
      ref.push_back(StateVector::FromQubit(q));
    }
    const Key key = GenKey(2 * n, KeyRole::kA, rng);
    EncryptE(reg, seq, key);
    DecryptE(reg, seq, key);
    for (int i = 0; i < n; ++i)
      worst = std::min(worst, reg.Fidelity(seq[i], ref[i]));
  }
  return {"pad_round_trip_e", worst >= 1.0 - 1e-12,
          "min fidelity " + Fmt(worst)};
}

CheckResult TransformRoundTrip(const CheckConfig& cfg) {
  Prng rng = Prng(cfg.seed).Split(2);
  double worst = 1.0;
  for (int t = 0; t < cfg.trials; ++t) {
    Registry reg;
    const int n = 1 + static_cast<int>(rng.Below(8));
    std::vector<QubitId> seq;
    std::vector<StateVector> ref;
    for (int i = 0; i < n; ++i) {
      const QubitAmplitudes q = RandomQubit(rng);
      seq.push_back(reg.Alloc(q));
      ref.push_back(StateVector::FromQubit(q));
    }
    const Key key = GenKey(n, KeyRole::kAB, rng);
    TransformM(reg, seq, key, cfg.convention);
    TransformMInverse(reg, seq, key, cfg.convention);
    for (int i = 0; i < n; ++i)
      worst = std::min(worst, reg.Fidelity(seq[i], ref[i]));
  }
  return {std::string("pad_round_trip_m[") +
              (cfg.convention == MIndexConvention::kXorOne ? "xor" : "cyclic") +
              "]",
          worst >= 1.0 - 1e-12, "min fidelity " + Fmt(worst)};
}

CheckResult KeyAveragePrivacy(const CheckConfig& cfg) {
  Prng rng = Prng(cfg.seed).Split(3);
  double worst = 0.0;
  const int inputs = std::min(cfg.trials, 20);
  for (int t = 0; t < inputs; ++t) {
    const QubitAmplitudes q = RandomQubit(rng);
    Density avg{};
    for (int pad = 0; pad < 4; ++pad) {
      Registry reg;
      const QubitId id = reg.Alloc(q);
      EncryptE(reg, std::span<const QubitId>(&id, 1),
               Key(KeyRole::kPad, {static_cast<uint8_t>(pad & 1),
                                   static_cast<uint8_t>(pad >> 1)}));
      const Density rho = Outer(reg.Snapshot(std::span<const QubitId>(&id, 1)));
      for (int k = 0; k < 4; ++k) avg[k] += 0.25 * rho[k];
    }
    const Density half_identity{0.5, 0.0, 0.0, 0.5};
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, std::abs(avg[k] - half_identity[k]));
    }
  }
  return {"key_average_privacy", worst <= 1e-9,
          "max |rho - I/2| entry " + Fmt(worst)};
}

CheckResult BellDecodeTable(const CheckConfig& cfg) {
  Prng rng = Prng(cfg.seed).Split(4);
  int failures = 0;
  for (int t = 0; t < std::max(1, cfg.trials / 4); ++t) {
    for (int code = 0; code < 4; ++code) {
      const PauliBits bits{(code & 1) != 0, (code & 2) != 0};
      Registry reg;
      auto [a, b] = reg.MakeBellPair();
      reg.ApplyPauli(a, bits);
      if (BellOutcomeBits(reg.BellMeasure(a, b, rng)) != bits) ++failures;
    }
  }
  return {"bell_decode_table", failures == 0,
          std::to_string(failures) + " mismatches"};
}

CheckResult TeleportationCompleteness(const CheckConfig& cfg) {
  Prng rng = Prng(cfg.seed).Split(5);
  double worst = 1.0;
  for (int t = 0; t < cfg.trials; ++t) {
    Registry reg;
    const QubitAmplitudes q = RandomQubit(rng);
    const QubitId input = reg.Alloc(q);
    auto [a, b] = reg.MakeBellPair();
    const BellOutcome o = reg.BellMeasure(input, a, rng);
    ApplyTeleportCorrection(reg, b, o);
    worst = std::min(worst, reg.Fidelity(b, StateVector::FromQubit(q)));
  }
  return {"teleportation_completeness", worst >= 1.0 - 1e-9,
          "min fidelity " + Fmt(worst)};
}

CheckResult SwapTestCalibration(const CheckConfig& cfg) {
  Prng rng = Prng(cfg.seed).Split(6);
  constexpr int kShots = 100000;
  double worst_z = 0.0;
  bool ok = true;
  for (double f : {0.0, 0.25, 0.5, 1.0}) {
    const StateVector zero = StateVector::FromQubit({1.0, 0.0});
    const StateVector other =
        StateVector::FromQubit({std::sqrt(f), std::sqrt(1.0 - f)});
    const double p = 0.5 * (1.0 + f);
    const double se = std::sqrt(p * (1.0 - p) / kShots);
    const double got = SwapTest(zero, other, kShots, rng);
    const double dev = std::abs(got - p);
    if (se == 0.0) {
      ok = ok && dev == 0.0;
    } else {
      worst_z = std::max(worst_z, dev / se);
      ok = ok && dev <= 3.0 * se;
    }
  }
  return {"swap_test_calibration", ok, "max |z| " + Fmt(worst_z)};
}

CheckResult NormPreservation(const CheckConfig& cfg) {
  Prng rng = Prng(cfg.seed).Split(7);
  double worst = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    Registry reg;
    std::vector<QubitId> live;
    for (int i = 0; i < 6; ++i) live.push_back(reg.Alloc(RandomQubit(rng)));
    for (int step = 0; step < 20 && live.size() >= 2; ++step) {
      if (rng.Below(4) == 0) {
        const size_t i = rng.Below(live.size());
        size_t j = rng.Below(live.size() - 1);
        if (j >= i) ++j;
        reg.BellMeasure(live[i], live[j], rng);
        const QubitId qi = live[i], qj = live[j];
        std::erase(live, qi);
        std::erase(live, qj);
      } else {
        reg.ApplyPauli(live[rng.Below(live.size())], rng.Bit(), rng.Bit());
      }
      worst = std::max(worst, reg.MaxNormDeviation());
    }
  }
  return {"norm_preservation", worst <= 1e-12,
          "max norm deviation " + Fmt(worst)};
}

}  // namespace

std::vector<CheckResult> RunInvariantChecks(const CheckConfig& config) {
  return {PadRoundTrip(config),
          TransformRoundTrip(config),
          KeyAveragePrivacy(config),
          BellDecodeTable(config),
          TeleportationCompleteness(config),
          SwapTestCalibration(config),
          NormPreservation(config)};
}

}  // namespace aqs

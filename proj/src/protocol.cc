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

#include <algorithm>
#include <charconv>
#include <utility>

#include "aqs/error.h"

namespace aqs {
namespace {

constexpr PadReuse kCyclic = PadReuse::kCyclic;

std::vector<QubitId> Concat(std::span<const QubitId> a,
                            std::span<const QubitId> b) {
  std::vector<QubitId> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<QubitId> Slice(std::span<const QubitId> seq, size_t begin,
                           size_t count) {
  return {seq.begin() + begin, seq.begin() + begin + count};
}

Json OutcomeNames(std::span<const BellOutcome> outcomes) {
  Json out = Json::array();
  for (BellOutcome o : outcomes) out.push_back(BellOutcomeName(o));
  return out;
}

Json PauliJson(PauliBits b) { return Json{{"x", b.x}, {"z", b.z}}; }

void CheckIndex(size_t i, int n, std::string_view what) {
  if (i >= static_cast<size_t>(n)) {
    throw Error(
        ErrorCode::kInvalidArgument,
        std::string(what) + " index " + std::to_string(i) + " out of range");
  }
}

// A fresh copy of |P> in Alice's hands.
std::vector<QubitId> PrepareCopy(World& w) {
  std::vector<QubitId> out;
  for (const QubitAmplitudes& q : w.message().qubits) {
    out.push_back(w.Alloc(Party::kAlice, q));
  }
  return out;
}

void TamperPauli(World& w, const std::map<size_t, PauliBits>& tamper,
                 std::span<const QubitId> seq, std::string step,
                 std::string_view component) {
  for (const auto& [i, bits] : tamper) {
    CheckIndex(i, w.n(), component);
    w.optics().ApplyPauli(seq[i], bits.x, bits.z);
    w.Log(
        Party::kAlice, step, "tamper", {Party::kAlice},
        Json{
            {"component", component}, {"index", i}, {"pauli", PauliJson(bits)}},
        {seq[i]});
  }
}

Key PublishedPad(const World& w) {
  const Key& r = *w.alice.pad;
  const auto& mask = w.config().deviations.published_pad_mask;
  if (!mask) return r;
  return r.Xor(*mask);
}

Key PadFromBoard(const World& w, std::string_view tag) {
  const BoardEntry* e = w.transcript().board().Find(tag);
  if (e == nullptr) throw Error(ErrorCode::kInvalidArgument, "no r on board");
  return Key::FromString(KeyRole::kPad,
                         e->payload.at("bits").get<std::string>());
}

std::vector<double> RecoveredFidelities(const World& w,
                                        std::span<const QubitId> recovered) {
  std::vector<double> out;
  for (size_t i = 0; i < recovered.size(); ++i) {
    out.push_back(w.registry().Fidelity(
        recovered[i], StateVector::FromQubit(w.message().qubits[i])));
  }
  return out;
}

bool BoardFlag(const World& w, std::string_view tag) {
  const BoardEntry* e = w.transcript().board().Find(tag);
  return e != nullptr && e->payload.at("value").get<int>() == 1;
}

RunResult Finish(const World& w) { return {w.transcript(), w.verdict}; }

Key Override(Key drawn, const std::optional<Key>& fixed) {
  if (!fixed) return drawn;
  if (fixed->size() != drawn.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::string(KeyRoleName(drawn.role())) +
                    " override must have " + std::to_string(drawn.size()) +
                    " bits");
  }
  return Key(drawn.role(), {fixed->bits().begin(), fixed->bits().end()});
}

void DealKey(World& w, KeyRole role) {
  Key drawn = GenKey(2 * w.n(), role, w.stream(Stream::kKeys));
  const auto& fixed = w.config().fixed_keys;
  auto it = fixed.find(role);
  w.SetKey(Override(std::move(drawn), it == fixed.end()
                                          ? std::nullopt
                                          : std::optional<Key>(it->second)));
}

void DrawPad(World& w) {
  w.alice.pad =
      Override(GenKey(2 * w.n(), KeyRole::kPad, w.stream(Stream::kPad)),
               w.config().fixed_pad);
}

}  // namespace

MessageSpec MessageSpec::Random(int n, Prng& rng) {
  MessageSpec spec;
  for (int i = 0; i < n; ++i) spec.qubits.push_back(RandomQubit(rng));
  return spec;
}

Comparator Comparator::Swap(int shots) {
  if (shots < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "swap comparator needs shots >= 1");
  }
  return {ComparatorKind::kSwapTest, shots};
}

Comparator Comparator::Parse(std::string_view text) {
  if (text == "exact") return Exact();
  constexpr std::string_view kPrefix = "swap:";
  if (text.starts_with(kPrefix)) {
    const std::string_view num = text.substr(kPrefix.size());
    int shots = 0;
    auto [ptr, ec] =
        std::from_chars(num.data(), num.data() + num.size(), shots);
    if (ec == std::errc() && ptr == num.data() + num.size() && !num.empty()) {
      return Swap(shots);
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "comparator must be 'exact' or 'swap:SHOTS', got '" +
                  std::string(text) + "'");
}

std::string Comparator::ToString() const {
  if (kind == ComparatorKind::kExact) return "exact";
  return "swap:" + std::to_string(shots);
}

Json VerdictToJson(const Verdict& v) {
  return Json{{"v_trent", v.v_trent ? 1 : 0},
              {"v_bob", v.v_bob ? Json(*v.v_bob ? 1 : 0) : Json(nullptr)},
              {"accepted", v.accepted},
              {"fidelities", v.fidelities},
              {"check_fidelities", v.check_fidelities},
              {"stopped_at", v.stopped_at}};
}

Json RunReportToJson(const RunResult& result, bool debug) {
  Json j = result.transcript.ToJson(debug);
  j["verdict"] = VerdictToJson(result.verdict);
  return j;
}

void Optics::ApplyPauli(QubitId q, bool x, bool z) {
  registry_->ApplyPauli(q, x, z);
  auto it = riders_.find(q.value);
  if (it == riders_.end()) return;
  for (QubitId rider : it->second) registry_->ApplyPauli(rider, x, z);
}

void Optics::Attach(QubitId host, QubitId rider) {
  if (!registry_->IsAlive(host) || !registry_->IsAlive(rider)) {
    throw Error(ErrorCode::kDeadQubit, "cannot attach a dead photon");
  }
  riders_[host.value].push_back(rider);
}

std::vector<QubitId> Optics::Detach(QubitId host) {
  auto node = riders_.extract(host.value);
  if (node.empty()) return {};
  return std::move(node.mapped());
}

size_t Optics::rider_count() const {
  size_t count = 0;
  for (const auto& [host, riders] : riders_) count += riders.size();
  return count;
}

World::World(int scheme, RunConfig config)
    : scheme_(scheme),
      config_(std::move(config)),
      optics_(registry_),
      transcript_(scheme, config_.n, config_.seed) {
  if (scheme != 1 && scheme != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "scheme must be 1 or 2, got " + std::to_string(scheme));
  }
  if (config_.n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "message length n must be >= 1");
  }
  if (config_.comparator.kind == ComparatorKind::kSwapTest &&
      config_.comparator.shots < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "swap comparator needs shots >= 1");
  }
  const Prng root(config_.seed);
  for (Stream s :
       {Stream::kKeys, Stream::kMessage, Stream::kPad, Stream::kAlice,
        Stream::kBob, Stream::kTrent, Stream::kAdversary}) {
    streams_.emplace(s, root.Split(static_cast<uint64_t>(s)));
  }
  if (config_.message) {
    if (config_.message->size() != config_.n) {
      throw Error(ErrorCode::kLengthMismatch,
                  "message spec has " +
                      std::to_string(config_.message->size()) +
                      " qubits, n is " + std::to_string(config_.n));
    }
    message_ = *config_.message;
  } else {
    message_ = MessageSpec::Random(config_.n, stream(Stream::kMessage));
  }
}

Prng& World::stream(Stream s) { return streams_.at(s); }

const Key& World::key(KeyRole role) const {
  auto it = keys_.find(role);
  if (it == keys_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(KeyRoleName(role)) + " was never dealt");
  }
  return it->second;
}

void World::SetKey(Key key) {
  const KeyRole role = key.role();
  keys_.insert_or_assign(role, std::move(key));
}

QubitId World::Alloc(Party holder, QubitAmplitudes amplitudes) {
  const QubitId q = registry_.Alloc(amplitudes);
  holder_[q.value] = holder;
  return q;
}

std::pair<QubitId, QubitId> World::MakeBellPair(Party holder) {
  auto pair = registry_.MakeBellPair();
  holder_[pair.first.value] = holder;
  holder_[pair.second.value] = holder;
  return pair;
}

BellOutcome World::BellMeasure(QubitId first, QubitId second, Stream source) {
  const BellOutcome o = registry_.BellMeasure(first, second, stream(source));
  holder_.erase(first.value);
  holder_.erase(second.value);
  return o;
}

std::optional<Party> World::HolderOf(QubitId q) const {
  auto it = holder_.find(q.value);
  if (it == holder_.end()) return std::nullopt;
  return it->second;
}

Event& World::Log(Party actor, std::string step, std::string action,
                  std::vector<Party> visibility, Json classical,
                  std::vector<QubitId> quantum) {
  Event& e = transcript_.Log(actor, std::move(step), std::move(action),
                             std::move(visibility), std::move(classical),
                             std::move(quantum));
  if (config_.debug) {
    e.debug = Json::array();
    for (QubitId q : e.quantum) {
      if (registry_.IsAlive(q) && registry_.GroupSize(q) == 1) {
        const StateVector snap =
            registry_.Snapshot(std::span<const QubitId>(&q, 1));
        const auto amps = snap.amplitudes();
        e.debug.push_back(Json{{amps[0].real(), amps[0].imag()},
                               {amps[1].real(), amps[1].imag()}});
      } else {
        e.debug.push_back(nullptr);
      }
    }
  }
  return e;
}

void World::Deliver(std::span<const QubitId> qubits, Party to) {
  for (QubitId q : qubits) holder_[q.value] = to;
}

Transmission World::Send(Transmission t) {
  const size_t qubits = t.qubits.size();
  const size_t outcomes = t.outcomes.size();
  const bool had_flag = t.flag.has_value();

  auto describe = [](const Transmission& x) {
    Json c{{"to", PartyName(x.to)}, {"qubits", x.qubits.size()}};
    if (!x.outcomes.empty()) c["outcomes"] = OutcomeNames(x.outcomes);
    if (x.flag) c["flag"] = *x.flag ? 1 : 0;
    return c;
  };
  Log(t.from, t.step, "send", {t.from}, describe(t), t.qubits);

  for (const ChannelTap& tap : config_.taps) tap(t, *this);
  if (t.qubits.size() != qubits || t.outcomes.size() != outcomes ||
      t.flag.has_value() != had_flag) {
    throw Error(ErrorCode::kLengthMismatch,
                "channel tap changed the shape of the " + t.step + " payload");
  }

  Deliver(t.qubits, t.to);
  Json c = describe(t);
  c.erase("to");
  c["from"] = PartyName(t.from);
  Log(t.to, t.step, "receive", {t.to}, std::move(c), t.qubits);
  return t;
}

bool World::StatesEqual(Party who, std::span<const QubitId> a,
                        std::span<const QubitId> b,
                        std::vector<double>* fidelities) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "comparing sequences of unequal length");
  }
  Stream source = Stream::kAdversary;
  switch (who) {
    case Party::kAlice:
      source = Stream::kAlice;
      break;
    case Party::kBob:
      source = Stream::kBob;
      break;
    case Party::kTrent:
      source = Stream::kTrent;
      break;
    case Party::kEve:
      break;
  }
  bool equal = true;
  for (size_t i = 0; i < a.size(); ++i) {
    const double f = registry_.Fidelity(a[i], b[i]);
    if (fidelities != nullptr) fidelities->push_back(f);
    if (config_.comparator.kind == ComparatorKind::kExact) {
      equal = equal && f >= 1.0 - kEqualityTolerance;
    } else {
      const double accepted =
          SwapTest(registry_.Snapshot(a.subspan(i, 1)),
                   registry_.Snapshot(b.subspan(i, 1)),
                   config_.comparator.shots, stream(source));
      equal = equal && accepted == 1.0;
    }
  }
  return equal;
}

// ---------------------------------------------------------------------------
// Scheme 1

std::unique_ptr<World> InitializeScheme1(RunConfig config) {
  auto world = std::make_unique<World>(1, std::move(config));
  World& w = *world;
  const int n = w.n();

  DealKey(w, KeyRole::kA);
  DealKey(w, KeyRole::kB);
  w.Log(Party::kTrent, "I1", "share_key", {Party::kTrent, Party::kAlice},
        Json{{"key", "K_A"}, {"bits", 2 * n}});
  w.Log(Party::kTrent, "I1", "share_key", {Party::kTrent, Party::kBob},
        Json{{"key", "K_B"}, {"bits", 2 * n}});

  std::vector<QubitId> all;
  for (int i = 0; i < n; ++i) {
    auto [a, b] = w.MakeBellPair(Party::kAlice);
    w.alice.a_halves.push_back(a);
    w.bob.b_halves.push_back(b);
    all.push_back(a);
    all.push_back(b);
  }
  w.Log(Party::kAlice, "I2", "prepare_bell_pairs", {Party::kAlice},
        Json{{"pairs", n}}, all);
  // The initialization channel is authenticated and cannot be tapped.
  w.Log(Party::kAlice, "I2", "send", {Party::kAlice},
        Json{{"to", "Bob"}, {"qubits", n}, {"channel", "authenticated"}},
        w.bob.b_halves);
  w.Deliver(w.bob.b_halves, Party::kBob);
  w.Log(Party::kBob, "I2", "receive", {Party::kBob},
        Json{{"from", "Alice"}, {"qubits", n}, {"channel", "authenticated"}},
        w.bob.b_halves);
  return world;
}

SignaturePackage1 AliceSignScheme1(World& w) {
  const int n = w.n();
  const Deviations& dev = w.config().deviations;
  Optics& optics = w.optics();

  // S1: three copies of |P>, two of them padded into P'.
  DrawPad(w);
  const Key& r = *w.alice.pad;
  std::vector<QubitId> p_tx = PrepareCopy(w);
  std::vector<QubitId> p_tel = PrepareCopy(w);
  std::vector<QubitId> s_a = PrepareCopy(w);
  EncryptE(optics, p_tx, r);
  EncryptE(optics, p_tel, r);
  EncryptE(optics, s_a, r);
  w.Log(Party::kAlice, "S1", "encrypt", {Party::kAlice},
        Json{{"key", "r"}, {"r", r.ToString()}, {"copies", 3}},
        Concat(Concat(p_tx, p_tel), s_a));

  // S2
  EncryptE(optics, s_a, w.key(KeyRole::kA));
  w.Log(Party::kAlice, "S2", "sign", {Party::kAlice}, Json{{"key", "K_A"}},
        s_a);
  TamperPauli(w, dev.s_a_tamper, s_a, "S2", "S_A");

  // S3-S4
  TamperPauli(w, dev.teleport_input_tamper, p_tel, "S3", "teleport_input");
  w.Log(Party::kAlice, "S3", "combine", {Party::kAlice}, Json{{"pairs", n}},
        Concat(p_tel, w.alice.a_halves));
  std::vector<BellOutcome> m_a;
  for (int i = 0; i < n; ++i) {
    m_a.push_back(w.BellMeasure(p_tel[i], w.alice.a_halves[i], Stream::kAlice));
  }
  w.alice.a_halves.clear();
  w.Log(Party::kAlice, "S4", "bell_measure", {Party::kAlice},
        Json{{"outcomes", OutcomeNames(m_a)}});

  // S5
  for (const auto& [i, bits] : dev.outcome_tamper) {
    CheckIndex(i, n, "M_A");
    const PauliBits old = BellOutcomeBits(m_a[i]);
    m_a[i] = BellOutcomeFromBits({old.x != bits.x, old.z != bits.z});
    w.Log(Party::kAlice, "S5", "tamper", {Party::kAlice},
          Json{{"component", "M_A"}, {"index", i}, {"pauli", PauliJson(bits)}});
  }
  Transmission sent = w.Send(Transmission{
      "S5", Party::kAlice, Party::kBob, Concat(p_tx, s_a), m_a, {}});

  SignaturePackage1 pkg{Slice(sent.qubits, 0, n), Slice(sent.qubits, n, n),
                        sent.outcomes};
  w.bob.p_prime = pkg.p_prime;
  w.bob.s_a = pkg.s_a;
  w.bob.m_a = pkg.m_a;
  return pkg;
}

TrentReply TrentVerifyScheme1(World& w, std::vector<QubitId> y_b) {
  const size_t n = static_cast<size_t>(w.n());
  if (y_b.empty() || y_b.size() != 2 * n) {
    throw Error(ErrorCode::kLengthMismatch,
                "Trent expects 2n = " + std::to_string(2 * n) +
                    " qubits, got " + std::to_string(y_b.size()));
  }
  Optics& optics = w.optics();
  const Key& k_a = w.key(KeyRole::kA);

  // V2
  DecryptE(optics, y_b, w.key(KeyRole::kB), kCyclic);
  w.Log(Party::kTrent, "V2", "decrypt", {Party::kTrent}, Json{{"key", "K_B"}},
        y_b);
  const std::vector<QubitId> p_prime = Slice(y_b, 0, n);
  const std::vector<QubitId> s_a = Slice(y_b, n, n);
  // S_T is P' encrypted in place.
  EncryptE(optics, p_prime, k_a);
  w.Log(Party::kTrent, "V2", "encrypt", {Party::kTrent},
        Json{{"key", "K_A"}, {"produces", "S_T"}}, p_prime);
  const bool v = w.StatesEqual(Party::kTrent, p_prime, s_a);
  w.verdict.v_trent = v;
  w.Log(
      Party::kTrent, "V2", "compare", {Party::kTrent},
      Json{{"comparator", w.config().comparator.ToString()}, {"V", v ? 1 : 0}});

  // V3
  DecryptE(optics, p_prime, k_a);
  w.Log(Party::kTrent, "V3", "recover", {Party::kTrent}, Json{{"key", "K_A"}},
        p_prime);
  EncryptE(optics, y_b, w.key(KeyRole::kB), kCyclic);
  w.Log(Party::kTrent, "V3", "encrypt", {Party::kTrent}, Json{{"key", "K_B"}},
        y_b);
  Transmission sent =
      w.Send(Transmission{"V3", Party::kTrent, Party::kBob, y_b, {}, v});
  return {sent.flag.value_or(false), sent.qubits};
}

std::vector<QubitId> BobTeleportRecover(World& w,
                                        std::span<const QubitId> b_halves,
                                        std::span<const BellOutcome> m_a) {
  if (b_halves.size() != m_a.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(b_halves.size()) + " B particles but " +
                    std::to_string(m_a.size()) + " outcomes");
  }
  for (size_t i = 0; i < b_halves.size(); ++i) {
    ApplyTeleportCorrection(w.optics(), b_halves[i], m_a[i]);
  }
  std::vector<QubitId> out(b_halves.begin(), b_halves.end());
  w.Log(Party::kBob, "V5", "teleport_correct", {Party::kBob},
        Json{{"outcomes", OutcomeNames(m_a)}}, out);
  return out;
}

RunResult RunScheme1(World& w) {
  const size_t n = static_cast<size_t>(w.n());
  const Deviations& dev = w.config().deviations;
  Optics& optics = w.optics();
  const Key& k_b = w.key(KeyRole::kB);

  SignaturePackage1 pkg = AliceSignScheme1(w);

  // V1
  std::vector<QubitId> y_b = Concat(pkg.p_prime, pkg.s_a);
  EncryptE(optics, y_b, k_b, kCyclic);
  w.Log(Party::kBob, "V1", "encrypt", {Party::kBob}, Json{{"key", "K_B"}}, y_b);
  Transmission to_trent =
      w.Send(Transmission{"V1", Party::kBob, Party::kTrent, y_b, {}, {}});

  TrentReply reply = TrentVerifyScheme1(w, to_trent.qubits);

  // V4
  DecryptE(optics, reply.qubits, k_b, kCyclic);
  w.Log(Party::kBob, "V4", "decrypt", {Party::kBob},
        Json{{"key", "K_B"}, {"V", reply.v ? 1 : 0}}, reply.qubits);
  if (!reply.v) {
    w.Log(Party::kBob, "V4", "reject", {Party::kBob}, Json{{"reason", "V=0"}});
    w.verdict.stopped_at = "V4";
    return Finish(w);
  }
  w.bob.p_prime = Slice(reply.qubits, 0, n);
  w.bob.s_a = Slice(reply.qubits, n, n);

  // V5
  w.bob.p_prime_b = BobTeleportRecover(w, w.bob.b_halves, pkg.m_a);
  std::vector<double> fidelities;
  const bool match =
      w.StatesEqual(Party::kBob, w.bob.p_prime_b, w.bob.p_prime, &fidelities);
  w.verdict.check_fidelities = fidelities;
  const bool claim = match && !dev.bob_claims_mismatch;
  w.verdict.v_bob = claim;
  w.Log(Party::kBob, "V5", "compare", {Party::kBob},
        Json{{"comparator", w.config().comparator.ToString()},
             {"match", match ? 1 : 0},
             {"reported", claim ? 1 : 0}});
  if (!claim) {
    w.Log(Party::kBob, "V5", "reject", {Party::kBob},
          Json{{"reason", "P'_B != P'"}});
    w.transcript().Post(Party::kBob, "V5", "dispute",
                        Json{{"claim", "P'_B != P'"}});
    w.verdict.stopped_at = "V5";
    return Finish(w);
  }
  w.Send(Transmission{"V5", Party::kBob, Party::kAlice, {}, {}, true});

  // V6
  w.transcript().Post(Party::kAlice, "V6", "r",
                      Json{{"bits", PublishedPad(w).ToString()}});

  // V7
  const Key r = PadFromBoard(w, "r");
  DecryptE(optics, w.bob.p_prime, r);
  w.bob.recovered = w.bob.p_prime;
  w.verdict.fidelities = RecoveredFidelities(w, w.bob.recovered);
  w.verdict.accepted = true;
  w.Log(Party::kBob, "V7", "hold_signature", {Party::kBob},
        Json{{"S_A", n}, {"r", r.ToString()}}, w.bob.recovered);
  return Finish(w);
}

RunResult RunScheme1(RunConfig config) {
  auto world = InitializeScheme1(std::move(config));
  return RunScheme1(*world);
}

// ---------------------------------------------------------------------------
// Scheme 2

std::unique_ptr<World> InitializeScheme2(RunConfig config) {
  auto world = std::make_unique<World>(2, std::move(config));
  World& w = *world;
  const int n = w.n();
  DealKey(w, KeyRole::kAT);
  DealKey(w, KeyRole::kBT);
  DealKey(w, KeyRole::kAB);
  w.Log(Party::kTrent, "I1'", "share_key", {Party::kTrent, Party::kAlice},
        Json{{"key", "K_AT"}, {"bits", 2 * n}});
  w.Log(Party::kTrent, "I1'", "share_key", {Party::kTrent, Party::kBob},
        Json{{"key", "K_BT"}, {"bits", 2 * n}});
  w.Log(Party::kAlice, "I1'", "share_key", {Party::kAlice, Party::kBob},
        Json{{"key", "K_AB"}, {"bits", 2 * n}});
  return world;
}

SignaturePackage2 AliceSignScheme2(World& w) {
  const Deviations& dev = w.config().deviations;
  Optics& optics = w.optics();
  const Key& k_ab = w.key(KeyRole::kAB);

  // S1'
  DrawPad(w);
  const Key& r = *w.alice.pad;
  std::vector<QubitId> p_prime = PrepareCopy(w);
  std::vector<QubitId> r_ab = PrepareCopy(w);
  std::vector<QubitId> s_a = PrepareCopy(w);
  EncryptE(optics, p_prime, r);
  EncryptE(optics, r_ab, r);
  EncryptE(optics, s_a, r);
  w.Log(Party::kAlice, "S1'", "encrypt", {Party::kAlice},
        Json{{"key", "r"}, {"r", r.ToString()}, {"copies", 3}},
        Concat(Concat(p_prime, r_ab), s_a));
  TransformM(optics, r_ab, k_ab, w.config().convention);
  w.Log(Party::kAlice, "S1'", "transform", {Party::kAlice},
        Json{{"key", "K_AB"}, {"produces", "R_AB"}}, r_ab);
  TamperPauli(w, dev.r_ab_tamper, r_ab, "S1'", "R_AB");

  // S2'
  EncryptE(optics, s_a, w.key(KeyRole::kAT));
  w.Log(Party::kAlice, "S2'", "sign", {Party::kAlice}, Json{{"key", "K_AT"}},
        s_a);
  TamperPauli(w, dev.s_a_tamper, s_a, "S2'", "S_A");

  // S3'
  std::vector<QubitId> payload = Concat(Concat(p_prime, r_ab), s_a);
  EncryptE(optics, payload, k_ab, kCyclic);
  w.Log(Party::kAlice, "S3'", "encrypt", {Party::kAlice}, Json{{"key", "K_AB"}},
        payload);
  Transmission sent =
      w.Send(Transmission{"S3'", Party::kAlice, Party::kBob, payload, {}, {}});
  return {sent.qubits};
}

TrentReply TrentVerifyScheme2(World& w, std::vector<QubitId> y_b) {
  const size_t n = static_cast<size_t>(w.n());
  if (y_b.empty() || y_b.size() != 2 * n) {
    throw Error(ErrorCode::kLengthMismatch,
                "Trent expects 2n = " + std::to_string(2 * n) +
                    " qubits, got " + std::to_string(y_b.size()));
  }
  Optics& optics = w.optics();
  const Key& k_bt = w.key(KeyRole::kBT);
  const Key& k_at = w.key(KeyRole::kAT);

  // V2'
  DecryptE(optics, y_b, k_bt, kCyclic);
  w.Log(Party::kTrent, "V2'", "decrypt", {Party::kTrent}, Json{{"key", "K_BT"}},
        y_b);
  const std::vector<QubitId> p_prime = Slice(y_b, 0, n);
  const std::vector<QubitId> s_a = Slice(y_b, n, n);

  // V3'
  DecryptE(optics, s_a, k_at);
  w.Log(Party::kTrent, "V3'", "decrypt", {Party::kTrent},
        Json{{"key", "K_AT"}, {"produces", "P'_T"}}, s_a);
  const bool v_t = w.StatesEqual(Party::kTrent, s_a, p_prime);
  w.verdict.v_trent = v_t;
  w.Log(Party::kTrent, "V3'", "compare", {Party::kTrent},
        Json{{"comparator", w.config().comparator.ToString()},
             {"V_T", v_t ? 1 : 0}});
  w.transcript().Post(Party::kTrent, "V3'", "V_T",
                      Json{{"value", v_t ? 1 : 0}});
  if (!v_t) {
    w.Log(Party::kTrent, "V3'", "abort", {Party::kTrent});
    return {false, {}};
  }
  EncryptE(optics, s_a, k_at);
  EncryptE(optics, y_b, k_bt, kCyclic);
  w.Log(Party::kTrent, "V3'", "regenerate", {Party::kTrent},
        Json{{"key", "K_BT"}}, y_b);
  Transmission sent =
      w.Send(Transmission{"V3'", Party::kTrent, Party::kBob, y_b, {}, {}});
  return {true, sent.qubits};
}

void BobVerifyScheme2(World& w, const TrentReply& reply) {
  const size_t n = static_cast<size_t>(w.n());
  if (!BoardFlag(w, "V_T")) {
    throw Error(ErrorCode::kInvalidArgument,
                "Bob's verification needs V_T = 1 on the board");
  }
  if (reply.qubits.size() != 2 * n) {
    throw Error(ErrorCode::kLengthMismatch, "Trent's reply must be 2n qubits");
  }
  Optics& optics = w.optics();
  const Deviations& dev = w.config().deviations;

  // V4'
  DecryptE(optics, reply.qubits, w.key(KeyRole::kBT), kCyclic);
  w.Log(Party::kBob, "V4'", "decrypt", {Party::kBob}, Json{{"key", "K_BT"}},
        reply.qubits);
  w.bob.p_prime = Slice(reply.qubits, 0, n);
  w.bob.s_a = Slice(reply.qubits, n, n);
  TransformMInverse(optics, w.bob.r_ab, w.key(KeyRole::kAB),
                    w.config().convention);
  w.bob.p_prime_b = w.bob.r_ab;
  w.Log(Party::kBob, "V4'", "transform_inverse", {Party::kBob},
        Json{{"key", "K_AB"}, {"produces", "P'_B"}}, w.bob.p_prime_b);
  std::vector<double> fidelities;
  const bool match =
      w.StatesEqual(Party::kBob, w.bob.p_prime_b, w.bob.p_prime, &fidelities);
  w.verdict.check_fidelities = fidelities;
  const bool claim = match && !dev.bob_claims_mismatch;
  w.verdict.v_bob = claim;
  w.Log(Party::kBob, "V4'", "compare", {Party::kBob},
        Json{{"comparator", w.config().comparator.ToString()},
             {"match", match ? 1 : 0},
             {"reported", claim ? 1 : 0}});
  w.transcript().Post(Party::kBob, "V4'", "V_B",
                      Json{{"value", claim ? 1 : 0}});

  // V5'
  if (!claim) {
    w.Log(Party::kAlice, "V5'", "abort", {Party::kAlice});
    w.Log(Party::kTrent, "V5'", "abort", {Party::kTrent});
    w.verdict.stopped_at = "V4'";
    return;
  }
  w.transcript().Post(Party::kAlice, "V5'", "r",
                      Json{{"bits", PublishedPad(w).ToString()}});

  // V6'
  const Key r = PadFromBoard(w, "r");
  DecryptE(optics, w.bob.p_prime, r);
  w.bob.recovered = w.bob.p_prime;
  w.verdict.fidelities = RecoveredFidelities(w, w.bob.recovered);
  w.verdict.accepted = true;
  w.Log(Party::kBob, "V6'", "hold_signature", {Party::kBob},
        Json{{"S_A", n}, {"r", r.ToString()}}, w.bob.recovered);
}

RunResult RunScheme2(World& w) {
  const size_t n = static_cast<size_t>(w.n());
  Optics& optics = w.optics();

  SignaturePackage2 pkg = AliceSignScheme2(w);

  // V1'
  DecryptE(optics, pkg.payload, w.key(KeyRole::kAB), kCyclic);
  w.Log(Party::kBob, "V1'", "decrypt", {Party::kBob}, Json{{"key", "K_AB"}},
        pkg.payload);
  w.bob.p_prime = Slice(pkg.payload, 0, n);
  w.bob.r_ab = Slice(pkg.payload, n, n);
  w.bob.s_a = Slice(pkg.payload, 2 * n, n);
  std::vector<QubitId> y_b = Concat(w.bob.p_prime, w.bob.s_a);
  EncryptE(optics, y_b, w.key(KeyRole::kBT), kCyclic);
  w.Log(Party::kBob, "V1'", "encrypt", {Party::kBob}, Json{{"key", "K_BT"}},
        y_b);
  Transmission to_trent =
      w.Send(Transmission{"V1'", Party::kBob, Party::kTrent, y_b, {}, {}});

  TrentReply reply = TrentVerifyScheme2(w, to_trent.qubits);

  if (!BoardFlag(w, "V_T")) {
    w.Log(Party::kBob, "V4'", "reject", {Party::kBob},
          Json{{"reason", "V_T=0"}});
    w.verdict.stopped_at = "V4'";
    return Finish(w);
  }
  BobVerifyScheme2(w, reply);
  return Finish(w);
}

RunResult RunScheme2(RunConfig config) {
  auto world = InitializeScheme2(std::move(config));
  return RunScheme2(*world);
}

RunResult RunScheme(int scheme, RunConfig config) {
  switch (scheme) {
    case 1:
      return RunScheme1(std::move(config));
    case 2:
      return RunScheme2(std::move(config));
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "scheme must be 1 or 2, got " + std::to_string(scheme));
  }
}

}  // namespace aqs

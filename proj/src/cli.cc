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

#include "aqs/cli.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "aqs/attacks.h"
#include "aqs/checks.h"
#include "aqs/error.h"
#include "aqs/protocol.h"

namespace aqs {
namespace {

struct Options {
  int scheme = 1;
  int n = 4;
  std::optional<uint64_t> seed;
  std::string comparator = "exact";
  std::string carrier = "p-prime";
  std::string convention = "cyclic";
  std::string case_name;
  bool all_cases = false;
  int k = 1;
  int trials = 100;
  bool debug = false;
  std::string out_path;
  std::string kind;
};

MIndexConvention ParseConvention(const std::string& s) {
  if (s == "cyclic") return MIndexConvention::kCyclicSuccessor;
  if (s == "xor") return MIndexConvention::kXorOne;
  throw Error(ErrorCode::kInvalidArgument,
              "convention must be 'cyclic' or 'xor', got '" + s + "'");
}

class Reporter {
 public:
  Reporter(const Options& opts, std::ostream& out, std::ostream& err)
      : opts_(opts), out_(out), err_(err) {}

  void Report(const Json& report) {
    const std::string text = report.dump(2) + "\n";
    if (opts_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(opts_.out_path, std::ios::binary);
    if (!f) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot write '" + opts_.out_path + "'");
    }
    f << text;
  }

  std::ostream& summary() { return opts_.out_path.empty() ? err_ : out_; }

 private:
  const Options& opts_;
  std::ostream& out_;
  std::ostream& err_;
};

RunConfig BaseConfig(const Options& opts, uint64_t seed) {
  if (opts.scheme != 1 && opts.scheme != 2) {
    throw Error(ErrorCode::kInvalidArgument, "--scheme must be 1 or 2");
  }
  if (opts.n < 1) throw Error(ErrorCode::kInvalidArgument, "--n must be >= 1");
  RunConfig config;
  config.n = opts.n;
  config.seed = seed;
  config.comparator = Comparator::Parse(opts.comparator);
  config.convention = ParseConvention(opts.convention);
  config.debug = opts.debug;
  return config;
}

std::string MinFidelity(const std::vector<double>& f) {
  if (f.empty()) return "n/a";
  std::ostringstream os;
  os.precision(12);
  os << *std::min_element(f.begin(), f.end());
  return os.str();
}

std::string Bit(std::optional<bool> b) {
  if (!b) return "-";
  return *b ? "1" : "0";
}

int CmdRun(const Options& opts, uint64_t seed, Reporter& rep) {
  const RunConfig config = BaseConfig(opts, seed);
  const RunResult result = RunScheme(opts.scheme, config);
  rep.Report(RunReportToJson(result, opts.debug));
  const Verdict& v = result.verdict;
  rep.summary() << "scheme " << opts.scheme << " n=" << opts.n
                << " seed=" << seed << ": "
                << (opts.scheme == 1 ? "V=" : "V_T=") << Bit(v.v_trent) << " "
                << (opts.scheme == 1 ? "Bob=" : "V_B=") << Bit(v.v_bob)
                << " min_fidelity=" << MinFidelity(v.fidelities)
                << (v.accepted ? " ACCEPTED" : " REJECTED at " + v.stopped_at)
                << "\n";
  return v.accepted ? kExitOk : kExitFailed;
}

// A dispute run reproduces the dilemma when Trent passes and Bob fails.
bool Dilemma(const Verdict& v) { return v.v_trent && v.v_bob == false; }

int CmdDispute(const Options& opts, uint64_t seed, Reporter& rep) {
  const RunConfig config = BaseConfig(opts, seed);
  if (!opts.all_cases) {
    const DisputeCase c = ParseDisputeCase(opts.case_name);
    if (!CaseApplies(c, opts.scheme)) {
      throw Error(ErrorCode::kInvalidCase, std::string(DisputeCaseName(c)) +
                                               " does not apply to scheme " +
                                               std::to_string(opts.scheme));
    }
    const RunResult r = RunDispute(c, opts.scheme, config);
    Json report = RunReportToJson(r, opts.debug);
    report["case"] = DisputeCaseName(c);
    report["trent_view"] = Json::parse(TrentView(r.transcript));
    rep.Report(report);
    rep.summary() << DisputeCaseName(c) << " scheme " << opts.scheme
                  << ": Trent=" << Bit(r.verdict.v_trent)
                  << " Bob=" << Bit(r.verdict.v_bob)
                  << (Dilemma(r.verdict) ? " dilemma reproduced"
                                         : " dilemma NOT reproduced")
                  << "\n";
    return Dilemma(r.verdict) ? kExitOk : kExitFailed;
  }

  std::vector<RunResult> runs;
  std::vector<DisputeCase> cases = ApplicableCases(opts.scheme);
  for (DisputeCase c : cases)
    runs.push_back(RunDispute(c, opts.scheme, config));
  std::vector<LabeledTranscript> labeled;
  bool all_dilemma = true;
  Json case_verdicts = Json::object();
  for (size_t i = 0; i < cases.size(); ++i) {
    labeled.push_back(
        {std::string(DisputeCaseName(cases[i])), &runs[i].transcript});
    all_dilemma = all_dilemma && Dilemma(runs[i].verdict);
    case_verdicts[std::string(DisputeCaseName(cases[i]))] =
        VerdictToJson(runs[i].verdict);
  }
  const IndistinguishabilityReport report = CompareTrentViews(labeled);

  const RunResult forged = RunForgedSignature(opts.scheme, config);
  labeled.push_back({"ForgedSA", &forged.transcript});
  const IndistinguishabilityReport control = CompareTrentViews(labeled);
  const bool control_distinguished =
      std::find(control.distinguishable.begin(), control.distinguishable.end(),
                "ForgedSA") != control.distinguishable.end();

  Json j = ToJson(report);
  j["verdicts"] = std::move(case_verdicts);
  j["control"] = Json{{"case", "ForgedSA"},
                      {"v_trent", forged.verdict.v_trent ? 1 : 0},
                      {"distinguishable", control_distinguished}};
  rep.Report(j);
  rep.summary() << "scheme " << opts.scheme << " seed=" << seed << ": "
                << cases.size() << " cases, Trent views "
                << (report.AllEqual() ? "all identical" : "DIFFER")
                << "; forged S_A control "
                << (control_distinguished ? "distinguishable" : "HIDDEN")
                << "\n";
  return report.AllEqual() && all_dilemma && control_distinguished
             ? kExitOk
             : kExitFailed;
}

int CmdFalsePad(const Options& opts, uint64_t seed, Reporter& rep) {
  const RunConfig config = BaseConfig(opts, seed);
  if (opts.k < 1 || opts.k > opts.n) {
    throw Error(ErrorCode::kInvalidArgument, "--k must be in [1, n]");
  }
  Prng rng = Prng(seed).Split(0xfa15e);
  const Key mask = RandomPadMask(opts.n, opts.k, rng);
  const FalsePadReport r = RunFalsePad(opts.scheme, config, mask);
  rep.Report(ToJson(r));
  const bool reproduced = r.accepted && !r.check_failed_at_publication &&
                          r.wrong_indices == r.differing_slots;
  rep.summary() << "false r' scheme " << opts.scheme << ": "
                << r.differing_slots.size() << " altered slots, "
                << r.wrong_indices.size() << " wrong recoveries, "
                << (r.check_failed_at_publication ? "a check failed"
                                                  : "no check failed")
                << "\n";
  return reproduced ? kExitOk : kExitFailed;
}

int CmdIpe(const Options& opts, uint64_t seed, Reporter& rep) {
  const RunConfig config = BaseConfig(opts, seed);
  const IpeReport r = RunIpe(opts.scheme, config, ParseCarrier(opts.carrier));
  rep.Report(ToJson(r));
  size_t correct = 0;
  for (size_t i = 0; i < r.true_bits.size(); ++i) {
    correct += r.recovered_bits[i] == r.true_bits[i];
  }
  rep.summary() << "IPE scheme " << opts.scheme << ": " << correct << "/"
                << r.true_bits.size() << " key bits recovered, "
                << (r.detected ? "DETECTED" : "undetected") << "\n";
  return r.success && !r.detected ? kExitOk : kExitFailed;
}

int CmdCheck(const Options& opts, uint64_t seed, Reporter& rep) {
  if (opts.trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--trials must be >= 1");
  }
  CheckConfig config;
  config.seed = seed;
  config.trials = opts.trials;
  config.convention = ParseConvention(opts.convention);
  const std::vector<CheckResult> results = RunInvariantChecks(config);
  bool all = true;
  Json j = Json::array();
  for (const CheckResult& r : results) {
    all = all && r.passed;
    j.push_back(
        Json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  rep.Report(Json{{"seed", seed}, {"trials", opts.trials}, {"checks", j}});
  for (const CheckResult& r : results) {
    rep.summary() << (r.passed ? "PASS " : "FAIL ") << r.name << " ("
                  << r.detail << ")\n";
  }
  return all ? kExitOk : kExitFailed;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Options opts;
  CLI::App app{"Arbitrated quantum signature simulation lab", "aqs-lab"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scheme", opts.scheme, "Protocol scheme (1 or 2)");
    cmd->add_option("--n", opts.n, "Message length in qubits");
    cmd->add_option("--seed", opts.seed, "Seed; omitted means fresh entropy");
    cmd->add_option("--comparator", opts.comparator, "exact or swap:SHOTS");
    cmd->add_option("--convention", opts.convention,
                    "M_K partner index: cyclic or xor");
    cmd->add_option("--out", opts.out_path, "Write the JSON report here");
    cmd->add_flag("--debug", opts.debug, "Include quantum amplitudes");
  };

  CLI::App* run = app.add_subcommand("run", "Run an honest protocol");
  add_common(run);

  CLI::App* attack = app.add_subcommand("attack", "Run an attack");
  add_common(attack);
  attack->add_option("kind", opts.kind, "ipe, dispute or false-r")
      ->required()
      ->check(CLI::IsMember({"ipe", "dispute", "false-r"}));
  attack->add_option("--carrier", opts.carrier, "p-prime or s-a (ipe)");
  attack->add_option("--case", opts.case_name, "Dispute case (dispute)");
  attack->add_flag("--all-cases", opts.all_cases,
                   "Run and compare all applicable cases (dispute)");
  attack->add_option("--k", opts.k, "Number of altered pad slots (false-r)");

  CLI::App* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("--seed", opts.seed, "Seed; omitted means fresh entropy");
  check->add_option("--trials", opts.trials, "Trials per invariant");
  check->add_option("--convention", opts.convention,
                    "M_K partner index: cyclic or xor");
  check->add_option("--out", opts.out_path, "Write the JSON report here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  Reporter rep(opts, out, err);
  try {
    uint64_t seed;
    if (opts.seed) {
      seed = *opts.seed;
    } else {
      std::random_device rd;
      seed = (static_cast<uint64_t>(rd()) << 32) | rd();
      rep.summary() << "seed: " << seed << "\n";
    }
    if (run->parsed()) return CmdRun(opts, seed, rep);
    if (check->parsed()) return CmdCheck(opts, seed, rep);
    const bool is_dispute = opts.kind == "dispute";
    if (is_dispute && opts.case_name.empty() && !opts.all_cases) {
      throw Error(ErrorCode::kInvalidArgument,
                  "attack dispute needs --case NAME or --all-cases");
    }
    if (!is_dispute && (!opts.case_name.empty() || opts.all_cases)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--case and --all-cases only apply to attack dispute");
    }
    if (is_dispute) return CmdDispute(opts, seed, rep);
    if (opts.kind == "false-r") return CmdFalsePad(opts, seed, rep);
    return CmdIpe(opts, seed, rep);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kInvalidCase:
        return kExitConfigError;
      default:
        return kExitFailed;
    }
  }
}

}  // namespace aqs

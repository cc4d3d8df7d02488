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

#ifndef AQS_CHECKS_H_
#define AQS_CHECKS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aqs/qotp.h"

namespace aqs {

struct CheckConfig {
  uint64_t seed = 1;
  int trials = 100;
  MIndexConvention convention = MIndexConvention::kCyclicSuccessor;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Module invariants: pad round trips, key-averaged privacy, the Bell
// decode table, teleportation completeness, swap-test calibration and norm
// preservation. Each check draws from its own sub-stream of `seed`.
std::vector<CheckResult> RunInvariantChecks(const CheckConfig& config);

}  // namespace aqs

#endif  // AQS_CHECKS_H_

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

#ifndef AQS_CLI_H_
#define AQS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace aqs {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfigError = 2;

// aqs-lab <run|attack|check> [options]. `args` excludes the program name.
// Reports go to --out when given, otherwise to `out`; the one-line summary
// goes to `out` when --out is given and to `err` otherwise.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace aqs

#endif  // AQS_CLI_H_

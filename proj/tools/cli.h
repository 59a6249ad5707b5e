// Copyright 2026 The ldpcount Authors
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


#ifndef LDPCOUNT_TOOLS_CLI_H_
#define LDPCOUNT_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ldpcount::cli {

// Exit codes are a stable scripting contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

// Runs the ldpcount command line. `args` excludes the program name.
// Results go to the --out file or, without one, to `out`; diagnostics go to
// `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ldpcount::cli

#endif  // LDPCOUNT_TOOLS_CLI_H_

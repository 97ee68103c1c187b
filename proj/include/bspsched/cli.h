// Copyright 2026 The bspsched Authors
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

// Command-line front end. Subcommands: validate, cost, classify, gen,
// chain-solve, cs, ilp-emit, ilp-read, hrel, oracle, ratios.
//
// Exit codes: 0 success, 1 domain error (invalid schedule, infeasible,
// budget exceeded), 2 usage or parse error.

#ifndef BSPSCHED_CLI_H_
#define BSPSCHED_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace bspsched {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace bspsched

#endif  // BSPSCHED_CLI_H_

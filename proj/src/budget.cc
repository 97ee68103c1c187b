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

#include <cstdlib>
#include <sstream>

#include "bspsched/error.h"
#include "bspsched/oracle.h"

namespace bspsched {

OracleBudget parse_budget(const std::string& text, OracleBudget base) {
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError(0, "budget entry \"" + item + "\" lacks '='");
    }
    std::string key = item.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::uint64_t value = 0;
    try {
      std::size_t used = 0;
      std::string text_value = item.substr(eq + 1);
      value = std::stoull(text_value, &used);
      if (text_value.find_first_not_of(" \t", used) != std::string::npos) {
        throw 0;
      }
    } catch (...) {
      throw ParseError(0, "bad budget value in \"" + item + "\"");
    }
    if (key == "max_nodes") {
      base.max_nodes = value;
    } else if (key == "max_procs" || key == "max_P") {
      base.max_procs = static_cast<ProcId>(value);
    } else if (key == "max_steps" || key == "max_S") {
      base.max_steps = static_cast<StepId>(value);
    } else if (key == "max_time_horizon") {
      base.max_time_horizon = static_cast<Time>(value);
    } else if (key == "max_search_nodes") {
      base.max_search_nodes = value;
    } else if (key == "spd_max_nodes") {
      base.spd_max_nodes = value;
    } else if (key == "spd_max_g") {
      base.spd_max_g = static_cast<Time>(value);
    } else {
      throw ParseError(0, "unknown budget key \"" + key + "\"");
    }
  }
  return base;
}

OracleBudget budget_from_env(OracleBudget base) {
  const char* env = std::getenv("BSPSCHED_BUDGET");
  if (env == nullptr) return base;
  return parse_budget(env, base);
}

}  // namespace bspsched

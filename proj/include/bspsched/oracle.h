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

// Exhaustive optimum search for tiny instances.
//
// The BSP search walks superstep boundaries: a state records, per processor,
// which nodes it has computed and which values it holds. Each superstep
// chooses a computation set per processor and then a communication set, and
// iterative deepening on the cost bound with memoized failures yields the
// optimum. Only schedules in a normal form are visited (every superstep but
// the last communicates; communication sets are maximal for their
// h-relation), which loses no optimal cost.

#ifndef BSPSCHED_ORACLE_H_
#define BSPSCHED_ORACLE_H_

#include <cstdint>
#include <string>

#include "bspsched/dag.h"
#include "bspsched/schedule.h"
#include "bspsched/timed.h"

namespace bspsched {

struct OracleBudget {
  std::size_t max_nodes = 8;
  ProcId max_procs = 3;
  StepId max_steps = 0;         // 0 means n
  Time max_time_horizon = 0;    // 0 means n * (1 + g)
  std::uint64_t max_search_nodes = 100'000'000;
  std::size_t spd_max_nodes = 5;
  Time spd_max_g = 2;
};

// "key=value" pairs separated by commas, e.g. "max_nodes=12,max_procs=3".
// Keys: max_nodes, max_procs, max_steps, max_time_horizon, max_search_nodes,
// spd_max_nodes, spd_max_g.
OracleBudget parse_budget(const std::string& text, OracleBudget base = {});
// Applies BSPSCHED_BUDGET when set.
OracleBudget budget_from_env(OracleBudget base = {});

struct BspOracleResult {
  BspSchedule schedule;
  Weight opt = 0;
  std::uint64_t search_nodes = 0;
};

BspOracleResult brute_opt_bsp(const Dag& dag, ProcId P, MachineParams params,
                              CommModel model, const OracleBudget& budget = {},
                              bool duplication = false);

// Overlapping-phase variant with direct singlecast tuples.
BspOracleResult brute_opt_maxbsp(const Dag& dag, ProcId P,
                                 MachineParams params,
                                 const OracleBudget& budget = {},
                                 MaxBspLatency latency = MaxBspLatency::kInside,
                                 bool duplication = false);

enum class TimedModel { kClassical, kClassicalBarrier, kCommDelay, kSpd };

struct TimedOracleResult {
  TimedSchedule schedule;
  Time opt = 0;
  std::uint64_t search_nodes = 0;
};

TimedOracleResult brute_opt_timed(const Dag& dag, ProcId P, Time g,
                                  TimedModel model,
                                  const OracleBudget& budget = {},
                                  bool duplication = false);

}  // namespace bspsched

#endif  // BSPSCHED_ORACLE_H_

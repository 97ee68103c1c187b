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

// Communication scheduling: choosing the communication set of a BSP
// schedule whose processor and superstep assignment is fixed.

#ifndef BSPSCHED_COMM_SCHED_H_
#define BSPSCHED_COMM_SCHED_H_

#include <cstddef>
#include <vector>

#include "bspsched/dag.h"
#include "bspsched/schedule.h"

namespace bspsched {

struct CsInstance {
  Dag dag;
  ProcId procs;
  StepId steps;
  std::vector<ProcId> pi;
  std::vector<StepId> tau;
};

// Takes pi and tau from a schedule without duplication; its tuples are
// ignored. Throws DomainError when no valid communication set exists.
CsInstance make_cs_instance(const Dag& dag, const BspSchedule& sched);

// Throws DomainError unless every edge has tau(u) <= tau(v) on one processor
// and tau(u) < tau(v) across processors.
void validate_cs_instance(const CsInstance& inst);

// A value that must reach another processor: `deadline` is the first
// superstep in which a consumer on `to` runs.
struct Delivery {
  NodeId node;
  ProcId to;
  StepId deadline;
};
std::vector<Delivery> deliveries(const CsInstance& inst);

// Sends every delivery from the producer in the superstep it is computed.
std::vector<CommStep> cs_eager(const CsInstance& inst);
// Sends every delivery in the superstep before its deadline.
std::vector<CommStep> cs_lazy(const CsInstance& inst);
// Exact greedy for two processors and unit communication weights.
std::vector<CommStep> cs_greedy_p2(const CsInstance& inst);

// Sum over supersteps of the h-relation, in units of g.
Weight cs_comm_units(const CsInstance& inst, const std::vector<CommStep>& comms,
                     CommModel model);

BspSchedule cs_schedule(const CsInstance& inst, std::vector<CommStep> comms);

struct CsOptions {
  MachineParams params{1, 0};
  bool count_latency = false;  // add L for supersteps with communication
  std::size_t max_deliveries = 20;
  bool prune = true;  // false enumerates every candidate set
};

struct CsResult {
  std::vector<CommStep> comms;
  Weight comm_units = 0;  // sum of h-relations
  Weight cost = 0;        // g * comm_units, plus latency when counted
};

// Exact minimum over communication sets valid in `model`. Free models
// consider relays through any processor. Throws BudgetExceeded when the
// instance has more deliveries than options.max_deliveries.
CsResult cs_bruteforce(const CsInstance& inst, CommModel model,
                       const CsOptions& options = {});

}  // namespace bspsched

#endif  // BSPSCHED_COMM_SCHED_H_

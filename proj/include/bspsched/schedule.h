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

// BSP schedules, their validity under the four communication models and
// their cost.

#ifndef BSPSCHED_SCHEDULE_H_
#define BSPSCHED_SCHEDULE_H_

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "bspsched/dag.h"

namespace bspsched {

// Processors and supersteps are 0-based in the C++ API.
using ProcId = std::uint32_t;
using StepId = std::uint32_t;

enum class Transfer { kDirect, kFree };
enum class Cast { kSingle, kBroadcast };

struct CommModel {
  Transfer transfer = Transfer::kDirect;
  Cast cast = Cast::kSingle;

  static constexpr CommModel DS() { return {Transfer::kDirect, Cast::kSingle}; }
  static constexpr CommModel DB() { return {Transfer::kDirect, Cast::kBroadcast}; }
  static constexpr CommModel FS() { return {Transfer::kFree, Cast::kSingle}; }
  static constexpr CommModel FB() { return {Transfer::kFree, Cast::kBroadcast}; }

  bool free() const { return transfer == Transfer::kFree; }
  bool broadcast() const { return cast == Cast::kBroadcast; }
  std::string name() const;  // "DS", "DB", "FS" or "FB"

  friend bool operator==(const CommModel&, const CommModel&) = default;
};

// Accepts ds, db, fs, fb in any case.
CommModel parse_comm_model(std::string_view text);
std::vector<CommModel> all_comm_models();

struct MachineParams {
  Weight g = 0;
  Weight L = 0;
};

struct Placement {
  ProcId proc;
  StepId step;

  friend bool operator==(const Placement&, const Placement&) = default;
  friend auto operator<=>(const Placement&, const Placement&) = default;
};

// Value of `node` travels from `from` to `to` in the communication phase of
// superstep `step`.
struct CommStep {
  NodeId node;
  ProcId from;
  ProcId to;
  StepId step;

  friend bool operator==(const CommStep&, const CommStep&) = default;
  friend auto operator<=>(const CommStep&, const CommStep&) = default;
};

// Edge-based accounting: the value needed by `edge` is sent from the
// processor of edge.from to the processor of edge.to.
struct EdgeCommStep {
  Edge edge;
  StepId step;

  friend bool operator==(const EdgeCommStep&, const EdgeCommStep&) = default;
  friend auto operator<=>(const EdgeCommStep&, const EdgeCommStep&) = default;
};

struct BspSchedule {
  ProcId procs = 1;
  StepId steps = 1;
  // One entry per node; more than one placement only under duplication.
  std::vector<std::vector<Placement>> assign;
  std::vector<CommStep> comms;
  std::vector<EdgeCommStep> edge_comms;

  // Builds a schedule without duplication from per-node processor and
  // superstep vectors. procs and steps are taken as the maxima plus one
  // unless given.
  static BspSchedule from_assignment(const std::vector<ProcId>& pi,
                                     const std::vector<StepId>& tau,
                                     std::vector<CommStep> comms = {},
                                     ProcId procs = 0, StepId steps = 0);

  bool has_duplicates() const;
  // Sorts placements and communication tuples.
  void canonicalize();

  friend bool operator==(const BspSchedule&, const BspSchedule&) = default;
};

struct Violation {
  std::string rule;
  std::string where;
  std::string message;
};

struct ValidityReport {
  bool valid = true;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  void add(std::string rule, std::string where, std::string message);
  std::string to_string() const;
};

// Checks index ranges, copy counts and tuple uniqueness, appending to
// `report`. Returns false when deeper checks would be meaningless.
bool check_schedule_structure(const Dag& dag, const BspSchedule& sched,
                              bool duplication, ValidityReport& report);

// Rule ids: "structure", "assignment", "source", "precedence", "mixed".
// The communication set in use is `comms`, or `edge_comms` for edge-based
// schedules (edge-based schedules are checked under direct singlecast).
ValidityReport check_validity(const Dag& dag, const BspSchedule& sched,
                              CommModel model, bool duplication);

struct SuperstepCost {
  std::vector<Weight> work;  // per processor
  std::vector<Weight> sent;
  std::vector<Weight> rec;
  Weight max_work = 0;
  Weight comm = 0;
  bool latency = false;
  Weight cost = 0;
};

struct CostBreakdown {
  std::vector<SuperstepCost> steps;
  Weight work_total = 0;
  Weight comm_total = 0;  // in units of g
  Weight latency_count = 0;
  Weight latency_total = 0;
  Weight cost = 0;

  // Symbolic form such as "5+2g+L".
  std::string formula() const;
};

// Evaluates the cost; validity is not checked. With edge_based the schedule
// must carry edge_comms (and no node-based comms), otherwise DomainError.
CostBreakdown compute_cost(const Dag& dag, const BspSchedule& sched,
                           CommModel model, MachineParams params,
                           bool edge_based = false);

// Drops supersteps without work and without communication and renumbers.
BspSchedule strip_empty_supersteps(const BspSchedule& sched);

// Merges supersteps s and s + 1: nodes and tuples of s + 1 move to s and
// later supersteps shift down. The communication phase of s must be empty.
BspSchedule merge_supersteps(const BspSchedule& sched, StepId s);

// Presence indicator: first superstep at which the value of v is available
// on p at the start of the computation phase (or produced during it), or
// kNever. Follows the free-movement definition when `free` is set,
// otherwise only tuples sent from processors that computed v count.
inline constexpr StepId kNever = static_cast<StepId>(-1);
std::vector<std::vector<StepId>> first_presence(const Dag& dag,
                                                const BspSchedule& sched,
                                                bool free);

}  // namespace bspsched

#endif  // BSPSCHED_SCHEDULE_H_

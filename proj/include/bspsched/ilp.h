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

// Integer linear program for BSP scheduling with a fixed number of
// supersteps S, in each of the four communication models.
//
// Variable families (indices in names are 1-based):
//   comp_v_p_s, pres_v_p_s        binary, every model
//   sent_v_p_s, rec_v_p_s         binary, DB and FB
//   rec_v_p_s, senttimes_v_p_s    binary and integer [0, P], DS
//   comm_v_p1_p2_s                binary, FS (p1 != p2)
//   home_v_p                      binary, DB and DS
//   used_s                        binary, every model
//   cwork_s_p, cwork_s, csent_s_p, crec_s_p, ccomm_s   integer costs
//
// Variable counts:
//   common  2nPS + 3PS + 3S
//   DB      + 2nPS + nP
//   FB      + 2nPS
//   DS      + 2nPS + nP
//   FS      + nP(P-1)S
// Constraint counts (m edges):
//   common  n + nPS + mPS + 6PS
//   DB      + 4nPS + nP
//   FB      + 3nPS
//   DS      + 4nPS + nP
//   FS      + 2nP(P-1)S
// plus one equality per pinned node.

#ifndef BSPSCHED_ILP_H_
#define BSPSCHED_ILP_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bspsched/dag.h"
#include "bspsched/schedule.h"

namespace bspsched {

struct IlpVariable {
  std::string name;
  bool binary = true;
  std::int64_t lo = 0;
  std::int64_t hi = 1;
};

struct IlpTerm {
  std::size_t var;
  std::int64_t coef;
};

enum class Relation { kLe, kGe, kEq };

struct IlpConstraint {
  std::string name;
  std::vector<IlpTerm> terms;
  Relation relation = Relation::kLe;
  std::int64_t rhs = 0;
};

struct IlpModel {
  std::vector<IlpVariable> variables;
  std::vector<IlpConstraint> constraints;
  std::vector<IlpTerm> objective;  // minimized

  // Metadata for reconstruction.
  std::size_t num_nodes = 0;
  ProcId procs = 1;
  StepId steps = 1;
  CommModel model;
  MachineParams params;
  bool duplication = false;
  bool weighted = true;

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;  // throws when absent
};

// Fixes a node to one processor and superstep (0-based).
struct IlpPin {
  NodeId node;
  ProcId proc;
  StepId step;
};

struct IlpOptions {
  bool duplication = false;
  bool weighted = true;  // work and communication weights as coefficients
  std::vector<IlpPin> pins;
};

// S = min(n, 2P - 1) for chain and connected chain DAGs, n otherwise.
StepId default_supersteps(const Dag& dag, ProcId P);

IlpModel emit_ilp(const Dag& dag, ProcId P, StepId S, MachineParams params,
                  CommModel model, const IlpOptions& options = {});

// LP file text. Throws DomainError for a model without constraints.
std::string render_lp(const IlpModel& model);

struct IlpSize {
  std::size_t variables = 0;
  std::size_t constraints = 0;
  friend bool operator==(const IlpSize&, const IlpSize&) = default;
};

// Closed-form counts. Throws DomainError for n = 0, P = 0 or S = 0.
IlpSize count_vars_constraints(const Dag& dag, ProcId P, StepId S,
                               CommModel model, std::size_t num_pins = 0);

using IlpAssignment = std::map<std::string, double, std::less<>>;

// "name value" per line, '#' comments.
IlpAssignment parse_solution(std::string_view text);

struct IlpReadResult {
  BspSchedule schedule;
  Weight cost = 0;
};

// Checks integrality, bounds and every constraint, reconstructs the
// schedule (empty supersteps removed) and checks it against the objective.
// Throws DomainError on any failure.
IlpReadResult read_solution(const Dag& dag, const IlpModel& model,
                            const IlpAssignment& assignment);

// Objective value of an integral assignment given per variable index.
std::int64_t evaluate_objective(const IlpModel& model,
                                const std::vector<std::int64_t>& values);

struct IlpSearchOptions {
  std::uint64_t max_search_nodes = 100'000'000;
  // Only solutions with objective <= upper_bound are sought.
  std::optional<std::int64_t> upper_bound;
};

struct IlpSearchResult {
  std::vector<std::int64_t> values;  // per variable index
  std::int64_t objective = 0;
  std::uint64_t search_nodes = 0;
};

// Exact minimum by branch and bound with bound propagation. Meant for tiny
// models. Returns nullopt when infeasible; throws BudgetExceeded.
std::optional<IlpSearchResult> solve_ilp_exhaustive(
    const IlpModel& model, const IlpSearchOptions& options = {});

IlpAssignment to_assignment(const IlpModel& model,
                            const std::vector<std::int64_t>& values);

}  // namespace bspsched

#endif  // BSPSCHED_ILP_H_

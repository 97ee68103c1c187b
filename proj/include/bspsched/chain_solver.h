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

// Exact BSP scheduling of chain DAGs and connected chain DAGs, and the
// greedy schedule with at most P-1 communication rounds.
//
// The exact solver fixes the number of supersteps S and a communication
// configuration (which chains are cut, between which processors and at
// which superstep boundary). Given the configuration, every chain segment
// may spread over a window of supersteps on one processor, so the optimum
// is found by a table of reachable per-(superstep, processor) load vectors.

#ifndef BSPSCHED_CHAIN_SOLVER_H_
#define BSPSCHED_CHAIN_SOLVER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "bspsched/dag.h"
#include "bspsched/schedule.h"

namespace bspsched {

struct ChainDecomposition {
  std::vector<std::vector<NodeId>> chains;
  std::optional<NodeId> root;
};

// Chains of a chain DAG, or the root and chains of a connected chain DAG.
// Throws DomainError for other DAGs.
ChainDecomposition decompose_chains(const Dag& dag);

// Peels off chains at least as long as the average remaining load, then
// splits the rest into contiguous blocks. Direct singlecast schedule with
// at most P-1 communicated values. Requires a chain DAG with unit weights.
BspSchedule greedy_chain(const Dag& dag, ProcId P);

struct ChainSolverOptions {
  ProcId max_procs = 3;
  std::uint64_t max_cells = 100'000'000;  // load vectors visited
};

struct ChainSolution {
  BspSchedule schedule;
  Weight cost = 0;
};

// Optimal schedule of a unit-weight chain DAG, valid in every model.
// Among optimal schedules the one with fewest supersteps is returned.
ChainSolution solve_chain(const Dag& dag, ProcId P, MachineParams params,
                          const ChainSolverOptions& options = {});

// Optimal schedule of a unit-weight connected chain DAG in `model`.
ChainSolution solve_connected_chain(const Dag& dag, ProcId P,
                                    MachineParams params, CommModel model,
                                    const ChainSolverOptions& options = {});

}  // namespace bspsched

#endif  // BSPSCHED_CHAIN_SOLVER_H_

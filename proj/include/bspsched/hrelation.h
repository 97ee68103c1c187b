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

// Decomposition of one communication phase into rounds in which every
// processor sends and receives at most one value.

#ifndef BSPSCHED_HRELATION_H_
#define BSPSCHED_HRELATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bspsched/schedule.h"

namespace bspsched {

// Entry (p, q) counts unit values sent from p to q; the diagonal is zero.
using DemandMatrix = std::vector<std::vector<std::int64_t>>;

struct SlotPair {
  ProcId from;
  ProcId to;

  friend bool operator==(const SlotPair&, const SlotPair&) = default;
  friend auto operator<=>(const SlotPair&, const SlotPair&) = default;
};

struct SlotSchedule {
  std::vector<std::vector<SlotPair>> slots;
  std::int64_t artificial_edges = 0;
};

// Throws DomainError for non-square input, negative entries or a nonzero
// diagonal.
void validate_demand(const DemandMatrix& demand);

// Largest row or column sum.
std::int64_t h_relation(const DemandMatrix& demand);

// Exactly h_relation(demand) slots, each a partial matching, whose union is
// the demand. Padding adds artificial edges between the lowest-indexed
// deficient sender and receiver; each round takes the perfect matching found
// by augmenting paths over senders and receivers in increasing order.
SlotSchedule decompose(const DemandMatrix& demand);

// Parses "0,2;1,0" (rows separated by ';').
DemandMatrix parse_demand(const std::string& text);
std::string format_slots(const SlotSchedule& slots);

struct WeightedTransfer {
  ProcId from;
  ProcId to;
  Weight weight;
};

struct WeightedDemand {
  ProcId procs = 0;
  std::vector<WeightedTransfer> transfers;
};

Weight weighted_h_relation(const WeightedDemand& demand);

// Start slot of every transfer in a non-preemptive layout of `slots` unit
// slots, or nullopt when none exists. Exhaustive backtracking search.
std::optional<std::vector<Weight>> place_nonpreemptive(
    const WeightedDemand& demand, Weight slots);

// Replaces every transfer of weight w by w unit transfers.
DemandMatrix unit_expand(const WeightedDemand& demand);

// p1->p2, p2->p3, p3->p1 with weight 3 each, and p4 sending weight 1 to each
// of p1, p2, p3.
WeightedDemand weighted_counterexample();

}  // namespace bspsched

#endif  // BSPSCHED_HRELATION_H_

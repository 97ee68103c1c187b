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

// Generators for layered DAGs and the fixed lower-bound constructions.
// Node numbering is layer-major (or chain-major), then by index within the
// layer.

#ifndef BSPSCHED_GENERATORS_H_
#define BSPSCHED_GENERATORS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bspsched/dag.h"

namespace bspsched {

enum class LayerVariant { kAdjacent, kTransitive, kDelayed };

// `length` layers of `width` nodes. kDelayed connects layer i1 to layer i2
// whenever i1 + delay < i2.
Dag gen_layered(int length, int width, LayerVariant variant, int delay = 0);

// Weighted DAG on which barrier synchronization costs one extra step.
// Node 1 is the weight-2 top node and node 6 the weight-3 node.
Dag gen_class_ww();

// Weighted DAG on which barrier synchronization costs one extra step
// unless nodes may be duplicated. Nodes 1-4 form the top path, 5-8 the
// bottom path and 9-11 the middle path hanging off node 2.
Dag gen_recomp();

// Source node followed by two disjoint paths of `length` nodes each.
Dag gen_fork(int length);

// P chains v_{0..l} with l = k*g plus the wrapped cross edges
// v_{(i-1)g, j} -> v_{ig+1, (j+1) mod P}; edges whose head index exceeds l
// are omitted.
Dag gen_two_minus_eps(int g, int k, int P);

// g components of k0 chains with g+1 nodes each; in component k the node at
// index k-1 of chain j feeds the node at index k of chain (j+1) mod k0.
// Intended for P = g * k0 processors.
Dag gen_three_halves(int g, int k0);

// Each forward pair (i, j), i < j, becomes an edge with probability
// edge_prob. Deterministic for a given seed.
Dag gen_random(int n, double edge_prob, std::uint64_t seed);

// Chain DAG with the given chain lengths, nodes numbered chain by chain.
Dag gen_chains(const std::vector<int>& lengths);

// Root node 1 feeding chains of the given lengths.
Dag gen_connected_chains(const std::vector<int>& lengths);

}  // namespace bspsched

#endif  // BSPSCHED_GENERATORS_H_

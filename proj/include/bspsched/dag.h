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

#ifndef BSPSCHED_DAG_H_
#define BSPSCHED_DAG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bspsched {

// Nodes are 0-based in the C++ API and 1-based in every text format.
using NodeId = std::uint32_t;
using Weight = std::int64_t;

struct Edge {
  NodeId from;
  NodeId to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable computational DAG with positive integer work and communication
// weights (both default to 1). Construction rejects cycles, self-loops,
// duplicate edges and out-of-range endpoints with a DomainError.
class Dag {
 public:
  explicit Dag(std::size_t num_nodes, std::vector<Edge> edges = {},
               std::vector<Weight> work = {}, std::vector<Weight> comm = {});

  std::size_t size() const { return work_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& preds(NodeId v) const { return preds_[v]; }
  const std::vector<NodeId>& succs(NodeId v) const { return succs_[v]; }
  Weight work(NodeId v) const { return work_[v]; }
  Weight comm(NodeId v) const { return comm_[v]; }
  const std::vector<Weight>& work_weights() const { return work_; }
  const std::vector<Weight>& comm_weights() const { return comm_; }
  Weight total_work() const;
  bool unit_work() const;
  bool unit_comm() const;

  // Deterministic topological order: smallest ready node first.
  const std::vector<NodeId>& topological_order() const { return topo_; }

  // Length of the longest path starting at v, counted in work weight.
  const std::vector<Weight>& bottom_levels() const { return bottom_; }

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.edges_ == b.edges_ && a.work_ == b.work_ && a.comm_ == b.comm_;
  }

 private:
  std::vector<Edge> edges_;  // sorted
  std::vector<Weight> work_;
  std::vector<Weight> comm_;
  std::vector<std::vector<NodeId>> preds_;
  std::vector<std::vector<NodeId>> succs_;
  std::vector<NodeId> topo_;
  std::vector<Weight> bottom_;
};

// Text format: first non-comment line "n m", then m lines "u v", then
// optional weight lines "w u x" (work) and "c u x" (communication).
// '#' starts a comment. Node ids are 1-based.
Dag parse_dag(std::string_view text);
Dag read_dag_file(const std::string& path);

// Canonical text: header, edges sorted, weight lines only when not 1.
std::string serialize_dag(const Dag& dag);

struct DagClass {
  bool is_chain = false;            // every in- and out-degree is at most 1
  bool is_connected_chain = false;  // one source feeding disjoint chains
  bool is_in_tree = false;          // every out-degree is at most 1
  int height = 0;                   // nodes on the longest path
};

DagClass classify(const Dag& dag);

// Maximal paths of a chain DAG, in order of their first node.
std::vector<std::vector<NodeId>> chain_paths(const Dag& dag);

// The source of a connected chain DAG and the chains hanging off it.
struct ConnectedChains {
  NodeId root;
  std::vector<std::vector<NodeId>> chains;
};
std::optional<ConnectedChains> connected_chain_parts(const Dag& dag);

}  // namespace bspsched

#endif  // BSPSCHED_DAG_H_

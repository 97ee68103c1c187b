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

#include "bspsched/dag.h"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "bspsched/error.h"
#include "text_util.h"

namespace bspsched {

Dag::Dag(std::size_t num_nodes, std::vector<Edge> edges,
         std::vector<Weight> work, std::vector<Weight> comm)
    : edges_(std::move(edges)), work_(std::move(work)), comm_(std::move(comm)) {
  if (num_nodes == 0) throw DomainError("a DAG needs at least one node");
  if (work_.empty()) work_.assign(num_nodes, 1);
  if (comm_.empty()) comm_.assign(num_nodes, 1);
  if (work_.size() != num_nodes || comm_.size() != num_nodes) {
    throw DomainError("weight vector length differs from node count");
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    if (work_[v] <= 0 || comm_[v] <= 0) {
      throw DomainError("weights must be positive (node " +
                        std::to_string(v + 1) + ")");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  preds_.resize(num_nodes);
  succs_.resize(num_nodes);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.from >= num_nodes || e.to >= num_nodes) {
      throw DomainError("edge endpoint out of range");
    }
    if (e.from == e.to) {
      throw DomainError("self-loop on node " + std::to_string(e.from + 1));
    }
    if (i > 0 && edges_[i - 1] == e) {
      throw DomainError("duplicate edge " + std::to_string(e.from + 1) + " " +
                        std::to_string(e.to + 1));
    }
    succs_[e.from].push_back(e.to);
    preds_[e.to].push_back(e.from);
  }
  for (auto& p : preds_) std::sort(p.begin(), p.end());

  std::vector<std::size_t> indeg(num_nodes);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < num_nodes; ++v) {
    indeg[v] = preds_[v].size();
    if (indeg[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (NodeId w : succs_[v]) {
      if (--indeg[w] == 0) ready.push(w);
    }
  }
  if (topo_.size() != num_nodes) throw DomainError("graph contains a cycle");

  bottom_.assign(num_nodes, 0);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    Weight best = 0;
    for (NodeId w : succs_[*it]) best = std::max(best, bottom_[w]);
    bottom_[*it] = best + work_[*it];
  }
}

Weight Dag::total_work() const {
  Weight total = 0;
  for (Weight w : work_) total += w;
  return total;
}

bool Dag::unit_work() const {
  return std::all_of(work_.begin(), work_.end(),
                     [](Weight w) { return w == 1; });
}

bool Dag::unit_comm() const {
  return std::all_of(comm_.begin(), comm_.end(),
                     [](Weight w) { return w == 1; });
}

Dag parse_dag(std::string_view text) {
  std::vector<Line> lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError(0, "empty DAG file");
  const Line& header = lines.front();
  if (header.tokens.size() != 2) {
    throw ParseError(header.number, "expected header \"n m\"");
  }
  std::int64_t n = parse_int(header, 0);
  std::int64_t m = parse_int(header, 1);
  if (n <= 0) throw ParseError(header.number, "node count must be positive");
  if (m < 0) throw ParseError(header.number, "edge count must be >= 0");

  std::vector<Edge> edges;
  std::vector<Weight> work(n, 1), comm(n, 1);
  auto node_at = [&](const Line& line, std::size_t i) {
    std::int64_t v = parse_int(line, i);
    if (v < 1 || v > n) {
      throw ParseError(line.number,
                       "node " + std::to_string(v) + " out of range");
    }
    return static_cast<NodeId>(v - 1);
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const std::string& head = line.tokens[0];
    if (head == "w" || head == "c") {
      if (line.tokens.size() != 3) {
        throw ParseError(line.number, "expected \"" + head + " u x\"");
      }
      NodeId v = node_at(line, 1);
      std::int64_t x = parse_int(line, 2);
      if (x <= 0) throw ParseError(line.number, "weight must be positive");
      (head == "w" ? work : comm)[v] = x;
    } else if (line.tokens.size() == 2) {
      edges.push_back({node_at(line, 0), node_at(line, 1)});
    } else {
      throw ParseError(line.number, "unrecognized line");
    }
  }
  if (static_cast<std::int64_t>(edges.size()) != m) {
    throw ParseError(0, "header declares " + std::to_string(m) +
                            " edges but " + std::to_string(edges.size()) +
                            " were given");
  }
  try {
    return Dag(static_cast<std::size_t>(n), std::move(edges), std::move(work),
               std::move(comm));
  } catch (const DomainError& e) {
    throw ParseError(0, e.what());
  }
}

Dag read_dag_file(const std::string& path) {
  return parse_dag(read_text_file(path));
}

std::string serialize_dag(const Dag& dag) {
  std::ostringstream out;
  out << dag.size() << ' ' << dag.num_edges() << '\n';
  for (const Edge& e : dag.edges()) {
    out << e.from + 1 << ' ' << e.to + 1 << '\n';
  }
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (dag.work(v) != 1) out << "w " << v + 1 << ' ' << dag.work(v) << '\n';
  }
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (dag.comm(v) != 1) out << "c " << v + 1 << ' ' << dag.comm(v) << '\n';
  }
  return out.str();
}

std::vector<std::vector<NodeId>> chain_paths(const Dag& dag) {
  std::vector<std::vector<NodeId>> chains;
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (dag.preds(v).size() > 1 || dag.succs(v).size() > 1) {
      throw DomainError("not a chain DAG");
    }
  }
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (!dag.preds(v).empty()) continue;
    std::vector<NodeId> chain{v};
    while (!dag.succs(chain.back()).empty()) {
      chain.push_back(dag.succs(chain.back()).front());
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

std::optional<ConnectedChains> connected_chain_parts(const Dag& dag) {
  std::vector<NodeId> sources;
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (dag.preds(v).empty()) sources.push_back(v);
  }
  if (sources.size() != 1) return std::nullopt;
  NodeId root = sources.front();
  if (dag.succs(root).empty()) return std::nullopt;
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (v == root) continue;
    if (dag.preds(v).size() != 1 || dag.succs(v).size() > 1) {
      return std::nullopt;
    }
  }
  ConnectedChains parts{root, {}};
  for (NodeId head : dag.succs(root)) {
    std::vector<NodeId> chain{head};
    while (!dag.succs(chain.back()).empty()) {
      chain.push_back(dag.succs(chain.back()).front());
    }
    parts.chains.push_back(std::move(chain));
  }
  return parts;
}

DagClass classify(const Dag& dag) {
  DagClass c;
  c.is_chain = true;
  c.is_in_tree = true;
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (dag.succs(v).size() > 1) c.is_in_tree = c.is_chain = false;
    if (dag.preds(v).size() > 1) c.is_chain = false;
  }
  c.is_connected_chain = connected_chain_parts(dag).has_value();
  std::vector<int> depth(dag.size(), 1);
  for (NodeId v : dag.topological_order()) {
    for (NodeId w : dag.succs(v)) depth[w] = std::max(depth[w], depth[v] + 1);
    c.height = std::max(c.height, depth[v]);
  }
  return c;
}

}  // namespace bspsched

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

// Shared helpers for the test binaries.

#ifndef BSPSCHED_TESTS_TEST_UTIL_H_
#define BSPSCHED_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bspsched/comm_sched.h"
#include "bspsched/dag.h"
#include "bspsched/schedule.h"

namespace bspsched::testing {

inline std::string data_path(const std::string& name) {
  return std::string(BSPSCHED_TEST_DATA) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(BSPSCHED_TEST_GOLDEN) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Golden files start with lines recording the producing command; they are
// dropped before comparison.
inline std::string strip_header(const std::string& text,
                                const std::string& marker) {
  std::istringstream in(text);
  std::string out;
  bool body = false;
  for (std::string line; std::getline(in, line);) {
    if (!body && line.rfind(marker, 0) == 0) continue;
    body = true;
    out += line + "\n";
  }
  return out;
}

// One representative per isomorphism class of DAGs on n nodes.
inline std::vector<Dag> all_dags(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
  }
  std::set<std::vector<std::pair<int, int>>> seen;
  std::vector<Dag> out;
  for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<int, int>> best;
    bool first = true;
    do {
      std::vector<std::pair<int, int>> e;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (mask >> i & 1) e.push_back({perm[pairs[i].first], perm[pairs[i].second]});
      }
      std::sort(e.begin(), e.end());
      if (first || e < best) best = e;
      first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(best).second) continue;
    // Relabel so that every edge points forward.
    std::vector<std::vector<int>> succ(n);
    std::vector<int> indeg(n, 0);
    for (auto [u, v] : best) {
      succ[u].push_back(v);
      ++indeg[v];
    }
    std::vector<int> order;
    std::vector<int> label(n);
    std::set<int> ready;
    for (int v = 0; v < n; ++v) {
      if (indeg[v] == 0) ready.insert(v);
    }
    while (!ready.empty()) {
      int v = *ready.begin();
      ready.erase(ready.begin());
      label[v] = static_cast<int>(order.size());
      order.push_back(v);
      for (int w : succ[v]) {
        if (--indeg[w] == 0) ready.insert(w);
      }
    }
    std::vector<Edge> edges;
    for (auto [u, v] : best) {
      edges.push_back({static_cast<NodeId>(label[u]), static_cast<NodeId>(label[v])});
    }
    out.emplace_back(n, edges);
  }
  return out;
}

// Every multiset of positive chain lengths summing to n, largest first.
inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int mx) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int x = std::min(rem, mx); x >= 1; --x) {
      cur.push_back(x);
      rec(rem - x, x);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

// Random CS instance on P processors and S supersteps that admits a valid
// communication set, or nullopt when the draw was infeasible.
inline std::optional<CsInstance> random_cs_instance(std::mt19937_64& rng,
                                                    ProcId P, StepId S,
                                                    std::size_t n,
                                                    double edge_prob) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng) < edge_prob) edges.push_back({u, v});
    }
  }
  Dag dag(n, edges);
  std::vector<ProcId> pi(n);
  std::vector<StepId> tau(n);
  for (NodeId v = 0; v < n; ++v) {
    pi[v] = static_cast<ProcId>(rng() % P);
    tau[v] = static_cast<StepId>(rng() % S);
  }
  for (NodeId v : dag.topological_order()) {
    for (NodeId u : dag.preds(v)) {
      StepId need = pi[u] == pi[v] ? tau[u] : tau[u] + 1;
      tau[v] = std::max(tau[v], need);
    }
    if (tau[v] >= S) return std::nullopt;
  }
  return CsInstance{std::move(dag), P, S, std::move(pi), std::move(tau)};
}

}  // namespace bspsched::testing

#endif  // BSPSCHED_TESTS_TEST_UTIL_H_

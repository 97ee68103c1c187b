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

#include "bspsched/generators.h"

#include <random>

#include "bspsched/error.h"

namespace bspsched {

Dag gen_layered(int length, int width, LayerVariant variant, int delay) {
  if (length < 1 || width < 1) {
    throw DomainError("layered DAG needs length >= 1 and width >= 1");
  }
  if (variant == LayerVariant::kDelayed && delay < 1) {
    throw DomainError("delayed layered DAG needs g >= 1");
  }
  auto id = [width](int layer, int j) {
    return static_cast<NodeId>(layer * width + j);
  };
  std::vector<Edge> edges;
  for (int i1 = 0; i1 < length; ++i1) {
    for (int i2 = i1 + 1; i2 < length; ++i2) {
      bool connect = false;
      switch (variant) {
        case LayerVariant::kAdjacent:
          connect = i2 == i1 + 1;
          break;
        case LayerVariant::kTransitive:
          connect = true;
          break;
        case LayerVariant::kDelayed:
          connect = i1 + delay < i2;
          break;
      }
      if (!connect) continue;
      for (int a = 0; a < width; ++a) {
        for (int b = 0; b < width; ++b) edges.push_back({id(i1, a), id(i2, b)});
      }
    }
  }
  return Dag(static_cast<std::size_t>(length * width), std::move(edges));
}

Dag gen_class_ww() {
  // 1: top (w2), 2: y, 3: b, 4: c, 5: d, 6: u (w3), 7: sink.
  std::vector<Edge> edges = {{0, 3}, {1, 3}, {3, 4}, {4, 6}, {2, 5}, {5, 6}};
  return Dag(7, std::move(edges), {2, 1, 1, 1, 1, 3, 1});
}

Dag gen_recomp() {
  std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3},   // top path
                             {4, 5}, {5, 6}, {6, 7},   // bottom path
                             {1, 8}, {8, 9}, {9, 10}};  // middle path
  std::vector<Weight> work(11, 1);
  work[2] = 2;
  work[5] = 2;
  return Dag(11, std::move(edges), std::move(work));
}

Dag gen_fork(int length) {
  if (length < 1) throw DomainError("fork needs length >= 1");
  std::vector<Edge> edges;
  for (int path = 0; path < 2; ++path) {
    NodeId first = static_cast<NodeId>(1 + path * length);
    edges.push_back({0, first});
    for (int i = 1; i < length; ++i) edges.push_back({first + i - 1, first + i});
  }
  return Dag(static_cast<std::size_t>(1 + 2 * length), std::move(edges));
}

Dag gen_two_minus_eps(int g, int k, int P) {
  if (g < 1 || k < 1 || P < 1) {
    throw DomainError("two_minus_eps needs g, k, P >= 1");
  }
  const int ell = k * g;
  auto id = [ell](int i, int j) { return static_cast<NodeId>(j * (ell + 1) + i); };
  std::vector<Edge> edges;
  for (int j = 0; j < P; ++j) {
    for (int i = 1; i <= ell; ++i) edges.push_back({id(i - 1, j), id(i, j)});
  }
  for (int j = 0; j < P; ++j) {
    for (int i = 1; i <= k; ++i) {
      int head = i * g + 1;
      if (head > ell) continue;
      Edge e{id((i - 1) * g, j), id(head, (j + 1) % P)};
      if (P == 1 && head == (i - 1) * g + 1) continue;
      edges.push_back(e);
    }
  }
  return Dag(static_cast<std::size_t>(P * (ell + 1)), std::move(edges));
}

Dag gen_three_halves(int g, int k0) {
  if (g < 1 || k0 < 2) throw DomainError("three_halves needs g >= 1, k0 >= 2");
  auto id = [g, k0](int comp, int j, int i) {
    return static_cast<NodeId>(((comp - 1) * k0 + j) * (g + 1) + i);
  };
  std::vector<Edge> edges;
  for (int comp = 1; comp <= g; ++comp) {
    for (int j = 0; j < k0; ++j) {
      for (int i = 1; i <= g; ++i) edges.push_back({id(comp, j, i - 1), id(comp, j, i)});
      edges.push_back({id(comp, j, comp - 1), id(comp, (j + 1) % k0, comp)});
    }
  }
  return Dag(static_cast<std::size_t>(g * k0 * (g + 1)), std::move(edges));
}

Dag gen_random(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw DomainError("random DAG needs n >= 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }
  return Dag(static_cast<std::size_t>(n), std::move(edges));
}

Dag gen_chains(const std::vector<int>& lengths) {
  std::vector<Edge> edges;
  NodeId next = 0;
  for (int len : lengths) {
    if (len < 1) throw DomainError("chain lengths must be positive");
    for (int i = 1; i < len; ++i) edges.push_back({next + i - 1, next + i});
    next += static_cast<NodeId>(len);
  }
  return Dag(next, std::move(edges));
}

Dag gen_connected_chains(const std::vector<int>& lengths) {
  std::vector<Edge> edges;
  NodeId next = 1;
  for (int len : lengths) {
    if (len < 1) throw DomainError("chain lengths must be positive");
    edges.push_back({0, next});
    for (int i = 1; i < len; ++i) edges.push_back({next + i - 1, next + i});
    next += static_cast<NodeId>(len);
  }
  return Dag(next, std::move(edges));
}

}  // namespace bspsched

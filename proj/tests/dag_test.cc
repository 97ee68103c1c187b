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

#include <gtest/gtest.h>

#include "bspsched/dag.h"
#include "bspsched/error.h"
#include "bspsched/generators.h"
#include "test_util.h"

namespace bspsched {
namespace {

TEST(ParseDag, Path) {
  Dag d = parse_dag("3 2\n1 2\n2 3\n");
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.num_edges(), 2u);
  EXPECT_EQ(d.succs(0), std::vector<NodeId>{1});
  EXPECT_EQ(d.work(1), 1);
}

TEST(ParseDag, WorkAndCommWeights) {
  Dag d = parse_dag("# comment\n3 2\n1 2\n2 3\nw 2 5\nc 3 4  # trailing\n");
  EXPECT_EQ(d.work(1), 5);
  EXPECT_EQ(d.comm(2), 4);
  EXPECT_EQ(d.comm(0), 1);
  EXPECT_EQ(d.total_work(), 7);
}

TEST(ParseDag, RejectsCycle) {
  EXPECT_THROW(parse_dag("2 2\n1 2\n2 1\n"), ParseError);
  EXPECT_THROW(Dag(2, {{0, 1}, {1, 0}}), DomainError);
}

TEST(ParseDag, RejectsOutOfRange) {
  EXPECT_THROW(parse_dag("2 1\n1 3\n"), ParseError);
}

TEST(ParseDag, ReportsLineOfSyntaxError) {
  try {
    parse_dag("3 2\n1 2\n2 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseDag, RejectsSelfLoopDuplicateAndZeroWeight) {
  EXPECT_THROW(parse_dag("2 1\n1 1\n"), ParseError);
  EXPECT_THROW(parse_dag("2 2\n1 2\n1 2\n"), ParseError);
  EXPECT_THROW(parse_dag("2 1\n1 2\nw 1 0\n"), ParseError);
  EXPECT_THROW(Dag(2, {{0, 0}}), DomainError);
}

TEST(ParseDag, RejectsWrongEdgeCount) {
  EXPECT_THROW(parse_dag("3 2\n1 2\n"), ParseError);
}

TEST(Classify, Path) {
  DagClass c = classify(parse_dag("3 2\n1 2\n2 3\n"));
  EXPECT_TRUE(c.is_chain);
  EXPECT_TRUE(c.is_in_tree);
  EXPECT_EQ(c.height, 3);
}

TEST(Classify, ConnectedChain) {
  DagClass c = classify(gen_fork(2));
  EXPECT_TRUE(c.is_connected_chain);
  EXPECT_FALSE(c.is_chain);
}

TEST(Classify, InStar) {
  DagClass c = classify(parse_dag("4 3\n1 4\n2 4\n3 4\n"));
  EXPECT_TRUE(c.is_in_tree);
  EXPECT_FALSE(c.is_chain);
  EXPECT_EQ(c.height, 2);
}

TEST(Classify, WidthOneLayeredIsChain) {
  for (int l = 1; l <= 6; ++l) {
    EXPECT_TRUE(classify(gen_layered(l, 1, LayerVariant::kAdjacent)).is_chain);
  }
}

TEST(GenLayered, Counts) {
  Dag a = gen_layered(2, 2, LayerVariant::kAdjacent);
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(a.num_edges(), 4u);
  Dag t = gen_layered(3, 2, LayerVariant::kTransitive);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.num_edges(), 12u);
  Dag d = gen_layered(4, 2, LayerVariant::kDelayed, 2);
  EXPECT_EQ(d.num_edges(), 4u);
  for (const Edge& e : d.edges()) {
    EXPECT_LT(e.from, 2u);
    EXPECT_GE(e.to, 6u);
  }
}

TEST(GenLayered, EdgeFormulas) {
  for (int l = 1; l <= 5; ++l) {
    for (int k = 1; k <= 3; ++k) {
      std::size_t kk = static_cast<std::size_t>(k * k);
      EXPECT_EQ(gen_layered(l, k, LayerVariant::kAdjacent).num_edges(),
                kk * static_cast<std::size_t>(l - 1));
      EXPECT_EQ(gen_layered(l, k, LayerVariant::kTransitive).num_edges(),
                kk * static_cast<std::size_t>(l * (l - 1) / 2));
    }
  }
}

TEST(Fixtures, Fork) {
  Dag d = gen_fork(3);
  EXPECT_EQ(d.size(), 7u);
  EXPECT_EQ(d.succs(0).size(), 2u);
}

TEST(Fixtures, TwoMinusEps) {
  Dag d = gen_two_minus_eps(2, 1, 3);
  EXPECT_EQ(d.size(), 9u);  // P * (k*g + 1)
  // With k = 1 every cross edge would start past the chain end.
  EXPECT_EQ(d.num_edges(), 3u * 2u);
  Dag k2 = gen_two_minus_eps(2, 2, 3);
  EXPECT_EQ(k2.size(), 15u);
  EXPECT_EQ(k2.num_edges(), 3u * 4u + 3u);
}

TEST(Fixtures, ThreeHalves) {
  Dag d = gen_three_halves(2, 2);
  EXPECT_EQ(d.size(), 12u);  // g components of k0 chains with g+1 nodes
}

TEST(Fixtures, ClassWwWeights) {
  Dag d = gen_class_ww();
  int w3 = 0, w2 = 0, w1 = 0;
  for (NodeId v = 0; v < d.size(); ++v) {
    (d.work(v) == 3 ? w3 : d.work(v) == 2 ? w2 : w1)++;
  }
  EXPECT_EQ(w3, 1);
  EXPECT_EQ(w2, 1);
  EXPECT_EQ(w1, 5);
}

// Golden files produced by `bspsched gen class_ww` and `bspsched gen recomp`.
TEST(Fixtures, GoldenSerialization) {
  EXPECT_EQ(serialize_dag(gen_class_ww()),
            testing::strip_header(testing::read_file(testing::golden_path("class_ww.dag")),
                                  "# bspsched"));
  EXPECT_EQ(serialize_dag(gen_recomp()),
            testing::strip_header(testing::read_file(testing::golden_path("recomp.dag")),
                                  "# bspsched"));
}

TEST(Serialize, RoundTripGenerated) {
  std::vector<Dag> dags{gen_layered(3, 2, LayerVariant::kAdjacent),
                        gen_layered(4, 2, LayerVariant::kTransitive),
                        gen_layered(5, 2, LayerVariant::kDelayed, 1),
                        gen_class_ww(),
                        gen_recomp(),
                        gen_fork(3),
                        gen_two_minus_eps(2, 2, 3),
                        gen_three_halves(2, 2),
                        gen_chains({4, 1, 1}),
                        gen_connected_chains({2, 3}),
                        gen_random(9, 0.4, 7)};
  for (const Dag& d : dags) {
    EXPECT_EQ(parse_dag(serialize_dag(d)), d);
    EXPECT_EQ(serialize_dag(parse_dag(serialize_dag(d))), serialize_dag(d));
  }
}

TEST(Dag, BottomLevelsAndTopologicalOrder) {
  Dag d = parse_dag("4 3\n1 2\n2 4\n3 4\nw 3 5\n");
  EXPECT_EQ(d.bottom_levels()[0], 3);
  EXPECT_EQ(d.bottom_levels()[2], 6);
  const auto& topo = d.topological_order();
  std::vector<std::size_t> pos(4);
  for (std::size_t i = 0; i < topo.size(); ++i) pos[topo[i]] = i;
  for (const Edge& e : d.edges()) EXPECT_LT(pos[e.from], pos[e.to]);
}

TEST(Dag, ChainParts) {
  auto cc = connected_chain_parts(gen_connected_chains({2, 3}));
  ASSERT_TRUE(cc.has_value());
  EXPECT_EQ(cc->root, 0u);
  EXPECT_EQ(cc->chains.size(), 2u);
  EXPECT_EQ(chain_paths(gen_chains({4, 1, 1})).size(), 3u);
}

TEST(AllDags, CountsUpToFourNodes) {
  EXPECT_EQ(testing::all_dags(1).size(), 1u);
  EXPECT_EQ(testing::all_dags(2).size(), 2u);
  EXPECT_EQ(testing::all_dags(3).size(), 6u);
  EXPECT_EQ(testing::all_dags(4).size(), 31u);
}

}  // namespace
}  // namespace bspsched

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

#include "bspsched/chain_solver.h"
#include "bspsched/error.h"
#include "bspsched/generators.h"
#include "bspsched/oracle.h"
#include "test_util.h"

namespace bspsched {
namespace {

void expect_consistent(const Dag& d, const ChainSolution& s, CommModel m,
                       MachineParams mp) {
  ValidityReport r = check_validity(d, s.schedule, m, false);
  EXPECT_TRUE(r.valid) << r.to_string();
  EXPECT_EQ(compute_cost(d, s.schedule, m, mp).cost, s.cost);
}

TEST(SolveChain, KnownOptima) {
  // bspsched chain-solve --chains 4,1,1 -P 2 -g 1 -L 0
  Dag a = gen_chains({4, 1, 1});
  ChainSolution sa = solve_chain(a, 2, {1, 0});
  EXPECT_EQ(sa.cost, 4);
  expect_consistent(a, sa, CommModel::DS(), {1, 0});
  // A single chain stays on one processor when g is large.
  Dag b = gen_chains({4});
  ChainSolution sb = solve_chain(b, 2, {10, 0});
  EXPECT_EQ(sb.cost, 4);
  EXPECT_EQ(sb.schedule.steps, 1u);
}

TEST(SolveChain, ValidInEveryModel) {
  Dag d = gen_chains({5, 3, 1});
  ChainSolution s = solve_chain(d, 3, {1, 1});
  for (CommModel m : all_comm_models()) expect_consistent(d, s, m, {1, 1});
}

TEST(SolveChain, MatchesOracleOnTwoProcessors) {
  OracleBudget b;
  b.max_nodes = 12;
  for (int n = 1; n <= 7; ++n) {
    for (const std::vector<int>& lengths : testing::partitions(n)) {
      Dag d = gen_chains(lengths);
      for (MachineParams mp : {MachineParams{1, 0}, MachineParams{3, 1}}) {
        ChainSolution s = solve_chain(d, 2, mp);
        EXPECT_EQ(s.cost, brute_opt_bsp(d, 2, mp, CommModel::DS(), b).opt)
            << serialize_dag(d) << " g=" << mp.g << " L=" << mp.L;
        expect_consistent(d, s, CommModel::DS(), mp);
      }
    }
  }
}

TEST(SolveChain, MatchesOracleOnThreeProcessors) {
  OracleBudget b;
  b.max_nodes = 12;
  for (int n = 1; n <= 5; ++n) {
    for (const std::vector<int>& lengths : testing::partitions(n)) {
      Dag d = gen_chains(lengths);
      for (MachineParams mp : {MachineParams{1, 0}, MachineParams{2, 2}}) {
        EXPECT_EQ(solve_chain(d, 3, mp).cost,
                  brute_opt_bsp(d, 3, mp, CommModel::DS(), b).opt)
            << serialize_dag(d);
      }
    }
  }
}

TEST(SolveConnectedChain, KnownOptima) {
  Dag a = gen_connected_chains({5, 5});
  ChainSolution sa = solve_connected_chain(a, 2, {1, 0}, CommModel::DS());
  EXPECT_EQ(sa.cost, 7);
  expect_consistent(a, sa, CommModel::DS(), {1, 0});
  Dag b = gen_connected_chains({2, 2});
  EXPECT_EQ(solve_connected_chain(b, 2, {5, 0}, CommModel::DS()).cost, 5);
}

TEST(SolveConnectedChain, MatchesOracle) {
  OracleBudget b;
  b.max_nodes = 12;
  for (const std::vector<int>& lengths : std::vector<std::vector<int>>{
           {1}, {2}, {1, 1}, {2, 2}, {3, 1}, {2, 1, 1}, {3, 2}}) {
    Dag d = gen_connected_chains(lengths);
    for (ProcId P : {2u, 3u}) {
      for (CommModel m : all_comm_models()) {
        for (MachineParams mp : {MachineParams{1, 0}, MachineParams{2, 1}}) {
          ChainSolution s = solve_connected_chain(d, P, mp, m);
          EXPECT_EQ(s.cost, brute_opt_bsp(d, P, mp, m, b).opt)
              << serialize_dag(d) << " P=" << P << " " << m.name();
          expect_consistent(d, s, m, mp);
        }
      }
    }
  }
}

TEST(GreedyChain, ValidWithFewCommunications) {
  for (const std::vector<int>& lengths : std::vector<std::vector<int>>{
           {4, 1, 1}, {6}, {3, 3}, {5, 4, 3, 2, 1}, {2, 2, 2, 2, 2, 2, 1}}) {
    Dag d = gen_chains(lengths);
    for (ProcId P : {2u, 3u, 4u}) {
      BspSchedule s = greedy_chain(d, P);
      ValidityReport r = check_validity(d, s, CommModel::DS(), false);
      EXPECT_TRUE(r.valid) << r.to_string();
      EXPECT_LE(s.comms.size(), P - 1);
      CostBreakdown c = compute_cost(d, s, CommModel::DS(), {1, 1});
      EXPECT_LE(c.latency_count, static_cast<Weight>(P - 1));
    }
  }
}

TEST(Decompose, ChainsAndConnectedChains) {
  ChainDecomposition a = decompose_chains(gen_chains({3, 2}));
  EXPECT_EQ(a.chains.size(), 2u);
  EXPECT_FALSE(a.root.has_value());
  ChainDecomposition b = decompose_chains(gen_connected_chains({3, 2}));
  EXPECT_EQ(b.root, std::optional<NodeId>(0));
  EXPECT_THROW(decompose_chains(parse_dag("3 2\n1 3\n2 3\n")), DomainError);
}

TEST(SolveChain, RejectsUnsupportedInput) {
  EXPECT_THROW(solve_chain(parse_dag("3 2\n1 3\n2 3\n"), 2, {1, 0}), DomainError);
  EXPECT_THROW(solve_chain(parse_dag("2 1\n1 2\nw 1 2\n"), 2, {1, 0}), DomainError);
  EXPECT_THROW(solve_chain(gen_chains({2}), 9, {1, 0}), BudgetExceeded);
  EXPECT_THROW(solve_chain(gen_chains({2}), 0, {1, 0}), DomainError);
}

}  // namespace
}  // namespace bspsched

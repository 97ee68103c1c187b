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

#include "bspsched/comm_sched.h"
#include "bspsched/error.h"
#include "bspsched/generators.h"
#include "bspsched/ilp.h"
#include "bspsched/oracle.h"
#include "bspsched/schedule_io.h"
#include "test_util.h"

namespace bspsched {
namespace {

const Dag kPath4 = parse_dag("4 3\n1 2\n2 3\n3 4\n");

std::size_t count_binaries(const IlpModel& m) {
  std::size_t k = 0;
  for (const IlpVariable& v : m.variables) k += v.binary ? 1 : 0;
  return k;
}

IlpSearchResult solve(const IlpModel& m) {
  auto r = solve_ilp_exhaustive(m);
  if (!r) throw std::logic_error("model infeasible");
  return *r;
}

TEST(IlpCounts, PathFourOnTwoProcessors) {
  IlpModel db = emit_ilp(kPath4, 2, 2, {1, 1}, CommModel::DB());
  EXPECT_EQ(db.variables.size(), 90u);
  EXPECT_EQ(db.constraints.size(), 128u);
  EXPECT_EQ(count_binaries(db), 74u);
  EXPECT_EQ(count_vars_constraints(kPath4, 2, 2, CommModel::DB()),
            (IlpSize{90, 128}));
  IlpModel fs = emit_ilp(kPath4, 2, 2, {1, 1}, CommModel::FS());
  EXPECT_EQ(fs.variables.size(), 66u);
  EXPECT_EQ(fs.constraints.size(), 88u);
}

TEST(IlpCounts, ClosedFormMatchesEmission) {
  for (int seed = 0; seed < 6; ++seed) {
    Dag d = gen_random(3 + seed % 4, 0.4, 60 + seed);
    for (ProcId P : {1u, 2u, 3u}) {
      for (StepId S : {1u, 2u, 4u}) {
        for (CommModel m : all_comm_models()) {
          IlpModel model = emit_ilp(d, P, S, {1, 1}, m);
          EXPECT_EQ(count_vars_constraints(d, P, S, m),
                    (IlpSize{model.variables.size(), model.constraints.size()}))
              << m.name() << " P=" << P << " S=" << S;
        }
      }
    }
  }
}

TEST(IlpCounts, FreeSingleGrowsFasterInProcessors) {
  Dag d = gen_random(5, 0.4, 3);
  IlpSize fs = count_vars_constraints(d, 5, 3, CommModel::FS());
  IlpSize db = count_vars_constraints(d, 5, 3, CommModel::DB());
  EXPECT_GT(fs.constraints, db.constraints);
}

TEST(IlpCounts, RejectsEmpty) {
  EXPECT_THROW(count_vars_constraints(Dag(0), 2, 2, CommModel::DS()), DomainError);
  EXPECT_THROW(count_vars_constraints(kPath4, 0, 2, CommModel::DS()), DomainError);
  EXPECT_THROW(count_vars_constraints(kPath4, 2, 0, CommModel::DS()), DomainError);
}

// Golden file from `bspsched ilp-emit --dag tests/data/path4.dag -P 2 -S 2
// --model db -g 1 -L 1`.
TEST(IlpRender, GoldenPathFour) {
  IlpModel db = emit_ilp(kPath4, 2, 2, {1, 1}, CommModel::DB());
  EXPECT_EQ(render_lp(db),
            testing::strip_header(
                testing::read_file(testing::golden_path("path4_db.lp")),
                "\\ bspsched"));
}

TEST(IlpRender, Sections) {
  std::string lp = render_lp(emit_ilp(kPath4, 2, 2, {1, 1}, CommModel::DS()));
  for (const char* section :
       {"Minimize", "Subject To", "Bounds", "Binaries", "Generals", "End"}) {
    EXPECT_NE(lp.find(section), std::string::npos) << section;
  }
  EXPECT_NE(lp.find("stcover_"), std::string::npos);
  for (std::size_t a = 0, b; (b = lp.find('\n', a)) != std::string::npos; a = b + 1) {
    EXPECT_LE(b - a, 78u);
  }
}

TEST(IlpRender, RejectsModelWithoutConstraints) {
  EXPECT_THROW(render_lp(IlpModel{}), DomainError);
}

TEST(IlpSolve, SingleNode) {
  Dag d(1);
  for (CommModel m : all_comm_models()) {
    IlpModel model = emit_ilp(d, 2, 1, {3, 4}, m);
    IlpSearchResult r = solve(model);
    EXPECT_EQ(r.objective, 1);
    IlpReadResult rr = read_solution(d, model, to_assignment(model, r.values));
    EXPECT_EQ(rr.cost, 1);
  }
}

TEST(IlpSolve, EdgeStaysOnOneProcessor) {
  Dag d = parse_dag("2 1\n1 2\n");
  IlpModel model = emit_ilp(d, 2, 2, {1, 0}, CommModel::DS());
  IlpSearchResult r = solve(model);
  EXPECT_EQ(r.objective, 2);
  IlpReadResult rr = read_solution(d, model, to_assignment(model, r.values));
  EXPECT_EQ(rr.schedule.assign[0].front().proc, rr.schedule.assign[1].front().proc);
}

TEST(IlpSolve, MatchesOracleOnAllSmallDags) {
  for (int n = 1; n <= 4; ++n) {
    for (const Dag& d : testing::all_dags(n)) {
      for (StepId S = 1; S <= 3; ++S) {
        for (MachineParams mp : {MachineParams{1, 0}, MachineParams{2, 1}}) {
          for (CommModel m : all_comm_models()) {
            OracleBudget b;
            b.max_steps = S;
            Weight opt = brute_opt_bsp(d, 2, mp, m, b).opt;
            IlpModel model = emit_ilp(d, 2, S, mp, m);
            IlpSearchResult r = solve(model);
            IlpReadResult rr =
                read_solution(d, model, to_assignment(model, r.values));
            EXPECT_EQ(r.objective, opt) << serialize_dag(d) << m.name();
            EXPECT_EQ(rr.cost, opt);
          }
        }
      }
    }
  }
}

TEST(IlpSolve, PinnedAssignmentGivesCommunicationOptimum) {
  Dag d = read_dag_file(testing::data_path("cs_example.dag"));
  BspSchedule partial = parse_bsp_schedule(
      testing::read_file(testing::data_path("cs_example.pt")), d.size());
  CsInstance inst = make_cs_instance(d, partial);
  IlpOptions opts;
  for (NodeId v = 0; v < d.size(); ++v) {
    opts.pins.push_back({v, inst.pi[v], inst.tau[v]});
  }
  IlpModel model = emit_ilp(d, 2, 4, {1, 0}, CommModel::DS(), opts);
  EXPECT_EQ(model.constraints.size(),
            count_vars_constraints(d, 2, 4, CommModel::DS(), d.size()).constraints);
  IlpSearchResult r = solve(model);
  IlpReadResult rr = read_solution(d, model, to_assignment(model, r.values));
  Weight work = compute_cost(d, cs_schedule(inst, {}), CommModel::DS(), {1, 0}).cost;
  EXPECT_EQ(r.objective - work, cs_bruteforce(inst, CommModel::DS()).comm_units);
  EXPECT_EQ(r.objective - work,
            cs_comm_units(inst, cs_greedy_p2(inst), CommModel::DS()));
}

TEST(IlpRead, RejectsBadAssignments) {
  Dag d = parse_dag("2 1\n1 2\n");
  IlpModel model = emit_ilp(d, 2, 2, {1, 0}, CommModel::DS());
  IlpAssignment good = to_assignment(model, solve(model).values);
  EXPECT_NO_THROW(read_solution(d, model, good));

  IlpAssignment missing = good;
  missing.erase("comp_1_1_1");
  EXPECT_THROW(read_solution(d, model, missing), DomainError);

  IlpAssignment fractional = good;
  fractional["comp_1_1_1"] = 0.5;
  EXPECT_THROW(read_solution(d, model, fractional), DomainError);

  IlpAssignment never = good;
  for (auto& [name, value] : never) {
    if (name.rfind("comp_1_", 0) == 0) value = 0;
  }
  EXPECT_THROW(read_solution(d, model, never), DomainError);

  IlpAssignment bounds = good;
  bounds["cwork_1"] = -1;
  EXPECT_THROW(read_solution(d, model, bounds), DomainError);
}

TEST(IlpRead, ParseSolutionText) {
  IlpAssignment a = parse_solution("# header\ncomp_1_1_1 1\ncwork_1 2.0\n\n");
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.at("cwork_1"), 2.0);
  EXPECT_THROW(parse_solution("comp_1_1_1\n"), ParseError);
}

TEST(IlpDefaults, Supersteps) {
  EXPECT_EQ(default_supersteps(gen_chains({4, 1, 1}), 2), 3u);
  EXPECT_EQ(default_supersteps(gen_chains({1}), 3), 1u);
  EXPECT_EQ(default_supersteps(gen_connected_chains({3, 3}), 3), 5u);
  EXPECT_EQ(default_supersteps(parse_dag("3 2\n1 3\n2 3\n"), 2), 3u);
}

TEST(IlpPins, OutOfRange) {
  IlpOptions opts;
  opts.pins.push_back({0, 5, 0});
  EXPECT_THROW(emit_ilp(kPath4, 2, 2, {1, 0}, CommModel::DS(), opts), DomainError);
}

TEST(IlpSearch, BudgetExceeded) {
  IlpModel model = emit_ilp(gen_random(5, 0.4, 1), 2, 3, {1, 1}, CommModel::DS());
  IlpSearchOptions o;
  o.max_search_nodes = 2;
  EXPECT_THROW(solve_ilp_exhaustive(model, o), BudgetExceeded);
}

TEST(IlpSearch, UpperBoundBelowOptimumIsInfeasible) {
  IlpModel model = emit_ilp(kPath4, 2, 2, {1, 1}, CommModel::DS());
  IlpSearchOptions o;
  o.upper_bound = 3;
  EXPECT_FALSE(solve_ilp_exhaustive(model, o).has_value());
  o.upper_bound = 4;
  ASSERT_TRUE(solve_ilp_exhaustive(model, o).has_value());
}

}  // namespace
}  // namespace bspsched

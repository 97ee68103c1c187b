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

#include "bspsched/error.h"
#include "bspsched/ratios.h"

namespace bspsched {
namespace {

TEST(Rational, Reduces) {
  EXPECT_EQ(Rational::make(6, 4), (Rational{3, 2}));
  EXPECT_EQ(Rational::make(3, -6), (Rational{-1, 2}));
  EXPECT_EQ(Rational::make(7, 4).to_string(), "7/4");
  EXPECT_THROW(Rational::make(1, 0), DomainError);
}

TEST(Ratios, SingleNodeIsOneEverywhere) {
  RatioGrid grid;
  grid.gs = {1, 2};
  auto rows = ratio_report("single", grid);
  EXPECT_EQ(rows.size(), 16u);
  for (const RatioRow& r : rows) {
    ASSERT_TRUE(r.opt.has_value());
    EXPECT_EQ(*r.opt, 1);
    EXPECT_EQ(r.ratio->to_string(), "1/1");
  }
}

TEST(Ratios, LayeredRowsAndCsv) {
  RatioGrid grid;
  grid.lengths = {2, 3};
  grid.procs = {2};
  auto rows = ratio_report("layered", grid);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].params, "l=2;k=2;P=2;g=1");
  EXPECT_EQ(rows[0].model, "class");
  EXPECT_EQ(rows[1].model, "cd");
  for (const RatioRow& r : rows) ASSERT_TRUE(r.opt.has_value());
  EXPECT_EQ(rows[0].ratio->to_string(), "1/1");
  std::string csv = ratio_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "construction,params,model,opt,ratio");
}

TEST(Ratios, BarrierFixtures) {
  RatioGrid grid;
  grid.procs = {3};
  OracleBudget b;
  b.max_nodes = 16;
  // bspsched ratios class_ww --procs 3 --budget max_nodes=16
  auto ww = ratio_report("class_ww", grid, b);
  ASSERT_EQ(ww.size(), 2u);
  EXPECT_EQ(*ww[0].opt, 5);
  EXPECT_EQ(*ww[1].opt, 6);
  EXPECT_EQ(ww[1].ratio->to_string(), "6/5");
  // bspsched ratios recomp --procs 3 --budget max_nodes=16
  auto rc = ratio_report("recomp", grid, b);
  ASSERT_EQ(rc.size(), 3u);
  EXPECT_EQ(*rc[0].opt, 5);
  EXPECT_EQ(*rc[1].opt, 6);
  EXPECT_EQ(*rc[2].opt, 5);
}

TEST(Ratios, OverBudgetCellsAreSkipped) {
  RatioGrid grid;
  grid.lengths = {5};
  OracleBudget b;
  b.max_nodes = 4;
  auto rows = ratio_report("layered", grid, b);
  for (const RatioRow& r : rows) {
    EXPECT_FALSE(r.opt.has_value());
    EXPECT_FALSE(r.ratio.has_value());
  }
  EXPECT_NE(ratio_csv(rows).find("skipped,skipped"), std::string::npos);
}

TEST(Ratios, ThreadCountDoesNotChangeResults) {
  RatioGrid grid;
  grid.lengths = {2, 3};
  grid.gs = {1, 2};
  EXPECT_EQ(ratio_csv(ratio_report("fork", grid, {}, 1)),
            ratio_csv(ratio_report("fork", grid, {}, 4)));
}

TEST(Ratios, UnknownConstruction) {
  EXPECT_THROW(ratio_report("nope", RatioGrid{}), DomainError);
  EXPECT_EQ(ratio_constructions().size(), 7u);
}

}  // namespace
}  // namespace bspsched

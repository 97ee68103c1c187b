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

// Oracle optima of the lower-bound constructions across models, with exact
// ratios against a base model per construction.
//
//   construction   models (base first)            parameters
//   layered        class, cd                      length, width, P, g
//   two_minus_eps  maxbsp, bsp                    g, k, P, L
//   three_halves   maxbsp, bsp                    g, k0 (P = g * k0), L
//   fork           ds_dup, ds                     length, P, g, L
//   class_ww       class, barrier                 P
//   recomp         class, barrier, barrier_dup    P
//   single         class, cd, spd, ds, db, fs, fb, maxbsp   P, g, L
//
// bsp means the DS model; maxbsp charges latency inside the maximum.

#ifndef BSPSCHED_RATIOS_H_
#define BSPSCHED_RATIOS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bspsched/dag.h"
#include "bspsched/oracle.h"

namespace bspsched {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);  // reduced
  std::string to_string() const;                             // "7/4"
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct RatioGrid {
  std::vector<int> lengths{4};
  std::vector<int> widths{0};  // 0 means width = P
  std::vector<int> ks{1};
  std::vector<int> procs{2};
  std::vector<Weight> gs{1};
  std::vector<Weight> Ls{0};
};

struct RatioRow {
  std::string construction;
  std::string params;  // "l=4;k=2;P=2;g=1"
  std::string model;
  std::optional<Weight> opt;       // empty when the cell was skipped
  std::optional<Rational> ratio;  // opt / base opt
};

std::vector<std::string> ratio_constructions();

// Rows ordered by grid cell, then model. Cells whose instance exceeds the
// budget are reported as skipped. `threads` caps the worker count.
std::vector<RatioRow> ratio_report(const std::string& construction,
                                   const RatioGrid& grid,
                                   const OracleBudget& budget = {},
                                   unsigned threads = 1);

// Header "construction,params,model,opt,ratio".
std::string ratio_csv(const std::vector<RatioRow>& rows);

}  // namespace bspsched

#endif  // BSPSCHED_RATIOS_H_

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

// Depth-first branch and bound over an IlpModel. Every constraint is
// normalized to rows sum(a x) <= b and propagated on variable bounds; the
// objective is one more row whose right-hand side tracks the incumbent.

#include <algorithm>
#include <limits>
#include <numeric>

#include "bspsched/error.h"
#include "bspsched/ilp.h"

namespace bspsched {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Row {
  std::vector<IlpTerm> terms;
  std::int64_t rhs;
};

class Search {
 public:
  Search(const IlpModel& model, const IlpSearchOptions& options)
      : model_(model), options_(options) {
    const std::size_t nv = model.variables.size();
    lo_.resize(nv);
    hi_.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      lo_[i] = model.variables[i].lo;
      hi_[i] = model.variables[i].hi;
    }
    rows_.push_back({model.objective, std::numeric_limits<std::int64_t>::max() / 4});
    for (const IlpConstraint& con : model.constraints) {
      if (con.relation != Relation::kGe) rows_.push_back({con.terms, con.rhs});
      if (con.relation != Relation::kLe) {
        Row neg{con.terms, -con.rhs};
        for (IlpTerm& t : neg.terms) t.coef = -t.coef;
        rows_.push_back(std::move(neg));
      }
    }
    occurs_.resize(nv);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (const IlpTerm& t : rows_[r].terms) occurs_[t.var].push_back(r);
    }
    in_queue_.assign(rows_.size(), false);
    if (options.upper_bound) rows_[0].rhs = *options.upper_bound;

    // Placement decisions first, then the remaining binaries, then costs.
    order_.resize(nv);
    std::iota(order_.begin(), order_.end(), 0);
    auto rank = [&](std::size_t i) {
      const std::string& name = model.variables[i].name;
      if (name.rfind("comp_", 0) == 0) return 0;
      if (model.variables[i].binary) return 1;
      return 2;
    };
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
    prefer_one_.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) prefer_one_[i] = rank(i) == 0;
  }

  std::optional<IlpSearchResult> run() {
    for (std::size_t r = 0; r < rows_.size(); ++r) enqueue(r);
    if (propagate()) dfs(0);
    if (!found_) return std::nullopt;
    return IlpSearchResult{best_, best_obj_, nodes_};
  }

 private:
  void enqueue(std::size_t r) {
    if (!in_queue_[r]) {
      in_queue_[r] = true;
      queue_.push_back(r);
    }
  }

  void set_lo(std::size_t v, std::int64_t value) {
    trail_.push_back({v, lo_[v], hi_[v]});
    lo_[v] = value;
    for (std::size_t r : occurs_[v]) enqueue(r);
  }
  void set_hi(std::size_t v, std::int64_t value) {
    trail_.push_back({v, lo_[v], hi_[v]});
    hi_[v] = value;
    for (std::size_t r : occurs_[v]) enqueue(r);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailEntry& e = trail_.back();
      lo_[e.var] = e.lo;
      hi_[e.var] = e.hi;
      trail_.pop_back();
    }
  }

  bool propagate() {
    bool ok = true;
    while (!queue_.empty()) {
      std::size_t r = queue_.back();
      queue_.pop_back();
      in_queue_[r] = false;
      if (ok) ok = propagate_row(rows_[r]);
    }
    return ok;
  }

  bool propagate_row(const Row& row) {
    std::int64_t minact = 0;
    for (const IlpTerm& t : row.terms) {
      minact += t.coef > 0 ? t.coef * lo_[t.var] : t.coef * hi_[t.var];
    }
    std::int64_t slack = row.rhs - minact;
    if (slack < 0) return false;
    for (const IlpTerm& t : row.terms) {
      std::size_t v = t.var;
      if (t.coef > 0) {
        std::int64_t bound = lo_[v] + floor_div(slack, t.coef);
        if (bound < hi_[v]) set_hi(v, bound);
      } else if (t.coef < 0) {
        std::int64_t bound = hi_[v] - floor_div(slack, -t.coef);
        if (bound > lo_[v]) set_lo(v, bound);
      }
    }
    return true;
  }

  void dfs(std::size_t pos) {
    if (++nodes_ > options_.max_search_nodes) {
      throw BudgetExceeded("ILP search exceeded " +
                           std::to_string(options_.max_search_nodes) + " nodes");
    }
    while (pos < order_.size() && lo_[order_[pos]] == hi_[order_[pos]]) ++pos;
    if (pos == order_.size()) {
      record();
      return;
    }
    std::size_t v = order_[pos];
    const bool binary = model_.variables[v].binary;
    std::int64_t first = lo_[v];
    if (binary && prefer_one_[v]) first = hi_[v];
    for (int branch = 0; branch < 2; ++branch) {
      std::size_t mark = trail_.size();
      if (branch == 0) {
        if (first == lo_[v]) set_hi(v, first);
        else set_lo(v, first);
      } else {
        if (first == lo_[v]) set_lo(v, first + 1);
        else set_hi(v, first - 1);
      }
      enqueue(0);  // the incumbent may have improved
      if (propagate()) dfs(pos);
      undo(mark);
    }
  }

  void record() {
    std::int64_t obj = 0;
    for (const IlpTerm& t : model_.objective) obj += t.coef * lo_[t.var];
    if (found_ && obj >= best_obj_) return;
    found_ = true;
    best_obj_ = obj;
    best_ = lo_;
    rows_[0].rhs = obj - 1;
  }

  struct TrailEntry {
    std::size_t var;
    std::int64_t lo;
    std::int64_t hi;
  };

  const IlpModel& model_;
  IlpSearchOptions options_;
  std::vector<std::int64_t> lo_, hi_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::size_t>> occurs_;
  std::vector<bool> in_queue_;
  std::vector<std::size_t> queue_;
  std::vector<TrailEntry> trail_;
  std::vector<std::size_t> order_;
  std::vector<bool> prefer_one_;
  std::uint64_t nodes_ = 0;
  bool found_ = false;
  std::int64_t best_obj_ = 0;
  std::vector<std::int64_t> best_;
};

}  // namespace

std::optional<IlpSearchResult> solve_ilp_exhaustive(
    const IlpModel& model, const IlpSearchOptions& options) {
  return Search(model, options).run();
}

}  // namespace bspsched

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

#include "bspsched/ratios.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "bspsched/error.h"
#include "bspsched/generators.h"

namespace bspsched {

namespace {

struct Cell {
  Dag dag;
  std::string params;
  ProcId P;
  MachineParams machine;
};

struct Job {
  std::size_t cell;
  std::string model;
  std::optional<Weight> opt;
};

std::vector<std::string> models_of(const std::string& construction) {
  if (construction == "layered") return {"class", "cd"};
  if (construction == "two_minus_eps" || construction == "three_halves") {
    return {"maxbsp", "bsp"};
  }
  if (construction == "fork") return {"ds_dup", "ds"};
  if (construction == "class_ww") return {"class", "barrier"};
  if (construction == "recomp") return {"class", "barrier", "barrier_dup"};
  if (construction == "single") {
    return {"class", "cd", "spd", "ds", "db", "fs", "fb", "maxbsp"};
  }
  throw DomainError("unknown construction \"" + construction + "\"");
}

std::string join_params(
    const std::vector<std::pair<std::string, std::int64_t>>& kv) {
  std::string out;
  for (const auto& [key, value] : kv) {
    if (!out.empty()) out += ';';
    out += key + "=" + std::to_string(value);
  }
  return out;
}

std::vector<Cell> cells_of(const std::string& c, const RatioGrid& grid) {
  std::vector<Cell> cells;
  auto add = [&](Dag dag, ProcId P, Weight g, Weight L,
                 std::vector<std::pair<std::string, std::int64_t>> kv) {
    cells.push_back({std::move(dag), join_params(kv), P, {g, L}});
  };
  if (c == "layered") {
    for (int l : grid.lengths) {
      for (int width : grid.widths) {
        for (int P : grid.procs) {
          for (Weight g : grid.gs) {
            int k = width == 0 ? P : width;
            add(gen_layered(l, k, LayerVariant::kAdjacent), P, g, 0,
                {{"l", l}, {"k", k}, {"P", P}, {"g", g}});
          }
        }
      }
    }
  } else if (c == "two_minus_eps") {
    for (Weight g : grid.gs) {
      for (int k : grid.ks) {
        for (int P : grid.procs) {
          for (Weight L : grid.Ls) {
            add(gen_two_minus_eps(static_cast<int>(g), k, P), P, g, L,
                {{"g", g}, {"k", k}, {"P", P}, {"L", L}});
          }
        }
      }
    }
  } else if (c == "three_halves") {
    for (Weight g : grid.gs) {
      for (int k0 : grid.ks) {
        for (Weight L : grid.Ls) {
          ProcId P = static_cast<ProcId>(g * k0);
          add(gen_three_halves(static_cast<int>(g), k0), P, g, L,
              {{"g", g}, {"k0", k0}, {"P", P}, {"L", L}});
        }
      }
    }
  } else if (c == "fork") {
    for (int l : grid.lengths) {
      for (int P : grid.procs) {
        for (Weight g : grid.gs) {
          for (Weight L : grid.Ls) {
            add(gen_fork(l), P, g, L, {{"l", l}, {"P", P}, {"g", g}, {"L", L}});
          }
        }
      }
    }
  } else if (c == "class_ww" || c == "recomp") {
    for (int P : grid.procs) {
      add(c == "class_ww" ? gen_class_ww() : gen_recomp(), P, 0, 0, {{"P", P}});
    }
  } else if (c == "single") {
    for (int P : grid.procs) {
      for (Weight g : grid.gs) {
        for (Weight L : grid.Ls) {
          add(Dag(1), P, g, L, {{"P", P}, {"g", g}, {"L", L}});
        }
      }
    }
  } else {
    models_of(c);  // throws
  }
  return cells;
}

Weight solve(const Cell& cell, const std::string& model,
             const OracleBudget& budget) {
  const Dag& d = cell.dag;
  const Time g = cell.machine.g;
  if (model == "class") {
    return brute_opt_timed(d, cell.P, g, TimedModel::kClassical, budget).opt;
  }
  if (model == "cd") {
    return brute_opt_timed(d, cell.P, g, TimedModel::kCommDelay, budget).opt;
  }
  if (model == "spd") {
    return brute_opt_timed(d, cell.P, g, TimedModel::kSpd, budget).opt;
  }
  if (model == "barrier" || model == "barrier_dup") {
    return brute_opt_timed(d, cell.P, g, TimedModel::kClassicalBarrier, budget,
                           model == "barrier_dup")
        .opt;
  }
  if (model == "maxbsp") {
    return brute_opt_maxbsp(d, cell.P, cell.machine, budget).opt;
  }
  if (model == "ds_dup") {
    return brute_opt_bsp(d, cell.P, cell.machine, CommModel::DS(), budget, true)
        .opt;
  }
  CommModel cm = parse_comm_model(model == "bsp" ? "ds" : model);
  return brute_opt_bsp(d, cell.P, cell.machine, cm, budget).opt;
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t d = std::gcd(num, den);
  if (d == 0) d = 1;
  return {num / d, den / d};
}

std::string Rational::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

std::vector<std::string> ratio_constructions() {
  return {"layered", "two_minus_eps", "three_halves", "fork",
          "class_ww", "recomp",       "single"};
}

std::vector<RatioRow> ratio_report(const std::string& construction,
                                   const RatioGrid& grid,
                                   const OracleBudget& budget,
                                   unsigned threads) {
  const std::vector<std::string> models = models_of(construction);
  const std::vector<Cell> cells = cells_of(construction, grid);
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const std::string& m : models) jobs.push_back({i, m, std::nullopt});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        jobs[j].opt = solve(cells[jobs[j].cell], jobs[j].model, budget);
      } catch (const BudgetExceeded&) {
        jobs[j].opt.reset();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned workers = std::max(1u, std::min<unsigned>(
                                      threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<RatioRow> rows;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& base = jobs[j - j % models.size()];
    RatioRow row{construction, cells[jobs[j].cell].params, jobs[j].model,
                 jobs[j].opt, std::nullopt};
    if (row.opt && base.opt && *base.opt > 0) {
      row.ratio = Rational::make(*row.opt, *base.opt);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  std::ostringstream out;
  out << "construction,params,model,opt,ratio\n";
  for (const RatioRow& r : rows) {
    out << r.construction << ',' << r.params << ',' << r.model << ',';
    if (r.opt) {
      out << *r.opt << ',';
    } else {
      out << "skipped,";
    }
    out << (r.ratio ? r.ratio->to_string() : "skipped") << '\n';
  }
  return out.str();
}

}  // namespace bspsched

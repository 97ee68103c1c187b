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

#include "bspsched/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "bspsched/chain_solver.h"
#include "bspsched/comm_sched.h"
#include "bspsched/dag.h"
#include "bspsched/error.h"
#include "bspsched/generators.h"
#include "bspsched/hrelation.h"
#include "bspsched/ilp.h"
#include "bspsched/oracle.h"
#include "bspsched/ratios.h"
#include "bspsched/schedule.h"
#include "bspsched/schedule_io.h"
#include "bspsched/timed.h"
#include "text_util.h"

namespace bspsched {

namespace {

// Reported with exit code 1.
class InvalidResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      int value = std::stoi(item, &used);
      if (used != item.size()) throw 0;
      out.push_back(value);
    } catch (...) {
      throw ParseError(0, "bad integer list \"" + text + "\"");
    }
  }
  if (out.empty()) throw ParseError(0, "empty integer list");
  return out;
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ParseError(0, "cannot write " + path);
  file << text;
}

enum class Kind { kBsp, kMaxBsp, kClassical, kBarrier, kCommDelay, kSpd };

struct ModelChoice {
  Kind kind = Kind::kBsp;
  CommModel comm;
};

ModelChoice parse_model(const std::string& text) {
  std::string m = lower(text);
  if (m == "maxbsp") return {Kind::kMaxBsp, CommModel::DS()};
  if (m == "class" || m == "classical") return {Kind::kClassical, {}};
  if (m == "barrier") return {Kind::kBarrier, {}};
  if (m == "cd" || m == "commdelay") return {Kind::kCommDelay, {}};
  if (m == "spd") return {Kind::kSpd, {}};
  try {
    return {Kind::kBsp, parse_comm_model(m)};
  } catch (const DomainError&) {
    throw ParseError(0, "unknown model \"" + text + "\"");
  }
}

MaxBspLatency parse_latency(const std::string& text) {
  std::string m = lower(text);
  if (m == "inside") return MaxBspLatency::kInside;
  if (m == "outside") return MaxBspLatency::kOutside;
  throw ParseError(0, "latency placement must be inside or outside");
}

struct Common {
  bool csv = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

// Options shared by several subcommands.
struct Opts {
  std::string dag_path;
  std::string sched_path;
  std::string model = "ds";
  Weight g = 1;
  Weight L = 0;
  ProcId P = 2;
  bool duplication = false;
  std::string latency = "inside";
  std::string out_path;
};

int cmd_validate(const Opts& o, std::ostream& out) {
  Dag dag = read_dag_file(o.dag_path);
  std::string text = read_text_file(o.sched_path);
  ModelChoice mc = parse_model(o.model);
  ValidityReport report;
  std::string extra;
  if (mc.kind == Kind::kBsp) {
    report = check_validity(dag, parse_bsp_schedule(text, dag.size()), mc.comm,
                            o.duplication);
  } else if (mc.kind == Kind::kMaxBsp) {
    MaxBspReport r = check_maxbsp(dag, parse_bsp_schedule(text, dag.size()),
                                  {o.g, o.L}, parse_latency(o.latency),
                                  o.duplication);
    report = r.report;
  } else {
    TimedSchedule ts = parse_timed_schedule(text, dag.size());
    TimedReport r;
    if (mc.kind == Kind::kClassical) {
      r = check_classical(dag, ts, ClassicalMode::kPlain, o.duplication);
    } else if (mc.kind == Kind::kBarrier) {
      r = check_classical(dag, ts, ClassicalMode::kBarrierSync, o.duplication);
    } else if (mc.kind == Kind::kCommDelay) {
      r = check_commdelay(dag, ts, o.g, o.duplication);
    } else {
      r = check_spd(dag, ts, o.g, o.duplication);
    }
    report = r.report;
    if (report.valid) extra = " makespan " + std::to_string(r.makespan);
  }
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';
  if (!report.valid) {
    out << "invalid\n" << report.to_string();
    if (!report.to_string().empty() && report.to_string().back() != '\n') {
      out << '\n';
    }
    return kExitDomain;
  }
  out << "valid" << extra << '\n';
  return kExitOk;
}

int cmd_cost(const Opts& o, bool edge_based, const Common& c,
             std::ostream& out) {
  Dag dag = read_dag_file(o.dag_path);
  BspSchedule sched = parse_bsp_schedule(read_text_file(o.sched_path), dag.size());
  ModelChoice mc = parse_model(o.model);
  const char sep = c.csv ? ',' : ' ';
  if (mc.kind == Kind::kMaxBsp) {
    MaxBspReport r = check_maxbsp(dag, sched, {o.g, o.L},
                                  parse_latency(o.latency), o.duplication);
    if (!r.report.valid) throw InvalidResult(r.report.to_string());
    out << "superstep" << sep << "cost\n";
    for (std::size_t s = 0; s < r.step_costs.size(); ++s) {
      out << s + 1 << sep << r.step_costs[s] << '\n';
    }
    out << "total" << sep << r.cost << '\n';
    return kExitOk;
  }
  if (mc.kind != Kind::kBsp) throw ParseError(0, "cost needs a BSP model");
  if (edge_based) {
    if (!sched.edge_comms.empty()) {
      ValidityReport r = check_validity(dag, sched, CommModel::DS(), false);
      if (!r.valid) throw InvalidResult(r.to_string());
    }
  } else {
    ValidityReport r = check_validity(dag, sched, mc.comm, o.duplication);
    if (!r.valid) throw InvalidResult(r.to_string());
  }
  CostBreakdown cost = compute_cost(dag, sched, mc.comm, {o.g, o.L}, edge_based);
  out << "superstep" << sep << "work" << sep << "comm" << sep << "latency"
      << sep << "cost\n";
  for (std::size_t s = 0; s < cost.steps.size(); ++s) {
    const SuperstepCost& st = cost.steps[s];
    out << s + 1 << sep << st.max_work << sep << st.comm << sep
        << (st.latency ? 1 : 0) << sep << st.cost << '\n';
  }
  if (c.csv) {
    out << "total," << cost.work_total << ',' << cost.comm_total << ','
        << cost.latency_count << ',' << cost.cost << '\n';
  } else {
    out << "total " << cost.formula() << " = " << cost.cost << '\n';
  }
  return kExitOk;
}

int cmd_classify(const Opts& o, const Common& c, std::ostream& out) {
  Dag dag = read_dag_file(o.dag_path);
  DagClass cls = classify(dag);
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::vector<std::pair<std::string, std::string>> rows{
      {"nodes", std::to_string(dag.size())},
      {"edges", std::to_string(dag.num_edges())},
      {"chain", yn(cls.is_chain)},
      {"connected_chain", yn(cls.is_connected_chain)},
      {"in_tree", yn(cls.is_in_tree)},
      {"height", std::to_string(cls.height)},
      {"total_work", std::to_string(dag.total_work())}};
  if (c.csv) out << "property,value\n";
  for (const auto& [k, v] : rows) out << k << (c.csv ? "," : " ") << v << '\n';
  return kExitOk;
}

struct GenOpts {
  std::string kind;
  int length = 3;
  int width = 2;
  std::string variant = "adjacent";
  int delay = 0;
  int g = 1;
  int k = 1;
  int P = 2;
  int n = 6;
  double p = 0.3;
  std::uint64_t seed = 1;
  std::string chains;
};

int cmd_gen(const GenOpts& o, const std::string& out_path, std::ostream& out) {
  std::string kind = lower(o.kind);
  Dag dag(1);
  if (kind == "layered") {
    std::string v = lower(o.variant);
    LayerVariant lv;
    if (v == "adjacent") {
      lv = LayerVariant::kAdjacent;
    } else if (v == "transitive") {
      lv = LayerVariant::kTransitive;
    } else if (v == "delayed") {
      lv = LayerVariant::kDelayed;
    } else {
      throw ParseError(0, "variant must be adjacent, transitive or delayed");
    }
    dag = gen_layered(o.length, o.width, lv, o.delay);
  } else if (kind == "class_ww") {
    dag = gen_class_ww();
  } else if (kind == "recomp") {
    dag = gen_recomp();
  } else if (kind == "fork") {
    dag = gen_fork(o.length);
  } else if (kind == "two_minus_eps") {
    dag = gen_two_minus_eps(o.g, o.k, o.P);
  } else if (kind == "three_halves") {
    dag = gen_three_halves(o.g, o.k);
  } else if (kind == "random") {
    dag = gen_random(o.n, o.p, o.seed);
  } else if (kind == "chains") {
    dag = gen_chains(parse_int_list(o.chains));
  } else if (kind == "connected_chains") {
    dag = gen_connected_chains(parse_int_list(o.chains));
  } else {
    throw ParseError(0, "unknown generator \"" + o.kind + "\"");
  }
  write_output(out_path, serialize_dag(dag), out);
  return kExitOk;
}

int cmd_chain_solve(const Opts& o, const std::string& chains, bool greedy,
                    std::ostream& out) {
  if (chains.empty() == o.dag_path.empty()) {
    throw ParseError(0, "give exactly one of --chains and --dag");
  }
  Dag dag = chains.empty() ? read_dag_file(o.dag_path)
                           : gen_chains(parse_int_list(chains));
  ModelChoice mc = parse_model(o.model);
  if (mc.kind != Kind::kBsp) throw ParseError(0, "chain-solve needs a BSP model");
  DagClass cls = classify(dag);
  BspSchedule sched;
  Weight cost = 0;
  if (greedy) {
    if (!cls.is_chain) throw DomainError("greedy needs a chain DAG");
    sched = greedy_chain(dag, o.P);
    cost = compute_cost(dag, sched, CommModel::DS(), {o.g, o.L}).cost;
  } else if (cls.is_chain) {
    ChainSolution s = solve_chain(dag, o.P, {o.g, o.L});
    sched = s.schedule;
    cost = s.cost;
  } else if (cls.is_connected_chain) {
    ChainSolution s = solve_connected_chain(dag, o.P, {o.g, o.L}, mc.comm);
    sched = s.schedule;
    cost = s.cost;
  } else {
    throw DomainError("DAG is neither a chain DAG nor a connected chain DAG");
  }
  std::ostringstream text;
  text << "# cost " << cost << '\n' << serialize_bsp_schedule(sched);
  write_output(o.out_path, text.str(), out);
  if (!o.out_path.empty() && o.out_path != "-") {
    out << "cost " << cost << '\n';
  }
  return kExitOk;
}

int cmd_cs(const Opts& o, const std::string& algo, const std::string& partial,
           std::ostream& out) {
  Dag dag = read_dag_file(o.dag_path);
  BspSchedule pt = parse_bsp_schedule(read_text_file(partial), dag.size());
  CsInstance inst = make_cs_instance(dag, pt);
  ModelChoice mc = parse_model(o.model);
  if (mc.kind != Kind::kBsp) throw ParseError(0, "cs needs a BSP model");
  std::string a = lower(algo);
  std::vector<CommStep> comms;
  if (a == "eager") {
    comms = cs_eager(inst);
  } else if (a == "lazy") {
    comms = cs_lazy(inst);
  } else if (a == "greedy2") {
    comms = cs_greedy_p2(inst);
  } else if (a == "brute") {
    CsOptions opt;
    opt.params = {o.g, o.L};
    opt.count_latency = o.L > 0;
    comms = cs_bruteforce(inst, mc.comm, opt).comms;
  } else {
    throw ParseError(0, "cs algorithm must be eager, lazy, greedy2 or brute");
  }
  std::sort(comms.begin(), comms.end(), [](const CommStep& x, const CommStep& y) {
    return std::tie(x.step, x.node, x.from, x.to) <
           std::tie(y.step, y.node, y.from, y.to);
  });
  for (const CommStep& c : comms) {
    out << "t " << c.node + 1 << ' ' << c.from + 1 << ' ' << c.to + 1 << ' '
        << c.step + 1 << '\n';
  }
  BspSchedule full = cs_schedule(inst, comms);
  CostBreakdown cost = compute_cost(dag, full, mc.comm, {o.g, o.L});
  out << "# comm units " << cs_comm_units(inst, comms, mc.comm) << '\n';
  out << "# total " << cost.formula() << " = " << cost.cost << '\n';
  return kExitOk;
}

struct IlpOpts {
  StepId supersteps = 0;  // 0 means the default
  std::string pin_path;
  std::string solution_path;
  bool exhaustive = false;
  std::string write_solution;
  bool counts = false;
};

IlpModel build_ilp(const Dag& dag, const Opts& o, const IlpOpts& io) {
  ModelChoice mc = parse_model(o.model);
  if (mc.kind != Kind::kBsp) throw ParseError(0, "ILP needs ds, db, fs or fb");
  IlpOptions options;
  options.duplication = o.duplication;
  if (!io.pin_path.empty()) {
    BspSchedule pt = parse_bsp_schedule(read_text_file(io.pin_path), dag.size());
    for (NodeId v = 0; v < dag.size(); ++v) {
      for (const Placement& pl : pt.assign[v]) {
        options.pins.push_back({v, pl.proc, pl.step});
      }
    }
  }
  StepId S = io.supersteps == 0 ? default_supersteps(dag, o.P) : io.supersteps;
  return emit_ilp(dag, o.P, S, {o.g, o.L}, mc.comm, options);
}

int cmd_ilp_emit(const Opts& o, const IlpOpts& io, const Common& c,
                 std::ostream& out) {
  Dag dag = read_dag_file(o.dag_path);
  IlpModel model = build_ilp(dag, o, io);
  if (io.counts) {
    if (c.csv) {
      out << "variables,constraints\n"
          << model.variables.size() << ',' << model.constraints.size() << '\n';
    } else {
      out << "variables " << model.variables.size() << "\nconstraints "
          << model.constraints.size() << '\n';
    }
    return kExitOk;
  }
  write_output(o.out_path, render_lp(model), out);
  return kExitOk;
}

int cmd_ilp_read(const Opts& o, const IlpOpts& io, std::ostream& out) {
  Dag dag = read_dag_file(o.dag_path);
  IlpModel model = build_ilp(dag, o, io);
  IlpAssignment values;
  if (io.exhaustive == !io.solution_path.empty()) {
    throw ParseError(0, "give exactly one of --solution and --exhaustive");
  }
  if (io.exhaustive) {
    IlpSearchOptions so;
    so.max_search_nodes = budget_from_env().max_search_nodes;
    auto result = solve_ilp_exhaustive(model, so);
    if (!result) throw DomainError("ILP is infeasible");
    values = to_assignment(model, result->values);
    if (!io.write_solution.empty()) {
      std::ostringstream sol;
      sol << "# objective " << result->objective << '\n';
      for (std::size_t i = 0; i < model.variables.size(); ++i) {
        sol << model.variables[i].name << ' ' << result->values[i] << '\n';
      }
      write_output(io.write_solution, sol.str(), out);
    }
  } else {
    values = parse_solution(read_text_file(io.solution_path));
  }
  IlpReadResult r = read_solution(dag, model, values);
  std::ostringstream text;
  text << "# cost " << r.cost << '\n' << serialize_bsp_schedule(r.schedule);
  write_output(o.out_path, text.str(), out);
  if (!o.out_path.empty() && o.out_path != "-") {
    out << "cost " << r.cost << '\n';
  }
  return kExitOk;
}

int cmd_hrel(const std::string& demand, bool counterexample, Weight g,
             std::ostream& out) {
  if (counterexample == !demand.empty()) {
    throw ParseError(0, "give exactly one of --demand and --weighted-counterexample");
  }
  if (counterexample) {
    WeightedDemand wd = weighted_counterexample();
    Weight h = weighted_h_relation(wd);
    out << "h " << h << '\n';
    auto layout = place_nonpreemptive(wd, h);
    if (layout) {
      out << "non-preemptive layout in " << h << "g: feasible\n";
      for (std::size_t i = 0; i < layout->size(); ++i) {
        const WeightedTransfer& t = wd.transfers[i];
        out << "p" << t.from + 1 << "->p" << t.to + 1 << " weight " << t.weight
            << " start " << (*layout)[i] + 1 << '\n';
      }
    } else {
      out << "non-preemptive layout in " << h << "g: infeasible\n";
    }
    return kExitOk;
  }
  DemandMatrix d = parse_demand(demand);
  std::int64_t h = h_relation(d);
  out << "h " << h << '\n';
  out << "cost " << h * g << '\n';
  std::string slots = format_slots(decompose(d));
  out << slots;
  if (!slots.empty() && slots.back() != '\n') out << '\n';
  return kExitOk;
}

int cmd_oracle(const Opts& o, const std::string& budget_text, const Common& c,
               std::ostream& out) {
  Dag dag = read_dag_file(o.dag_path);
  OracleBudget budget = budget_from_env();
  if (!budget_text.empty()) budget = parse_budget(budget_text, budget);
  ModelChoice mc = parse_model(o.model);
  std::string text;
  Weight opt = 0;
  if (mc.kind == Kind::kBsp || mc.kind == Kind::kMaxBsp) {
    BspOracleResult r =
        mc.kind == Kind::kBsp
            ? brute_opt_bsp(dag, o.P, {o.g, o.L}, mc.comm, budget, o.duplication)
            : brute_opt_maxbsp(dag, o.P, {o.g, o.L}, budget,
                               parse_latency(o.latency), o.duplication);
    opt = r.opt;
    text = serialize_bsp_schedule(r.schedule);
  } else {
    TimedModel tm = mc.kind == Kind::kClassical ? TimedModel::kClassical
                    : mc.kind == Kind::kBarrier ? TimedModel::kClassicalBarrier
                    : mc.kind == Kind::kCommDelay ? TimedModel::kCommDelay
                                                  : TimedModel::kSpd;
    TimedOracleResult r = brute_opt_timed(dag, o.P, o.g, tm, budget, o.duplication);
    opt = r.opt;
    text = serialize_timed_schedule(r.schedule);
  }
  if (c.csv) {
    out << "model,P,g,L,duplication,opt\n"
        << lower(o.model) << ',' << o.P << ',' << o.g << ',' << o.L << ','
        << (o.duplication ? 1 : 0) << ',' << opt << '\n';
  } else {
    out << "opt " << opt << '\n';
  }
  if (!o.out_path.empty()) {
    std::ostringstream sched;
    sched << "# opt " << opt << '\n' << text;
    write_output(o.out_path, sched.str(), out);
  }
  return kExitOk;
}

struct RatioOpts {
  std::string construction;
  std::string lengths = "4";
  std::string widths = "0";
  std::string ks = "1";
  std::string procs = "2";
  std::string gs = "1";
  std::string Ls = "0";
  std::string budget;
};

int cmd_ratios(const RatioOpts& o, const Common& c, std::ostream& out) {
  RatioGrid grid;
  grid.lengths = parse_int_list(o.lengths);
  grid.widths = parse_int_list(o.widths);
  grid.ks = parse_int_list(o.ks);
  grid.procs = parse_int_list(o.procs);
  grid.gs.clear();
  for (int g : parse_int_list(o.gs)) grid.gs.push_back(g);
  grid.Ls.clear();
  for (int L : parse_int_list(o.Ls)) grid.Ls.push_back(L);
  OracleBudget budget = budget_from_env();
  if (!o.budget.empty()) budget = parse_budget(o.budget, budget);
  std::string construction = lower(o.construction);
  auto known = ratio_constructions();
  if (std::find(known.begin(), known.end(), construction) == known.end()) {
    throw ParseError(0, "unknown construction \"" + o.construction + "\"");
  }
  out << ratio_csv(ratio_report(construction, grid, budget, c.threads));
  return kExitOk;
}

void add_dag(CLI::App* app, Opts& o) {
  app->add_option("--dag", o.dag_path, "DAG file")->required();
}
void add_machine(CLI::App* app, Opts& o) {
  app->add_option("-g", o.g, "cost per communicated unit")->capture_default_str();
  app->add_option("-L", o.L, "latency per communicating superstep")
      ->capture_default_str();
}
void add_procs(CLI::App* app, Opts& o) {
  app->add_option("-P,--procs", o.P, "processor count")->capture_default_str();
}
void add_model(CLI::App* app, Opts& o, const std::string& help) {
  app->add_option("--model", o.model, help)->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"BSP scheduling toolkit", "bspsched"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--csv", common.csv, "CSV output where tables are printed");
  app.add_option("--threads", common.threads, "worker thread cap")
      ->check(CLI::PositiveNumber);

  Opts o;
  std::function<int()> action;
  const std::string bsp_models = "ds, db, fs, fb, maxbsp, class, barrier, cd, spd";

  CLI::App* validate = app.add_subcommand("validate", "check a schedule");
  add_dag(validate, o);
  validate->add_option("--sched", o.sched_path, "schedule file")->required();
  add_model(validate, o, bsp_models);
  add_machine(validate, o);
  validate->add_flag("--duplication", o.duplication, "allow several copies");
  validate->add_option("--maxbsp-latency", o.latency, "inside or outside");
  validate->callback([&] { action = [&] { return cmd_validate(o, out); }; });

  bool edge_based = false;
  CLI::App* cost = app.add_subcommand("cost", "evaluate a BSP schedule");
  add_dag(cost, o);
  cost->add_option("--sched", o.sched_path, "schedule file")->required();
  add_model(cost, o, "ds, db, fs, fb or maxbsp");
  add_machine(cost, o);
  cost->add_flag("--duplication", o.duplication, "allow several copies");
  cost->add_flag("--edge-based", edge_based, "count edge tuples");
  cost->add_option("--maxbsp-latency", o.latency, "inside or outside");
  cost->callback([&] {
    action = [&] { return cmd_cost(o, edge_based, common, out); };
  });

  CLI::App* cls = app.add_subcommand("classify", "report DAG classes");
  add_dag(cls, o);
  cls->callback([&] { action = [&] { return cmd_classify(o, common, out); }; });

  GenOpts go;
  CLI::App* gen = app.add_subcommand("gen", "print a generated DAG");
  gen->add_option("kind", go.kind,
                  "layered, class_ww, recomp, fork, two_minus_eps, "
                  "three_halves, random, chains, connected_chains")
      ->required();
  gen->add_option("--length", go.length, "layers or path length");
  gen->add_option("--width", go.width, "layer width");
  gen->add_option("--variant", go.variant, "adjacent, transitive or delayed");
  gen->add_option("--delay", go.delay, "delay of the delayed variant");
  gen->add_option("-g", go.g, "g parameter of the construction");
  gen->add_option("-k,--k", go.k, "k (two_minus_eps) or k0 (three_halves)");
  gen->add_option("-P,--procs", go.P, "processor count of the construction");
  gen->add_option("-n,--nodes", go.n, "random: node count");
  gen->add_option("-p,--edge-prob", go.p, "random: edge probability");
  gen->add_option("--seed", go.seed, "random: seed");
  gen->add_option("--chains", go.chains, "chain lengths, e.g. 4,1,1");
  gen->add_option("-o,--out", o.out_path, "output file");
  gen->callback([&] { action = [&] { return cmd_gen(go, o.out_path, out); }; });

  std::string chains;
  bool greedy = false;
  CLI::App* chain = app.add_subcommand("chain-solve", "optimal chain schedule");
  chain->add_option("--chains", chains, "chain lengths, e.g. 4,1,1");
  chain->add_option("--dag", o.dag_path, "chain or connected chain DAG file");
  add_procs(chain, o);
  add_machine(chain, o);
  add_model(chain, o, "ds, db, fs or fb (connected chains)");
  chain->add_flag("--greedy", greedy, "greedy schedule instead of the optimum");
  chain->add_option("-o,--out", o.out_path, "schedule output file");
  chain->callback([&] {
    action = [&] { return cmd_chain_solve(o, chains, greedy, out); };
  });

  std::string cs_algo;
  std::string partial;
  CLI::App* cs = app.add_subcommand("cs", "communication schedule for fixed pi, tau");
  cs->add_option("algorithm", cs_algo, "eager, lazy, greedy2 or brute")->required();
  add_dag(cs, o);
  cs->add_option("--partial", partial, "schedule file with p and s lines")->required();
  add_model(cs, o, "ds, db, fs or fb");
  add_machine(cs, o);
  cs->callback([&] { action = [&] { return cmd_cs(o, cs_algo, partial, out); }; });

  IlpOpts io;
  auto add_ilp = [&](CLI::App* sub) {
    add_dag(sub, o);
    add_procs(sub, o);
    add_model(sub, o, "ds, db, fs or fb");
    add_machine(sub, o);
    sub->add_option("-S,--supersteps", io.supersteps,
                    "superstep count (default n, or min(n, 2P-1) for chains)");
    sub->add_flag("--duplication", o.duplication, "allow several copies");
    sub->add_option("--pin", io.pin_path, "schedule file fixing pi and tau");
  };
  CLI::App* ilp_emit = app.add_subcommand("ilp-emit", "write the ILP as an LP file");
  add_ilp(ilp_emit);
  ilp_emit->add_option("--emit,-o,--out", o.out_path, "LP output file");
  ilp_emit->add_flag("--counts", io.counts, "print variable and constraint counts");
  ilp_emit->callback([&] {
    action = [&] { return cmd_ilp_emit(o, io, common, out); };
  });

  CLI::App* ilp_read = app.add_subcommand("ilp-read", "schedule from an ILP solution");
  add_ilp(ilp_read);
  ilp_read->add_option("--solution", io.solution_path, "\"name value\" file");
  ilp_read->add_flag("--exhaustive", io.exhaustive,
                     "solve the model by exhaustive search (tiny models)");
  ilp_read->add_option("--write-solution", io.write_solution,
                       "with --exhaustive, write the solution file");
  ilp_read->add_option("-o,--out", o.out_path, "schedule output file");
  ilp_read->callback([&] { action = [&] { return cmd_ilp_read(o, io, out); }; });

  std::string demand;
  bool counterexample = false;
  CLI::App* hrel = app.add_subcommand("hrel", "h-relation and slot decomposition");
  hrel->add_option("--demand", demand, "matrix rows separated by ';', e.g. 0,2;1,0");
  hrel->add_flag("--weighted-counterexample", counterexample,
                 "weighted instance without a non-preemptive layout");
  hrel->add_option("-g", o.g, "cost per unit");
  hrel->callback([&] {
    action = [&] { return cmd_hrel(demand, counterexample, o.g, out); };
  });

  std::string budget_text;
  CLI::App* oracle = app.add_subcommand("oracle", "exact optimum of a tiny instance");
  add_dag(oracle, o);
  add_procs(oracle, o);
  add_model(oracle, o, bsp_models);
  add_machine(oracle, o);
  oracle->add_flag("--duplication", o.duplication, "allow several copies");
  oracle->add_option("--maxbsp-latency", o.latency, "inside or outside");
  oracle->add_option("--budget", budget_text, "e.g. max_nodes=10,max_procs=3");
  oracle->add_option("-o,--out", o.out_path, "optimal schedule output file");
  oracle->callback([&] {
    action = [&] { return cmd_oracle(o, budget_text, common, out); };
  });

  RatioOpts ro;
  CLI::App* ratios = app.add_subcommand("ratios", "oracle optima across models");
  ratios->add_option("construction", ro.construction,
                     "layered, two_minus_eps, three_halves, fork, class_ww, "
                     "recomp or single")
      ->required();
  ratios->add_option("--lengths", ro.lengths, "comma-separated values");
  ratios->add_option("--widths", ro.widths, "0 means width = P");
  ratios->add_option("--ks", ro.ks, "k or k0 values");
  ratios->add_option("--procs", ro.procs, "processor counts");
  ratios->add_option("--gs", ro.gs, "g values");
  ratios->add_option("--Ls", ro.Ls, "L values");
  ratios->add_option("--budget", ro.budget, "e.g. max_nodes=10");
  ratios->callback([&] { action = [&] { return cmd_ratios(ro, common, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidResult& e) {
    err << "invalid schedule\n" << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace bspsched

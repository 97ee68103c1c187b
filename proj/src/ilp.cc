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

#include "bspsched/ilp.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "bspsched/error.h"
#include "text_util.h"

namespace bspsched {

namespace {

std::string var_name(std::string_view family,
                     std::initializer_list<std::size_t> indices) {
  std::string name(family);
  for (std::size_t i : indices) name += "_" + std::to_string(i + 1);
  return name;
}

class Builder {
 public:
  Builder(const Dag& dag, ProcId P, StepId S, MachineParams params,
          CommModel model, const IlpOptions& options)
      : dag_(dag), n_(dag.size()), P_(P), S_(S), model_(model),
        options_(options) {
    out_.num_nodes = n_;
    out_.procs = P;
    out_.steps = S;
    out_.model = model;
    out_.params = params;
    out_.duplication = options.duplication;
    out_.weighted = options.weighted;
  }

  IlpModel build() {
    declare_variables();
    add_assignment();
    add_presence();
    add_precedence();
    if (model_ == CommModel::DB()) add_db();
    if (model_ == CommModel::FB()) add_fb();
    if (model_ == CommModel::FS()) add_fs();
    if (model_ == CommModel::DS()) add_ds();
    add_costs();
    add_pins();
    add_objective();
    return std::move(out_);
  }

 private:
  std::int64_t w(NodeId v) const { return options_.weighted ? dag_.work(v) : 1; }
  std::int64_t c(NodeId v) const { return options_.weighted ? dag_.comm(v) : 1; }

  std::size_t add_var(std::string name, bool binary, std::int64_t lo,
                      std::int64_t hi) {
    out_.variables.push_back({std::move(name), binary, lo, hi});
    return out_.variables.size() - 1;
  }

  // Families indexed by (v, p, s).
  std::vector<std::size_t> family(std::string_view name, bool binary = true,
                                  std::int64_t hi = 1) {
    std::vector<std::size_t> ids(n_ * P_ * S_);
    for (NodeId v = 0; v < n_; ++v) {
      for (ProcId p = 0; p < P_; ++p) {
        for (StepId s = 0; s < S_; ++s) {
          ids[at(v, p, s)] = add_var(var_name(name, {v, p, s}), binary, 0, hi);
        }
      }
    }
    return ids;
  }

  std::size_t at(NodeId v, ProcId p, StepId s) const {
    return (static_cast<std::size_t>(v) * P_ + p) * S_ + s;
  }
  std::size_t at4(NodeId v, ProcId p1, ProcId p2, StepId s) const {
    return ((static_cast<std::size_t>(v) * P_ + p1) * P_ + p2) * S_ + s;
  }

  void declare_variables() {
    Weight total_work = 0;
    Weight total_comm = 0;
    for (NodeId v = 0; v < n_; ++v) {
      total_work += w(v);
      total_comm += c(v);
    }
    const Weight comm_hi = total_comm * P_;

    comp_ = family("comp");
    pres_ = family("pres");
    if (model_.broadcast()) {
      sent_ = family("sent");
      rec_ = family("rec");
    } else if (model_ == CommModel::DS()) {
      rec_ = family("rec");
      sent_ = family("senttimes", false, P_);
    } else {
      comm_.assign(n_ * P_ * P_ * S_, kNone);
      for (NodeId v = 0; v < n_; ++v) {
        for (ProcId p1 = 0; p1 < P_; ++p1) {
          for (ProcId p2 = 0; p2 < P_; ++p2) {
            if (p1 == p2) continue;
            for (StepId s = 0; s < S_; ++s) {
              comm_[at4(v, p1, p2, s)] =
                  add_var(var_name("comm", {v, p1, p2, s}), true, 0, 1);
            }
          }
        }
      }
    }
    if (!model_.free()) {
      home_.resize(n_ * P_);
      for (NodeId v = 0; v < n_; ++v) {
        for (ProcId p = 0; p < P_; ++p) {
          home_[v * P_ + p] = add_var(var_name("home", {v, p}), true, 0, 1);
        }
      }
    }
    for (StepId s = 0; s < S_; ++s) {
      used_.push_back(add_var(var_name("used", {s}), true, 0, 1));
    }
    for (StepId s = 0; s < S_; ++s) {
      for (ProcId p = 0; p < P_; ++p) {
        cwork_sp_.push_back(
            add_var(var_name("cwork", {s, p}), false, 0, total_work));
      }
    }
    for (StepId s = 0; s < S_; ++s) {
      cwork_s_.push_back(add_var(var_name("cwork", {s}), false, 0, total_work));
    }
    for (StepId s = 0; s < S_; ++s) {
      for (ProcId p = 0; p < P_; ++p) {
        csent_.push_back(add_var(var_name("csent", {s, p}), false, 0, comm_hi));
      }
    }
    for (StepId s = 0; s < S_; ++s) {
      for (ProcId p = 0; p < P_; ++p) {
        crec_.push_back(add_var(var_name("crec", {s, p}), false, 0, comm_hi));
      }
    }
    for (StepId s = 0; s < S_; ++s) {
      ccomm_.push_back(add_var(var_name("ccomm", {s}), false, 0, comm_hi));
    }
  }

  void add(std::string name, std::vector<IlpTerm> terms, Relation rel,
           std::int64_t rhs) {
    out_.constraints.push_back({std::move(name), std::move(terms), rel, rhs});
  }

  void add_assignment() {
    for (NodeId v = 0; v < n_; ++v) {
      std::vector<IlpTerm> terms;
      for (ProcId p = 0; p < P_; ++p) {
        for (StepId s = 0; s < S_; ++s) terms.push_back({comp_[at(v, p, s)], 1});
      }
      add(var_name("assign", {v}), std::move(terms),
          options_.duplication ? Relation::kGe : Relation::kEq, 1);
    }
  }

  // Value of v reaches p in the communication phase of s.
  void add_arrivals(std::vector<IlpTerm>& terms, NodeId v, ProcId p, StepId s,
                    std::int64_t coef) {
    if (model_ == CommModel::FS()) {
      for (ProcId q = 0; q < P_; ++q) {
        if (q != p) terms.push_back({comm_[at4(v, q, p, s)], coef});
      }
    } else {
      terms.push_back({rec_[at(v, p, s)], coef});
    }
  }

  void add_presence() {
    for (NodeId v = 0; v < n_; ++v) {
      for (ProcId p = 0; p < P_; ++p) {
        for (StepId s = 0; s < S_; ++s) {
          std::vector<IlpTerm> terms{{pres_[at(v, p, s)], 1},
                                     {comp_[at(v, p, s)], -1}};
          if (s > 0) {
            terms.push_back({pres_[at(v, p, s - 1)], -1});
            add_arrivals(terms, v, p, s - 1, -1);
          }
          add(var_name("pres", {v, p, s}), std::move(terms), Relation::kLe, 0);
        }
      }
    }
  }

  void add_precedence() {
    for (const Edge& e : dag_.edges()) {
      for (ProcId p = 0; p < P_; ++p) {
        for (StepId s = 0; s < S_; ++s) {
          add(var_name("prec", {e.from, e.to, p, s}),
              {{comp_[at(e.to, p, s)], 1}, {pres_[at(e.from, p, s)], -1}},
              Relation::kLe, 0);
        }
      }
    }
  }

  // Per (v, p, s) families shared by the broadcast models.
  void add_broadcast(bool direct) {
    for (NodeId v = 0; v < n_; ++v) {
      for (ProcId p = 0; p < P_; ++p) {
        for (StepId s = 0; s < S_; ++s) {
          std::size_t sent = sent_[at(v, p, s)];
          add(var_name("sendpres", {v, p, s}),
              {{sent, 1}, {pres_[at(v, p, s)], -1}}, Relation::kLe, 0);
          if (direct) {
            add(var_name("sendhome", {v, p, s}),
                {{sent, 1}, {home_[v * P_ + p], -1}}, Relation::kLe, 0);
          }
          std::vector<IlpTerm> cover{{rec_[at(v, p, s)], 1}};
          for (ProcId q = 0; q < P_; ++q) {
            if (q != p) cover.push_back({sent_[at(v, q, s)], -1});
          }
          add(var_name("reccover", {v, p, s}), std::move(cover), Relation::kLe,
              0);
          add(var_name("usedlb", {v, p, s}), {{used_[s], 1}, {sent, -1}},
              Relation::kGe, 0);
        }
      }
    }
  }

  void add_homedef() {
    for (NodeId v = 0; v < n_; ++v) {
      for (ProcId p = 0; p < P_; ++p) {
        std::vector<IlpTerm> terms{{home_[v * P_ + p], 1}};
        for (StepId s = 0; s < S_; ++s) terms.push_back({comp_[at(v, p, s)], -1});
        add(var_name("homedef", {v, p}), std::move(terms), Relation::kEq, 0);
      }
    }
  }

  void add_db() {
    add_broadcast(true);
    add_homedef();
  }

  void add_fb() { add_broadcast(false); }

  void add_fs() {
    for (NodeId v = 0; v < n_; ++v) {
      for (ProcId p1 = 0; p1 < P_; ++p1) {
        for (ProcId p2 = 0; p2 < P_; ++p2) {
          if (p1 == p2) continue;
          for (StepId s = 0; s < S_; ++s) {
            std::size_t x = comm_[at4(v, p1, p2, s)];
            add(var_name("commpres", {v, p1, p2, s}),
                {{x, 1}, {pres_[at(v, p1, s)], -1}}, Relation::kLe, 0);
            add(var_name("usedlb", {v, p1, p2, s}), {{used_[s], 1}, {x, -1}},
                Relation::kGe, 0);
          }
        }
      }
    }
  }

  void add_ds() {
    const std::int64_t M = P_;
    for (NodeId v = 0; v < n_; ++v) {
      for (ProcId p = 0; p < P_; ++p) {
        for (StepId s = 0; s < S_; ++s) {
          std::size_t st = sent_[at(v, p, s)];
          std::size_t home = home_[v * P_ + p];
          add(var_name("stcap", {v, p, s}), {{st, 1}, {home, -M}},
              Relation::kLe, 0);
          add(var_name("stpres", {v, p, s}),
              {{st, 1}, {pres_[at(v, p, s)], -M}}, Relation::kLe, 0);
          // A home processor sends every copy received in s, its own
          // included, so no value can appear without a sender.
          std::vector<IlpTerm> cover{{st, 1}, {home, -M}};
          for (ProcId q = 0; q < P_; ++q) cover.push_back({rec_[at(v, q, s)], -1});
          add(var_name("stcover", {v, p, s}), std::move(cover), Relation::kGe,
              -M);
          add(var_name("usedlb", {v, p, s}),
              {{used_[s], 1}, {rec_[at(v, p, s)], -1}}, Relation::kGe, 0);
        }
      }
    }
    add_homedef();
  }

  void add_costs() {
    for (StepId s = 0; s < S_; ++s) {
      for (ProcId p = 0; p < P_; ++p) {
        std::size_t sp = s * P_ + p;
        std::vector<IlpTerm> work{{cwork_sp_[sp], 1}};
        for (NodeId v = 0; v < n_; ++v) work.push_back({comp_[at(v, p, s)], -w(v)});
        add(var_name("workdef", {s, p}), std::move(work), Relation::kEq, 0);
        add(var_name("workmax", {s, p}), {{cwork_s_[s], 1}, {cwork_sp_[sp], -1}},
            Relation::kGe, 0);

        std::vector<IlpTerm> sent{{csent_[sp], 1}};
        std::vector<IlpTerm> rec{{crec_[sp], 1}};
        for (NodeId v = 0; v < n_; ++v) {
          if (model_ == CommModel::FS()) {
            for (ProcId q = 0; q < P_; ++q) {
              if (q == p) continue;
              sent.push_back({comm_[at4(v, p, q, s)], -c(v)});
              rec.push_back({comm_[at4(v, q, p, s)], -c(v)});
            }
          } else {
            sent.push_back({sent_[at(v, p, s)], -c(v)});
            rec.push_back({rec_[at(v, p, s)], -c(v)});
          }
        }
        add(var_name("sentdef", {s, p}), std::move(sent), Relation::kEq, 0);
        add(var_name("recdef", {s, p}), std::move(rec), Relation::kEq, 0);
        add(var_name("commsent", {s, p}), {{ccomm_[s], 1}, {csent_[sp], -1}},
            Relation::kGe, 0);
        add(var_name("commrec", {s, p}), {{ccomm_[s], 1}, {crec_[sp], -1}},
            Relation::kGe, 0);
      }
    }
  }

  void add_pins() {
    for (const IlpPin& pin : options_.pins) {
      if (pin.node >= n_ || pin.proc >= P_ || pin.step >= S_) {
        throw DomainError("pin out of range for node " +
                          std::to_string(pin.node + 1));
      }
      add(var_name("pin", {pin.node}), {{comp_[at(pin.node, pin.proc, pin.step)], 1}},
          Relation::kEq, 1);
    }
  }

  void add_objective() {
    for (StepId s = 0; s < S_; ++s) {
      out_.objective.push_back({cwork_s_[s], 1});
      if (out_.params.g != 0) out_.objective.push_back({ccomm_[s], out_.params.g});
      if (out_.params.L != 0) out_.objective.push_back({used_[s], out_.params.L});
    }
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  const Dag& dag_;
  std::size_t n_;
  ProcId P_;
  StepId S_;
  CommModel model_;
  const IlpOptions& options_;
  IlpModel out_;
  std::vector<std::size_t> comp_, pres_, sent_, rec_, comm_, home_, used_;
  std::vector<std::size_t> cwork_sp_, cwork_s_, csent_, crec_, ccomm_;
};

void append_expr(std::ostringstream& out, std::size_t& col,
                 const IlpModel& model, const std::vector<IlpTerm>& terms) {
  bool first = true;
  for (const IlpTerm& t : terms) {
    std::string piece;
    std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (!first || t.coef < 0) piece += t.coef < 0 ? "- " : "+ ";
    if (mag != 1) piece += std::to_string(mag) + " ";
    piece += model.variables[t.var].name;
    if (col + piece.size() + 1 > 78) {
      out << "\n   ";
      col = 3;
    }
    out << ' ' << piece;
    col += piece.size() + 1;
    first = false;
  }
  if (terms.empty()) {
    out << " 0";
    col += 2;
  }
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::kLe: return "<=";
    case Relation::kGe: return ">=";
    case Relation::kEq: return "=";
  }
  return "=";
}

bool satisfied(std::int64_t lhs, Relation r, std::int64_t rhs) {
  switch (r) {
    case Relation::kLe: return lhs <= rhs;
    case Relation::kGe: return lhs >= rhs;
    case Relation::kEq: return lhs == rhs;
  }
  return false;
}

}  // namespace

std::optional<std::size_t> IlpModel::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t IlpModel::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw DomainError("unknown ILP variable " + std::string(name));
  return *i;
}

StepId default_supersteps(const Dag& dag, ProcId P) {
  StepId n = static_cast<StepId>(dag.size());
  DagClass cls = classify(dag);
  if (cls.is_chain || cls.is_connected_chain) {
    return std::min<StepId>(n, 2 * P - 1);
  }
  return n;
}

IlpModel emit_ilp(const Dag& dag, ProcId P, StepId S, MachineParams params,
                  CommModel model, const IlpOptions& options) {
  if (dag.size() == 0) throw DomainError("ILP needs at least one node");
  if (P == 0) throw DomainError("ILP needs at least one processor");
  if (S == 0) throw DomainError("ILP needs at least one superstep");
  return Builder(dag, P, S, params, model, options).build();
}

std::string render_lp(const IlpModel& model) {
  if (model.constraints.empty()) {
    throw DomainError("ILP model has no constraints");
  }
  std::ostringstream out;
  out << "\\ BSP schedule, model " << model.model.name() << ", P "
      << model.procs << ", S " << model.steps << ", g " << model.params.g
      << ", L " << model.params.L << "\n";
  out << "Minimize\n obj:";
  std::size_t col = 5;
  append_expr(out, col, model, model.objective);
  out << "\nSubject To\n";
  for (const IlpConstraint& con : model.constraints) {
    out << ' ' << con.name << ':';
    col = con.name.size() + 2;
    append_expr(out, col, model, con.terms);
    std::string tail = std::string(relation_text(con.relation)) + " " +
                       std::to_string(con.rhs);
    if (col + tail.size() + 1 > 78) out << "\n  ";
    out << ' ' << tail << '\n';
  }
  out << "Bounds\n";
  for (const IlpVariable& var : model.variables) {
    if (!var.binary) {
      out << ' ' << var.lo << " <= " << var.name << " <= " << var.hi << '\n';
    }
  }
  auto list = [&](const char* title, bool binary) {
    out << title << '\n';
    col = 0;
    for (const IlpVariable& var : model.variables) {
      if (var.binary != binary) continue;
      if (col + var.name.size() + 1 > 78) {
        out << '\n';
        col = 0;
      }
      out << ' ' << var.name;
      col += var.name.size() + 1;
    }
    if (col > 0) out << '\n';
  };
  list("Binaries", true);
  list("Generals", false);
  out << "End\n";
  return out.str();
}

IlpSize count_vars_constraints(const Dag& dag, ProcId P, StepId S,
                               CommModel model, std::size_t num_pins) {
  const std::size_t n = dag.size();
  const std::size_t m = dag.num_edges();
  if (n == 0) throw DomainError("ILP needs at least one node");
  if (P == 0 || S == 0) throw DomainError("ILP needs P >= 1 and S >= 1");
  const std::size_t nps = n * P * S;
  const std::size_t ps = static_cast<std::size_t>(P) * S;
  IlpSize size;
  size.variables = 2 * nps + 3 * ps + 3 * S;
  size.constraints = n + nps + m * ps + 6 * ps + num_pins;
  if (model == CommModel::DB() || model == CommModel::DS()) {
    size.variables += 2 * nps + n * P;
    size.constraints += 4 * nps + n * P;
  } else if (model == CommModel::FB()) {
    size.variables += 2 * nps;
    size.constraints += 3 * nps;
  } else {
    size.variables += nps * (P - 1);
    size.constraints += 2 * nps * (P - 1);
  }
  return size;
}

IlpAssignment parse_solution(std::string_view text) {
  IlpAssignment values;
  for (const Line& line : tokenize_lines(text)) {
    if (line.tokens.size() != 2) {
      throw ParseError(line.number, "expected \"name value\"");
    }
    double value = 0;
    try {
      std::size_t used = 0;
      value = std::stod(line.tokens[1], &used);
      if (used != line.tokens[1].size()) throw 0;
    } catch (...) {
      throw ParseError(line.number, "bad value \"" + line.tokens[1] + "\"");
    }
    if (!values.emplace(line.tokens[0], value).second) {
      throw ParseError(line.number, "variable " + line.tokens[0] + " given twice");
    }
  }
  return values;
}

std::int64_t evaluate_objective(const IlpModel& model,
                                const std::vector<std::int64_t>& values) {
  std::int64_t total = 0;
  for (const IlpTerm& t : model.objective) total += t.coef * values[t.var];
  return total;
}

IlpAssignment to_assignment(const IlpModel& model,
                            const std::vector<std::int64_t>& values) {
  IlpAssignment out;
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    out.emplace(model.variables[i].name, static_cast<double>(values[i]));
  }
  return out;
}

IlpReadResult read_solution(const Dag& dag, const IlpModel& model,
                            const IlpAssignment& assignment) {
  if (dag.size() != model.num_nodes) {
    throw DomainError("DAG size does not match the ILP model");
  }
  std::vector<std::int64_t> x(model.variables.size());
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    const IlpVariable& var = model.variables[i];
    auto it = assignment.find(var.name);
    if (it == assignment.end()) {
      throw DomainError("solution lacks variable " + var.name);
    }
    double rounded = std::round(it->second);
    if (std::abs(it->second - rounded) > 1e-6) {
      throw DomainError("fractional value for " + var.name);
    }
    x[i] = static_cast<std::int64_t>(rounded);
    if (x[i] < var.lo || x[i] > var.hi) {
      throw DomainError("value of " + var.name + " out of bounds");
    }
  }
  for (const IlpConstraint& con : model.constraints) {
    std::int64_t lhs = 0;
    for (const IlpTerm& t : con.terms) lhs += t.coef * x[t.var];
    if (!satisfied(lhs, con.relation, con.rhs)) {
      throw DomainError("constraint " + con.name + " violated");
    }
  }

  const std::size_t n = model.num_nodes;
  const ProcId P = model.procs;
  const StepId S = model.steps;
  auto value = [&](std::string_view family,
                   std::initializer_list<std::size_t> idx) {
    return x[model.index(var_name(family, idx))];
  };

  BspSchedule sched;
  sched.procs = P;
  sched.steps = S;
  sched.assign.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    for (ProcId p = 0; p < P; ++p) {
      for (StepId s = 0; s < S; ++s) {
        if (value("comp", {v, p, s}) == 1) sched.assign[v].push_back({p, s});
      }
    }
    if (sched.assign[v].empty()) {
      throw DomainError("node " + std::to_string(v + 1) + " is never computed");
    }
  }
  const CommModel cm = model.model;
  for (NodeId v = 0; v < n; ++v) {
    for (StepId s = 0; s < S; ++s) {
      for (ProcId p = 0; p < P; ++p) {
        if (cm == CommModel::FS()) {
          for (ProcId q = 0; q < P; ++q) {
            if (q != p && value("comm", {v, q, p, s}) == 1) {
              sched.comms.push_back({v, q, p, s});
            }
          }
          continue;
        }
        if (value("rec", {v, p, s}) == 0) continue;
        std::optional<ProcId> from;
        for (ProcId q = 0; q < P && !from; ++q) {
          if (cm == CommModel::DS()) {
            if (q != p && value("home", {v, q}) == 1 &&
                value("senttimes", {v, q, s}) > 0) {
              from = q;
            }
          } else if (q != p && value("sent", {v, q, s}) == 1) {
            from = q;
          }
        }
        // A home processor receiving its own value in DS is a no-op.
        if (!from) {
          if (cm == CommModel::DS()) continue;
          throw std::logic_error("receive without sender for " +
                                 var_name("rec", {v, p, s}));
        }
        sched.comms.push_back({v, *from, p, s});
      }
    }
  }
  sched.canonicalize();
  sched = strip_empty_supersteps(sched);

  ValidityReport report = check_validity(dag, sched, cm, model.duplication);
  if (!report.valid) {
    throw DomainError("reconstructed schedule is invalid: " + report.to_string());
  }
  CostBreakdown cost = compute_cost(dag, sched, cm, model.params);
  std::int64_t objective = evaluate_objective(model, x);
  if (model.weighted && cost.cost != objective) {
    throw DomainError("reconstructed cost " + std::to_string(cost.cost) +
                      " differs from objective " + std::to_string(objective));
  }
  return {std::move(sched), cost.cost};
}

}  // namespace bspsched

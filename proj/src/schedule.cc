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

#include "bspsched/schedule.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

#include "bspsched/error.h"

namespace bspsched {
namespace {

std::string node_str(NodeId v) { return "node " + std::to_string(v + 1); }

std::string tuple_str(const CommStep& c) {
  return "(" + std::to_string(c.node + 1) + "," + std::to_string(c.from + 1) +
         "," + std::to_string(c.to + 1) + "," + std::to_string(c.step + 1) +
         ")";
}

std::string edge_tuple_str(const EdgeCommStep& c) {
  return "((" + std::to_string(c.edge.from + 1) + "," +
         std::to_string(c.edge.to + 1) + ")," + std::to_string(c.step + 1) +
         ")";
}

}  // namespace

bool check_schedule_structure(const Dag& dag, const BspSchedule& sched,
                     bool duplication, ValidityReport& report) {
  bool ok = true;
  auto fail = [&](std::string where, std::string message) {
    report.add("structure", std::move(where), std::move(message));
    ok = false;
  };
  if (sched.procs == 0 || sched.steps == 0) {
    fail("schedule", "processor and superstep counts must be positive");
    return false;
  }
  if (sched.assign.size() != dag.size()) {
    fail("schedule", "assignment covers " +
                         std::to_string(sched.assign.size()) + " nodes, DAG has " +
                         std::to_string(dag.size()));
    return false;
  }
  for (NodeId v = 0; v < dag.size(); ++v) {
    const auto& copies = sched.assign[v];
    if (copies.empty()) {
      report.add("assignment", node_str(v), "node is never computed");
      ok = false;
    } else if (copies.size() > 1 && !duplication) {
      report.add("assignment", node_str(v),
                 "node computed more than once without duplication");
      ok = false;
    }
    std::set<Placement> seen;
    std::set<ProcId> procs;
    for (const Placement& pl : copies) {
      if (pl.proc >= sched.procs || pl.step >= sched.steps) {
        fail(node_str(v), "placement out of range");
      }
      if (!seen.insert(pl).second) fail(node_str(v), "repeated placement");
      if (!procs.insert(pl.proc).second) {
        report.warnings.push_back(node_str(v) +
                                  " computed twice on processor " +
                                  std::to_string(pl.proc + 1));
      }
    }
  }
  std::set<CommStep> tuples;
  for (const CommStep& c : sched.comms) {
    if (c.node >= dag.size() || c.from >= sched.procs ||
        c.to >= sched.procs || c.step >= sched.steps) {
      fail(tuple_str(c), "tuple index out of range");
      continue;
    }
    if (c.from == c.to) fail(tuple_str(c), "sender equals receiver");
    if (!tuples.insert(c).second) fail(tuple_str(c), "duplicate tuple");
  }
  std::set<EdgeCommStep> edge_tuples;
  for (const EdgeCommStep& c : sched.edge_comms) {
    if (c.step >= sched.steps ||
        !std::binary_search(dag.edges().begin(), dag.edges().end(), c.edge)) {
      fail(edge_tuple_str(c), "edge tuple refers to a missing edge or superstep");
      continue;
    }
    if (!edge_tuples.insert(c).second) fail(edge_tuple_str(c), "duplicate tuple");
  }
  if (!sched.comms.empty() && !sched.edge_comms.empty()) {
    report.add("mixed", "schedule",
               "node-based and edge-based tuples cannot be combined");
    ok = false;
  }
  if (!sched.edge_comms.empty() && sched.has_duplicates()) {
    report.add("mixed", "schedule",
               "edge-based tuples require a single copy per node");
    ok = false;
  }
  return ok;
}

namespace {

void check_edge_based(const Dag& dag, const BspSchedule& sched,
                      ValidityReport& report) {
  for (const EdgeCommStep& c : sched.edge_comms) {
    Placement pu = sched.assign[c.edge.from].front();
    Placement pv = sched.assign[c.edge.to].front();
    if (pu.proc == pv.proc) {
      report.add("source", edge_tuple_str(c),
                 "edge tuple on an edge within one processor");
    }
    if (pu.step > c.step) {
      report.add("source", edge_tuple_str(c),
                 "value sent before it is computed");
    }
  }
  for (const Edge& e : dag.edges()) {
    Placement pu = sched.assign[e.from].front();
    Placement pv = sched.assign[e.to].front();
    bool ok = false;
    if (pu.proc == pv.proc) {
      ok = pu.step <= pv.step;
    } else {
      for (const EdgeCommStep& c : sched.edge_comms) {
        if (c.edge == e && c.step < pv.step && pu.step <= c.step) ok = true;
      }
    }
    if (!ok) {
      report.add("precedence",
                 "edge " + std::to_string(e.from + 1) + "->" +
                     std::to_string(e.to + 1),
                 "value not available on the consumer's processor in time");
    }
  }
}

}  // namespace

std::string CommModel::name() const {
  std::string s;
  s += transfer == Transfer::kDirect ? 'D' : 'F';
  s += cast == Cast::kSingle ? 'S' : 'B';
  return s;
}

CommModel parse_comm_model(std::string_view text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(c));
  if (lower == "ds") return CommModel::DS();
  if (lower == "db") return CommModel::DB();
  if (lower == "fs") return CommModel::FS();
  if (lower == "fb") return CommModel::FB();
  throw ParseError(0, "unknown communication model \"" + std::string(text) + "\"");
}

std::vector<CommModel> all_comm_models() {
  return {CommModel::DS(), CommModel::DB(), CommModel::FS(), CommModel::FB()};
}

BspSchedule BspSchedule::from_assignment(const std::vector<ProcId>& pi,
                                         const std::vector<StepId>& tau,
                                         std::vector<CommStep> comms,
                                         ProcId procs, StepId steps) {
  if (pi.size() != tau.size()) {
    throw DomainError("processor and superstep vectors differ in length");
  }
  BspSchedule sched;
  ProcId max_p = 0;
  StepId max_s = 0;
  for (std::size_t v = 0; v < pi.size(); ++v) {
    sched.assign.push_back({{pi[v], tau[v]}});
    max_p = std::max(max_p, pi[v]);
    max_s = std::max(max_s, tau[v]);
  }
  for (const CommStep& c : comms) {
    max_p = std::max({max_p, c.from, c.to});
    max_s = std::max(max_s, c.step);
  }
  sched.procs = procs ? procs : max_p + 1;
  sched.steps = steps ? steps : max_s + 1;
  sched.comms = std::move(comms);
  sched.canonicalize();
  return sched;
}

bool BspSchedule::has_duplicates() const {
  return std::any_of(assign.begin(), assign.end(),
                     [](const auto& copies) { return copies.size() > 1; });
}

void BspSchedule::canonicalize() {
  for (auto& copies : assign) std::sort(copies.begin(), copies.end());
  std::sort(comms.begin(), comms.end(), [](const CommStep& a, const CommStep& b) {
    return std::tie(a.step, a.node, a.from, a.to) <
           std::tie(b.step, b.node, b.from, b.to);
  });
  std::sort(edge_comms.begin(), edge_comms.end(),
            [](const EdgeCommStep& a, const EdgeCommStep& b) {
              return std::tie(a.step, a.edge) < std::tie(b.step, b.edge);
            });
}

void ValidityReport::add(std::string rule, std::string where,
                         std::string message) {
  valid = false;
  violations.push_back({std::move(rule), std::move(where), std::move(message)});
}

std::string ValidityReport::to_string() const {
  std::ostringstream out;
  if (valid) out << "valid\n";
  for (const Violation& v : violations) {
    out << "invalid " << v.rule << ' ' << v.where << ": " << v.message << '\n';
  }
  for (const std::string& w : warnings) out << "warning " << w << '\n';
  return out.str();
}

std::vector<std::vector<StepId>> first_presence(const Dag& dag,
                                                const BspSchedule& sched,
                                                bool free) {
  std::vector<std::vector<StepId>> first(
      dag.size(), std::vector<StepId>(sched.procs, kNever));
  std::vector<std::vector<StepId>> computed = first;
  for (NodeId v = 0; v < dag.size(); ++v) {
    for (const Placement& pl : sched.assign[v]) {
      computed[v][pl.proc] = std::min(computed[v][pl.proc], pl.step);
    }
  }
  first = computed;
  std::vector<CommStep> order = sched.comms;
  std::sort(order.begin(), order.end(),
            [](const CommStep& a, const CommStep& b) { return a.step < b.step; });
  // Tuples of one superstep only make values present from the next one, so
  // in-step order does not matter.
  for (const CommStep& c : order) {
    StepId have = free ? first[c.node][c.from] : computed[c.node][c.from];
    if (have <= c.step) {
      first[c.node][c.to] = std::min(first[c.node][c.to], c.step + 1);
    }
  }
  return first;
}

ValidityReport check_validity(const Dag& dag, const BspSchedule& sched,
                              CommModel model, bool duplication) {
  ValidityReport report;
  if (!check_schedule_structure(dag, sched, duplication, report)) return report;
  if (!sched.edge_comms.empty()) {
    check_edge_based(dag, sched, report);
    return report;
  }
  std::vector<std::vector<StepId>> first =
      first_presence(dag, sched, model.free());
  for (const CommStep& c : sched.comms) {
    bool ok = false;
    if (model.free()) {
      ok = first[c.node][c.from] <= c.step;
    } else {
      for (const Placement& pl : sched.assign[c.node]) {
        if (pl.proc == c.from && pl.step <= c.step) ok = true;
      }
    }
    if (!ok) {
      report.add("source", tuple_str(c),
                 model.free() ? "value not present on the sender"
                              : "sender has not computed the value");
    }
  }
  for (const Edge& e : dag.edges()) {
    for (const Placement& pv : sched.assign[e.to]) {
      if (first[e.from][pv.proc] > pv.step) {
        report.add("precedence",
                   "edge " + std::to_string(e.from + 1) + "->" +
                       std::to_string(e.to + 1) + " at (p" +
                       std::to_string(pv.proc + 1) + ",s" +
                       std::to_string(pv.step + 1) + ")",
                   "value not available on the consumer's processor in time");
      }
    }
  }
  return report;
}

std::string CostBreakdown::formula() const {
  std::string s = std::to_string(work_total);
  if (comm_total > 0) {
    s += '+';
    if (comm_total != 1) s += std::to_string(comm_total);
    s += 'g';
  }
  if (latency_count > 0) {
    s += '+';
    if (latency_count != 1) s += std::to_string(latency_count);
    s += 'L';
  }
  return s;
}

CostBreakdown compute_cost(const Dag& dag, const BspSchedule& sched,
                           CommModel model, MachineParams params,
                           bool edge_based) {
  if (edge_based && !sched.comms.empty()) {
    throw DomainError("edge-based accounting needs edge tuples, got node tuples");
  }
  if (!edge_based && !sched.edge_comms.empty()) {
    throw DomainError("schedule carries edge tuples; enable edge-based accounting");
  }
  if (edge_based && sched.has_duplicates()) {
    throw DomainError("edge-based accounting requires a single copy per node");
  }
  if (sched.assign.size() != dag.size()) {
    throw DomainError("schedule does not match the DAG");
  }
  CostBreakdown out;
  out.steps.resize(sched.steps);
  for (SuperstepCost& sc : out.steps) {
    sc.work.assign(sched.procs, 0);
    sc.sent.assign(sched.procs, 0);
    sc.rec.assign(sched.procs, 0);
  }
  auto in_range = [&](ProcId p, StepId s) {
    if (p >= sched.procs || s >= sched.steps) {
      throw DomainError("schedule index out of range");
    }
  };
  for (NodeId v = 0; v < dag.size(); ++v) {
    for (const Placement& pl : sched.assign[v]) {
      in_range(pl.proc, pl.step);
      out.steps[pl.step].work[pl.proc] += dag.work(v);
    }
  }
  if (edge_based) {
    for (const EdgeCommStep& c : sched.edge_comms) {
      ProcId from = sched.assign.at(c.edge.from).front().proc;
      ProcId to = sched.assign.at(c.edge.to).front().proc;
      in_range(from, c.step);
      out.steps[c.step].sent[from] += 1;
      out.steps[c.step].rec[to] += 1;
    }
  } else {
    std::set<std::tuple<NodeId, ProcId, StepId>> broadcast_seen;
    for (const CommStep& c : sched.comms) {
      in_range(c.from, c.step);
      in_range(c.to, c.step);
      if (c.node >= dag.size()) throw DomainError("tuple node out of range");
      Weight w = dag.comm(c.node);
      SuperstepCost& sc = out.steps[c.step];
      if (!model.broadcast() ||
          broadcast_seen.insert({c.node, c.from, c.step}).second) {
        sc.sent[c.from] += w;
      }
      sc.rec[c.to] += w;
    }
  }
  for (SuperstepCost& sc : out.steps) {
    for (ProcId p = 0; p < sched.procs; ++p) {
      sc.max_work = std::max(sc.max_work, sc.work[p]);
      sc.comm = std::max({sc.comm, sc.sent[p], sc.rec[p]});
    }
    sc.latency = sc.comm > 0;
    sc.cost = sc.max_work + params.g * sc.comm + (sc.latency ? params.L : 0);
    out.work_total += sc.max_work;
    out.comm_total += sc.comm;
    out.latency_count += sc.latency ? 1 : 0;
    out.cost += sc.cost;
  }
  out.latency_total = out.latency_count * params.L;
  return out;
}

BspSchedule strip_empty_supersteps(const BspSchedule& sched) {
  std::vector<bool> used(sched.steps, false);
  for (const auto& copies : sched.assign) {
    for (const Placement& pl : copies) used.at(pl.step) = true;
  }
  for (const CommStep& c : sched.comms) used.at(c.step) = true;
  for (const EdgeCommStep& c : sched.edge_comms) used.at(c.step) = true;
  std::vector<StepId> remap(sched.steps, 0);
  StepId next = 0;
  for (StepId s = 0; s < sched.steps; ++s) {
    remap[s] = next;
    if (used[s]) ++next;
  }
  BspSchedule out = sched;
  out.steps = std::max<StepId>(next, 1);
  for (auto& copies : out.assign) {
    for (Placement& pl : copies) pl.step = remap[pl.step];
  }
  for (CommStep& c : out.comms) c.step = remap[c.step];
  for (EdgeCommStep& c : out.edge_comms) c.step = remap[c.step];
  return out;
}

BspSchedule merge_supersteps(const BspSchedule& sched, StepId s) {
  if (s + 1 >= sched.steps) throw DomainError("no superstep after s to merge");
  for (const CommStep& c : sched.comms) {
    if (c.step == s) {
      throw DomainError("cannot merge across a nonempty communication phase");
    }
  }
  for (const EdgeCommStep& c : sched.edge_comms) {
    if (c.step == s) {
      throw DomainError("cannot merge across a nonempty communication phase");
    }
  }
  auto shift = [s](StepId x) { return x > s ? x - 1 : x; };
  BspSchedule out = sched;
  out.steps -= 1;
  for (auto& copies : out.assign) {
    for (Placement& pl : copies) pl.step = shift(pl.step);
    std::sort(copies.begin(), copies.end());
    copies.erase(std::unique(copies.begin(), copies.end()), copies.end());
  }
  for (CommStep& c : out.comms) c.step = shift(c.step);
  for (EdgeCommStep& c : out.edge_comms) c.step = shift(c.step);
  out.canonicalize();
  out.comms.erase(std::unique(out.comms.begin(), out.comms.end()),
                  out.comms.end());
  out.edge_comms.erase(
      std::unique(out.edge_comms.begin(), out.edge_comms.end()),
      out.edge_comms.end());
  return out;
}

}  // namespace bspsched

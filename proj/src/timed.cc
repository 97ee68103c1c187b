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

#include "bspsched/timed.h"

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <tuple>

#include "bspsched/error.h"

namespace bspsched {
namespace {

std::string edge_str(const Edge& e) {
  return "edge " + std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1);
}

std::string comm_str(const TimedComm& c) {
  return "(" + std::to_string(c.node + 1) + "," + std::to_string(c.from + 1) +
         "," + std::to_string(c.to + 1) + "," + std::to_string(c.start) + ")";
}

Time finish(const Dag& dag, NodeId v, const TimedPlacement& pl) {
  return pl.start + dag.work(v) - 1;
}

// Structure, collisions and makespan shared by all timed checks. Returns
// false when edge checks would be meaningless.
bool check_timed_structure(const Dag& dag, const TimedSchedule& ts,
                           bool duplication, TimedReport& out) {
  ValidityReport& report = out.report;
  if (ts.procs == 0) {
    report.add("structure", "schedule", "processor count must be positive");
    return false;
  }
  if (ts.assign.size() != dag.size()) {
    report.add("structure", "schedule", "assignment does not cover the DAG");
    return false;
  }
  bool ok = true;
  std::vector<std::vector<std::pair<Time, Time>>> busy(ts.procs);
  for (NodeId v = 0; v < dag.size(); ++v) {
    const auto& copies = ts.assign[v];
    if (copies.empty() || (copies.size() > 1 && !duplication)) {
      report.add("assignment", "node " + std::to_string(v + 1),
                 copies.empty() ? "node is never computed"
                                : "node computed more than once without duplication");
      ok = false;
    }
    for (const TimedPlacement& pl : copies) {
      if (pl.proc >= ts.procs || pl.start < 1) {
        report.add("structure", "node " + std::to_string(v + 1),
                   "placement out of range");
        ok = false;
        continue;
      }
      busy[pl.proc].push_back({pl.start, finish(dag, v, pl)});
      out.makespan = std::max(out.makespan, finish(dag, v, pl));
    }
  }
  for (ProcId p = 0; p < ts.procs; ++p) {
    std::sort(busy[p].begin(), busy[p].end());
    for (std::size_t i = 1; i < busy[p].size(); ++i) {
      if (busy[p][i].first <= busy[p][i - 1].second) {
        report.add("collision", "processor " + std::to_string(p + 1),
                   "two nodes overlap at time " +
                       std::to_string(busy[p][i].first));
      }
    }
  }
  return ok;
}

// Checks every edge against `satisfied(u_copy, v_copy)` for some copy of u.
void check_edges(
    const Dag& dag, const TimedSchedule& ts, ValidityReport& report,
    const std::function<bool(NodeId, const TimedPlacement&, NodeId,
                             const TimedPlacement&)>& satisfied) {
  for (const Edge& e : dag.edges()) {
    for (const TimedPlacement& pv : ts.assign[e.to]) {
      bool ok = false;
      for (const TimedPlacement& pu : ts.assign[e.from]) {
        if (satisfied(e.from, pu, e.to, pv)) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        report.add("precedence", edge_str(e) + " at (p" +
                                     std::to_string(pv.proc + 1) + ",t" +
                                     std::to_string(pv.start) + ")",
                   "predecessor not available in time");
      }
    }
  }
}

}  // namespace

void TimedSchedule::canonicalize() {
  for (auto& copies : assign) std::sort(copies.begin(), copies.end());
  std::sort(comms.begin(), comms.end(), [](const TimedComm& a, const TimedComm& b) {
    return std::tie(a.start, a.node, a.from, a.to) <
           std::tie(b.start, b.node, b.from, b.to);
  });
}

TimedReport check_classical(const Dag& dag, const TimedSchedule& ts,
                            ClassicalMode mode, bool duplication) {
  TimedReport out;
  if (!check_timed_structure(dag, ts, duplication, out)) return out;
  // Boundary b lies between steps b and b + 1; it is blocked when some node
  // runs across it.
  std::set<Time> blocked;
  if (mode == ClassicalMode::kBarrierSync) {
    for (NodeId v = 0; v < dag.size(); ++v) {
      for (const TimedPlacement& pl : ts.assign[v]) {
        for (Time b = pl.start; b < finish(dag, v, pl); ++b) blocked.insert(b);
      }
    }
  }
  check_edges(dag, ts, out.report,
              [&](NodeId u, const TimedPlacement& pu, NodeId,
                  const TimedPlacement& pv) {
                Time fu = finish(dag, u, pu);
                if (fu >= pv.start) return false;
                if (pu.proc == pv.proc || mode == ClassicalMode::kPlain) {
                  return true;
                }
                for (Time b = fu; b < pv.start; ++b) {
                  if (!blocked.count(b)) return true;
                }
                return false;
              });
  return out;
}

TimedReport check_commdelay(const Dag& dag, const TimedSchedule& ts, Time g,
                            bool duplication) {
  TimedReport out;
  if (!check_timed_structure(dag, ts, duplication, out)) return out;
  check_edges(dag, ts, out.report,
              [&](NodeId u, const TimedPlacement& pu, NodeId,
                  const TimedPlacement& pv) {
                Time fu = finish(dag, u, pu);
                return pu.proc == pv.proc ? fu < pv.start : fu + g < pv.start;
              });
  return out;
}

TimedReport check_spd(const Dag& dag, const TimedSchedule& ts, Time g,
                      bool duplication) {
  TimedReport out;
  if (!check_timed_structure(dag, ts, duplication, out)) return out;
  ValidityReport& report = out.report;
  std::vector<std::vector<Time>> sends(ts.procs), recvs(ts.procs);
  std::set<TimedComm> seen;
  for (const TimedComm& c : ts.comms) {
    if (c.node >= dag.size() || c.from >= ts.procs || c.to >= ts.procs ||
        c.from == c.to || c.start < 1) {
      report.add("structure", comm_str(c), "malformed transfer");
      continue;
    }
    if (!seen.insert(c).second) {
      report.add("structure", comm_str(c), "duplicate transfer");
    }
    bool has_source = false;
    for (const TimedPlacement& pl : ts.assign[c.node]) {
      if (pl.proc == c.from && finish(dag, c.node, pl) <= c.start) {
        has_source = true;
      }
    }
    if (!has_source) {
      report.add("source", comm_str(c), "sender has not finished the value");
    }
    sends[c.from].push_back(c.start);
    recvs[c.to].push_back(c.start);
  }
  auto check_port = [&](std::vector<Time>& starts, ProcId p, const char* kind) {
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 1; i < starts.size(); ++i) {
      if (g > 0 && starts[i] < starts[i - 1] + g) {
        report.add("port", "processor " + std::to_string(p + 1),
                   std::string(kind) + " intervals overlap at time " +
                       std::to_string(starts[i]));
      }
    }
  };
  for (ProcId p = 0; p < ts.procs; ++p) {
    check_port(sends[p], p, "send");
    check_port(recvs[p], p, "receive");
  }
  check_edges(dag, ts, report,
              [&](NodeId u, const TimedPlacement& pu, NodeId,
                  const TimedPlacement& pv) {
                Time fu = finish(dag, u, pu);
                if (pu.proc == pv.proc) return fu < pv.start;
                for (const TimedComm& c : ts.comms) {
                  if (c.node == u && c.from == pu.proc && c.to == pv.proc &&
                      fu <= c.start && c.start + g < pv.start) {
                    return true;
                  }
                }
                return false;
              });
  return out;
}

MaxBspReport check_maxbsp(const Dag& dag, const BspSchedule& sched,
                          MachineParams params, MaxBspLatency latency,
                          bool duplication) {
  MaxBspReport out;
  ValidityReport& report = out.report;
  if (!check_schedule_structure(dag, sched, duplication, report)) return out;
  if (!sched.edge_comms.empty()) {
    report.add("mixed", "schedule", "edge tuples are not supported here");
    return out;
  }
  auto computed_before = [&](NodeId v, ProcId p, StepId s) {
    for (const Placement& pl : sched.assign[v]) {
      if (pl.proc == p && pl.step < s) return true;
    }
    return false;
  };
  for (const CommStep& c : sched.comms) {
    if (!computed_before(c.node, c.from, c.step)) {
      report.add("source",
                 "(" + std::to_string(c.node + 1) + "," +
                     std::to_string(c.from + 1) + "," +
                     std::to_string(c.to + 1) + "," +
                     std::to_string(c.step + 1) + ")",
                 "value must be computed in an earlier superstep");
    }
  }
  for (const Edge& e : dag.edges()) {
    for (const Placement& pv : sched.assign[e.to]) {
      bool ok = false;
      for (const Placement& pu : sched.assign[e.from]) {
        if (pu.proc == pv.proc && pu.step <= pv.step) ok = true;
      }
      for (const CommStep& c : sched.comms) {
        if (c.node == e.from && c.to == pv.proc && c.step < pv.step &&
            computed_before(c.node, c.from, c.step)) {
          ok = true;
        }
      }
      if (!ok) {
        report.add("precedence",
                   edge_str(e) + " at (p" + std::to_string(pv.proc + 1) +
                       ",s" + std::to_string(pv.step + 1) + ")",
                   "value not available on the consumer's processor in time");
      }
    }
  }
  CostBreakdown base = compute_cost(dag, sched, CommModel::DS(), {params.g, 0});
  for (const SuperstepCost& sc : base.steps) {
    Weight lat = sc.comm > 0 ? params.L : 0;
    Weight c = latency == MaxBspLatency::kInside
                   ? std::max(sc.max_work, params.g * sc.comm + lat)
                   : std::max(sc.max_work, params.g * sc.comm) + lat;
    out.step_costs.push_back(c);
    out.cost += c;
  }
  return out;
}

BspSchedule convert_spd_to_bsp(const Dag& dag, const TimedSchedule& ts,
                               Time g) {
  if (g < 1) throw DomainError("conversion needs g >= 1");
  if (ts.assign.size() != dag.size()) {
    throw DomainError("timed schedule does not match the DAG");
  }
  BspSchedule out;
  out.procs = ts.procs;
  out.assign.resize(dag.size());
  StepId max_step = 0;
  for (NodeId v = 0; v < dag.size(); ++v) {
    for (const TimedPlacement& pl : ts.assign[v]) {
      Time f = finish(dag, v, pl);
      if (f < 1) throw DomainError("timed schedule starts before time 1");
      auto s = static_cast<StepId>((f + g - 1) / g - 1);
      out.assign[v].push_back({pl.proc, s});
      max_step = std::max(max_step, s);
    }
  }
  for (const TimedComm& c : ts.comms) {
    auto s = static_cast<StepId>(c.start / g);
    out.comms.push_back({c.node, c.from, c.to, s});
    max_step = std::max(max_step, s);
  }
  out.steps = max_step + 1;
  out.canonicalize();
  return out;
}

}  // namespace bspsched

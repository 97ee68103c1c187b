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

#include "bspsched/comm_sched.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "bspsched/error.h"

namespace bspsched {
namespace {

using Plan = std::vector<CommStep>;

// Per-(step, processor) load increments of one plan.
struct Contribution {
  StepId step;
  ProcId proc;
  Weight sent;
  Weight rec;
};

std::vector<Contribution> contributions(const Dag& dag, const Plan& plan,
                                        bool broadcast) {
  std::map<std::pair<StepId, ProcId>, std::pair<Weight, Weight>> acc;
  std::set<std::pair<StepId, ProcId>> senders;
  for (const CommStep& c : plan) {
    Weight w = dag.comm(c.node);
    if (!broadcast || senders.insert({c.step, c.from}).second) {
      acc[{c.step, c.from}].first += w;
    }
    acc[{c.step, c.to}].second += w;
  }
  std::vector<Contribution> out;
  for (const auto& [key, val] : acc) {
    out.push_back({key.first, key.second, val.first, val.second});
  }
  return out;
}

// All minimal ways of delivering the value of u to its targets.
std::vector<Plan> value_plans(const CsInstance& inst, NodeId u,
                              const std::map<ProcId, StepId>& deadline,
                              bool free) {
  const ProcId home = inst.pi[u];
  const StepId ready = inst.tau[u];
  std::vector<Plan> plans;
  if (!free) {
    std::vector<std::pair<ProcId, StepId>> targets(deadline.begin(), deadline.end());
    Plan current;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == targets.size()) {
        plans.push_back(current);
        return;
      }
      for (StepId s = ready; s < targets[i].second; ++s) {
        current.push_back({u, home, targets[i].first, s});
        rec(i + 1);
        current.pop_back();
      }
    };
    rec(0);
    return plans;
  }
  // Each other processor either never gets the value or receives it once
  // from some holder; the holder must have it before that superstep.
  std::vector<ProcId> others;
  for (ProcId q = 0; q < inst.procs; ++q) {
    if (q != home) others.push_back(q);
  }
  struct Choice {
    bool receives = false;
    ProcId from = 0;
    StepId step = 0;
  };
  std::vector<Choice> choice(inst.procs);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == others.size()) {
      // Availability: home from `ready`, receivers from step + 1.
      auto avail = [&](ProcId q) -> std::int64_t {
        if (q == home) return ready;
        return choice[q].receives ? choice[q].step + 1 : -1;
      };
      Plan plan;
      std::vector<bool> forwards(inst.procs, false);
      for (ProcId q : others) {
        if (!choice[q].receives) continue;
        std::int64_t a = avail(choice[q].from);
        if (a < 0 || a > static_cast<std::int64_t>(choice[q].step)) return;
        forwards[choice[q].from] = true;
        plan.push_back({u, choice[q].from, q, choice[q].step});
      }
      for (ProcId q : others) {
        if (choice[q].receives && !deadline.count(q) && !forwards[q]) return;
      }
      std::sort(plan.begin(), plan.end());
      plans.push_back(std::move(plan));
      return;
    }
    ProcId q = others[i];
    auto it = deadline.find(q);
    if (it == deadline.end()) {
      choice[q].receives = false;
      rec(i + 1);
    }
    StepId limit = it == deadline.end() ? inst.steps : it->second;
    for (ProcId from = 0; from < inst.procs; ++from) {
      if (from == q) continue;
      for (StepId s = ready; s < limit; ++s) {
        choice[q] = {true, from, s};
        rec(i + 1);
      }
    }
    choice[q].receives = false;
  };
  rec(0);
  return plans;
}

}  // namespace

void validate_cs_instance(const CsInstance& inst) {
  const Dag& dag = inst.dag;
  if (inst.pi.size() != dag.size() || inst.tau.size() != dag.size()) {
    throw DomainError("assignment does not cover the DAG");
  }
  for (NodeId v = 0; v < dag.size(); ++v) {
    if (inst.pi[v] >= inst.procs || inst.tau[v] >= inst.steps) {
      throw DomainError("assignment index out of range");
    }
  }
  for (const Edge& e : dag.edges()) {
    bool same = inst.pi[e.from] == inst.pi[e.to];
    if (same ? inst.tau[e.from] > inst.tau[e.to]
             : inst.tau[e.from] >= inst.tau[e.to]) {
      throw DomainError("no valid communication schedule: edge " +
                        std::to_string(e.from + 1) + "->" +
                        std::to_string(e.to + 1));
    }
  }
}

CsInstance make_cs_instance(const Dag& dag, const BspSchedule& sched) {
  if (sched.assign.size() != dag.size()) {
    throw DomainError("schedule does not match the DAG");
  }
  CsInstance inst{dag, sched.procs, sched.steps, {}, {}};
  for (const auto& copies : sched.assign) {
    if (copies.size() != 1) {
      throw DomainError("communication scheduling needs exactly one copy per node");
    }
    inst.pi.push_back(copies.front().proc);
    inst.tau.push_back(copies.front().step);
  }
  validate_cs_instance(inst);
  return inst;
}

std::vector<Delivery> deliveries(const CsInstance& inst) {
  std::map<std::pair<NodeId, ProcId>, StepId> need;
  for (const Edge& e : inst.dag.edges()) {
    ProcId to = inst.pi[e.to];
    if (to == inst.pi[e.from]) continue;
    auto [it, inserted] = need.insert({{e.from, to}, inst.tau[e.to]});
    if (!inserted) it->second = std::min(it->second, inst.tau[e.to]);
  }
  std::vector<Delivery> out;
  for (const auto& [key, s] : need) out.push_back({key.first, key.second, s});
  return out;
}

std::vector<CommStep> cs_eager(const CsInstance& inst) {
  validate_cs_instance(inst);
  std::vector<CommStep> out;
  for (const Delivery& d : deliveries(inst)) {
    out.push_back({d.node, inst.pi[d.node], d.to, inst.tau[d.node]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CommStep> cs_lazy(const CsInstance& inst) {
  validate_cs_instance(inst);
  std::vector<CommStep> out;
  for (const Delivery& d : deliveries(inst)) {
    out.push_back({d.node, inst.pi[d.node], d.to, d.deadline - 1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CommStep> cs_greedy_p2(const CsInstance& inst) {
  if (inst.procs != 2) throw DomainError("the greedy scheduler needs P = 2");
  if (!inst.dag.unit_comm()) {
    throw DomainError("the greedy scheduler needs unit communication weights");
  }
  validate_cs_instance(inst);
  std::vector<Delivery> pending = deliveries(inst);
  std::vector<bool> sent(pending.size(), false);
  std::vector<CommStep> out;
  for (StepId s = 0; s < inst.steps; ++s) {
    // Lambda lists per direction, ordered by deadline then node index.
    std::vector<std::size_t> lists[2];
    std::size_t urgent[2] = {0, 0};
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const Delivery& d = pending[i];
      if (sent[i] || inst.tau[d.node] > s || d.deadline <= s) continue;
      lists[d.to].push_back(i);
      if (d.deadline == s + 1) ++urgent[d.to];
    }
    std::size_t h = std::max(urgent[0], urgent[1]);
    for (auto& list : lists) {
      std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(pending[a].deadline, pending[a].node) <
               std::tie(pending[b].deadline, pending[b].node);
      });
      for (std::size_t k = 0; k < std::min(h, list.size()); ++k) {
        const Delivery& d = pending[list[k]];
        sent[list[k]] = true;
        out.push_back({d.node, inst.pi[d.node], d.to, s});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Weight cs_comm_units(const CsInstance& inst, const std::vector<CommStep>& comms,
                     CommModel model) {
  return compute_cost(inst.dag, cs_schedule(inst, comms), model, {1, 0})
      .comm_total;
}

BspSchedule cs_schedule(const CsInstance& inst, std::vector<CommStep> comms) {
  return BspSchedule::from_assignment(inst.pi, inst.tau, std::move(comms),
                                      inst.procs, inst.steps);
}

CsResult cs_bruteforce(const CsInstance& inst, CommModel model,
                       const CsOptions& options) {
  validate_cs_instance(inst);
  std::vector<Delivery> all = deliveries(inst);
  if (all.size() > options.max_deliveries) {
    throw BudgetExceeded("communication search has " +
                         std::to_string(all.size()) + " deliveries, limit " +
                         std::to_string(options.max_deliveries));
  }
  std::map<NodeId, std::map<ProcId, StepId>> targets;
  for (const Delivery& d : all) targets[d.node][d.to] = d.deadline;

  struct Item {
    std::vector<Plan> plans;
    std::vector<std::vector<Contribution>> contrib;
  };
  std::vector<Item> items;
  for (const auto& [u, deadline] : targets) {
    Item item;
    item.plans = value_plans(inst, u, deadline, model.free());
    for (const Plan& plan : item.plans) {
      item.contrib.push_back(contributions(inst.dag, plan, model.broadcast()));
    }
    items.push_back(std::move(item));
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.plans.size() < b.plans.size();
  });

  const Weight g = options.params.g;
  const Weight L = options.count_latency ? options.params.L : 0;
  auto objective = [&](Weight units, Weight used) {
    return std::pair<Weight, Weight>{g * units + L * used, units};
  };

  CsResult best;
  {
    best.comms = cs_eager(inst);
    CostBreakdown cb = compute_cost(inst.dag, cs_schedule(inst, best.comms),
                                    model, options.params);
    best.comm_units = cb.comm_total;
    best.cost = g * cb.comm_total + L * cb.latency_count;
  }
  std::pair<Weight, Weight> best_obj = {best.cost, best.comm_units};

  std::vector<std::vector<Weight>> sent(inst.steps, std::vector<Weight>(inst.procs, 0));
  std::vector<std::vector<Weight>> rec = sent;
  std::vector<Weight> comm(inst.steps, 0);
  Weight units = 0, used = 0;
  std::vector<std::size_t> chosen(items.size());

  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (options.prune && objective(units, used) >= best_obj) return;
    if (i == items.size()) {
      if (objective(units, used) < best_obj) {
        best_obj = objective(units, used);
        best.comms.clear();
        for (std::size_t k = 0; k < items.size(); ++k) {
          const Plan& plan = items[k].plans[chosen[k]];
          best.comms.insert(best.comms.end(), plan.begin(), plan.end());
        }
        std::sort(best.comms.begin(), best.comms.end());
      }
      return;
    }
    for (std::size_t j = 0; j < items[i].plans.size(); ++j) {
      const auto& contrib = items[i].contrib[j];
      std::vector<Weight> saved_comm;
      for (const Contribution& c : contrib) saved_comm.push_back(comm[c.step]);
      Weight saved_units = units, saved_used = used;
      for (const Contribution& c : contrib) {
        sent[c.step][c.proc] += c.sent;
        rec[c.step][c.proc] += c.rec;
        Weight before = comm[c.step];
        comm[c.step] = std::max({comm[c.step], sent[c.step][c.proc], rec[c.step][c.proc]});
        units += comm[c.step] - before;
        if (before == 0 && comm[c.step] > 0) ++used;
      }
      chosen[i] = j;
      search(i + 1);
      for (std::size_t k = 0; k < contrib.size(); ++k) {
        const Contribution& c = contrib[k];
        sent[c.step][c.proc] -= c.sent;
        rec[c.step][c.proc] -= c.rec;
      }
      for (std::size_t k = contrib.size(); k-- > 0;) comm[contrib[k].step] = saved_comm[k];
      units = saved_units;
      used = saved_used;
    }
  };
  search(0);
  best.cost = best_obj.first;
  best.comm_units = best_obj.second;
  return best;
}

}  // namespace bspsched

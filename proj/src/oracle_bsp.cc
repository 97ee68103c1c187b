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

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "bspsched/error.h"
#include "bspsched/oracle.h"

namespace bspsched {
namespace {

using Mask = std::uint64_t;
constexpr ProcId kMaxProcs = 8;

struct ProcState {
  Mask comp = 0;
  Mask pres = 0;
  friend bool operator==(const ProcState&, const ProcState&) = default;
  friend auto operator<=>(const ProcState&, const ProcState&) = default;
};
using State = std::vector<ProcState>;

struct Key {
  std::array<ProcState, kMaxProcs> procs{};
  StepId left = 0;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = (k.left + 1) * 0x9e3779b97f4a7c15ULL;
    for (const ProcState& p : k.procs) {
      h = (h ^ p.comp) * 0xff51afd7ed558ccdULL;
      h ^= h >> 29;
      h = (h ^ p.pres) * 0xc4ceb9fe1a85ec53ULL;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
  }
};

Key make_key(const State& st, StepId left) {
  Key k;
  std::copy(st.begin(), st.end(), k.procs.begin());
  std::sort(k.procs.begin(), k.procs.begin() + st.size());
  k.left = left;
  return k;
}

struct Candidate {
  NodeId node;
  ProcId to;
  std::vector<ProcId> senders;
};

struct StepRecord {
  std::vector<Mask> compute;
  std::vector<CommStep> comms;
};

class BspSearch {
 public:
  BspSearch(const Dag& dag, ProcId P, MachineParams params, CommModel model,
            bool dup, bool maxbsp, MaxBspLatency latency,
            const OracleBudget& budget)
      : dag_(dag),
        n_(dag.size()),
        P_(P),
        params_(params),
        model_(model),
        dup_(dup),
        maxbsp_(maxbsp),
        latency_(latency),
        budget_(budget),
        full_(n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1),
        pred_(n_, 0),
        succ_(n_, 0) {
    for (const Edge& e : dag.edges()) {
      pred_[e.to] |= Mask{1} << e.from;
      succ_[e.from] |= Mask{1} << e.to;
    }
  }

  BspOracleResult run() {
    StepId max_steps = budget_.max_steps == 0
                           ? static_cast<StepId>(n_)
                           : budget_.max_steps;
    State init(P_);
    Weight bound = lower_bound(0);
    const Weight ub = dag_.total_work();
    for (; bound <= ub; ++bound) {
      path_.clear();
      if (dfs(init, max_steps, bound)) break;
    }
    if (bound > ub) throw BudgetExceeded("superstep limit too small");
    BspOracleResult out;
    out.opt = bound;
    out.search_nodes = nodes_;
    out.schedule.procs = P_;
    out.schedule.steps = static_cast<StepId>(path_.size());
    out.schedule.assign.assign(n_, {});
    for (StepId s = 0; s < path_.size(); ++s) {
      for (ProcId p = 0; p < P_; ++p) {
        for (NodeId v = 0; v < n_; ++v) {
          if (path_[s].compute[p] >> v & 1) {
            out.schedule.assign[v].push_back({p, s});
          }
        }
      }
      for (CommStep c : path_[s].comms) {
        c.step = s;
        out.schedule.comms.push_back(c);
      }
    }
    out.schedule.canonicalize();
    verify(out);
    return out;
  }

 private:
  using Leaf = std::function<bool(const std::vector<Mask>&, Weight)>;
  using CommLeaf = std::function<bool(const std::vector<CommStep>&, Weight,
                                      const State&)>;

  void tick() {
    if (++nodes_ > budget_.max_search_nodes) {
      throw BudgetExceeded("oracle search node budget exceeded");
    }
  }

  Weight mask_work(Mask m) const {
    Weight w = 0;
    for (NodeId v = 0; v < n_; ++v) {
      if (m >> v & 1) w += dag_.work(v);
    }
    return w;
  }

  Weight lower_bound(Mask done) const {
    Mask rem = full_ & ~done;
    if (rem == 0) return 0;
    Weight total = mask_work(rem);
    Weight lb = (total + P_ - 1) / P_;
    for (NodeId v = 0; v < n_; ++v) {
      if (rem >> v & 1) lb = std::max(lb, dag_.bottom_levels()[v]);
    }
    return lb;
  }

  static Mask done_of(const State& st) {
    Mask m = 0;
    for (const ProcState& p : st) m |= p.comp;
    return m;
  }

  Weight step_cost(Weight work, Weight h) const {
    if (!maxbsp_) return work + params_.g * h + (h > 0 ? params_.L : 0);
    if (h == 0) return work;
    if (latency_ == MaxBspLatency::kInside) {
      return std::max(work, params_.g * h + params_.L);
    }
    return std::max(work, params_.g * h) + params_.L;
  }

  // Closed computation sets per processor; identical processors take
  // non-increasing sets.
  bool compute_rec(const State& st, Mask taken, ProcId p, std::size_t i,
                   Weight cap, std::vector<Mask>& x, std::vector<Weight>& work,
                   const Leaf& leaf) {
    if (p == P_) {
      tick();
      return leaf(x, *std::max_element(work.begin(), work.end()));
    }
    if (i == n_) {
      for (ProcId q = p; q-- > 0;) {
        if (st[q] == st[p]) {
          if (x[p] > x[q]) return false;
          break;
        }
      }
      return compute_rec(st, taken | x[p], p + 1, 0, cap, x, work, leaf);
    }
    NodeId v = dag_.topological_order()[i];
    Mask bit = Mask{1} << v;
    bool blocked = dup_ ? (st[p].comp & bit) != 0 : (taken & bit) != 0;
    if (!blocked && (pred_[v] & ~(st[p].pres | x[p])) == 0 &&
        work[p] + dag_.work(v) <= cap) {
      x[p] |= bit;
      work[p] += dag_.work(v);
      bool ok = compute_rec(st, taken, p, i + 1, cap, x, work, leaf);
      x[p] &= ~bit;
      work[p] -= dag_.work(v);
      if (ok) return true;
    }
    return compute_rec(st, taken, p, i + 1, cap, x, work, leaf);
  }

  // Values worth moving: senders hold them in `src`, the receiver lacks them
  // in `dst` and some successor is still to be computed.
  std::vector<Candidate> candidates(const State& src, const State& dst) const {
    Mask done = done_of(dst);
    Mask everywhere = full_;
    for (const ProcState& p : dst) everywhere &= p.comp;
    std::vector<Candidate> out;
    for (NodeId v = 0; v < n_; ++v) {
      Mask bit = Mask{1} << v;
      for (ProcId to = 0; to < P_; ++to) {
        if (dst[to].pres & bit) continue;
        Mask open;
        if (!dup_) {
          open = succ_[v] & ~done;
        } else if (model_.free()) {
          open = succ_[v] & ~everywhere;
        } else {
          open = succ_[v] & ~dst[to].comp;
        }
        if (open == 0) continue;
        Candidate c{v, to, {}};
        for (ProcId q = 0; q < P_; ++q) {
          if (q == to) continue;
          Mask held = model_.free() ? src[q].pres : src[q].comp;
          if (held & bit) c.senders.push_back(q);
        }
        if (!c.senders.empty()) out.push_back(std::move(c));
      }
    }
    return out;
  }

  struct CommWork {
    std::vector<Weight> sent, rec;
    std::vector<int> casting;  // (node, sender) pairs already broadcasting
    std::vector<char> chosen;
    std::vector<CommStep> comms;
  };

  Weight send_cost(const CommWork& cw, NodeId v, ProcId s) const {
    if (model_.broadcast() && cw.casting[v * P_ + s] > 0) return 0;
    return dag_.comm(v);
  }

  bool fits(const CommWork& cw, const Candidate& c, ProcId s, Weight cap) const {
    return cw.sent[s] + send_cost(cw, c.node, s) <= cap &&
           cw.rec[c.to] + dag_.comm(c.node) <= cap;
  }

  // Communication sets that are maximal under capacity `cap` and have an
  // h-relation of at least `hmin`.
  bool comm_rec(const std::vector<Candidate>& cands, std::size_t i, Weight cap,
                Weight hmin, CommWork& cw, const CommLeaf& leaf,
                const State& base) {
    if (i == cands.size()) {
      Weight h = 0;
      for (ProcId p = 0; p < P_; ++p) h = std::max({h, cw.sent[p], cw.rec[p]});
      if (h < hmin) return false;
      for (std::size_t j = 0; j < cands.size(); ++j) {
        if (cw.chosen[j]) continue;
        for (ProcId s : cands[j].senders) {
          if (fits(cw, cands[j], s, cap)) return false;
        }
      }
      tick();
      State next = base;
      for (const CommStep& c : cw.comms) next[c.to].pres |= Mask{1} << c.node;
      return leaf(cw.comms, h, next);
    }
    const Candidate& c = cands[i];
    for (ProcId s : c.senders) {
      if (!fits(cw, c, s, cap)) continue;
      Weight add = send_cost(cw, c.node, s);
      cw.sent[s] += add;
      cw.rec[c.to] += dag_.comm(c.node);
      ++cw.casting[c.node * P_ + s];
      cw.chosen[i] = 1;
      cw.comms.push_back({c.node, s, c.to, 0});
      bool ok = comm_rec(cands, i + 1, cap, hmin, cw, leaf, base);
      cw.comms.pop_back();
      cw.chosen[i] = 0;
      --cw.casting[c.node * P_ + s];
      cw.rec[c.to] -= dag_.comm(c.node);
      cw.sent[s] -= add;
      if (ok) return true;
    }
    return comm_rec(cands, i + 1, cap, hmin, cw, leaf, base);
  }

  bool dfs(const State& st, StepId left, Weight budget) {
    tick();
    Mask done = done_of(st);
    if (left == 0) return false;
    if (lower_bound(done) > budget) return false;
    Key key = make_key(st, left);
    if (auto it = failed_.find(key); it != failed_.end() && budget <= it->second) {
      return false;
    }
    bool ok = superstep(st, left, budget);
    if (!ok) {
      Weight& f = failed_[key];
      f = std::max(f, budget);
    }
    return ok;
  }

  bool superstep(const State& st, StepId left, Weight budget) {
    Mask done = done_of(st);
    auto leaf = [&](const std::vector<Mask>& x, Weight work) -> bool {
      State after = st;
      Mask done2 = done;
      for (ProcId p = 0; p < P_; ++p) {
        after[p].comp |= x[p];
        after[p].pres |= x[p];
        done2 |= x[p];
      }
      if (done2 == full_) {
        if (work > budget) return false;
        path_.push_back({x, {}});
        return true;
      }
      if (left < 2) return false;
      bool zero_work_ok = maxbsp_ || model_.free();
      if (work == 0 && !zero_work_ok) return false;
      Weight lb2 = lower_bound(done2);
      std::vector<Candidate> cands =
          candidates(maxbsp_ ? st : after, after);
      Weight htop = 0;
      for (const Candidate& c : cands) htop += dag_.comm(c.node);
      Weight hstart = (maxbsp_ && work > 0) ? 0 : 1;
      std::unordered_set<Key, KeyHash> seen;
      for (Weight h = hstart; h <= htop; ++h) {
        Weight c0 = step_cost(work, h);
        if (c0 + lb2 > budget) break;
        Weight hb = h;
        while (hb + 1 <= htop && step_cost(work, hb + 1) == c0) ++hb;
        CommWork cw{std::vector<Weight>(P_, 0), std::vector<Weight>(P_, 0),
                    std::vector<int>(n_ * P_, 0),
                    std::vector<char>(cands.size(), 0), {}};
        auto comm_leaf = [&](const std::vector<CommStep>& comms, Weight hh,
                             const State& next) -> bool {
          if (!seen.insert(make_key(next, left - 1)).second) return false;
          Weight c = step_cost(work, hh);
          path_.push_back({x, comms});
          if (dfs(next, left - 1, budget - c)) return true;
          path_.pop_back();
          return false;
        };
        if (comm_rec(cands, 0, hb, h, cw, comm_leaf, after)) return true;
        h = hb;
      }
      return false;
    };
    std::vector<Mask> x(P_, 0);
    std::vector<Weight> work(P_, 0);
    return compute_rec(st, done, 0, 0, budget, x, work, leaf);
  }

  void verify(const BspOracleResult& out) const {
    if (maxbsp_) {
      MaxBspReport r = check_maxbsp(dag_, out.schedule, params_, latency_, dup_);
      if (!r.report.valid || r.cost != out.opt) {
        throw std::logic_error("oracle produced an inconsistent maxBSP schedule: " +
                               r.report.to_string());
      }
      return;
    }
    ValidityReport r = check_validity(dag_, out.schedule, model_, dup_);
    Weight cost = compute_cost(dag_, out.schedule, model_, params_).cost;
    if (!r.valid || cost != out.opt) {
      throw std::logic_error("oracle produced an inconsistent schedule: " +
                             r.to_string());
    }
  }

  const Dag& dag_;
  const std::size_t n_;
  const ProcId P_;
  const MachineParams params_;
  const CommModel model_;
  const bool dup_;
  const bool maxbsp_;
  const MaxBspLatency latency_;
  const OracleBudget budget_;
  const Mask full_;
  std::vector<Mask> pred_, succ_;
  std::vector<StepRecord> path_;
  std::unordered_map<Key, Weight, KeyHash> failed_;
  std::uint64_t nodes_ = 0;
};

void check_budget(const Dag& dag, ProcId P, MachineParams params,
                  const OracleBudget& budget) {
  if (P == 0) throw DomainError("processor count must be positive");
  if (params.g < 0 || params.L < 0) throw DomainError("g and L must be >= 0");
  if (dag.size() > budget.max_nodes || dag.size() > 64) {
    throw BudgetExceeded("oracle: " + std::to_string(dag.size()) +
                         " nodes exceed the budget of " +
                         std::to_string(budget.max_nodes));
  }
  if (P > budget.max_procs || P > kMaxProcs) {
    throw BudgetExceeded("oracle: " + std::to_string(P) +
                         " processors exceed the budget of " +
                         std::to_string(budget.max_procs));
  }
}

}  // namespace

BspOracleResult brute_opt_bsp(const Dag& dag, ProcId P, MachineParams params,
                              CommModel model, const OracleBudget& budget,
                              bool duplication) {
  check_budget(dag, P, params, budget);
  return BspSearch(dag, P, params, model, duplication, false,
                   MaxBspLatency::kInside, budget)
      .run();
}

BspOracleResult brute_opt_maxbsp(const Dag& dag, ProcId P,
                                 MachineParams params,
                                 const OracleBudget& budget,
                                 MaxBspLatency latency, bool duplication) {
  check_budget(dag, P, params, budget);
  return BspSearch(dag, P, params, CommModel::DS(), duplication, true, latency,
                   budget)
      .run();
}

}  // namespace bspsched

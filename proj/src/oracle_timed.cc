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
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "bspsched/error.h"
#include "bspsched/oracle.h"

namespace bspsched {
namespace {

using Mask = std::uint64_t;
constexpr Time kInf = std::numeric_limits<Time>::max();

struct TState {
  std::vector<Mask> comp;     // per processor
  std::vector<NodeId> last;   // most recently started node per processor
  std::vector<Time> free_at;  // processor idle from this step on
  std::vector<Time> send_free, rec_free;
  std::vector<Time> avail;    // [p * n + v]: earliest start of a consumer
  Mask started = 0;
  Time makespan = 0;
};

struct KeyHash {
  std::size_t operator()(const std::vector<Time>& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (Time x : k) {
      h = (h ^ static_cast<std::uint64_t>(x)) * 0xff51afd7ed558ccdULL;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
  }
};

struct Start {
  NodeId node;
  ProcId proc;
  Time time;
};

class TimedSearch {
 public:
  TimedSearch(const Dag& dag, ProcId P, Time g, TimedModel model, bool dup,
              const OracleBudget& budget)
      : dag_(dag),
        n_(dag.size()),
        P_(P),
        g_(model == TimedModel::kClassical ||
                   model == TimedModel::kClassicalBarrier
               ? 0
               : g),
        model_(model),
        dup_(dup),
        budget_(budget),
        full_(n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1),
        pred_(n_, 0),
        succ_(n_, 0) {
    for (const Edge& e : dag.edges()) {
      pred_[e.to] |= Mask{1} << e.from;
      succ_[e.from] |= Mask{1} << e.to;
    }
  }

  TimedOracleResult run() {
    TState init;
    init.comp.assign(P_, 0);
    init.last.assign(P_, 0);
    init.free_at.assign(P_, 1);
    init.send_free.assign(P_, 1);
    init.rec_free.assign(P_, 1);
    init.avail.assign(P_ * n_, kInf);
    const Time horizon = budget_.max_time_horizon > 0
                             ? budget_.max_time_horizon
                             : dag_.total_work() * (1 + g_);
    Time bound = (dag_.total_work() + P_ - 1) / P_;
    for (Weight b : dag_.bottom_levels()) bound = std::max(bound, b);
    for (; bound <= horizon; ++bound) {
      starts_.clear();
      comms_.clear();
      if (dfs(init, 1, bound)) break;
    }
    if (bound > horizon) throw BudgetExceeded("oracle time horizon exceeded");
    TimedOracleResult out;
    out.opt = bound;
    out.search_nodes = nodes_;
    out.schedule.procs = P_;
    out.schedule.assign.assign(n_, {});
    for (const Start& s : starts_) {
      out.schedule.assign[s.node].push_back({s.proc, s.time});
    }
    out.schedule.comms = comms_;
    out.schedule.canonicalize();
    verify(out);
    return out;
  }

 private:
  void tick() {
    if (++nodes_ > budget_.max_search_nodes) {
      throw BudgetExceeded("oracle search node budget exceeded");
    }
  }

  bool comp_in_key() const {
    return dup_ || model_ == TimedModel::kClassicalBarrier ||
           model_ == TimedModel::kSpd;
  }

  std::vector<Time> proc_signature(const TState& st, ProcId p, Time t) const {
    std::vector<Time> sig;
    sig.reserve(n_ + 4);
    sig.push_back(comp_in_key() ? static_cast<Time>(st.comp[p]) : 0);
    sig.push_back(std::max<Time>(0, st.free_at[p] - t));
    sig.push_back(std::max<Time>(0, st.send_free[p] - t));
    sig.push_back(std::max<Time>(0, st.rec_free[p] - t));
    for (NodeId v = 0; v < n_; ++v) {
      Time a = st.avail[p * n_ + v];
      sig.push_back(a == kInf ? -1 : std::max<Time>(0, a - t));
    }
    return sig;
  }

  std::vector<Time> make_key(const TState& st, Time t) const {
    std::vector<std::vector<Time>> sigs;
    for (ProcId p = 0; p < P_; ++p) sigs.push_back(proc_signature(st, p, t));
    std::sort(sigs.begin(), sigs.end());
    std::vector<Time> key{static_cast<Time>(st.started)};
    for (const auto& s : sigs) key.insert(key.end(), s.begin(), s.end());
    return key;
  }

  bool dfs(const TState& st, Time t, Time bound) {
    tick();
    if (st.started == full_) return st.makespan <= bound;
    Time pending = 0;
    for (NodeId v = 0; v < n_; ++v) {
      if (st.started >> v & 1) continue;
      if (t + dag_.bottom_levels()[v] - 1 > bound) return false;
      pending += dag_.work(v);
    }
    for (ProcId p = 0; p < P_; ++p) {
      pending += std::max<Time>(0, st.free_at[p] - t);
    }
    if (pending > static_cast<Time>(P_) * (bound - t + 1)) return false;
    std::vector<Time> key = make_key(st, t);
    if (auto it = failed_.find(key);
        it != failed_.end() && bound - t <= it->second) {
      return false;
    }
    bool ok = step(st, t, bound, key);
    if (!ok) {
      auto [it, inserted] = failed_.emplace(key, bound - t);
      if (!inserted) it->second = std::max(it->second, bound - t);
    }
    return ok;
  }

  bool ready(const TState& st, NodeId v, ProcId p, Time t, Mask chosen) const {
    Mask bit = Mask{1} << v;
    if (dup_ ? (st.comp[p] & bit) != 0 : ((st.started | chosen) & bit) != 0) {
      return false;
    }
    for (NodeId u : dag_.preds(v)) {
      if (st.avail[p * n_ + u] > t) return false;
    }
    return true;
  }

  void apply_start(TState& st, NodeId v, ProcId p, Time t) const {
    Mask bit = Mask{1} << v;
    Time f = t + dag_.work(v) - 1;
    st.comp[p] |= bit;
    st.started |= bit;
    st.last[p] = v;
    st.free_at[p] = f + 1;
    st.makespan = std::max(st.makespan, f);
    for (ProcId q = 0; q < P_; ++q) {
      Time a;
      if (q == p || model_ == TimedModel::kClassical) {
        a = f + 1;
      } else if (model_ == TimedModel::kCommDelay) {
        a = f + g_ + 1;
      } else {
        continue;
      }
      Time& slot = st.avail[q * n_ + v];
      slot = std::min(slot, a);
    }
  }

  bool step(const TState& st, Time t, Time bound,
            const std::vector<Time>& key) {
    std::vector<std::vector<Time>> sigs;
    for (ProcId p = 0; p < P_; ++p) sigs.push_back(proc_signature(st, p, t));
    std::vector<int> choice(P_, -1);
    std::function<bool(ProcId, Mask)> choose = [&](ProcId p, Mask chosen) {
      if (p == P_) return after_starts(st, t, bound, key, choice);
      const int idle = static_cast<int>(n_);
      int floor_code = -1;
      for (ProcId q = p; q-- > 0;) {
        if (sigs[q] == sigs[p]) {
          floor_code = choice[q] < 0 ? idle : choice[q];
          break;
        }
      }
      if (st.free_at[p] <= t) {
        for (NodeId v = 0; v < n_; ++v) {
          if (static_cast<int>(v) < floor_code) continue;
          if (t + dag_.bottom_levels()[v] - 1 > bound) continue;
          if (!ready(st, v, p, t, chosen)) continue;
          choice[p] = static_cast<int>(v);
          if (choose(p + 1, chosen | Mask{1} << v)) return true;
        }
      }
      choice[p] = -1;
      if (floor_code > idle) return false;
      return choose(p + 1, chosen);
    };
    return choose(0, 0);
  }

  bool after_starts(const TState& st, Time t, Time bound,
                    const std::vector<Time>& key,
                    const std::vector<int>& choice) {
    TState next = st;
    std::size_t mark = starts_.size();
    for (ProcId p = 0; p < P_; ++p) {
      if (choice[p] < 0) continue;
      NodeId v = static_cast<NodeId>(choice[p]);
      if (t + dag_.work(v) - 1 > bound) return false;
      apply_start(next, v, p, t);
      starts_.push_back({v, p, t});
    }
    bool ok = model_ == TimedModel::kSpd ? transfers(next, t, bound, key, 0, 0)
                                         : advance(next, t, bound, key);
    if (!ok) starts_.resize(mark);
    return ok;
  }

  bool finished_on(const TState& st, NodeId u, ProcId p, Time t) const {
    if (!(st.comp[p] >> u & 1)) return false;
    return !(st.last[p] == u && st.free_at[p] - 1 > t);
  }

  // Single-port transfers starting at t, at most one per sender and
  // receiver port.
  bool transfers(TState& st, Time t, Time bound, const std::vector<Time>& key,
                 ProcId from, Mask used_to) {
    if (from == P_) return advance(st, t, bound, key);
    if (st.send_free[from] <= t) {
      for (NodeId u = 0; u < n_; ++u) {
        if (!finished_on(st, u, from, t)) continue;
        for (ProcId to = 0; to < P_; ++to) {
          if (to == from || (used_to >> to & 1) || st.rec_free[to] > t) continue;
          if (st.avail[to * n_ + u] != kInf) continue;
          Mask open = succ_[u] & ~st.comp[to];
          if (!dup_) open &= ~st.started;
          if (open == 0) continue;
          TState next = st;
          next.send_free[from] = t + g_;
          next.rec_free[to] = t + g_;
          next.avail[to * n_ + u] = t + g_ + 1;
          comms_.push_back({u, from, to, t});
          if (transfers(next, t, bound, key, from + 1, used_to | Mask{1} << to)) {
            return true;
          }
          comms_.pop_back();
        }
      }
    }
    return transfers(st, t, bound, key, from + 1, used_to);
  }

  bool advance(TState& st, Time t, Time bound, const std::vector<Time>& key) {
    if (model_ == TimedModel::kClassicalBarrier) {
      bool clean = true;
      for (ProcId q = 0; q < P_; ++q) clean &= st.free_at[q] <= t + 1;
      if (clean) {
        for (ProcId q = 0; q < P_; ++q) {
          for (NodeId v = 0; v < n_; ++v) {
            if (!(st.comp[q] >> v & 1)) continue;
            for (ProcId p = 0; p < P_; ++p) {
              Time& slot = st.avail[p * n_ + v];
              slot = std::min(slot, t + 1);
            }
          }
        }
      }
    }
    if (st.started != full_ && make_key(st, t + 1) == key) return false;
    return dfs(st, t + 1, bound);
  }

  void verify(const TimedOracleResult& out) const {
    TimedReport r;
    switch (model_) {
      case TimedModel::kClassical:
        r = check_classical(dag_, out.schedule, ClassicalMode::kPlain, dup_);
        break;
      case TimedModel::kClassicalBarrier:
        r = check_classical(dag_, out.schedule, ClassicalMode::kBarrierSync,
                            dup_);
        break;
      case TimedModel::kCommDelay:
        r = check_commdelay(dag_, out.schedule, g_, dup_);
        break;
      case TimedModel::kSpd:
        r = check_spd(dag_, out.schedule, g_, dup_);
        break;
    }
    if (!r.report.valid || r.makespan != out.opt) {
      throw std::logic_error("oracle produced an inconsistent timed schedule: " +
                             r.report.to_string());
    }
  }

  const Dag& dag_;
  const std::size_t n_;
  const ProcId P_;
  const Time g_;
  const TimedModel model_;
  const bool dup_;
  const OracleBudget budget_;
  const Mask full_;
  std::vector<Mask> pred_, succ_;
  std::vector<Start> starts_;
  std::vector<TimedComm> comms_;
  std::unordered_map<std::vector<Time>, Time, KeyHash> failed_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

TimedOracleResult brute_opt_timed(const Dag& dag, ProcId P, Time g,
                                  TimedModel model, const OracleBudget& budget,
                                  bool duplication) {
  if (P == 0) throw DomainError("processor count must be positive");
  if (g < 0) throw DomainError("g must be >= 0");
  if (dag.size() > budget.max_nodes || dag.size() > 64) {
    throw BudgetExceeded("oracle: " + std::to_string(dag.size()) +
                         " nodes exceed the budget of " +
                         std::to_string(budget.max_nodes));
  }
  if (P > budget.max_procs) {
    throw BudgetExceeded("oracle: " + std::to_string(P) +
                         " processors exceed the budget of " +
                         std::to_string(budget.max_procs));
  }
  if (model == TimedModel::kSpd) {
    if (g < 1) throw DomainError("single-port search needs g >= 1");
    if (dag.size() > budget.spd_max_nodes || g > budget.spd_max_g) {
      throw BudgetExceeded("oracle: single-port instance exceeds the budget");
    }
  }
  return TimedSearch(dag, P, g, model, duplication, budget).run();
}

}  // namespace bspsched

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

#include "bspsched/chain_solver.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "bspsched/error.h"

namespace bspsched {
namespace {

constexpr Weight kNoLimit = std::numeric_limits<Weight>::max();

void require_unit(const Dag& dag) {
  if (!dag.unit_work() || !dag.unit_comm()) {
    throw DomainError("chain solver needs unit work and communication weights");
  }
}

// Per (superstep, processor) counters, row-major by superstep.
using Grid = std::vector<Weight>;

// One way to place a chain: a list of (processor, superstep) per node.
using Placing = std::vector<Placement>;

struct Skeleton {
  std::vector<ProcId> procs;  // processor of each segment
  std::vector<StepId> cuts;   // communication phase carrying each cut
};

struct Option {
  std::vector<std::pair<std::size_t, Weight>> add;  // cell, load
  Placing placing;
};

struct Found {
  Weight cost = kNoLimit;
  BspSchedule schedule;
};

// Exact search for a fixed superstep count. `head_min[p]` is the first
// superstep in which a chain head may run on p.
class ChainSearch {
 public:
  ChainSearch(const std::vector<std::vector<NodeId>>& chains,
              std::size_t num_nodes, ProcId P, MachineParams params,
              std::uint64_t max_cells, std::uint64_t& cells, Found& best)
      : chains_(chains),
        num_nodes_(num_nodes),
        P_(P),
        params_(params),
        max_cells_(max_cells),
        cells_(cells),
        best_(best) {
    order_.resize(chains.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a,
                                                       std::size_t b) {
      return chains_[a].size() > chains_[b].size();
    });
    for (const auto& c : chains) work_ += static_cast<Weight>(c.size());
  }

  void solve(StepId S, std::vector<StepId> head_min, Grid sent, Grid rec,
             std::vector<CommStep> fixed_comms,
             std::vector<std::pair<NodeId, Placement>> fixed_nodes,
             bool canonical, bool nonempty_boundaries, Weight extra_work) {
    S_ = S;
    head_min_ = std::move(head_min);
    fixed_comms_ = std::move(fixed_comms);
    fixed_nodes_ = std::move(fixed_nodes);
    canonical_ = canonical;
    nonempty_ = nonempty_boundaries;
    extra_work_ = extra_work;
    skeletons_.assign(chains_.size(), std::nullopt);
    Weight longest = 0;
    for (const auto& c : chains_) longest = std::max<Weight>(longest, c.size());
    work_lb_ = extra_work_ + std::max<Weight>((work_ + P_ - 1) / P_, longest);
    configure(0, canonical ? 0 : P_, sent, rec);
  }

 private:
  Weight comm_cost(const Grid& sent, const Grid& rec, bool* all_nonempty) const {
    Weight c = 0;
    if (all_nonempty) *all_nonempty = true;
    for (StepId s = 0; s + 1 < S_; ++s) {
      Weight h = 0;
      for (ProcId p = 0; p < P_; ++p) {
        h = std::max({h, sent[s * P_ + p], rec[s * P_ + p]});
      }
      if (h > 0) {
        c += params_.g * h + params_.L;
      } else if (all_nonempty) {
        *all_nonempty = false;
      }
    }
    return c;
  }

  Weight limit() const { return best_.cost; }

  void configure(std::size_t i, ProcId used, Grid& sent, Grid& rec) {
    if (comm_cost(sent, rec, nullptr) + work_lb_ >= limit()) return;
    if (i == order_.size()) {
      bool nonempty = true;
      Weight c = comm_cost(sent, rec, &nonempty);
      if (nonempty_ && !nonempty) return;
      evaluate(c);
      return;
    }
    configure(i + 1, used, sent, rec);
    const std::size_t len = chains_[order_[i]].size();
    if (S_ < 2 || len < 2) return;
    Skeleton sk;
    // Segment procs and cut phases, built left to right.
    std::function<void(ProcId, StepId)> extend = [&](ProcId used_now,
                                                     StepId next_cut) {
      if (!sk.cuts.empty()) {
        skeletons_[order_[i]] = sk;
        configure(i + 1, used_now, sent, rec);
        skeletons_[order_[i]].reset();
      }
      if (sk.procs.size() >= len) return;
      for (StepId c = next_cut; c + 1 < S_; ++c) {
        if (sk.cuts.empty() && c < head_min_[sk.procs[0]]) continue;
        ProcId from = sk.procs.back();
        ProcId top = canonical_ ? std::min<ProcId>(used_now + 1, P_) : P_;
        for (ProcId to = 0; to < top; ++to) {
          if (to == from) continue;
          ProcId used_next = std::max<ProcId>(used_now, to + 1);
          ++sent[c * P_ + from];
          ++rec[c * P_ + to];
          sk.procs.push_back(to);
          sk.cuts.push_back(c);
          extend(used_next, c + 1);
          sk.cuts.pop_back();
          sk.procs.pop_back();
          --rec[c * P_ + to];
          --sent[c * P_ + from];
        }
      }
    };
    ProcId top = canonical_ ? std::min<ProcId>(used + 1, P_) : P_;
    for (ProcId p0 = 0; p0 < top; ++p0) {
      if (head_min_[p0] >= S_) continue;
      sk.procs = {p0};
      sk.cuts.clear();
      extend(std::max<ProcId>(used, p0 + 1), 0);
    }
  }

  // Compositions of `len` nodes over supersteps lo..hi on processor p.
  void spread(std::size_t len, ProcId p, StepId lo, StepId hi, Option& cur,
              const std::function<void(Option&)>& next) const {
    for (std::size_t k = len;; --k) {
      if (lo == hi && k != len) break;
      for (std::size_t j = 0; j < k; ++j) cur.placing.push_back({p, lo});
      if (k > 0) cur.add.push_back({lo * P_ + p, static_cast<Weight>(k)});
      if (k == len) {
        next(cur);
      } else {
        spread(len - k, p, lo + 1, hi, cur, next);
      }
      if (k > 0) cur.add.pop_back();
      cur.placing.resize(cur.placing.size() - k);
      if (k == 0) break;
    }
  }

  std::vector<Option> options_for(std::size_t c) const {
    const std::vector<NodeId>& chain = chains_[c];
    std::vector<Option> raw;
    Option cur;
    auto emit = [&](Option& o) { raw.push_back(o); };
    if (!skeletons_[c]) {
      for (ProcId p = 0; p < P_; ++p) {
        if (head_min_[p] >= S_) continue;
        spread(chain.size(), p, head_min_[p], S_ - 1, cur, emit);
      }
    } else {
      const Skeleton& sk = *skeletons_[c];
      const std::size_t segs = sk.procs.size();
      // Segment lengths (each at least 1), then spreads.
      std::vector<std::size_t> lens(segs, 1);
      std::function<void(std::size_t, std::size_t)> split =
          [&](std::size_t seg, std::size_t left) {
            if (seg + 1 == segs) {
              lens[seg] = left;
              std::function<void(std::size_t, std::size_t, Option&)> place =
                  [&](std::size_t s, std::size_t at, Option& o) {
                    if (s == segs) {
                      emit(o);
                      return;
                    }
                    StepId lo = s == 0 ? head_min_[sk.procs[0]] : sk.cuts[s - 1] + 1;
                    StepId hi = s + 1 == segs ? S_ - 1 : sk.cuts[s];
                    spread(lens[s], sk.procs[s], lo, hi, o,
                           [&](Option& o2) { place(s + 1, at + lens[s], o2); });
                  };
              place(0, 0, cur);
              return;
            }
            for (std::size_t l = 1; l + (segs - seg - 1) <= left; ++l) {
              lens[seg] = l;
              split(seg + 1, left - l);
            }
          };
      split(0, chain.size());
    }
    // Options with the same load contribution are interchangeable.
    std::map<std::vector<std::pair<std::size_t, Weight>>, std::size_t> seen;
    std::vector<Option> out;
    for (Option& o : raw) {
      std::map<std::size_t, Weight> merged;
      for (auto [cell, w] : o.add) merged[cell] += w;
      std::vector<std::pair<std::size_t, Weight>> key(merged.begin(), merged.end());
      if (seen.emplace(key, out.size()).second) {
        o.add = std::move(key);
        out.push_back(std::move(o));
      }
    }
    return out;
  }

  Weight work_cost(const std::vector<std::uint16_t>& loads) const {
    Weight w = 0;
    for (StepId s = 0; s < S_; ++s) {
      Weight m = 0;
      for (ProcId p = 0; p < P_; ++p) m = std::max<Weight>(m, loads[s * P_ + p]);
      w += m;
    }
    return w;
  }

  void evaluate(Weight comm) {
    struct Entry {
      std::vector<std::uint16_t> loads;
      std::size_t parent;
      std::size_t option;
    };
    std::vector<std::size_t> items;
    for (std::size_t c : order_) {
      if (skeletons_[c]) items.push_back(c);
    }
    for (std::size_t c : order_) {
      if (!skeletons_[c]) items.push_back(c);
    }
    std::vector<std::vector<Option>> opts;
    for (std::size_t c : items) {
      opts.push_back(options_for(c));
      if (opts.back().empty()) return;
    }
    std::vector<std::vector<Entry>> layers(1);
    layers[0].push_back({std::vector<std::uint16_t>(S_ * P_, 0), 0, 0});
    for (std::size_t k = 0; k < items.size(); ++k) {
      std::vector<Entry> next;
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t e = 0; e < layers[k].size(); ++e) {
        for (std::size_t o = 0; o < opts[k].size(); ++o) {
          if (++cells_ > max_cells_) {
            throw BudgetExceeded("chain solver cell budget exceeded");
          }
          std::vector<std::uint16_t> loads = layers[k][e].loads;
          for (auto [cell, w] : opts[k][o].add) {
            loads[cell] = static_cast<std::uint16_t>(loads[cell] + w);
          }
          if (extra_work_ + work_cost(loads) + comm >= limit()) continue;
          std::string key(reinterpret_cast<const char*>(loads.data()),
                          loads.size() * sizeof(std::uint16_t));
          if (index.emplace(key, next.size()).second) {
            next.push_back({std::move(loads), e, o});
          }
        }
      }
      if (next.empty()) return;
      layers.push_back(std::move(next));
    }
    const std::vector<Entry>& last = layers.back();
    std::size_t arg = 0;
    for (std::size_t e = 1; e < last.size(); ++e) {
      if (work_cost(last[e].loads) < work_cost(last[arg].loads)) arg = e;
    }
    Weight cost = extra_work_ + work_cost(last[arg].loads) + comm;
    if (cost >= limit()) return;
    BspSchedule sched;
    sched.procs = P_;
    sched.steps = S_;
    sched.assign.assign(num_nodes_, {});
    for (auto [v, pl] : fixed_nodes_) sched.assign[v] = {pl};
    sched.comms = fixed_comms_;
    std::size_t e = arg;
    for (std::size_t k = items.size(); k-- > 0;) {
      const Entry& entry = layers[k + 1][e];
      const std::vector<NodeId>& chain = chains_[items[k]];
      const Placing& placing = opts[k][entry.option].placing;
      for (std::size_t j = 0; j < chain.size(); ++j) {
        sched.assign[chain[j]] = {placing[j]};
      }
      if (skeletons_[items[k]]) {
        const Skeleton& sk = *skeletons_[items[k]];
        std::size_t seg = 0;
        for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
          if (placing[j].proc != placing[j + 1].proc) {
            sched.comms.push_back({chain[j], placing[j].proc,
                                   placing[j + 1].proc, sk.cuts[seg++]});
          }
        }
      }
      e = entry.parent;
    }
    sched.canonicalize();
    best_.cost = cost;
    best_.schedule = std::move(sched);
  }

  const std::vector<std::vector<NodeId>>& chains_;
  const std::size_t num_nodes_;
  const ProcId P_;
  const MachineParams params_;
  const std::uint64_t max_cells_;
  std::uint64_t& cells_;
  Found& best_;
  std::vector<std::size_t> order_;
  Weight work_ = 0;
  Weight work_lb_ = 0;
  StepId S_ = 1;
  std::vector<StepId> head_min_;
  std::vector<CommStep> fixed_comms_;
  std::vector<std::pair<NodeId, Placement>> fixed_nodes_;
  bool canonical_ = true;
  bool nonempty_ = true;
  Weight extra_work_ = 0;
  std::vector<std::optional<Skeleton>> skeletons_;
};

void check_procs(ProcId P, const ChainSolverOptions& options) {
  if (P == 0) throw DomainError("processor count must be positive");
  if (P > options.max_procs) {
    throw BudgetExceeded("chain solver: " + std::to_string(P) +
                         " processors exceed the limit of " +
                         std::to_string(options.max_procs));
  }
}

// Exact optimum over chains (no root) with up to P supersteps.
Found solve_chains(const std::vector<std::vector<NodeId>>& chains,
                   std::size_t num_nodes, ProcId P, MachineParams params,
                   const ChainSolverOptions& options, Weight upper_bound) {
  Found best;
  best.cost = upper_bound + 1;
  std::uint64_t cells = 0;
  ChainSearch search(chains, num_nodes, P, params, options.max_cells, cells,
                     best);
  for (StepId S = 1; S <= P; ++S) {
    search.solve(S, std::vector<StepId>(P, 0), Grid(S * P, 0), Grid(S * P, 0),
                 {}, {}, true, true, 0);
  }
  if (best.cost > upper_bound) {
    throw std::logic_error("chain solver found no schedule within the bound");
  }
  return best;
}

void verify(const Dag& dag, const ChainSolution& sol, CommModel model,
            MachineParams params) {
  ValidityReport r = check_validity(dag, sol.schedule, model, false);
  Weight cost = compute_cost(dag, sol.schedule, model, params).cost;
  if (!r.valid || cost != sol.cost) {
    throw std::logic_error("chain solver produced an inconsistent schedule: " +
                           r.to_string());
  }
}

}  // namespace

ChainDecomposition decompose_chains(const Dag& dag) {
  DagClass cls = classify(dag);
  if (cls.is_chain) return {chain_paths(dag), std::nullopt};
  if (auto parts = connected_chain_parts(dag)) {
    return {parts->chains, parts->root};
  }
  throw DomainError("DAG is neither a chain DAG nor a connected chain DAG");
}

BspSchedule greedy_chain(const Dag& dag, ProcId P) {
  if (P == 0) throw DomainError("processor count must be positive");
  require_unit(dag);
  std::vector<std::vector<NodeId>> chains = chain_paths(dag);
  std::stable_sort(chains.begin(), chains.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  // Work-time slot of every node on its processor.
  std::vector<ProcId> proc(dag.size(), 0);
  std::vector<Weight> slot(dag.size(), 0);
  std::size_t next = 0;
  ProcId p = 0;
  Weight rest_n = static_cast<Weight>(dag.size());
  Weight rest_p = P;
  while (next < chains.size() &&
         static_cast<Weight>(chains[next].size()) * rest_p >= rest_n) {
    for (std::size_t j = 0; j < chains[next].size(); ++j) {
      proc[chains[next][j]] = p;
      slot[chains[next][j]] = static_cast<Weight>(j);
    }
    rest_n -= static_cast<Weight>(chains[next].size());
    --rest_p;
    ++p;
    ++next;
  }
  struct Cut {
    NodeId last_head;
    ProcId from;
    Weight head_len;
  };
  std::vector<Cut> cuts;
  if (next < chains.size()) {
    const Weight q = (rest_n + rest_p - 1) / rest_p;
    // Block b holds concatenated positions [b*q, (b+1)*q).
    std::vector<std::vector<NodeId>> heads(rest_p), wholes(rest_p), tails(rest_p);
    std::vector<Weight> head_in(rest_p, 0);
    Weight pos = 0;
    for (std::size_t c = next; c < chains.size(); ++c) {
      const auto& chain = chains[c];
      Weight start = pos, end = pos + static_cast<Weight>(chain.size());
      Weight block = start / q;
      Weight split = std::min(end, (block + 1) * q);
      auto b = static_cast<std::size_t>(block);
      if (split == end) {
        wholes[b].insert(wholes[b].end(), chain.begin(), chain.end());
      } else {
        Weight h = split - start;
        heads[b].assign(chain.begin(), chain.begin() + h);
        tails[b + 1].assign(chain.begin() + h, chain.end());
        head_in[b + 1] = h;
        cuts.push_back({chain[static_cast<std::size_t>(h - 1)],
                        static_cast<ProcId>(p + b), h});
      }
      pos = end;
    }
    for (std::size_t b = 0; b < static_cast<std::size_t>(rest_p); ++b) {
      Weight t = 0;
      auto put = [&](NodeId v) {
        proc[v] = static_cast<ProcId>(p + b);
        slot[v] = t++;
      };
      for (NodeId v : heads[b]) put(v);
      for (NodeId v : wholes[b]) put(v);
      t = std::max(t, head_in[b]);
      for (NodeId v : tails[b]) put(v);
    }
  }
  std::vector<Weight> bounds;
  for (const Cut& c : cuts) bounds.push_back(c.head_len);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  auto step_of = [&](Weight t) {
    return static_cast<StepId>(
        std::upper_bound(bounds.begin(), bounds.end(), t) - bounds.begin());
  };
  std::vector<StepId> tau(dag.size());
  for (NodeId v = 0; v < dag.size(); ++v) tau[v] = step_of(slot[v]);
  std::vector<CommStep> comms;
  for (const Cut& c : cuts) {
    comms.push_back({c.last_head, c.from, c.from + 1, step_of(c.head_len - 1)});
  }
  BspSchedule sched = BspSchedule::from_assignment(
      proc, tau, std::move(comms), P, static_cast<StepId>(bounds.size() + 1));
  sched.canonicalize();
  return sched;
}

ChainSolution solve_chain(const Dag& dag, ProcId P, MachineParams params,
                          const ChainSolverOptions& options) {
  check_procs(P, options);
  require_unit(dag);
  std::vector<std::vector<NodeId>> chains = chain_paths(dag);
  BspSchedule greedy = greedy_chain(dag, P);
  Weight ub = compute_cost(dag, greedy, CommModel::DS(), params).cost;
  Found best = solve_chains(chains, dag.size(), P, params, options, ub);
  ChainSolution sol{std::move(best.schedule), best.cost};
  verify(dag, sol, CommModel::DS(), params);
  return sol;
}

ChainSolution solve_connected_chain(const Dag& dag, ProcId P,
                                    MachineParams params, CommModel model,
                                    const ChainSolverOptions& options) {
  check_procs(P, options);
  require_unit(dag);
  auto parts = connected_chain_parts(dag);
  if (!parts) throw DomainError("DAG is not a connected chain DAG");
  const NodeId root = parts->root;
  const auto& chains = parts->chains;
  const Weight n = static_cast<Weight>(dag.size());

  Found best;
  best.cost = n;
  best.schedule.procs = P;
  best.schedule.steps = 1;
  best.schedule.assign.assign(dag.size(), {Placement{0, 0}});

  // The root runs alone in superstep 1 on p1. Enumerate when (and from
  // whom) it reaches every other processor, then chain configurations.
  std::uint64_t cells = 0;
  ChainSearch search(chains, dag.size(), P, params, options.max_cells, cells,
                     best);
  for (StepId S = 2; S <= 2 * P - 1; ++S) {
    const StepId never = S;
    std::vector<StepId> arrival(P, never);
    std::vector<ProcId> sender(P, 0);
    std::function<void(ProcId)> distribute = [&](ProcId q) {
      if (q == P) {
        std::vector<StepId> head_min(P, S);
        head_min[0] = 1;
        Grid sent(S * P, 0), rec(S * P, 0);
        std::vector<CommStep> comms;
        for (ProcId r = 1; r < P; ++r) {
          if (arrival[r] == never) continue;
          head_min[r] = arrival[r] + 1;
          Weight& out = sent[arrival[r] * P + sender[r]];
          if (!model.broadcast() || out == 0) ++out;
          ++rec[arrival[r] * P + r];
          comms.push_back({root, sender[r], r, arrival[r]});
        }
        search.solve(S, head_min, sent, rec, comms, {{root, Placement{0, 0}}},
                     false, false, 1);
        return;
      }
      // Processors other than p1 are interchangeable: arrivals are
      // non-decreasing.
      StepId lo = q > 1 ? arrival[q - 1] : 0;
      for (StepId a = lo; a <= never; ++a) {
        if (a != never && a + 1 >= S) continue;
        arrival[q] = a;
        if (a == never) {
          distribute(q + 1);
          continue;
        }
        for (ProcId s = 0; s < q; ++s) {
          if (s != 0 && (!model.free() || arrival[s] >= a)) continue;
          sender[q] = s;
          distribute(q + 1);
        }
      }
      arrival[q] = never;
    };
    distribute(1);
  }
  ChainSolution sol{std::move(best.schedule), best.cost};
  sol.schedule = strip_empty_supersteps(sol.schedule);
  verify(dag, sol, model, params);
  return sol;
}

}  // namespace bspsched

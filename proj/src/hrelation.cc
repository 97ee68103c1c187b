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

#include "bspsched/hrelation.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "bspsched/error.h"

namespace bspsched {
namespace {

// Kuhn's algorithm; senders and receivers are tried in increasing order.
std::vector<int> perfect_matching(
    const std::vector<std::vector<std::int64_t>>& mult) {
  const std::size_t P = mult.size();
  std::vector<int> match_of_receiver(P, -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment =
      [&](std::size_t p, std::vector<bool>& seen) {
        for (std::size_t q = 0; q < P; ++q) {
          if (mult[p][q] == 0 || seen[q]) continue;
          seen[q] = true;
          if (match_of_receiver[q] < 0 ||
              augment(static_cast<std::size_t>(match_of_receiver[q]), seen)) {
            match_of_receiver[q] = static_cast<int>(p);
            return true;
          }
        }
        return false;
      };
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<bool> seen(P, false);
    if (!augment(p, seen)) {
      throw DomainError("regular multigraph without perfect matching");
    }
  }
  std::vector<int> receiver_of(P, -1);
  for (std::size_t q = 0; q < P; ++q) {
    receiver_of[static_cast<std::size_t>(match_of_receiver[q])] =
        static_cast<int>(q);
  }
  return receiver_of;
}

}  // namespace

void validate_demand(const DemandMatrix& demand) {
  for (std::size_t p = 0; p < demand.size(); ++p) {
    if (demand[p].size() != demand.size()) {
      throw DomainError("demand matrix must be square");
    }
    for (std::size_t q = 0; q < demand.size(); ++q) {
      if (demand[p][q] < 0) throw DomainError("demand entries must be >= 0");
      if (p == q && demand[p][q] != 0) {
        throw DomainError("a processor cannot send to itself");
      }
    }
  }
}

std::int64_t h_relation(const DemandMatrix& demand) {
  validate_demand(demand);
  std::int64_t h = 0;
  for (std::size_t p = 0; p < demand.size(); ++p) {
    std::int64_t row = 0, col = 0;
    for (std::size_t q = 0; q < demand.size(); ++q) {
      row += demand[p][q];
      col += demand[q][p];
    }
    h = std::max({h, row, col});
  }
  return h;
}

SlotSchedule decompose(const DemandMatrix& demand) {
  const std::int64_t h = h_relation(demand);
  const std::size_t P = demand.size();
  SlotSchedule out;
  if (h == 0) return out;
  std::vector<std::vector<std::int64_t>> real = demand;
  std::vector<std::vector<std::int64_t>> art(P, std::vector<std::int64_t>(P, 0));
  std::vector<std::int64_t> row(P, 0), col(P, 0);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t q = 0; q < P; ++q) {
      row[p] += real[p][q];
      col[q] += real[p][q];
    }
  }
  for (;;) {
    auto p = std::find_if(row.begin(), row.end(), [h](auto r) { return r < h; });
    if (p == row.end()) break;
    auto q = std::find_if(col.begin(), col.end(), [h](auto c) { return c < h; });
    std::int64_t add = std::min(h - *p, h - *q);
    art[p - row.begin()][q - col.begin()] += add;
    *p += add;
    *q += add;
    out.artificial_edges += add;
  }
  std::vector<std::vector<std::int64_t>> mult(P, std::vector<std::int64_t>(P));
  for (std::int64_t round = 0; round < h; ++round) {
    for (std::size_t p = 0; p < P; ++p) {
      for (std::size_t q = 0; q < P; ++q) mult[p][q] = real[p][q] + art[p][q];
    }
    std::vector<int> receiver = perfect_matching(mult);
    std::vector<SlotPair> slot;
    for (std::size_t p = 0; p < P; ++p) {
      auto q = static_cast<std::size_t>(receiver[p]);
      if (real[p][q] > 0) {
        --real[p][q];
        slot.push_back({static_cast<ProcId>(p), static_cast<ProcId>(q)});
      } else {
        --art[p][q];
      }
    }
    out.slots.push_back(std::move(slot));
  }
  return out;
}

DemandMatrix parse_demand(const std::string& text) {
  DemandMatrix m;
  std::stringstream rows(text);
  for (std::string row; std::getline(rows, row, ';');) {
    std::vector<std::int64_t> values;
    std::stringstream cells(row);
    for (std::string cell; std::getline(cells, cell, ',');) {
      try {
        std::size_t used = 0;
        values.push_back(std::stoll(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw 0;
      } catch (...) {
        throw ParseError(0, "bad matrix entry \"" + cell + "\"");
      }
    }
    m.push_back(std::move(values));
  }
  if (m.empty()) throw ParseError(0, "empty demand matrix");
  try {
    validate_demand(m);
  } catch (const DomainError& e) {
    throw ParseError(0, e.what());
  }
  return m;
}

std::string format_slots(const SlotSchedule& slots) {
  std::ostringstream out;
  for (std::size_t k = 0; k < slots.slots.size(); ++k) {
    out << "slot " << k + 1 << ':';
    for (std::size_t i = 0; i < slots.slots[k].size(); ++i) {
      const SlotPair& sp = slots.slots[k][i];
      out << (i ? ", " : " ") << 'p' << sp.from + 1 << "->p" << sp.to + 1;
    }
    out << '\n';
  }
  return out.str();
}

Weight weighted_h_relation(const WeightedDemand& demand) {
  std::vector<Weight> sent(demand.procs, 0), rec(demand.procs, 0);
  for (const WeightedTransfer& t : demand.transfers) {
    sent.at(t.from) += t.weight;
    rec.at(t.to) += t.weight;
  }
  Weight h = 0;
  for (ProcId p = 0; p < demand.procs; ++p) h = std::max({h, sent[p], rec[p]});
  return h;
}

std::optional<std::vector<Weight>> place_nonpreemptive(
    const WeightedDemand& demand, Weight slots) {
  const std::size_t n = demand.transfers.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return demand.transfers[a].weight > demand.transfers[b].weight;
  });
  // Busy slot masks per processor port.
  std::vector<std::uint64_t> send_busy(demand.procs, 0), rec_busy(demand.procs, 0);
  if (slots > 63) throw DomainError("too many slots for exhaustive placement");
  std::vector<Weight> start(n, -1);
  std::function<bool(std::size_t)> place = [&](std::size_t i) {
    if (i == n) return true;
    const WeightedTransfer& t = demand.transfers[order[i]];
    for (Weight s = 0; s + t.weight <= slots; ++s) {
      std::uint64_t mask = ((std::uint64_t{1} << t.weight) - 1) << s;
      if ((send_busy[t.from] & mask) || (rec_busy[t.to] & mask)) continue;
      send_busy[t.from] |= mask;
      rec_busy[t.to] |= mask;
      start[order[i]] = s;
      if (place(i + 1)) return true;
      send_busy[t.from] &= ~mask;
      rec_busy[t.to] &= ~mask;
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  return start;
}

DemandMatrix unit_expand(const WeightedDemand& demand) {
  DemandMatrix m(demand.procs, std::vector<std::int64_t>(demand.procs, 0));
  for (const WeightedTransfer& t : demand.transfers) m.at(t.from).at(t.to) += t.weight;
  return m;
}

WeightedDemand weighted_counterexample() {
  return {4,
          {{0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {3, 0, 1}, {3, 1, 1}, {3, 2, 1}}};
}

}  // namespace bspsched

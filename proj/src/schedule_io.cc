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

#include "bspsched/schedule_io.h"

#include <map>
#include <optional>
#include <sstream>

#include "bspsched/error.h"
#include "text_util.h"

namespace bspsched {
namespace {

struct CopyFields {
  std::optional<std::int64_t> proc;
  std::optional<std::int64_t> when;
  std::size_t line = 0;
};

// Parses the fields shared by both formats. `time_key` is "s" or "at".
struct Parsed {
  std::optional<std::int64_t> procs;
  std::optional<std::int64_t> steps;
  std::vector<std::map<std::int64_t, CopyFields>> copies;
  std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> comm_lines;
  std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> edge_lines;
};

Parsed parse_common(std::string_view text, std::size_t num_nodes,
                    const std::string& time_key, bool allow_edges) {
  Parsed out;
  out.copies.resize(num_nodes);
  auto positive = [](const Line& line, std::size_t i) {
    std::int64_t x = parse_int(line, i);
    if (x < 1) throw ParseError(line.number, "indices are 1-based");
    return x;
  };
  auto node = [&](const Line& line, std::size_t i) {
    std::int64_t v = positive(line, i);
    if (static_cast<std::size_t>(v) > num_nodes) {
      throw ParseError(line.number, "node " + std::to_string(v) + " out of range");
    }
    return v - 1;
  };
  for (const Line& line : tokenize_lines(text)) {
    const std::string& key = line.tokens[0];
    std::size_t argc = line.tokens.size() - 1;
    if (key == "procs" || key == "supersteps") {
      if (argc != 1) throw ParseError(line.number, "expected one value");
      (key == "procs" ? out.procs : out.steps) = positive(line, 1);
    } else if (key == "p" || key == time_key) {
      if (argc != 2 && argc != 3) {
        throw ParseError(line.number, "expected \"" + key + " v x [k]\"");
      }
      std::int64_t v = node(line, 1);
      std::int64_t x = key == "p" ? positive(line, 2) : parse_int(line, 2);
      std::int64_t k = argc == 3 ? positive(line, 3) : 1;
      CopyFields& f = out.copies[v][k];
      auto& slot = key == "p" ? f.proc : f.when;
      if (slot) throw ParseError(line.number, "field given twice for this copy");
      slot = x;
      f.line = line.number;
    } else if (key == "t") {
      if (argc != 4) throw ParseError(line.number, "expected \"t v p1 p2 s\"");
      out.comm_lines.push_back(
          {line.number,
           {node(line, 1), positive(line, 2) - 1, positive(line, 3) - 1,
            parse_int(line, 4)}});
    } else if (key == "e" && allow_edges) {
      if (argc != 3) throw ParseError(line.number, "expected \"e u v s\"");
      out.edge_lines.push_back(
          {line.number, {node(line, 1), node(line, 2), positive(line, 3) - 1}});
    } else {
      throw ParseError(line.number, "unknown line kind \"" + key + "\"");
    }
  }
  for (const auto& per_node : out.copies) {
    for (const auto& [k, f] : per_node) {
      if (!f.proc || !f.when) {
        throw ParseError(f.line, "copy " + std::to_string(k) +
                                     " lacks a processor or time line");
      }
    }
  }
  return out;
}

}  // namespace

BspSchedule parse_bsp_schedule(std::string_view text, std::size_t num_nodes) {
  Parsed parsed = parse_common(text, num_nodes, "s", true);
  BspSchedule sched;
  sched.assign.resize(num_nodes);
  std::int64_t max_p = 1, max_s = 1;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    for (const auto& [k, f] : parsed.copies[v]) {
      if (*f.when < 1) throw ParseError(f.line, "supersteps are 1-based");
      sched.assign[v].push_back({static_cast<ProcId>(*f.proc - 1),
                                 static_cast<StepId>(*f.when - 1)});
      max_p = std::max(max_p, *f.proc);
      max_s = std::max(max_s, *f.when);
    }
  }
  for (const auto& [line, f] : parsed.comm_lines) {
    if (f[3] < 1) throw ParseError(line, "supersteps are 1-based");
    sched.comms.push_back({static_cast<NodeId>(f[0]), static_cast<ProcId>(f[1]),
                           static_cast<ProcId>(f[2]),
                           static_cast<StepId>(f[3] - 1)});
    max_p = std::max({max_p, f[1] + 1, f[2] + 1});
    max_s = std::max(max_s, f[3]);
  }
  for (const auto& [line, f] : parsed.edge_lines) {
    sched.edge_comms.push_back(
        {{static_cast<NodeId>(f[0]), static_cast<NodeId>(f[1])},
         static_cast<StepId>(f[2])});
    max_s = std::max(max_s, f[2] + 1);
  }
  if (parsed.procs && *parsed.procs < max_p) {
    throw ParseError(0, "processor index exceeds declared procs");
  }
  if (parsed.steps && *parsed.steps < max_s) {
    throw ParseError(0, "superstep index exceeds declared supersteps");
  }
  sched.procs = static_cast<ProcId>(parsed.procs.value_or(max_p));
  sched.steps = static_cast<StepId>(parsed.steps.value_or(max_s));
  sched.canonicalize();
  return sched;
}

std::string serialize_bsp_schedule(const BspSchedule& sched) {
  std::ostringstream out;
  out << "procs " << sched.procs << '\n' << "supersteps " << sched.steps << '\n';
  for (std::size_t v = 0; v < sched.assign.size(); ++v) {
    const auto& copies = sched.assign[v];
    for (std::size_t k = 0; k < copies.size(); ++k) {
      std::string suffix = copies.size() > 1 ? " " + std::to_string(k + 1) : "";
      out << "p " << v + 1 << ' ' << copies[k].proc + 1 << suffix << '\n';
      out << "s " << v + 1 << ' ' << copies[k].step + 1 << suffix << '\n';
    }
  }
  for (const CommStep& c : sched.comms) {
    out << "t " << c.node + 1 << ' ' << c.from + 1 << ' ' << c.to + 1 << ' '
        << c.step + 1 << '\n';
  }
  for (const EdgeCommStep& c : sched.edge_comms) {
    out << "e " << c.edge.from + 1 << ' ' << c.edge.to + 1 << ' '
        << c.step + 1 << '\n';
  }
  return out.str();
}

TimedSchedule parse_timed_schedule(std::string_view text,
                                   std::size_t num_nodes) {
  Parsed parsed = parse_common(text, num_nodes, "at", false);
  if (parsed.steps) throw ParseError(0, "timed schedules have no supersteps");
  TimedSchedule ts;
  ts.assign.resize(num_nodes);
  std::int64_t max_p = 1;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    for (const auto& [k, f] : parsed.copies[v]) {
      if (*f.when < 1) throw ParseError(f.line, "times start at 1");
      ts.assign[v].push_back({static_cast<ProcId>(*f.proc - 1), *f.when});
      max_p = std::max(max_p, *f.proc);
    }
  }
  for (const auto& [line, f] : parsed.comm_lines) {
    if (f[3] < 1) throw ParseError(line, "times start at 1");
    ts.comms.push_back({static_cast<NodeId>(f[0]), static_cast<ProcId>(f[1]),
                        static_cast<ProcId>(f[2]), f[3]});
    max_p = std::max({max_p, f[1] + 1, f[2] + 1});
  }
  if (parsed.procs && *parsed.procs < max_p) {
    throw ParseError(0, "processor index exceeds declared procs");
  }
  ts.procs = static_cast<ProcId>(parsed.procs.value_or(max_p));
  ts.canonicalize();
  return ts;
}

std::string serialize_timed_schedule(const TimedSchedule& ts) {
  std::ostringstream out;
  out << "procs " << ts.procs << '\n';
  for (std::size_t v = 0; v < ts.assign.size(); ++v) {
    const auto& copies = ts.assign[v];
    for (std::size_t k = 0; k < copies.size(); ++k) {
      std::string suffix = copies.size() > 1 ? " " + std::to_string(k + 1) : "";
      out << "p " << v + 1 << ' ' << copies[k].proc + 1 << suffix << '\n';
      out << "at " << v + 1 << ' ' << copies[k].start << suffix << '\n';
    }
  }
  for (const TimedComm& c : ts.comms) {
    out << "t " << c.node + 1 << ' ' << c.from + 1 << ' ' << c.to + 1 << ' '
        << c.start << '\n';
  }
  return out.str();
}

}  // namespace bspsched

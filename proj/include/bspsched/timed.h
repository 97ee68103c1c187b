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

// Timed schedules (classical, commdelay, single-port duplex) and the
// overlapping-phase BSP variant.
//
// Time is counted in unit steps starting at 1. A node v started at t(v)
// occupies steps t(v) .. f(v) with f(v) = t(v) + w(v) - 1, and the makespan
// is the largest f(v). A transfer started at t0 occupies steps t0+1 .. t0+g
// of both the sender's and the receiver's port.

#ifndef BSPSCHED_TIMED_H_
#define BSPSCHED_TIMED_H_

#include <cstdint>
#include <vector>

#include "bspsched/dag.h"
#include "bspsched/schedule.h"

namespace bspsched {

using Time = std::int64_t;

struct TimedPlacement {
  ProcId proc;
  Time start;

  friend bool operator==(const TimedPlacement&, const TimedPlacement&) = default;
  friend auto operator<=>(const TimedPlacement&, const TimedPlacement&) = default;
};

struct TimedComm {
  NodeId node;
  ProcId from;
  ProcId to;
  Time start;

  friend bool operator==(const TimedComm&, const TimedComm&) = default;
  friend auto operator<=>(const TimedComm&, const TimedComm&) = default;
};

struct TimedSchedule {
  ProcId procs = 1;
  // One entry per node; more than one placement only under duplication.
  std::vector<std::vector<TimedPlacement>> assign;
  std::vector<TimedComm> comms;

  void canonicalize();
  friend bool operator==(const TimedSchedule&, const TimedSchedule&) = default;
};

struct TimedReport {
  ValidityReport report;
  Time makespan = 0;
};

enum class ClassicalMode {
  kPlain,
  // A cross-processor edge (u, v) additionally needs a boundary b with
  // f(u) <= b < t(v) that no node straddles (t(x) <= b < f(x)).
  kBarrierSync,
};

TimedReport check_classical(const Dag& dag, const TimedSchedule& ts,
                            ClassicalMode mode = ClassicalMode::kPlain,
                            bool duplication = false);

// Cross-processor edges need t(v) > f(u) + g.
TimedReport check_commdelay(const Dag& dag, const TimedSchedule& ts, Time g,
                            bool duplication = false);

// Cross-processor edges need a transfer (u, p(u), p(v), t0) with
// f(u) <= t0 and t0 + g < t(v); each processor sends at most one and
// receives at most one value at a time.
TimedReport check_spd(const Dag& dag, const TimedSchedule& ts, Time g,
                      bool duplication = false);

enum class MaxBspLatency {
  kInside,   // max(work, g*comm + L)
  kOutside,  // max(work, g*comm) + L
};

struct MaxBspReport {
  ValidityReport report;
  std::vector<Weight> step_costs;
  Weight cost = 0;
};

// Direct singlecast tuples; every tuple needs tau(v) < s and a cross edge
// needs a tuple with s < tau(consumer). L is charged only in supersteps
// with communication.
MaxBspReport check_maxbsp(const Dag& dag, const BspSchedule& sched,
                          MachineParams params,
                          MaxBspLatency latency = MaxBspLatency::kInside,
                          bool duplication = false);

// Superstep s (1-based) receives the nodes finishing in ((s-1)g, sg] and the
// transfers starting in [(s-1)g, sg). Requires g >= 1.
BspSchedule convert_spd_to_bsp(const Dag& dag, const TimedSchedule& ts,
                               Time g);

}  // namespace bspsched

#endif  // BSPSCHED_TIMED_H_

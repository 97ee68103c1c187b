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

// Line-based schedule files. All indices are 1-based and '#' starts a
// comment.
//
// BSP schedule:
//   procs P                optional, defaults to the largest processor used
//   supersteps S           optional, defaults to the largest superstep used
//   p v x [k]              copy k (default 1) of node v runs on processor x
//   s v y [k]              copy k of node v runs in superstep y
//   t v p1 p2 s            value of v sent from p1 to p2 in superstep s
//   e u v s                edge-based tuple for edge (u, v) in superstep s
//
// Timed schedule:
//   procs P
//   p v x [k]
//   at v t [k]             copy k of node v starts at time t
//   t v p1 p2 t0           transfer occupying (t0, t0 + g]

#ifndef BSPSCHED_SCHEDULE_IO_H_
#define BSPSCHED_SCHEDULE_IO_H_

#include <string>
#include <string_view>

#include "bspsched/schedule.h"
#include "bspsched/timed.h"

namespace bspsched {

BspSchedule parse_bsp_schedule(std::string_view text, std::size_t num_nodes);
std::string serialize_bsp_schedule(const BspSchedule& sched);

TimedSchedule parse_timed_schedule(std::string_view text,
                                   std::size_t num_nodes);
std::string serialize_timed_schedule(const TimedSchedule& ts);

}  // namespace bspsched

#endif  // BSPSCHED_SCHEDULE_IO_H_

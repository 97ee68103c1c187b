#!/usr/bin/env python3
# Copyright 2026 The bspsched Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solves emitted LP files with HiGHS and compares against the oracle.

Requires highspy (pip install highspy). Not part of ctest.
"""

import argparse
import os
import subprocess
import sys
import tempfile

import highspy


def run(cli, *args):
  return subprocess.run([cli, *args], capture_output=True, text=True,
                        check=True).stdout


def highs_opt(lp_path):
  h = highspy.Highs()
  h.setOptionValue("output_flag", False)
  h.readModel(lp_path)
  h.run()
  return round(h.getInfo().objective_function_value)


def main():
  ap = argparse.ArgumentParser()
  ap.add_argument("--cli", default="build/tools/bspsched")
  ap.add_argument("--seeds", type=int, default=12)
  ap.add_argument("-P", type=int, default=2)
  a = ap.parse_args()
  bad = total = 0
  with tempfile.TemporaryDirectory() as tmp:
    dag = os.path.join(tmp, "r.dag")
    lp = os.path.join(tmp, "r.lp")
    for seed in range(a.seeds):
      run(a.cli, "gen", "random", "-n", str(4 + seed % 2), "-p", "0.4",
          "--seed", str(seed), "-o", dag)
      for model in ("ds", "db", "fs", "fb"):
        for g, L in ((1, 0), (2, 1)):
          common = ["--dag", dag, "-P", str(a.P), "--model", model,
                    "-g", str(g), "-L", str(L)]
          with open(lp, "w") as f:
            f.write(run(a.cli, "ilp-emit", *common))
          got = highs_opt(lp)
          want = int(run(a.cli, "oracle", *common).split()[1])
          total += 1
          if got != want:
            bad += 1
            print(f"mismatch seed={seed} {model} g={g} L={L}: "
                  f"highs {got}, oracle {want}")
  print(f"{total - bad}/{total} match")
  return 1 if bad else 0


if __name__ == "__main__":
  sys.exit(main())

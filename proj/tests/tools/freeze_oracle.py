#!/usr/bin/env python3
# Copyright 2026 The pesqkit Authors. All Rights Reserved.
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
"""Scores the corpus written by pesq_corpus with the compiled reference
binaries and freezes the results into tests/data/oracle_scores.json.

usage: freeze_oracle.py CORPUS_DIR [OUT_JSON]

PESQ_REF_BIN and PESQ_REF_C2_BIN name the unmodified and the corrected
reference executables (command line: +rate [+wb] ref deg).
"""

import json
import os
import pathlib
import re
import subprocess
import sys

_NB = re.compile(r"Prediction \(Raw MOS, MOS-LQO\):\s*=\s*([-\d.]+)\s+([-\d.]+)")
_WB = re.compile(r"P\.862\.2 Prediction \(MOS-LQO\):\s*=\s*([-\d.]+)")


def run(binary, args, cwd):
  out = subprocess.run([binary, *args], cwd=cwd, capture_output=True, text=True,
                       check=True).stdout
  return out


def main():
  corpus = pathlib.Path(sys.argv[1])
  dest = pathlib.Path(sys.argv[2]) if len(sys.argv) > 2 else (
      pathlib.Path(__file__).resolve().parents[1] / "data" / "oracle_scores.json")
  ref_bin = os.environ["PESQ_REF_BIN"]
  c2_bin = os.environ["PESQ_REF_C2_BIN"]
  items = json.loads((corpus / "items.json").read_text())
  for item in items:
    rate = f"+{item['rate']}"
    files = [item["ref"], item["deg"]]
    m = _NB.search(run(ref_bin, [rate, *files], corpus))
    scores = {"nb-raw": float(m.group(1)), "nb-lqo": float(m.group(2))}
    if item["rate"] == 16000:
      scores["wb"] = float(_WB.search(run(ref_bin, [rate, "+wb", *files], corpus)).group(1))
      scores["wb-c2"] = float(_WB.search(run(c2_bin, [rate, "+wb", *files], corpus)).group(1))
    item["oracle"] = scores
    print(item["id"], scores, flush=True)
  doc = {
      "description": "Reference-binary scores of the synthetic conformance corpus. "
                     "Multi-channel items were fed to the binary as 2-channel files.",
      "items": items,
  }
  dest.write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
  main()

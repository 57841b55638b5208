#!/usr/bin/env python3
"""Generates the 56-bus synthetic feeder fixture (tests/fixtures/feeder56.json).

Topology follows the modified 123-bus feeder drawing: slack bus 56 feeds a
main trunk 1..9 with laterals. Thirteen DG sites; six of them are declared as
constant-current sources, the rest as constant-power. Buses 4 and 17 are tie
buses (no injection). Impedances and loads are synthetic and seeded so the
file is reproducible.

Usage: make_feeder56.py > tests/fixtures/feeder56.json
"""
import json
import math
import random

EDGES = [
    (56, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9),
    (4, 40), (40, 41), (41, 42), (42, 43), (43, 44), (44, 45), (45, 46),
    (40, 47), (47, 48), (48, 49), (49, 50), (50, 51), (51, 52), (51, 53),
    (53, 54), (54, 55),
    (7, 10), (10, 11), (11, 12), (12, 13), (13, 14), (14, 15), (15, 16),
    (11, 17), (17, 33), (33, 37), (37, 38), (38, 39), (33, 34), (34, 35),
    (35, 36), (17, 18), (18, 19), (19, 27), (27, 28), (28, 29), (29, 30),
    (30, 31), (31, 32), (19, 20), (20, 21), (21, 22), (21, 23), (23, 24),
    (24, 25), (25, 26),
]
PQ_DG = [15, 18, 26, 32, 38, 48, 55]
CI_DG = [9, 24, 30, 35, 43, 51]
TIES = [4, 17]
LOAD_PF = 0.95


def r_over_x(a, b):
    lo, hi = min(a, b), max(a, b)
    if lo >= 40 and hi < 56:
        return 2.0  # underground cable laterals
    if lo >= 17 and hi < 40:
        return 0.5
    return 1.0


def main():
    rng = random.Random(20160315)
    branches = []
    for a, b in EDGES:
        x = round(0.006 * rng.uniform(0.8, 1.2), 6)
        r = round(r_over_x(a, b) * x, 6)
        branches.append({"from": a, "to": b, "z": [r, x]})

    buses = [{"id": 56, "kind": "slack"}]
    load_total = 0.0
    loads = {}
    for bus in range(1, 56):
        if bus in PQ_DG or bus in CI_DG or bus in TIES:
            continue
        mag = round(rng.uniform(0.015, 0.035), 5)
        loads[bus] = mag
        load_total += mag
    # DG sites share 10% penetration equally at nominal voltage.
    dg_each = round(0.10 * load_total / (len(PQ_DG) + len(CI_DG)), 6)
    sin_pf = math.sqrt(1.0 - LOAD_PF ** 2)
    for bus in range(1, 56):
        entry = {"id": bus}
        if bus in TIES:
            entry["kind"] = "tie"
        elif bus in PQ_DG:
            entry["kind"] = "pq_dg"
            entry["s_base"] = [dg_each, 0.0]
        elif bus in CI_DG:
            entry["kind"] = "ci_dg"
            entry["i_base"] = [dg_each, 0.0]
        else:
            mag = loads[bus]
            entry["kind"] = "pq_load"
            entry["s_base"] = [-round(mag * LOAD_PF, 6), -round(mag * sin_pf, 6)]
        buses.append(entry)

    case = {
        "meta": {"base_mva": 10.0, "slack_voltage": [1.0, 0.0]},
        "buses": buses,
        "branches": branches,
    }
    # One record per line keeps diffs of the committed fixture readable.
    lines = ["{", f'  "meta": {json.dumps(case["meta"])},', '  "buses": [']
    lines += [f"    {json.dumps(b)}," for b in buses]
    lines[-1] = lines[-1].rstrip(",")
    lines += ["  ],", '  "branches": [']
    lines += [f"    {json.dumps(b)}," for b in branches]
    lines[-1] = lines[-1].rstrip(",")
    lines += ["  ]", "}"]
    print("\n".join(lines))


if __name__ == "__main__":
    main()

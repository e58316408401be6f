#!/usr/bin/env python3
"""Fuzz the simulator with random generated programs and random traces,
checking state invariants after every step.

Usage: python3 scripts/fuzz_simulator.py [--programs N] [--traces M] [--seed S]
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from hmiforge.runtime import check_state, init_session, step
from randgen import random_program

EVENTS = ["up", "down", "select", "back"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--programs", type=int, default=20)
    ap.add_argument("--traces", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    steps = 0
    t0 = time.time()
    for p in range(args.programs):
        program = random_program(rng)
        for _ in range(args.traces):
            state = init_session(program)
            for _ in range(rng.randint(0, 100)):
                state = step(state, rng.choice(EVENTS), program).state
                check_state(state, program)
                steps += 1
    dt = time.time() - t0
    print(
        f"ok: {args.programs} programs x {args.traces} traces, "
        f"{steps} steps in {dt:.1f}s, no invariant violations"
    )


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Sweep noisy-mixture weights and print the activation threshold table.

For each weight w on the chosen line, builds the n-qubit noisy state, runs
the sequential-unlock protocol, and tests the activated pair for
entanglement. The verdict must flip exactly at w = 1/2.

Usage:  python scripts/scan_noisy_threshold.py [--n 4] [--line werner] [--points 21]
"""

import argparse

from bcabe.analyze import bell_diagonal_entangled, is_ppt
from bcabe.construct import NoisyWeights, bell_diagonal, noisy_state
from bcabe.linalg import Bipartition
from bcabe.protocol import unlock_sequential


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--line", choices=("two-term", "werner"), default="werner")
    ap.add_argument("--points", type=int, default=21)
    args = ap.parse_args()

    print(f"line={args.line}  n={args.n}")
    print(f"{'w':>6} {'w_max':>6} {'entangled':>9} {'min PT eig':>12} "
          f"{'negativity':>10} {'unlock fid':>10}")
    cut = Bipartition.of((1,), 2)
    previous = None
    for i in range(args.points):
        w = i / (args.points - 1)
        if args.line == "two-term":
            weights = NoisyWeights(w, 1.0 - w, 0.0, 0.0)
        else:
            rest = (1.0 - w) / 3.0
            weights = NoisyWeights(w, rest, rest, rest)
        verdict = bell_diagonal_entangled(weights)
        pt = is_ppt(bell_diagonal(weights, "pi", +1), cut)
        unlocked = unlock_sequential(noisy_state(weights, args.n), (1, 2))
        fid = max(b.fidelity for b in unlocked.branches if b.fidelity is not None)
        marker = ""
        if previous is not None and previous != verdict.entangled:
            marker = "  <- transition"
        previous = verdict.entangled
        print(
            f"{w:6.3f} {verdict.w_max:6.3f} {str(verdict.entangled):>9} "
            f"{pt.min_eigenvalue:12.6f} {pt.negativity:10.6f} {fid:10.6f}{marker}"
        )


if __name__ == "__main__":
    main()

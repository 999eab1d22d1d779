#!/usr/bin/env python3
"""First-selection frequencies on the two-action example, with and without
Bernoulli resampling, for several epochs.

Without resampling the follow-the-leader step chases the action whose realized
losses look best, which on this instance is usually the suboptimal one only at
the level of per-round comparisons; the accumulated-score selection frequencies
printed here show what the mechanism actually does at each epoch boundary.
"""
import argparse

from dpexperts.core import MechanismSpec, NoiseKind
from dpexperts.harness import selection_frequency
from dpexperts.instances import paper_example_two_actions


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-epoch", type=int, default=8)
    args = ap.parse_args()

    instance = paper_example_two_actions()
    print(f"means: {instance.means.tolist()}, gap: {instance.delta_min}")
    print(f"{'epoch':>6} {'P[suboptimal], B=0':>20} {'P[suboptimal], B=1':>20}")
    for r in range(1, args.max_epoch + 1):
        row = []
        for b in (0, 1):
            spec = MechanismSpec(b, NoiseKind.NONE)
            freq = selection_frequency(instance, spec, r, args.trials, args.seed + r)
            row.append(freq[1])
        print(f"{r:>6} {row[0]:>20.4f} {row[1]:>20.4f}")


if __name__ == "__main__":
    main()

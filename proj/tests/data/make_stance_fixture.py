#!/usr/bin/env python3
"""Writes stance_fixture.csv: a stance matrix whose pairwise agreement
counts for the six anchor/placement pairs hit fixed targets exactly.

A shared block answered by all parties gives the association matrix some
texture; pair blocks answered by two parties each top the shared counts up
to the targets.
"""
import csv
import random
import sys

PARTIES = ["Linke", "B90", "SPD", "FDP", "CDU", "AfD"]
# (a, b): (identical, one neutral, opposed)
TARGETS = {
    ("B90", "Linke"): (1530, 284, 297),
    ("B90", "FDP"): (828, 383, 1038),
    ("SPD", "Linke"): (600, 200, 200),
    ("SPD", "FDP"): (402, 300, 298),
    ("CDU", "FDP"): (525, 250, 225),
    ("CDU", "AfD"): (369, 300, 331),
}
# left-right lean per party drives the shared block
LEAN = {"Linke": -2, "B90": -1, "SPD": -1, "FDP": 0, "CDU": 1, "AfD": 2}
SHARED = 38


def classify(s, t):
    if s == t:
        return 0
    if s == 0 or t == 0:
        return 1
    return 2


def main(path):
    rng = random.Random(20250101)
    rows = []
    shared = []
    for i in range(SHARED):
        direction = rng.choice([-1, 1])
        answers = {}
        for p in PARTIES:
            v = direction * LEAN[p] + rng.choice([-1, 0, 0, 1])
            answers[p] = max(-1, min(1, v))
        shared.append(answers)
        for p in PARTIES:
            rows.append((f"S{i + 1:03d}", p, answers[p]))

    n = 0
    for (a, b), target in TARGETS.items():
        counts = [0, 0, 0]
        for answers in shared:
            counts[classify(answers[a], answers[b])] += 1
        rest = [t - c for t, c in zip(target, counts)]
        if min(rest) < 0:
            sys.exit(f"shared block exceeds target for {a}-{b}")
        patterns = ([((1, 1), (-1, -1), (0, 0))[k % 3] for k in range(rest[0])]
                    + [((1, 0), (0, -1), (0, 1), (-1, 0))[k % 4] for k in range(rest[1])]
                    + [((1, -1), (-1, 1))[k % 2] for k in range(rest[2])])
        rng.shuffle(patterns)
        for sa, sb in patterns:
            n += 1
            sid = f"P{n:05d}"
            rows.append((sid, a, sa))
            rows.append((sid, b, sb))

    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["statement_id", "party", "stance"])
        w.writerows(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "stance_fixture.csv")

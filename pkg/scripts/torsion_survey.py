"""Torsion orders |G| over random admissible normal-form weight matrices.

Prints the distribution of |G| / (|prod a| + |prod b|), which stays above 1.
"""
import argparse
import math
import random
from collections import Counter

from forge import reduction as red


def random_normal_form(k, rng, bound):
    vals = [v for v in range(-bound, bound + 1) if v != 0]
    a = [rng.choice(vals) for _ in range(k)]
    b = [rng.choice(vals) for _ in range(k)]
    return tuple(tuple([int(i == j) for j in range(k)] + [a[i], b[i]]) for i in range(k)), a, b


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--bound", type=int, default=9)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    ratios = []
    orders = Counter()
    tried = 0
    while len(ratios) < args.count:
        tried += 1
        k = rng.randint(1, args.kmax)
        rows, a, b = random_normal_form(k, rng, args.bound)
        if not (red.is_admissible(rows) and red.is_reduced(rows)):
            continue
        g = red.torsion_order(rows)
        orders[k] += 1
        ratios.append(g / (abs(math.prod(a)) + abs(math.prod(b))))
    print(f"{len(ratios)} admissible reduced matrices out of {tried} drawn; by k: {dict(sorted(orders.items()))}")
    print(f"min ratio {min(ratios):.4f}, median {sorted(ratios)[len(ratios) // 2]:.4f}, max {max(ratios):.4f}")


if __name__ == "__main__":
    main()

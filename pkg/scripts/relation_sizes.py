"""Tabulate relation sizes for the parameterised family P(n), Q(n).

For each n prints the size of the small combined witness, the number of
type-2 reachable states of P, the forced pairs of the type-1 game and the
sizes of the largest strong 1- and 2-relations restricted to the game.
"""

import argparse
import time

from tacs.engine import Combined, Strong, check, explore
from tacs.semantics import TYPE2
from tacs.worked import combined_relation, family_p, family_q, forced_pair


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    cols = ["n", "4(n+1)", "combined", "4n^2+4", "type2 P", "(n+1)^3", "forced", "strong1", "strong2", "combined*", "secs"]
    print(" ".join(f"{c:>9}" for c in cols))
    for n in range(1, args.max_n + 1):
        start = time.perf_counter()
        p, q = family_p(n), family_q(n)
        s1 = check(p, q, Strong(1), 1_000_000)
        s2 = check(p, q, Strong(2), 1_000_000)
        c = check(p, q, Combined, 1_000_000)
        forced = {forced_pair(i, j, k, n) for i in range(n + 1) for j in range(n + 1) for k in range(n + 1)}
        row = [
            n,
            4 * (n + 1),
            len(combined_relation(n)),
            4 * n * n + 4,
            len(explore(p, 1_000_000, sems=(TYPE2,))),
            (n + 1) ** 3,
            len(forced & s1.witness.pairs),
            len(s1.witness),
            len(s2.witness),
            len(c.witness),
            f"{time.perf_counter() - start:.2f}",
        ]
        print(" ".join(f"{x:>9}" for x in row))


if __name__ == "__main__":
    main()

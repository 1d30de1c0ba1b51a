"""Run the seeded germ battery and the contraction-size sweep.

Part one draws random polynomial contraction germs, checks the jet-level
operator and Neumann convergence for every form degree, and prints timings.
Part two scales gamma = z/k and reports the sufficient condition next to
the exact invertibility of Id - gamma^* on 1-forms.
"""

import argparse
import time
from fractions import Fraction

from katohodge.germs.battery import BatteryConfig, battery_germs, neumann_checks, operator_checks
from katohodge.germs.gaussian import ZERO, gq
from katohodge.germs.jets import PolyGermMap
from katohodge.germs.operator import beta_matrix, contraction_report


def scaled_identity(n, k):
    return PolyGermMap.linear([[gq(Fraction(1, k)) if i == j else ZERO for j in range(n)] for i in range(n)])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--terms", type=int, default=60)
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--n", type=int, default=3, help="dimension for the z/k sweep")
    args = parser.parse_args()

    cfg = BatteryConfig(seed=args.seed, count=args.count, terms=args.terms, tol=args.tol)
    failures = 0
    t_op = t_neu = 0.0
    for germ in battery_germs(cfg):
        start = time.perf_counter()
        ops = operator_checks(germ)
        mid = time.perf_counter()
        neu = neumann_checks(germ, cfg.terms, cfg.tol)
        t_op += mid - start
        t_neu += time.perf_counter() - mid
        bad = [c for c in ops + neu if not c.passed]
        failures += len(bad)
        for c in bad:
            print(c.line())
    print(f"battery: {cfg.count} germs, seed {cfg.seed}, {failures} failed checks")
    print(f"  operator checks {t_op:.1f} s, Neumann checks {t_neu:.1f} s")

    print(f"\nsweep gamma = z/k on C^{args.n}, p = 1, jets of order 2")
    print(f"{'k':>4} {'C':>8} {'condition':>10} {'holds':>6} {'invertible':>11}")
    for k in (2, 3, 4, 6, 8, 12, 20):
        gamma = scaled_identity(args.n, k)
        rep = contraction_report(gamma)
        value, holds = rep.sufficient_condition[1]
        inv = beta_matrix(gamma, 1, 2)[1].invertible
        print(f"{k:>4} {rep.sampled_constant:>8.4f} {value:>10.4f} {str(holds):>6} {str(inv):>11}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()

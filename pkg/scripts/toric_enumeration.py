"""Enumerate star-subdivision sequences of the orthant and tabulate toric Kato numbers.

Maximal-cone sequences are compared with the point blow-up closed form; the
number of distinct resulting fans is reported alongside the number of
sequences.  With ``--faces`` the same is done for subdivisions of lower
dimensional faces that contain an interior ray.
"""

import argparse
import itertools
import time
from collections import Counter

from katohodge.kato import blowup_points_kato
from katohodge.toric import orthant_fan, point_subdivision_sequences, star_subdivide, toric_kato_numbers


def face_sequences(n, r):
    """Sequences whose first step is the whole orthant and whose later steps
    subdivide a face (dimension >= 2) containing an interior ray."""

    def walk(fan, script):
        if len(script) == r:
            yield list(script), fan
            return
        seen = set()
        for cone in fan.max_cones:
            for k in range(2, n + 1):
                for face in itertools.combinations(cone, k):
                    if face in seen or all(i < n for i in face):
                        continue
                    seen.add(face)
                    script.append(list(face))
                    yield from walk(star_subdivide(fan, face), script)
                    script.pop()

    first = star_subdivide(orthant_fan(n), tuple(range(n)))
    yield from walk(first, [list(range(n))])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[3, 4])
    parser.add_argument("--max-r", type=int, default=4)
    parser.add_argument("--faces", action="store_true", help="also enumerate face subdivisions (n=3 only, r<=3)")
    args = parser.parse_args()

    print(f"{'n':>2} {'r':>2} {'sequences':>10} {'fans':>6} {'match':>6} {'seconds':>8}")
    for n in args.n:
        for r in range(1, args.max_r + 1):
            start = time.perf_counter()
            expected = blowup_points_kato(n, r)
            seqs, fans, match = 0, set(), 0
            for _, fan in point_subdivision_sequences(n, r):
                seqs += 1
                fans.add(fan)
                match += toric_kato_numbers(fan) == expected
            print(f"{n:>2} {r:>2} {seqs:>10} {len(fans):>6} {match:>6} {time.perf_counter() - start:>8.2f}")

    if args.faces:
        print("\nface subdivisions of C^3: distribution of b_2 = b_4")
        for r in range(1, 4):
            dist = Counter(toric_kato_numbers(fan)[1][2] for _, fan in face_sequences(3, r))
            print(f"  {r} steps: " + ", ".join(f"b2={k}: {v}" for k, v in sorted(dist.items())))


if __name__ == "__main__":
    main()

"""Smooth simplicial fans refining the positive orthant.

Fans are built from :func:`orthant_fan` by :func:`star_subdivide`; a star
subdivision of a maximal cone models the blow-up of a torus-fixed point.
Whether a user-supplied fan actually has the orthant as support is not
checked.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .diamond import BettiVector, HodgeDiamond
from .report import Check, Report

__all__ = [
    "Fan",
    "orthant_fan",
    "star_subdivide",
    "validate_fan",
    "cone_counts",
    "toric_betti_sum",
    "toric_kato_numbers",
    "fan_from_script",
    "point_subdivision_sequences",
    "TrivialModificationWarning",
]


class TrivialModificationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Fan:
    n: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, n: int, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]]) -> Fan:
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        cones = tuple(sorted({tuple(sorted(set(c))) for c in cones}))
        for r in rays:
            if len(r) != n:
                raise ValueError(f"ray {r} does not live in Z^{n}")
        for c in cones:
            if any(i < 0 or i >= len(rays) for i in c):
                raise ValueError(f"cone {c} references a missing ray")
            if len(c) > n:
                raise ValueError(f"cone {c} has more than {n} rays")
        return cls(n, rays, cones)

    def faces(self) -> set[tuple[int, ...]]:
        out = set()
        for cone in self.max_cones:
            for k in range(len(cone) + 1):
                out.update(itertools.combinations(cone, k))
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_json(cls, data: Mapping) -> Fan:
        return cls.make(int(data["n"]), data["rays"], data["max_cones"])


def orthant_fan(n: int) -> Fan:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return Fan.make(n, rays, [range(n)])


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(math.gcd, v, 0)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def star_subdivide(fan: Fan, cone: Iterable[int]) -> Fan:
    """Insert the primitive ray-sum of ``cone`` and star-subdivide around it."""
    tau = tuple(sorted(set(cone)))
    if len(tau) < 2:
        raise ValueError("only cones of dimension >= 2 can be subdivided")
    containing = [c for c in fan.max_cones if set(tau) <= set(c)]
    if not containing:
        raise ValueError(f"cone {tau} is not a face of the fan")
    rho = _primitive([sum(fan.rays[i][k] for i in tau) for k in range(fan.n)])
    if rho in fan.rays:
        raise ValueError(f"ray {rho} already present; subdivision would not be simplicial")
    new = len(fan.rays)
    cones = [c for c in fan.max_cones if c not in containing]
    for c in containing:
        for i in tau:
            cones.append(tuple(j for j in c if j != i) + (new,))
    out = Fan.make(fan.n, fan.rays + (rho,), cones)
    bad = [c for c in out.max_cones if not _unimodular(out, c)]
    if bad:
        raise ValueError(f"subdivision produced non-smooth cones {bad}")
    return out


def _det(m: list[list[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    m = [row[:] for row in m]
    k = len(m)
    sign, prev = 1, 1
    for i in range(k - 1):
        if m[i][i] == 0:
            swap = next((r for r in range(i + 1, k) if m[r][i] != 0), None)
            if swap is None:
                return 0
            m[i], m[swap] = m[swap], m[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
        prev = m[i][i]
    return sign * m[k - 1][k - 1] if k else 1


def _maximal_minors_gcd(vectors: list[tuple[int, ...]]) -> int:
    """gcd of the k x k minors of a k x n matrix; 1 iff the rows extend to a basis."""
    k = len(vectors)
    if k == 0:
        return 1
    n = len(vectors[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = math.gcd(g, _det([[v[c] for c in cols] for v in vectors]))
        if g == 1:
            return 1
    return g


def _unimodular(fan: Fan, cone: tuple[int, ...]) -> bool:
    return _maximal_minors_gcd([fan.rays[i] for i in cone]) == 1


def validate_fan(fan: Fan) -> Report:
    checks = []
    for i, r in enumerate(fan.rays):
        g = reduce(math.gcd, r, 0)
        checks.append(Check(f"ray{i}_primitive", g == 1, f"ray {list(r)} has content {g}"))
    dupes = len(fan.rays) - len(set(fan.rays))
    checks.append(Check("rays_distinct", dupes == 0, f"{dupes} duplicate rays"))
    for c in fan.max_cones:
        g = _maximal_minors_gcd([fan.rays[i] for i in c])
        if g == 0:
            checks.append(Check(f"cone{list(c)}_simplicial", False, "rays are linearly dependent"))
        else:
            checks.append(Check(f"cone{list(c)}_smooth", g == 1, f"multiplicity {g}"))
    checks.append(Check("support_unchecked", True, "support equal to the orthant is not verified"))
    return Report("fan", tuple(checks))


def cone_counts(fan: Fan) -> tuple[int, ...]:
    """``a_k`` = number of ``k``-dimensional cones, ``k = 0..n``."""
    counts = [0] * (fan.n + 1)
    for face in fan.faces():
        counts[len(face)] += 1
    return tuple(counts)


def toric_betti_sum(n: int, a: Sequence[int], j: int) -> int:
    """``sum_{s=j}^{n} (-1)^{s-j} C(s,j) (a_{n-s} + C(n,s+1))``: the ``2j``-th
    Betti number of the compactified modification of ``CP^n``."""
    return sum(
        (-1) ** (s - j) * math.comb(s, j) * (a[n - s] + math.comb(n, s + 1))
        for s in range(j, n + 1)
    )


def toric_kato_numbers(fan: Fan) -> tuple[HodgeDiamond, BettiVector]:
    n = fan.n
    if n < 3:
        raise ValueError(f"toric Kato manifolds are handled for n >= 3, got {n}")
    report = validate_fan(fan)
    if not report.passed:
        raise ValueError("invalid fan: " + "; ".join(c.name for c in report.failures()))
    basis = {tuple(int(i == j) for j in range(n)) for i in range(n)}
    boundary = [list(r) for r in fan.rays if r not in basis and min(r) <= 0]
    if boundary:
        raise ValueError(f"rays {boundary} leave the open orthant: the modification is not centred over the origin")
    a = cone_counts(fan)
    if fan.max_cones == orthant_fan(n).max_cones and len(fan.rays) == n:
        warnings.warn("fan is the orthant: trivial modification", TrivialModificationWarning)
    b = [0] * (2 * n + 1)
    for k in (0, 1, 2 * n - 1, 2 * n):
        b[k] = 1
    h = {(0, 0): 1, (0, 1): 1, (n, n - 1): 1, (n, n): 1}
    for j in range(1, n):
        v = toric_betti_sum(n, a, j) - 1
        if v < 0:
            raise ValueError(f"negative Betti number b_{2 * j} = {v}; fan is not a modification of the orthant")
        b[2 * j] = v
        h[(j, j)] = v
    return HodgeDiamond.from_entries(n, h), BettiVector(n, tuple(b))


def fan_from_script(data: Mapping) -> Fan:
    """Either a fan ``{"n", "rays", "max_cones"}`` or a subdivision script
    ``{"n", "subdivide": [[ray indices], ...]}`` applied to the orthant."""
    if "rays" in data:
        return Fan.from_json(data)
    fan = orthant_fan(int(data["n"]))
    for cone in data.get("subdivide", []):
        fan = star_subdivide(fan, cone)
    return fan


def point_subdivision_sequences(n: int, r: int):
    """Every sequence of ``r`` star subdivisions of maximal cones, starting from
    the orthant.  Yields ``(script, fan)`` with ``script`` the list of cones."""

    def walk(fan: Fan, script: list):
        if len(script) == r:
            yield list(script), fan
            return
        for cone in fan.max_cones:
            script.append(list(cone))
            yield from walk(star_subdivide(fan, cone), script)
            script.pop()

    yield from walk(orthant_fan(n), [])

"""Blow-up and blow-down bookkeeping for Dolbeault and Betti numbers.

Blowing up an ``n``-fold ``X`` along a submanifold ``Z`` of codimension
``r >= 2`` adds ``Z``'s diamond shifted by ``(i, i)`` for ``i = 1..r-1`` and
``Z``'s Betti vector shifted by ``2i``.  Blow-downs subtract the same terms.
Whether a given chain of centers is geometrically realizable is never
checked; only the numbers are tracked.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .diamond import BettiVector, HodgeDiamond, hodge_sums, standard_table
from .report import Check, Report

__all__ = [
    "Center",
    "Direction",
    "ModificationStep",
    "ModificationSequence",
    "InfeasibleBlowDown",
    "builtin_center",
    "blowup_hodge",
    "blowup_betti",
    "blowdown_hodge",
    "blowdown_betti",
    "evaluate_sequence",
    "bimeromorphic_invariants_check",
]


class InfeasibleBlowDown(ValueError):
    """A blow-down would leave a negative Hodge or Betti number."""


@dataclass(frozen=True)
class Center:
    name: str
    diamond: HodgeDiamond
    betti: BettiVector

    def __post_init__(self):
        if self.diamond.n != self.betti.n:
            raise ValueError(
                f"center {self.name!r}: diamond n={self.diamond.n} but Betti n={self.betti.n}"
            )
        if self.diamond.serre_violations():
            raise ValueError(f"center {self.name!r} is not Serre-symmetric")

    @property
    def dim(self) -> int:
        return self.diamond.n

    def to_json(self):
        if self.name.startswith("builtin:"):
            return self.name.removeprefix("builtin:")
        return {"name": self.name, "diamond": self.diamond.to_json(), "betti": list(self.betti.b)}


def builtin_center(spec: str) -> Center:
    """Built-in centers: ``point``, ``elliptic``, ``cpn:k``, ``riemann_surface:g``."""
    kind, _, arg = spec.partition(":")
    if kind == "point" and not arg:
        d = standard_table("point")
    elif kind == "elliptic" and not arg:
        d = standard_table("riemann_surface", 1)
    elif kind == "cpn" and arg:
        d = standard_table("cpn", int(arg))
    elif kind == "riemann_surface" and arg:
        d = standard_table("riemann_surface", int(arg))
    else:
        raise ValueError(f"unknown built-in center {spec!r}")
    return Center(f"builtin:{spec}", d, BettiVector(d.n, hodge_sums(d)))


class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class ModificationStep:
    direction: Direction
    center: Center
    codim: int

    def __post_init__(self):
        if self.codim < 2:
            raise ValueError(f"codimension must be >= 2, got {self.codim}")

    def to_json(self) -> dict:
        return {"direction": self.direction.value, "codim": self.codim, "center": self.center.to_json()}


@dataclass(frozen=True)
class ModificationSequence:
    ambient_n: int
    steps: tuple[ModificationStep, ...]

    def __post_init__(self):
        for i, step in enumerate(self.steps):
            if step.center.dim != self.ambient_n - step.codim:
                raise ValueError(
                    f"step {i}: center of dimension {step.center.dim} cannot have "
                    f"codimension {step.codim} in an {self.ambient_n}-fold"
                )

    @classmethod
    def point_blowups(cls, n: int, r: int) -> ModificationSequence:
        point = builtin_center("point")
        return cls(n, tuple(ModificationStep(Direction.UP, point, n) for _ in range(r)))

    def to_json(self) -> dict:
        return {"ambient_n": self.ambient_n, "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, data: Mapping) -> ModificationSequence:
        n = int(data["ambient_n"])
        steps = []
        for raw in data["steps"]:
            center = raw["center"]
            if isinstance(center, str):
                c = builtin_center(center)
            else:
                c = Center(
                    str(center.get("name", "custom")),
                    HodgeDiamond.from_json(center["diamond"]),
                    BettiVector.from_json(center["betti"]),
                )
            steps.append(ModificationStep(Direction(raw["direction"]), c, int(raw["codim"])))
        return cls(n, tuple(steps))


def _check_dims(n: int, center: Center, r: int):
    if r < 2:
        raise ValueError(f"codimension must be >= 2, got {r}")
    if center.dim != n - r:
        raise ValueError(
            f"center has dimension {center.dim}, expected {n - r} for codimension {r} in dimension {n}"
        )


def _shifted_hodge(n: int, z: HodgeDiamond, r: int) -> list[list[int]]:
    return [
        [sum(z[p - i, q - i] for i in range(1, r)) for q in range(n + 1)]
        for p in range(n + 1)
    ]


def _shifted_betti(n: int, z: BettiVector, r: int) -> list[int]:
    return [sum(z[k - 2 * i] for i in range(1, r)) for k in range(2 * n + 1)]


def blowup_hodge(x: HodgeDiamond, z: Center, r: int) -> HodgeDiamond:
    _check_dims(x.n, z, r)
    extra = _shifted_hodge(x.n, z.diamond, r)
    rows = tuple(
        tuple(x.h[p][q] + extra[p][q] for q in range(x.n + 1)) for p in range(x.n + 1)
    )
    return HodgeDiamond(x.n, rows, x.compact)


def blowup_betti(xb: BettiVector, z: Center, r: int) -> BettiVector:
    _check_dims(xb.n, z, r)
    extra = _shifted_betti(xb.n, z.betti, r)
    return BettiVector(xb.n, tuple(a + e for a, e in zip(xb.b, extra)), xb.compact)


def blowdown_hodge(xt: HodgeDiamond, z: Center, r: int) -> HodgeDiamond:
    _check_dims(xt.n, z, r)
    extra = _shifted_hodge(xt.n, z.diamond, r)
    rows = [[xt.h[p][q] - extra[p][q] for q in range(xt.n + 1)] for p in range(xt.n + 1)]
    negative = [(p, q) for p, row in enumerate(rows) for q, v in enumerate(row) if v < 0]
    if negative:
        p, q = negative[0]
        raise InfeasibleBlowDown(
            f"blow-down along {z.name} (codim {r}) leaves h({p},{q}) = {rows[p][q]}"
            f" (and {len(negative) - 1} more negative entries)"
        )
    return HodgeDiamond(xt.n, tuple(map(tuple, rows)), xt.compact)


def blowdown_betti(xb: BettiVector, z: Center, r: int) -> BettiVector:
    _check_dims(xb.n, z, r)
    extra = _shifted_betti(xb.n, z.betti, r)
    b = [a - e for a, e in zip(xb.b, extra)]
    negative = [k for k, v in enumerate(b) if v < 0]
    if negative:
        k = negative[0]
        raise InfeasibleBlowDown(f"blow-down along {z.name} (codim {r}) leaves b_{k} = {b[k]}")
    return BettiVector(xb.n, tuple(b), xb.compact)


def evaluate_sequence(
    base_hodge: HodgeDiamond, base_betti: BettiVector, seq: ModificationSequence
) -> tuple[HodgeDiamond, BettiVector]:
    if base_hodge.n != seq.ambient_n or base_betti.n != seq.ambient_n:
        raise ValueError("base tables and sequence disagree on the dimension")
    h, b = base_hodge, base_betti
    for i, step in enumerate(seq.steps):
        if step.direction is Direction.UP:
            h = blowup_hodge(h, step.center, step.codim)
            b = blowup_betti(b, step.center, step.codim)
        else:
            try:
                h = blowdown_hodge(h, step.center, step.codim)
                b = blowdown_betti(b, step.center, step.codim)
            except InfeasibleBlowDown as exc:
                raise InfeasibleBlowDown(f"step {i}: {exc}") from None
    return h, b


def bimeromorphic_invariants_check(before: HodgeDiamond, after: HodgeDiamond) -> Report:
    """Rows ``h(p,0)`` and columns ``h(0,q)`` are bimeromorphic invariants."""
    if before.n != after.n:
        raise ValueError(f"dimension mismatch: {before.n} vs {after.n}")
    n = before.n
    cells = sorted({(p, 0) for p in range(n + 1)} | {(0, q) for q in range(n + 1)})
    checks = tuple(
        Check(f"h({p},{q})", before[p, q] == after[p, q], f"{before[p, q]} vs {after[p, q]}")
        for p, q in cells
    )
    return Report("bimeromorphic_invariants", checks)

"""Hodge, Betti, Bott-Chern and Aeppli numbers of Kato manifolds.

A Kato manifold of dimension ``n >= 3`` is described here only by its
modification at the origin, given as a :class:`ModificationSequence`.  The
embedding ``sigma`` of the Kato data has no numeric effect on cohomology and
is not represented (the standing assumption ``sigma(0)`` in the exceptional
set is documentation only).

Two independent routes produce the Dolbeault diamond:

* directly from ``CP^n`` modified at a point: corners are 1, every other entry
  is ``h(CP^n hat) - h(CP^n)``;
* from the partial table of the modified ball (defined for ``q >= 1``) filled
  in by Serre duality.

:func:`kato_numbers` computes both and records their agreement as a check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diamond import (
    EQUALS_HOPF_HAT,
    KNOWN_ONE,
    KNOWN_ZERO,
    UNKNOWN,
    BettiVector,
    EntryState,
    HermitianEntry,
    HodgeDiamond,
    PartialDolbeaultTable,
    PartialHermitianTable,
    check_decomposition,
    standard_table,
)
from .modifications import Direction, ModificationSequence, evaluate_sequence
from .report import Check

__all__ = [
    "KatoInput",
    "KatoReport",
    "DualityError",
    "cpn_hat_numbers",
    "bhat_partial",
    "kato_from_bhat",
    "kato_numbers",
    "hopf_hat_numbers",
    "blowup_points_kato",
    "bott_chern_table",
    "aeppli_table",
]


class DualityError(AssertionError):
    """Bott-Chern/Aeppli tables disagree with the Dolbeault diamond."""


@dataclass(frozen=True)
class KatoInput:
    n: int
    seq: ModificationSequence

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"Kato manifolds are handled for n >= 3, got n={self.n}")
        if self.seq.ambient_n != self.n:
            raise ValueError(f"sequence lives in dimension {self.seq.ambient_n}, not {self.n}")
        if not self.seq.steps:
            raise ValueError("a Kato modification needs at least the blow-up at the origin")
        first = self.seq.steps[0]
        if first.direction is not Direction.UP or first.center.dim != 0:
            raise ValueError("the first step must blow up a point (the origin)")

    @classmethod
    def from_json(cls, data) -> KatoInput:
        seq = ModificationSequence.from_json(data)
        return cls(seq.ambient_n, seq)


@dataclass(frozen=True)
class KatoReport:
    hodge: HodgeDiamond
    betti: BettiVector
    bc: PartialHermitianTable
    aeppli: PartialHermitianTable
    checks: tuple[Check, ...]
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "hodge": self.hodge.to_json(),
            "betti": self.betti.to_json(),
            "bc": self.bc.to_json(),
            "aeppli": self.aeppli.to_json(),
            "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.name)],
            "notes": list(self.notes),
        }


def _corners(n: int) -> set[tuple[int, int]]:
    return {(0, 0), (0, 1), (n, n - 1), (n, n)}


def cpn_hat_numbers(inp: KatoInput) -> tuple[HodgeDiamond, BettiVector]:
    n = inp.n
    return evaluate_sequence(standard_table("cpn", n), standard_table("cpn_betti", n), inp.seq)


def bhat_partial(inp: KatoInput) -> PartialDolbeaultTable:
    """Dolbeault numbers of the modified ball; row ``q = 0`` is infinite-dimensional."""
    n = inp.n
    hat, _ = cpn_hat_numbers(inp)
    base = standard_table("cpn", n)
    values = tuple(
        tuple(None if q == 0 else hat[p, q] - base[p, q] for q in range(n + 1))
        for p in range(n + 1)
    )
    return PartialDolbeaultTable(n, values)


def kato_from_bhat(table: PartialDolbeaultTable) -> HodgeDiamond:
    n = table.n
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    missing = [
        (p, q) for p in range(n + 1) for q in range(1, n - 1) if not table.is_defined(p, q)
    ]
    if missing:
        raise ValueError(f"modified-ball table undefined at {missing}")
    h = [[0] * (n + 1) for _ in range(n + 1)]
    for p in range(n + 1):
        for q in range(2, n - 1):
            h[p][q] = table[p, q]
        h[p][0] = 1 if p == 0 else 0
        h[p][1] = table[p, 1] + (1 if p == 0 else 0)
    for p in range(n + 1):
        h[n - p][n] = h[p][0]
        h[n - p][n - 1] = h[p][1]
    return HodgeDiamond(n, tuple(map(tuple, h)))


def _kato_direct(inp: KatoInput) -> tuple[HodgeDiamond, BettiVector]:
    n = inp.n
    hat, bhat = cpn_hat_numbers(inp)
    cpn, cpn_b = standard_table("cpn", n), standard_table("cpn_betti", n)
    corners = _corners(n)
    h = {
        (p, q): 1 if (p, q) in corners else hat[p, q] - cpn[p, q]
        for p in range(n + 1)
        for q in range(n + 1)
    }
    b = tuple(
        1 if k in (0, 1, 2 * n - 1, 2 * n) else bhat[k] - cpn_b[k] for k in range(2 * n + 1)
    )
    return HodgeDiamond.from_entries(n, h), BettiVector(n, b)


def hopf_hat_numbers(inp: KatoInput) -> tuple[HodgeDiamond, BettiVector]:
    """Tables of the Hopf manifold modified at one point by the same modification."""
    n = inp.n
    hat, bhat = cpn_hat_numbers(inp)
    cpn, cpn_b = standard_table("cpn", n), standard_table("cpn_betti", n)
    hopf, hopf_b = standard_table("hopf_hodge", n), standard_table("hopf_betti", n)
    h = {
        (p, q): hopf[p, q] + hat[p, q] - cpn[p, q] for p in range(n + 1) for q in range(n + 1)
    }
    b = tuple(hopf_b[k] + bhat[k] - cpn_b[k] for k in range(2 * n + 1))
    return HodgeDiamond.from_entries(n, h), BettiVector(n, b)


def blowup_points_kato(n: int, r: int) -> tuple[HodgeDiamond, BettiVector]:
    """Closed form for ``r`` successive point blow-ups."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if r < 1:
        raise ValueError(f"need r >= 1 blow-ups, got {r}")
    h = {(p, q): 1 for p, q in _corners(n)}
    h.update({(p, p): r for p in range(1, n)})
    b = tuple(
        1 if k in (0, 1, 2 * n - 1, 2 * n) else (r if k % 2 == 0 else 0)
        for k in range(2 * n + 1)
    )
    return HodgeDiamond.from_entries(n, h), BettiVector(n, b)


def bott_chern_table(inp: KatoInput, hodge: HodgeDiamond | None = None) -> PartialHermitianTable:
    n = inp.n
    if hodge is None:
        hodge = _kato_direct(inp)[0]
    rows = []
    for p in range(n + 1):
        row = []
        for q in range(n + 1):
            if q == 0:
                e = KNOWN_ONE if p == 0 else KNOWN_ZERO
            elif p == n:
                e = KNOWN_ONE if q in (n - 1, n) else KNOWN_ZERO
            elif p >= 2 and q >= 2 and p + q <= n - 1:
                e = HermitianEntry(EntryState.KNOWN, hodge[p, q])
            elif p == 0 or q == n:
                e = EQUALS_HOPF_HAT
            else:
                e = UNKNOWN
            row.append(e)
        rows.append(tuple(row))
    return PartialHermitianTable(n, "bott_chern", tuple(rows))


def aeppli_table(bc: PartialHermitianTable, hodge: HodgeDiamond) -> PartialHermitianTable:
    """Aeppli table as the index dual of ``bc``, checked against ``hodge``."""
    if bc.kind != "bott_chern":
        raise ValueError("aeppli_table expects a Bott-Chern table")
    n = bc.n
    aeppli = bc.dual()
    for (p, q), v in aeppli.known().items():
        in_region = (p <= n - 2 and q <= n - 2 and p + q >= n + 1) or p == 0 or q == n
        if in_region and v != hodge[p, q]:
            raise DualityError(f"Aeppli ({p},{q}) = {v} but h^({p},{q}) = {hodge[p, q]}")
    if aeppli.dual() != bc:
        raise DualityError("dualizing the Aeppli table does not give back the Bott-Chern table")
    return aeppli


def _diamond_diff(a: HodgeDiamond, b: HodgeDiamond) -> str:
    diff = [(p, q) for p in range(a.n + 1) for q in range(a.n + 1) if a[p, q] != b[p, q]]
    return ", ".join(f"({p},{q}): {a[p, q]} vs {b[p, q]}" for p, q in diff)


def _betti_diff(a: BettiVector, b: BettiVector) -> str:
    return ", ".join(f"b_{k}: {x} vs {y}" for k, (x, y) in enumerate(zip(a.b, b.b)) if x != y)


def kato_numbers(inp: KatoInput) -> KatoReport:
    """Full report; route disagreements show up as failed checks, not errors."""
    n = inp.n
    hodge, betti = _kato_direct(inp)
    via_ball = kato_from_bhat(bhat_partial(inp))
    hopf_h, hopf_b = hopf_hat_numbers(inp)
    bc = bott_chern_table(inp, hodge)
    aeppli = aeppli_table(bc, hodge)
    hopf_bc = standard_table("hopf_bc", n)

    checks = [
        Check("route_agreement", via_ball == hodge, _diamond_diff(hodge, via_ball)),
        Check(
            "hopf_hat_agreement",
            hopf_h == hodge and hopf_b == betti,
            "; ".join(filter(None, [_diamond_diff(hodge, hopf_h), _betti_diff(betti, hopf_b)])),
        ),
        Check(
            "z_cover_numbers",
            all(betti[k] == 1 for k in (0, 1, 2 * n - 1, 2 * n))
            and hodge[0, 1] == 1
            and hodge[n, n - 1] == 1,
            f"b0={betti[0]} b1={betti[1]} h01={hodge[0, 1]} h(n,n-1)={hodge[n, n - 1]}",
        ),
        Check(
            "bc_hopf_corners",
            all(bc[pq] == hopf_bc[pq] for pq in [(n, n - 1), (n, n)] + [(p, 0) for p in range(n + 1)]),
        ),
        Check("aeppli_duality", aeppli.dual() == bc),
    ]
    dec = check_decomposition(hodge, betti)
    checks.append(
        Check(
            "hodge_decomposition",
            dec.passed,
            "; ".join(c.detail for c in dec.failures()),
        )
    )
    notes = []
    if hodge[1, 2] == 0:
        notes.append("h^(1,2) = 0: no pluriclosed metric (obstruction for n >= 3)")
    else:
        notes.append(f"h^(1,2) = {hodge[1, 2]}: the vanishing obstruction to pluriclosed metrics does not apply")
    notes.append("centers are not checked for geometric realizability")
    return KatoReport(hodge, betti, bc, aeppli, tuple(checks), tuple(notes))


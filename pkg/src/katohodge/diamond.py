"""Cohomology tables of compact complex manifolds.

Dolbeault diamonds, Betti vectors, partially determined Dolbeault tables for
open manifolds, and partially determined Bott-Chern / Aeppli tables.  All
types are immutable; entries outside ``[0, n]`` read as zero so that shifted
sums in the blow-up formulas need no bound checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .report import Check, Report

__all__ = [
    "HodgeDiamond",
    "BettiVector",
    "PartialDolbeaultTable",
    "EntryState",
    "HermitianEntry",
    "PartialHermitianTable",
    "standard_table",
    "serre_dual",
    "hodge_sums",
    "check_decomposition",
    "render_diamond",
    "parse_diamond",
]


@dataclass(frozen=True)
class HodgeDiamond:
    """Table ``h[p][q]`` of Dolbeault numbers of an ``n``-fold."""

    n: int
    h: tuple[tuple[int, ...], ...]
    compact: bool = True

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"dimension must be >= 0, got {self.n}")
        if len(self.h) != self.n + 1 or any(len(row) != self.n + 1 for row in self.h):
            raise ValueError(f"expected a {self.n + 1}x{self.n + 1} table")
        for p, row in enumerate(self.h):
            for q, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                    raise ValueError(f"h({p},{q}) = {v!r} is not a non-negative integer")
        if self.compact:
            bad = self.serre_violations()
            if bad:
                p, q = bad[0]
                raise ValueError(
                    f"compact diamond violates Serre symmetry at ({p},{q}): "
                    f"{self.h[p][q]} != {self.h[self.n - p][self.n - q]}"
                )

    @classmethod
    def zero(cls, n: int, compact: bool = True) -> HodgeDiamond:
        return cls(n, tuple((0,) * (n + 1) for _ in range(n + 1)), compact)

    @classmethod
    def from_entries(
        cls, n: int, entries: Mapping[tuple[int, int], int], compact: bool = True
    ) -> HodgeDiamond:
        table = [[0] * (n + 1) for _ in range(n + 1)]
        for (p, q), v in entries.items():
            if not (0 <= p <= n and 0 <= q <= n):
                raise ValueError(f"entry ({p},{q}) outside [0,{n}]^2")
            table[p][q] = v
        return cls(n, tuple(map(tuple, table)), compact)

    def __getitem__(self, pq: tuple[int, int]) -> int:
        p, q = pq
        if 0 <= p <= self.n and 0 <= q <= self.n:
            return self.h[p][q]
        return 0

    def entries(self) -> dict[tuple[int, int], int]:
        """Non-zero entries keyed by ``(p, q)``."""
        return {
            (p, q): v
            for p, row in enumerate(self.h)
            for q, v in enumerate(row)
            if v
        }

    def serre_violations(self) -> list[tuple[int, int]]:
        n = self.n
        return [
            (p, q)
            for p in range(n + 1)
            for q in range(n + 1)
            if self.h[p][q] != self.h[n - p][n - q]
        ]

    def with_compact(self, compact: bool) -> HodgeDiamond:
        return HodgeDiamond(self.n, self.h, compact)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "compact": self.compact,
            "entries": [[p, q, v] for (p, q), v in sorted(self.entries().items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> HodgeDiamond:
        n = int(data["n"])
        entries: dict[tuple[int, int], int] = {}
        for item in data.get("entries", []):
            p, q, v = item
            if (p, q) in entries:
                raise ValueError(f"duplicate entry ({p},{q})")
            entries[(int(p), int(q))] = v
        for v in entries.values():
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"entry value {v!r} is not an integer")
        return cls.from_entries(n, entries, bool(data.get("compact", True)))


@dataclass(frozen=True)
class BettiVector:
    """Betti numbers ``b_0 .. b_{2n}`` of a real ``2n``-manifold."""

    n: int
    b: tuple[int, ...]
    compact: bool = True

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"dimension must be >= 0, got {self.n}")
        if len(self.b) != 2 * self.n + 1:
            raise ValueError(f"expected {2 * self.n + 1} Betti numbers, got {len(self.b)}")
        for k, v in enumerate(self.b):
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"b_{k} = {v!r} is not a non-negative integer")
        if self.compact:
            top = 2 * self.n
            for k in range(top + 1):
                if self.b[k] != self.b[top - k]:
                    raise ValueError(
                        f"compact Betti vector violates Poincare symmetry at k={k}"
                    )

    def __getitem__(self, k: int) -> int:
        if 0 <= k <= 2 * self.n:
            return self.b[k]
        return 0

    def to_json(self) -> dict:
        return {"n": self.n, "compact": self.compact, "b": list(self.b)}

    @classmethod
    def from_json(cls, data) -> BettiVector:
        if isinstance(data, list):
            if len(data) % 2 != 1:
                raise ValueError("a Betti list must have odd length 2n+1")
            return cls((len(data) - 1) // 2, tuple(data))
        return cls(int(data["n"]), tuple(data["b"]), bool(data.get("compact", True)))


@dataclass(frozen=True)
class PartialDolbeaultTable:
    """Dolbeault numbers of an open manifold; ``None`` marks an undefined entry."""

    n: int
    values: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        for row in self.values:
            for v in row:
                if v is not None and v < 0:
                    raise ValueError("defined entries must be non-negative")

    def __getitem__(self, pq: tuple[int, int]) -> int | None:
        p, q = pq
        return self.values[p][q]

    def is_defined(self, p: int, q: int) -> bool:
        return self.values[p][q] is not None


class EntryState(enum.Enum):
    KNOWN = "known"
    EQUALS_HOPF_HAT = "equals_hopf_hat"
    UNKNOWN = "unknown"


class HermitianEntry(NamedTuple):
    state: EntryState
    value: int | None = None

    def to_json(self) -> dict:
        out: dict = {"state": self.state.value}
        if self.value is not None:
            out["value"] = self.value
        return out


KNOWN_ZERO = HermitianEntry(EntryState.KNOWN, 0)
KNOWN_ONE = HermitianEntry(EntryState.KNOWN, 1)
UNKNOWN = HermitianEntry(EntryState.UNKNOWN)
EQUALS_HOPF_HAT = HermitianEntry(EntryState.EQUALS_HOPF_HAT)


@dataclass(frozen=True)
class PartialHermitianTable:
    """Bott-Chern (``kind='bott_chern'``) or Aeppli (``kind='aeppli'``) numbers,
    each entry Known, EqualsHopfHat, or Unknown."""

    n: int
    kind: str
    entries: tuple[tuple[HermitianEntry, ...], ...]

    def __post_init__(self):
        if self.kind not in ("bott_chern", "aeppli"):
            raise ValueError(f"unknown table kind {self.kind!r}")
        for row in self.entries:
            for e in row:
                if e.state is EntryState.KNOWN and (e.value is None or e.value < 0):
                    raise ValueError("known entries carry a non-negative value")

    def __getitem__(self, pq: tuple[int, int]) -> HermitianEntry:
        p, q = pq
        return self.entries[p][q]

    def known(self) -> dict[tuple[int, int], int]:
        return {
            (p, q): e.value
            for p, row in enumerate(self.entries)
            for q, e in enumerate(row)
            if e.state is EntryState.KNOWN
        }

    def dual(self) -> PartialHermitianTable:
        """Index-dual table ``(p, q) -> (n-p, n-q)`` of the opposite kind."""
        n = self.n
        other = "aeppli" if self.kind == "bott_chern" else "bott_chern"
        rows = tuple(
            tuple(self.entries[n - p][n - q] for q in range(n + 1)) for p in range(n + 1)
        )
        return PartialHermitianTable(n, other, rows)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "entries": [
                [p, q, e.to_json()]
                for p, row in enumerate(self.entries)
                for q, e in enumerate(row)
            ],
        }


def _diagonal(n: int) -> HodgeDiamond:
    return HodgeDiamond.from_entries(n, {(p, p): 1 for p in range(n + 1)})


def _hopf_hodge(n: int) -> HodgeDiamond:
    return HodgeDiamond.from_entries(
        n, {(0, 0): 1, (0, 1): 1, (n, n - 1): 1, (n, n): 1}
    )


def _hopf_bc(n: int) -> PartialHermitianTable:
    ones = {(0, 0), (1, 1), (n - 1, n), (n, n - 1), (n, n)}
    rows = tuple(
        tuple(KNOWN_ONE if (p, q) in ones else KNOWN_ZERO for q in range(n + 1))
        for p in range(n + 1)
    )
    return PartialHermitianTable(n, "bott_chern", rows)


def _riemann_surface(g: int) -> HodgeDiamond:
    return HodgeDiamond.from_entries(1, {(0, 0): 1, (0, 1): g, (1, 0): g, (1, 1): 1})


def standard_table(kind: str, param: int | None = None):
    """Reference tables.

    ``kind`` is one of ``point``, ``cpn``, ``cpn_betti``, ``riemann_surface``
    (``param`` is the genus), ``hopf_hodge``, ``hopf_betti``, ``hopf_bc``
    (``param`` is the complex dimension for all others but ``point``).
    """
    if kind == "point":
        return HodgeDiamond(0, ((1,),))
    if kind == "riemann_surface":
        if param is None or param < 0:
            raise ValueError("riemann_surface needs a genus >= 0")
        return _riemann_surface(param)
    builders = {
        "cpn": _diagonal,
        "cpn_betti": lambda n: BettiVector(n, tuple(1 - k % 2 for k in range(2 * n + 1))),
        "hopf_hodge": _hopf_hodge,
        "hopf_betti": lambda n: BettiVector(
            n, tuple(1 if k in (0, 1, 2 * n - 1, 2 * n) else 0 for k in range(2 * n + 1))
        ),
        "hopf_bc": _hopf_bc,
    }
    if kind not in builders:
        raise ValueError(f"unknown standard table {kind!r}")
    low = 2 if kind.startswith("hopf") else 1
    if param is None or param < low:
        raise ValueError(f"{kind} needs a dimension >= {low}, got {param!r}")
    return builders[kind](param)


def serre_dual(d: HodgeDiamond) -> HodgeDiamond:
    n = d.n
    rows = tuple(tuple(d.h[n - p][n - q] for q in range(n + 1)) for p in range(n + 1))
    return HodgeDiamond(n, rows, d.compact)


def hodge_sums(d: HodgeDiamond) -> tuple[int, ...]:
    """``s_k = sum_{p+q=k} h(p,q)`` for ``k = 0 .. 2n``."""
    sums = [0] * (2 * d.n + 1)
    for p, row in enumerate(d.h):
        for q, v in enumerate(row):
            sums[p + q] += v
    return tuple(sums)


def check_decomposition(d: HodgeDiamond, b: BettiVector) -> Report:
    if d.n != b.n:
        raise ValueError(f"dimension mismatch: diamond n={d.n}, Betti n={b.n}")
    sums = hodge_sums(d)
    checks = tuple(
        Check(f"b{k}", sums[k] == b.b[k], f"sum h^(p,q) over p+q={k} is {sums[k]}, b_{k} = {b.b[k]}")
        for k in range(2 * d.n + 1)
    )
    return Report("hodge_decomposition", checks)


def render_diamond(d: HodgeDiamond) -> str:
    """Fixed-width diamond; row ``k`` lists ``h(p, k-p)`` by decreasing ``p``."""
    n = d.n
    width = max(len(str(v)) for row in d.h for v in row)
    lines = []
    for k in range(2 * n + 1):
        cells = [str(d[p, k - p]).rjust(width) for p in range(min(k, n), max(0, k - n) - 1, -1)]
        indent = " " * ((n + 1 - len(cells)) * width)
        lines.append(indent + (" " * width).join(cells))
    return "\n".join(lines) + "\n"


def parse_diamond(text: str, compact: bool = False) -> HodgeDiamond:
    """Inverse of :func:`render_diamond`."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if len(rows) % 2 != 1:
        raise ValueError("a diamond has an odd number of rows")
    n = (len(rows) - 1) // 2
    entries = {}
    for k, cells in enumerate(rows):
        ps = list(range(min(k, n), max(0, k - n) - 1, -1))
        if len(cells) != len(ps):
            raise ValueError(f"row {k} has {len(cells)} entries, expected {len(ps)}")
        for p, cell in zip(ps, cells):
            entries[(p, k - p)] = int(cell)
    return HodgeDiamond.from_entries(n, entries, compact)


def iter_pq(n: int) -> Iterable[tuple[int, int]]:
    return ((p, q) for p in range(n + 1) for q in range(n + 1))

"""Named verification cases and the cross-check suite run by ``katohodge verify``.

A case is ``{"name", "kind": "hodge" | "toric", "input", "expected"}`` where
``expected`` holds ``{"hodge": <diamond JSON>, "betti": <Betti JSON>}``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .diamond import BettiVector, EntryState, HodgeDiamond, check_decomposition
from .germs.battery import BatteryConfig, battery_germs, neumann_checks, operator_checks
from .kato import KatoInput, blowup_points_kato, bott_chern_table, kato_numbers
from .modifications import ModificationSequence
from .report import Check
from .toric import (
    TrivialModificationWarning,
    fan_from_script,
    point_subdivision_sequences,
    toric_betti_sum,
    toric_kato_numbers,
)

__all__ = [
    "CorpusCase",
    "CorpusError",
    "builtin_corpus",
    "load_corpus",
    "read_corpus",
    "run_case",
    "global_checks",
    "suite_checks",
]

KINDS = ("hodge", "toric")


class CorpusError(ValueError):
    """A corpus file does not follow the case schema."""


@dataclass(frozen=True)
class CorpusCase:
    name: str
    kind: str
    input: Mapping
    expected: Mapping

    @classmethod
    def from_json(cls, data: Mapping) -> CorpusCase:
        try:
            case = cls(str(data["name"]), str(data["kind"]), data["input"], data["expected"])
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"corpus case is missing a field: {exc}") from exc
        if case.kind not in KINDS:
            raise CorpusError(f"case {case.name}: unknown kind {case.kind!r}")
        return case

    def to_json(self) -> dict:
        return {"name": self.name, "kind": self.kind, "input": self.input, "expected": self.expected}


def _expected(hodge: HodgeDiamond, betti: BettiVector) -> dict:
    return {"hodge": hodge.to_json(), "betti": betti.to_json()}


def _point_case(n: int, r: int) -> CorpusCase:
    seq = ModificationSequence.point_blowups(n, r)
    return CorpusCase(f"points_n{n}_r{r}", "hodge", seq.to_json(), _expected(*blowup_points_kato(n, r)))


def builtin_corpus() -> list[CorpusCase]:
    cases = [_point_case(n, r) for n in range(3, 7) for r in range(1, 6)]

    elliptic = {
        "ambient_n": 4,
        "steps": [
            {"direction": "up", "center": "point", "codim": 4},
            {"direction": "up", "center": "elliptic", "codim": 3},
        ],
    }
    h = {(0, 0): 1, (0, 1): 1, (4, 3): 1, (4, 4): 1, (1, 1): 2, (3, 3): 2, (2, 2): 3}
    h.update({(1, 2): 1, (2, 1): 1, (3, 2): 1, (2, 3): 1})
    cases.append(
        CorpusCase(
            "elliptic_center_n4",
            "hodge",
            elliptic,
            _expected(HodgeDiamond.from_entries(4, h), BettiVector(4, (1, 1, 2, 2, 3, 2, 2, 1, 1))),
        )
    )

    # a torus-invariant line inside the exceptional divisor, blown up after the origin
    line = {
        "ambient_n": 3,
        "steps": [
            {"direction": "up", "center": "point", "codim": 3},
            {"direction": "up", "center": "cpn:1", "codim": 2},
        ],
    }
    line_h = HodgeDiamond.from_entries(3, {(0, 0): 1, (0, 1): 1, (3, 2): 1, (3, 3): 1, (1, 1): 2, (2, 2): 2})
    line_b = BettiVector(3, (1, 1, 2, 0, 2, 1, 1))
    cases.append(CorpusCase("line_center_n3", "hodge", line, _expected(line_h, line_b)))
    cases.append(
        CorpusCase("toric_line_n3", "toric", {"n": 3, "subdivide": [[0, 1, 2], [0, 3]]}, _expected(line_h, line_b))
    )

    scripts = {
        "toric_n3_r1": (3, [[0, 1, 2]]),
        "toric_n3_r2": (3, [[0, 1, 2], [0, 1, 3]]),
        "toric_n4_r3": (4, [[0, 1, 2, 3], [0, 1, 2, 4], [1, 2, 3, 4]]),
        "toric_n5_r6": (5, [[0, 1, 2, 3, 4], [0, 1, 2, 3, 5], [0, 1, 2, 3, 6], [0, 1, 2, 3, 7], [1, 2, 3, 4, 5], [0, 2, 3, 4, 5]]),
    }
    for name, (n, script) in scripts.items():
        cases.append(
            CorpusCase(name, "toric", {"n": n, "subdivide": script}, _expected(*blowup_points_kato(n, len(script))))
        )
    return cases


def load_corpus(directory: str | Path) -> list[CorpusCase]:
    """All ``*.json`` cases in ``directory``, sorted by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"{directory} is not a directory")
    cases = []
    for path in sorted(directory.glob("*.json")):
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path.name}: {exc}") from exc
        cases.append(CorpusCase.from_json(data))
    return cases


def read_corpus(directory: str | Path) -> tuple[list[CorpusCase], list[Check]]:
    """Like :func:`load_corpus`, but a malformed file becomes a failed
    ``corpus/<file stem>/readable`` check instead of aborting the run."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"{directory} is not a directory")
    cases, problems = [], []
    for path in sorted(directory.glob("*.json")):
        try:
            cases.append(CorpusCase.from_json(json.loads(path.read_text())))
        except (json.JSONDecodeError, CorpusError) as exc:
            problems.append(Check(f"corpus/{path.stem}/readable", False, str(exc)))
    return cases, problems


def run_case(case: CorpusCase) -> list[Check]:
    prefix = f"corpus/{case.name}"
    try:
        expected_h = HodgeDiamond.from_json(case.expected["hodge"])
        expected_b = BettiVector.from_json(case.expected["betti"])
    except (KeyError, TypeError, ValueError) as exc:
        return [Check(f"{prefix}/expected_readable", False, str(exc))]
    try:
        if case.kind == "hodge":
            report = kato_numbers(KatoInput.from_json(case.input))
            checks = [Check(f"{prefix}/{c.name}", c.passed, c.detail) for c in report.checks]
            hodge, betti = report.hodge, report.betti
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TrivialModificationWarning)
                hodge, betti = toric_kato_numbers(fan_from_script(case.input))
            dec = check_decomposition(hodge, betti)
            checks = [Check(f"{prefix}/hodge_decomposition", dec.passed, "; ".join(c.detail for c in dec.failures()))]
    except (KeyError, TypeError, ValueError) as exc:
        return [Check(f"{prefix}/computable", False, str(exc))]
    checks.append(
        Check(f"{prefix}/matches_expected", hodge == expected_h and betti == expected_b, _mismatch(hodge, betti, expected_h, expected_b))
    )
    return checks


def _mismatch(h, b, eh, eb) -> str:
    diffs = [f"h{pq}={h[pq]} expected {eh[pq]}" for pq in sorted(set(h.entries()) | set(eh.entries())) if h[pq] != eh[pq]]
    diffs += [f"b{k}={b[k]} expected {eb[k]}" for k in range(2 * h.n + 1) if b[k] != eb[k]]
    return "; ".join(diffs)


def _orthant_counts(n: int) -> tuple[int, ...]:
    return tuple(math.comb(n, k) for k in range(n + 1))


def global_checks() -> list[Check]:
    """Cross-checks not tied to a single case."""
    checks = []

    bad = []
    count = 0
    for n in (3, 4):
        for r in range(1, 5):
            expected = blowup_points_kato(n, r)
            for script, fan in point_subdivision_sequences(n, r):
                count += 1
                if toric_kato_numbers(fan) != expected:
                    bad.append(script)
    checks.append(Check("toric/all_point_subdivisions_n3_n4_r4", not bad, f"{count} sequences, {len(bad)} mismatches"))

    binom_bad = [
        (n, j) for n in range(1, 11) for j in range(n + 1) if toric_betti_sum(n, _orthant_counts(n), j) != 1
    ]
    checks.append(Check("toric/orthant_binomial_identity", not binom_bad, f"n <= 10, failures at {binom_bad}" if binom_bad else "n <= 10, all j"))

    bc_bad = []
    for r in range(1, 6):
        inp = KatoInput(6, ModificationSequence.point_blowups(6, r))
        entry = bott_chern_table(inp)[2, 2]
        if entry.state is not EntryState.KNOWN or entry.value != r:
            bc_bad.append((r, entry))
    checks.append(Check("bott_chern/n6_known_22_equals_r", not bc_bad, f"failures {bc_bad}" if bc_bad else "r = 1..5"))
    return checks


def suite_checks(
    cases: Iterable[CorpusCase], battery: BatteryConfig | None, extra: Iterable[Check] = ()
) -> list[Check]:
    """Every check of the verification suite, sorted by name."""
    checks = list(extra)
    for case in cases:
        checks.extend(run_case(case))
    checks.extend(global_checks())
    if battery is not None and battery.count:
        for germ in battery_germs(battery):
            checks.extend(Check(f"germs/{c.name}", c.passed, c.detail) for c in operator_checks(germ))
            checks.extend(
                Check(f"germs/{c.name}", c.passed, c.detail) for c in neumann_checks(germ, battery.terms, battery.tol)
            )
    return sorted(checks, key=lambda c: c.name)

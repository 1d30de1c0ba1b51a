"""Command line front end: ``katohodge {hodge,toric,germ,verify}``.

Exit codes: 0 when every check passes, 1 when some check fails, 2 when the
input cannot be read or does not follow its schema.  Reports are JSON with
sorted keys; timestamps go to standard error only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

from .corpus import CorpusError, builtin_corpus, read_corpus, suite_checks
from .diamond import check_decomposition, render_diamond
from .germs.battery import BatteryConfig
from .germs.jets import JetForm, PolyGermMap
from .germs.operator import (
    MAX_D,
    MAX_N,
    NotAContraction,
    beta_matrix,
    contraction_report,
    iterate_pullback_check,
    neumann_solve,
)
from .kato import KatoInput, blowup_points_kato, kato_numbers
from .report import Check
from .toric import TrivialModificationWarning, fan_from_script, toric_kato_numbers, validate_fan

__all__ = ["RunConfig", "main", "run_hodge", "run_toric", "run_germ", "run_verify"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Unreadable or schema-violating input (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    render: bool = False
    p: int | None = None
    d: int = 3
    terms: int = 40
    seed: int = 0
    germ_count: int = 20

    def __post_init__(self):
        if self.command == "germ":
            if not 0 <= self.d <= MAX_D:
                raise InputError(f"--d must lie in [0, {MAX_D}]")
            if self.terms < 1:
                raise InputError("--terms must be positive")
        if self.germ_count < 0:
            raise InputError("--germ-count must be non-negative")


def _log(msg: str):
    print(f"[{time.strftime('%Y-%m-%dT%H:%M:%S')}] {msg}", file=sys.stderr)


def _read_json(path: str | None):
    if path is None:
        raise InputError("--input is required")
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(cfg: RunConfig, payload: dict):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _status(checks: list[Check]) -> int:
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(c.line(), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def run_hodge(cfg: RunConfig) -> int:
    data = _read_json(cfg.input)
    try:
        inp = KatoInput.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid modification sequence: {exc}") from exc
    try:
        report = kato_numbers(inp)
    except ValueError as exc:
        # infeasible blow-downs or negative differences against CP^n
        check = Check("sequence_feasible", False, str(exc))
        _emit(cfg, {"checks": [check.to_json()]})
        return _status([check])
    payload = report.to_json()
    payload["checks"].insert(0, Check("sequence_feasible", True).to_json())
    if cfg.render:
        payload["rendered"] = render_diamond(report.hodge)
    _emit(cfg, payload)
    return _status(list(report.checks))


def run_toric(cfg: RunConfig) -> int:
    data = _read_json(cfg.input)
    try:
        fan = fan_from_script(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid fan or subdivision script: {exc}") from exc
    checks = list(validate_fan(fan).checks)
    notes = []
    payload: dict = {"fan": fan.to_json()}
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", TrivialModificationWarning)
            hodge, betti = toric_kato_numbers(fan)
        notes.extend(str(w.message) for w in caught)
    except ValueError as exc:
        checks.append(Check("toric_numbers", False, str(exc)))
    else:
        checks.append(Check("toric_numbers", True))
        checks.extend(check_decomposition(hodge, betti).checks)
        script = data.get("subdivide")
        if script and all(len(c) == fan.n for c in script):
            # maximal-cone subdivisions are blow-ups of points
            checks.append(Check("matches_point_blowups", (hodge, betti) == blowup_points_kato(fan.n, len(script))))
        payload.update(hodge=hodge.to_json(), betti=betti.to_json())
        if cfg.render:
            payload["rendered"] = render_diamond(hodge)
    payload["checks"] = [c.to_json() for c in sorted(checks, key=lambda c: c.name)]
    payload["notes"] = notes
    _emit(cfg, payload)
    return _status(checks)


def _default_rhs(n: int, p: int, d: int) -> JetForm:
    from .germs.gaussian import ONE

    if p == 0:
        # z_1: functions must vanish at the origin
        return JetForm.from_form(n, 0, d, {(): {tuple(int(i == 0) for i in range(n)): ONE}})
    return JetForm.from_form(n, p, d, {tuple(range(p)): {(0,) * n: ONE}})


def run_germ(cfg: RunConfig) -> int:
    data = _read_json(cfg.input)
    try:
        if isinstance(data, dict) and "germ" in data:
            gamma = PolyGermMap.from_json(data["germ"])
            eta = JetForm.from_json(data["rhs"]) if "rhs" in data else None
        else:
            gamma = PolyGermMap.from_json(data)
            eta = None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid germ: {exc}") from exc
    n = gamma.n
    if n > MAX_N:
        raise InputError(f"n={n} exceeds the cap {MAX_N}")
    if eta is not None and (eta.n != n or (cfg.p is not None and eta.p != cfg.p)):
        raise InputError("right-hand side does not match the germ dimension or --p")
    p = eta.p if eta is not None else (cfg.p if cfg.p is not None else min(1, n))
    d = eta.d if eta is not None else cfg.d
    if not 0 <= p <= n:
        raise InputError(f"--p must lie in [0, {n}]")

    contraction = contraction_report(gamma)
    payload: dict = {"germ": gamma.to_json(), "contraction": contraction.to_json()}
    checks = [Check("first_order_contraction", contraction.first_order_contraction, f"rho={contraction.spectral_radius:.6g}")]
    if not contraction.first_order_contraction:
        payload["checks"] = [c.to_json() for c in checks]
        _emit(cfg, payload)
        return _status(checks)

    try:
        operators = []
        for q in range(n + 1):
            _, rep = beta_matrix(gamma, q, d)
            operators.append(rep.to_json())
            checks.append(Check(f"operator_p{q}", rep.consistent, f"dim={rep.jet_dimension} rank={rep.rank}"))
        payload["operators"] = operators
        eta = eta if eta is not None else _default_rhs(n, p, d)
        result = neumann_solve(gamma, eta, cfg.terms)
    except NotAContraction as exc:
        checks.append(Check("first_order_contraction", False, str(exc)))
        payload["checks"] = [c.to_json() for c in checks]
        _emit(cfg, payload)
        return _status(checks)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload["neumann"] = {"p": p, "d": d, "rhs": eta.to_json(), **result.to_json()}
    checks.append(Check("neumann_matches_exact", result.error < 1e-9, f"max_error={result.error:.3e}"))
    checks.extend(iterate_pullback_check(gamma, p, d, 2).checks)
    payload["checks"] = [c.to_json() for c in sorted(checks, key=lambda c: c.name)]
    _emit(cfg, payload)
    return _status(checks)


def run_verify(cfg: RunConfig) -> int:
    try:
        cases, problems = read_corpus(cfg.input) if cfg.input else (builtin_corpus(), [])
    except CorpusError as exc:
        raise InputError(str(exc)) from exc
    _log(f"verify: {len(cases)} corpus cases, {cfg.germ_count} germs, seed {cfg.seed}")
    battery = BatteryConfig(seed=cfg.seed, count=cfg.germ_count)
    checks = suite_checks(cases, battery, problems)
    lines = "".join(c.line() + "\n" for c in checks)
    if cfg.output:
        Path(cfg.output).write_text(lines)
    else:
        sys.stdout.write(lines)
    failed = sum(not c.passed for c in checks)
    _log(f"verify: {len(checks) - failed} passed, {failed} failed")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"hodge": run_hodge, "toric": run_toric, "germ": run_germ, "verify": run_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="katohodge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("hodge", "Hodge, Betti, Bott-Chern and Aeppli numbers of a modification sequence"),
        ("toric", "Kato numbers from a fan or a subdivision script"),
        ("germ", "jet-level analysis of Id - gamma^* for a polynomial germ"),
        ("verify", "run the cross-check suite"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--input", help="input JSON file (verify: corpus directory)")
        sp.add_argument("--output", help="write the report here instead of stdout")
        if name in ("hodge", "toric"):
            sp.add_argument("--render", action="store_true", help="include the diamond as text")
        if name == "germ":
            sp.add_argument("--p", type=int, help="form degree of the Neumann solve (default 1)")
            sp.add_argument("--d", type=int, default=3, help="truncation order")
            sp.add_argument("--terms", type=int, default=40, help="Neumann terms M")
        if name == "verify":
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--germ-count", type=int, default=20)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(
            command=args.command,
            input=args.input,
            output=args.output,
            render=getattr(args, "render", False),
            p=getattr(args, "p", None),
            d=getattr(args, "d", 3),
            terms=getattr(args, "terms", 40),
            seed=getattr(args, "seed", 0),
            germ_count=getattr(args, "germ_count", 20),
        )
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

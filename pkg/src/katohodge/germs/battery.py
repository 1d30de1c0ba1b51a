"""Seeded batteries of random contraction germs with operator and Neumann checks."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..report import Check
from .jets import PolyGermMap
from .linalg import identity
from .operator import (
    _constant_index,
    beta_matrix,
    exact_solve,
    gamma_star_matrix,
    neumann_batch,
    random_contraction_germ,
)

__all__ = ["BatteryConfig", "BatteryGerm", "battery_germs", "operator_checks", "neumann_checks", "geometric_decay"]


@dataclass(frozen=True)
class BatteryConfig:
    seed: int = 0
    count: int = 20
    max_n: int = 3
    max_degree: int = 3
    max_d: int = 4
    terms: int = 60
    tol: float = 1e-9


@dataclass(frozen=True)
class BatteryGerm:
    label: str
    gamma: PolyGermMap
    d: int


def battery_germs(cfg: BatteryConfig) -> list[BatteryGerm]:
    """Germs with ``n``, polynomial degree and truncation order drawn uniformly
    from ``1..max``; the same seed always yields the same germs."""
    rng = random.Random(cfg.seed)
    out = []
    for i in range(cfg.count):
        n = rng.randint(1, cfg.max_n)
        degree = rng.randint(1, cfg.max_degree)
        d = rng.randint(1, cfg.max_d)
        gamma = random_contraction_germ(rng, n, degree)
        out.append(BatteryGerm(f"germ{i:03d}_n{n}_deg{degree}_d{d}", gamma, d))
    return out


def operator_checks(germ: BatteryGerm) -> list[Check]:
    """Invertibility for ``p >= 1``; kernel and cokernel of dimension one for ``p = 0``."""
    checks = []
    for p in range(germ.gamma.n + 1):
        _, rep = beta_matrix(germ.gamma, p, germ.d, with_determinant=False)
        if p:
            detail = f"dim={rep.jet_dimension} rank={rep.rank}"
        else:
            detail = f"dim={rep.jet_dimension} kernel={rep.kernel_dim} codim={rep.image_codim}"
        checks.append(Check(f"{germ.label}/p{p}_operator", rep.consistent, detail))
    return checks


def geometric_decay(residuals, window: int = 10, floor: float = 1e-13) -> bool:
    """Each window's largest residual at most half the previous window's, until
    the residuals reach the floating-point floor."""
    r = np.asarray(residuals, dtype=float)
    peaks = [float(r[i : i + window].max()) for i in range(0, len(r), window)]
    for prev, cur in zip(peaks, peaks[1:]):
        if prev <= floor:
            break
        if cur > max(prev / 2, floor):
            return False
    return True


def neumann_checks(germ: BatteryGerm, terms: int = 60, tol: float = 1e-9) -> list[Check]:
    """Float Neumann partial sums for every basis right-hand side against the exact solve.

    For ``p = 0`` the constant basis function is skipped: it is not in the image.
    """
    checks = []
    n, d = germ.gamma.n, germ.d
    for p in range(n + 1):
        beta, _ = beta_matrix(germ.gamma, p, d, with_determinant=False)
        gstar = gamma_star_matrix(germ.gamma, p, d)
        size = len(beta)
        cols = [k for k in range(size) if p or k != _constant_index(n, d)]
        eye = identity(size)
        rhs = [[row[k] for k in cols] for row in eye]
        exact = exact_solve(beta, n, p, d, rhs)
        ref = np.array([[complex(x) for x in row] for row in exact])
        residuals, total = neumann_batch(beta, gstar, cols, terms)
        err = float(np.max(np.abs(total - ref))) if cols else 0.0
        decay = geometric_decay(residuals)
        ok = err < tol and decay
        checks.append(
            Check(
                f"{germ.label}/p{p}_neumann",
                ok,
                f"M={terms} max_error={err:.3e} final_residual={residuals[-1]:.3e} geometric={decay}",
            )
        )
    return checks

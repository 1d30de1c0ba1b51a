"""The operator ``beta = Id - gamma^*`` on jets of holomorphic p-forms.

For a germ ``gamma`` fixing the origin, ``gamma^*`` preserves the filtration
by coefficient degree, so it acts on the finite-dimensional jet space
``J^d_p`` of p-forms with polynomial coefficients of degree ``<= d``.  Its
matrix is block lower-triangular in the degree grading, with diagonal blocks
determined by the linear part ``d_0 gamma`` alone.  All operator computations
are exact; only residual norms and the sampled contraction constant are
floats.

Only the first-order contraction condition (spectral radius of ``d_0 gamma``
below one) is certified.  Contraction on the whole ball cannot be certified
for general polynomials and is reported by sampling, as advice only.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gaussian import ONE, ZERO, GaussianRational
from .jets import (
    JetForm,
    PolyGermMap,
    compose_germs,
    jet_basis,
    monomials,
    pullback_jet,
)
from .linalg import (
    block_determinant,
    det_mod,
    matmul,
    matpow,
    rank_det_mod,
    rank_exact,
    solve_exact,
    to_complex_array,
)
from ..report import Check, Report

__all__ = [
    "MAX_N",
    "MAX_D",
    "NotAContraction",
    "OperatorReport",
    "gamma_star_matrix",
    "beta_matrix",
    "NeumannResult",
    "neumann_solve",
    "neumann_batch",
    "ContractionReport",
    "contraction_report",
    "iterate_pullback_check",
    "random_contraction_germ",
    "diagonal_eigenvalues",
    "spectral_radius",
    "exact_solve",
]

MAX_N = 4
MAX_D = 5


class NotAContraction(ValueError):
    """``d_0 gamma`` has spectral radius >= 1."""


def _check_caps(n: int, p: int, d: int, caps: bool):
    if not 0 <= p <= n:
        raise ValueError(f"form degree p={p} outside [0, {n}]")
    if d < 0:
        raise ValueError("truncation order must be >= 0")
    if caps and (n > MAX_N or d > MAX_D):
        raise ValueError(f"jet space too large: n={n}, d={d} (caps n<={MAX_N}, d<={MAX_D})")


def spectral_radius(gamma: PolyGermMap) -> float:
    a = to_complex_array(gamma.linear_part())
    return float(max(abs(np.linalg.eigvals(a)))) if gamma.n else 0.0


def _require_first_order(gamma: PolyGermMap):
    rho = spectral_radius(gamma)
    if not rho < 1 - 1e-12:
        raise NotAContraction(f"spectral radius of d_0 gamma is {rho:.6g} >= 1")


def gamma_star_matrix(gamma: PolyGermMap, p: int, d: int) -> list[list[GaussianRational]]:
    """Matrix of ``gamma^*`` on ``J^d_p``; column k is the pullback of basis element k."""
    n = gamma.n
    basis = jet_basis(n, p, d)
    cols = [JetForm.basis_element(n, p, d, k) for k in range(len(basis))]
    images = [pullback_jet(gamma, c).vector() for c in cols]
    return [list(row) for row in zip(*images)]


@dataclass
class OperatorReport:
    p: int
    d: int
    jet_dimension: int
    rank: int
    invertible: bool
    kernel_dim: int
    image_codim: int
    determinant_is_zero: bool
    block_triangular: bool
    diagonal_blocks_linear: bool
    rank_routes_agree: bool
    kernel_is_constants: bool | None = None
    image_is_vanishing_at_zero: bool | None = None
    determinant: GaussianRational | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """What the theory predicts for this p."""
        if not (self.block_triangular and self.diagonal_blocks_linear and self.rank_routes_agree):
            return False
        if self.kernel_dim + self.rank != self.jet_dimension:
            return False
        if self.p >= 1:
            return self.invertible and not self.determinant_is_zero
        return (
            self.kernel_dim == 1
            and self.image_codim == 1
            and bool(self.kernel_is_constants)
            and bool(self.image_is_vanishing_at_zero)
        )

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "d": self.d,
            "jet_dimension": self.jet_dimension,
            "rank": self.rank,
            "invertible": self.invertible,
            "kernel_dim": self.kernel_dim,
            "image_codim": self.image_codim,
            "determinant_is_zero": self.determinant_is_zero,
            "block_triangular": self.block_triangular,
            "diagonal_blocks_linear": self.diagonal_blocks_linear,
            "rank_routes_agree": self.rank_routes_agree,
            "consistent": self.consistent,
            "notes": self.notes,
        }
        if self.determinant is not None:
            out["determinant"] = self.determinant.to_json()
        if self.p == 0:
            out["kernel_is_constants"] = self.kernel_is_constants
            out["image_is_vanishing_at_zero"] = self.image_is_vanishing_at_zero
        return out


def _degree_blocks(n: int, p: int, d: int) -> list[range]:
    degs = [sum(e) for _, e in jet_basis(n, p, d)]
    blocks, start = [], 0
    for k in range(1, len(degs) + 1):
        if k == len(degs) or degs[k] != degs[start]:
            blocks.append(range(start, k))
            start = k
    return blocks


def _block_checks(g, glin, blocks) -> tuple[bool, bool]:
    triangular = all(
        not g[i][j]
        for bi, rows in enumerate(blocks)
        for cols in blocks[bi + 1 :]
        for i in rows
        for j in cols
    )
    diagonal = all(g[i][j] == glin[i][j] for blk in blocks for i in blk for j in blk)
    return triangular, diagonal


def _constant_index(n: int, d: int) -> int:
    return jet_basis(n, 0, d).index(((), (0,) * n))


def beta_matrix(
    gamma: PolyGermMap, p: int, d: int = 3, caps: bool = True, with_determinant: bool = True
) -> tuple[list[list[GaussianRational]], OperatorReport]:
    """Exact matrix of ``Id - gamma^*`` on ``J^d_p`` and its analysis.

    Rank and determinant come from two routes: exact determinants of the
    diagonal degree blocks (valid once block-triangularity is verified entry
    by entry), and elimination of the whole matrix reduced modulo a prime.
    """
    n = gamma.n
    _check_caps(n, p, d, caps)
    _require_first_order(gamma)
    g = gamma_star_matrix(gamma, p, d)
    glin = gamma_star_matrix(gamma.linear_germ(), p, d)
    size = len(g)
    beta = [[(ONE if i == j else ZERO) - g[i][j] for j in range(size)] for i in range(size)]
    blocks = _degree_blocks(n, p, d)
    triangular, diagonal = _block_checks(g, glin, blocks)
    rank_p, det_p = rank_det_mod(beta)
    rk = rank_exact(beta)

    const = _constant_index(n, d) if p == 0 else None
    const_zero = const is not None and not any(beta[const]) and not any(row[const] for row in beta)
    det = GaussianRational(0)
    block_rank = None
    if triangular and p >= 1:
        det = block_determinant(beta, blocks)
        block_rank = size if det else None
    elif triangular and const_zero:
        # constants span a zero row and column; the rest is block-triangular
        rest = block_determinant(beta, [blk for blk in blocks if const not in blk])
        block_rank = size - 1 if rest else None

    # full-matrix exact rank, diagonal-block determinants and the mod-prime reduction
    agree = rank_p == rk and det_mod(det) == det_p and block_rank in (None, rk)
    report = OperatorReport(
        p=p,
        d=d,
        jet_dimension=size,
        rank=rk,
        invertible=rk == size,
        kernel_dim=size - rk,
        image_codim=size - rk,
        determinant_is_zero=not det,
        block_triangular=triangular,
        diagonal_blocks_linear=diagonal,
        rank_routes_agree=agree,
        determinant=det if with_determinant else None,
        notes=["first-order contraction certified via spectral radius of d_0 gamma only"],
    )
    if p == 0:
        # the constant column is exactly zero, so constants lie in the kernel
        report.kernel_is_constants = size - rk == 1 and not any(row[const] for row in beta)
        # every image has zero constant term; equality once the codimension is 1
        report.image_is_vanishing_at_zero = not any(beta[const]) and size - rk == 1
    return beta, report


def exact_solve(beta, n: int, p: int, d: int, rhs: list[list[GaussianRational]]):
    """Exact solution of ``beta x = rhs`` (columns of ``rhs``).

    For ``p = 0`` the constant coordinate of ``x`` is set to 0 and ``rhs`` must
    have zero constant row.
    """
    if p >= 1:
        return solve_exact(beta, rhs)
    const = _constant_index(n, d)
    if any(rhs[const]):
        raise ValueError("for functions the right-hand side must vanish at the origin")
    keep = [k for k in range(len(beta)) if k != const]
    sub = [[beta[i][j] for j in keep] for i in keep]
    x_sub = solve_exact(sub, [rhs[i] for i in keep])
    x = [[ZERO] * len(rhs[0]) for _ in range(len(beta))]
    for k, row in zip(keep, x_sub):
        x[k] = row
    return x


@dataclass
class NeumannResult:
    partial_sums: list[JetForm]
    residuals: list[float]
    exact: JetForm
    error: float

    def to_json(self) -> dict:
        return {
            "terms": len(self.partial_sums),
            "residuals": self.residuals,
            "exact_solution": self.exact.to_json(),
            "max_error_vs_exact": self.error,
        }


def _max_diff(a: JetForm, b: JetForm) -> float:
    return max((abs(complex(x) - complex(y)) for x, y in zip(a.vector(), b.vector())), default=0.0)


def neumann_solve(gamma: PolyGermMap, eta: JetForm, terms: int = 40, caps: bool = True) -> NeumannResult:
    """Partial sums of ``sum_m (gamma^*)^m eta`` by iterated pullback, plus the exact solve."""
    if eta.p == 0 and eta.constant_term():
        raise ValueError("for functions the right-hand side must vanish at the origin")
    beta, rep = beta_matrix(gamma, eta.p, eta.d, caps=caps, with_determinant=False)
    n, p, d = eta.n, eta.p, eta.d
    rhs = eta.vector()
    x = [row[0] for row in exact_solve(beta, n, p, d, [[v] for v in rhs])]
    exact = JetForm.from_vector(n, p, d, x)

    partial, residuals = [], []
    term = eta
    total = JetForm.from_form(n, p, d, {})
    for _ in range(terms):
        total = total + term
        term = pullback_jet(gamma, term)
        partial.append(total)
        # (Id - gamma^*) S_M - eta = -(gamma^*)^M eta
        residuals.append(term.max_abs())
    return NeumannResult(partial, residuals, exact, _max_diff(partial[-1], exact))


def neumann_batch(beta, gstar, columns: list[int], terms: int) -> tuple[np.ndarray, np.ndarray]:
    """Float partial sums for many right-hand sides at once.

    ``columns`` selects basis right-hand sides.  Returns residual max-norms per
    term count (shape ``(terms,)``) and the final partial sums.
    """
    g = to_complex_array(gstar)
    size = g.shape[0]
    rhs = np.eye(size, dtype=complex)[:, columns]
    b = to_complex_array(beta)
    power = rhs.copy()
    total = np.zeros_like(rhs)
    residuals = np.empty(terms)
    for m in range(terms):
        total += power
        power = g @ power
        residuals[m] = np.max(np.abs(b @ total - rhs))
    return residuals, total


@dataclass
class ContractionReport:
    n: int
    spectral_radius: float
    first_order_contraction: bool
    sampled_constant: float
    sampled_contraction: bool
    max_linear_entry: float
    linear_entries_within_constant: bool
    sufficient_condition: dict[int, tuple[float, bool]]
    caveats: list[str]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "spectral_radius": self.spectral_radius,
            "first_order_contraction": self.first_order_contraction,
            "sampled_constant": self.sampled_constant,
            "sampled_contraction": self.sampled_contraction,
            "max_linear_entry": self.max_linear_entry,
            "linear_entries_within_constant": self.linear_entries_within_constant,
            "sufficient_condition": {
                str(p): {"value": v, "holds": ok} for p, (v, ok) in sorted(self.sufficient_condition.items())
            },
            "caveats": self.caveats,
        }


def _sphere_samples(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return np.vstack([np.eye(n, dtype=complex), pts])


def contraction_report(
    gamma: PolyGermMap,
    radii=(1e-4, 0.25, 0.5, 0.75, 1.0),
    samples: int = 400,
    seed: int = 0,
    tol: float = 1e-6,
) -> ContractionReport:
    """Spectral radius of ``d_0 gamma``, a sampled constant ``C`` with
    ``|gamma(z)| <= C |z|`` on the unit ball, and the sufficient condition
    ``(2C)^p n!/(n-p)! < 1`` for each ``p``."""
    n = gamma.n
    rho = spectral_radius(gamma)
    directions = _sphere_samples(n, samples, seed)
    c_hat = 0.0
    for r in radii:
        for u in directions:
            z = r * u
            c_hat = max(c_hat, float(np.linalg.norm(gamma(z)) / np.linalg.norm(z)))
    lin = to_complex_array(gamma.linear_part())
    max_entry = float(np.max(np.abs(lin))) if n else 0.0
    cond = {}
    for p in range(1, n + 1):
        value = (2 * c_hat) ** p * math.factorial(n) / math.factorial(n - p)
        cond[p] = (value, value < 1)
    return ContractionReport(
        n=n,
        spectral_radius=rho,
        first_order_contraction=rho < 1 - 1e-12,
        sampled_constant=c_hat,
        sampled_contraction=c_hat < 1,
        max_linear_entry=max_entry,
        linear_entries_within_constant=max_entry <= c_hat + tol,
        sufficient_condition=cond,
        caveats=[
            "sampled constant is a lower estimate from a finite grid, not a certified bound",
            "the sufficient condition failing does not preclude invertibility",
        ],
    )


def iterate_pullback_check(gamma: PolyGermMap, p: int, d: int, r: int, caps: bool = True) -> Report:
    """r-fold pullback equals the r-th matrix power, and (gamma o gamma)^* = (gamma^*)^2."""
    if r < 1:
        raise ValueError("need r >= 1")
    n = gamma.n
    _check_caps(n, p, d, caps)
    g = gamma_star_matrix(gamma, p, d)
    gr = matpow(g, r)
    size = len(g)
    ok_power = True
    for k in range(size):
        form = JetForm.basis_element(n, p, d, k)
        for _ in range(r):
            form = pullback_jet(gamma, form)
        if form.vector() != [row[k] for row in gr]:
            ok_power = False
            break
    # pulling back to order d only needs gamma o gamma up to degree d+1
    gg = compose_germs(gamma, gamma, d + 1)
    ok_compose = gamma_star_matrix(gg, p, d) == matmul(g, g)
    return Report(
        "iterate_pullback",
        (
            Check(f"power_r{r}_p{p}_d{d}", ok_power, "r-fold pullback vs matrix power"),
            Check(f"composition_p{p}_d{d}", ok_compose, "(gamma o gamma)^* vs (gamma^*)^2"),
        ),
    )


def _rand_rational(rng: random.Random, bound: Fraction, denom: int) -> Fraction:
    k = int(bound * denom)
    return Fraction(rng.randint(-k, k), denom)


def random_contraction_germ(
    rng: random.Random, n: int, degree: int = 3, density: float = 0.35
) -> PolyGermMap:
    """Exact random germ whose linear part has max row sum of |entries| < 1/2.

    Real and imaginary parts of linear entries are bounded by ``1/(4n)`` and
    those of higher-order coefficients by ``1/8`` (so every modulus is at most
    1/4), which keeps the spectral radius of ``d_0 gamma`` below 1/2.
    """
    polys = []
    lin_bound = Fraction(1, 4 * n)
    for i in range(n):
        poly = {}
        for e in monomials(n, degree):
            s = sum(e)
            if s == 0:
                continue
            if s == 1:
                c = GaussianRational(_rand_rational(rng, lin_bound, 8 * n), _rand_rational(rng, lin_bound, 8 * n))
            elif rng.random() < density:
                c = GaussianRational(_rand_rational(rng, Fraction(1, 8), 16), _rand_rational(rng, Fraction(1, 8), 16))
            else:
                continue
            if c:
                poly[e] = c
        polys.append(poly)
    return PolyGermMap.from_polys(polys)


def diagonal_eigenvalues(lams: list[GaussianRational], p: int, d: int) -> list[GaussianRational]:
    """Eigenvalues ``1 - lambda^alpha lambda_I`` of beta for ``gamma = diag(lams)``."""
    n = len(lams)
    out = []
    for idx, e in jet_basis(n, p, d):
        v = ONE
        for i, a in enumerate(e):
            v = v * lams[i] ** a
        for i in idx:
            v = v * lams[i]
        out.append(ONE - v)
    return out


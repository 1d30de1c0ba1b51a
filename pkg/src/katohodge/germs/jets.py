"""Truncated polynomials, polynomial germs, and holomorphic p-forms on jets.

A polynomial is a ``dict`` from exponent tuples to nonzero
:class:`GaussianRational` coefficients.  A form is a ``dict`` from strictly
increasing index tuples ``I`` (0-based) to polynomials, standing for
``sum_I f_I dz_I``.  Everything is truncated at total coefficient degree
``d``; since germs fix the origin, pulling back never lowers degree and
truncation commutes with pullback.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

import numpy as np

from .gaussian import ONE, GaussianRational

Exp = tuple[int, ...]
Poly = dict  # Exp -> GaussianRational
Form = dict  # tuple[int, ...] -> Poly

__all__ = [
    "monomials",
    "form_indices",
    "jet_basis",
    "jet_dimension",
    "PolyGermMap",
    "JetForm",
    "poly_mul",
    "poly_add",
    "compose",
    "wedge",
    "pullback_jet",
    "compose_germs",
]


def deg(e: Exp) -> int:
    return sum(e)


def _mono_key(e: Exp):
    return (sum(e), tuple(-x for x in e))


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[Exp, ...]:
    """Exponents of total degree <= d: graded, then lexicographic with z_1 first."""
    out = [
        e
        for total in range(d + 1)
        for e in _compositions(total, n)
    ]
    return tuple(sorted(out, key=_mono_key))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def form_indices(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(n), p))


@lru_cache(maxsize=None)
def jet_basis(n: int, p: int, d: int) -> tuple[tuple[tuple[int, ...], Exp], ...]:
    """Basis ``z^alpha dz_I`` ordered by (degree, monomial, form index)."""
    return tuple((i, e) for e in monomials(n, d) for i in form_indices(n, p))


def jet_dimension(n: int, p: int, d: int) -> int:
    return comb(n, p) * comb(n + d, n)


def poly_add(f: Poly, g: Poly, scale: GaussianRational = ONE) -> Poly:
    out = dict(f)
    for e, c in g.items():
        v = out.get(e)
        v = c * scale if v is None else v + c * scale
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def poly_mul(f: Poly, g: Poly, d: int) -> Poly:
    out: dict = {}
    for e1, c1 in f.items():
        d1 = sum(e1)
        if d1 > d:
            continue
        for e2, c2 in g.items():
            if d1 + sum(e2) > d:
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e)
            out[e] = c1 * c2 if v is None else v + c1 * c2
    return {e: c for e, c in out.items() if c}


def poly_truncate(f: Poly, d: int) -> Poly:
    return {e: c for e, c in f.items() if sum(e) <= d}


def poly_deriv(f: Poly, j: int) -> Poly:
    out = {}
    for e, c in f.items():
        if e[j]:
            e2 = e[:j] + (e[j] - 1,) + e[j + 1 :]
            out[e2] = c * e[j]
    return out


def _as_gq(x) -> GaussianRational:
    return x if isinstance(x, GaussianRational) else GaussianRational(x)


def _unit(n: int) -> Exp:
    return (0,) * n


@dataclass(frozen=True)
class PolyGermMap:
    """Polynomial map ``gamma: C^n -> C^n`` with ``gamma(0) = 0``.

    ``components[i]`` is a tuple of ``(exponent, coefficient)`` pairs, kept
    sorted so that germs are hashable and compare structurally.
    """

    n: int
    components: tuple[tuple[tuple[Exp, GaussianRational], ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        if len(self.components) != self.n:
            raise ValueError(f"need {self.n} components, got {len(self.components)}")
        for i, comp in enumerate(self.components):
            for e, c in comp:
                if len(e) != self.n or any(x < 0 for x in e):
                    raise ValueError(f"component {i}: bad exponent {e}")
                if sum(e) == 0 and c:
                    raise ValueError(f"component {i} has a nonzero constant term; gamma(0) must be 0")

    @classmethod
    def from_polys(cls, polys: Iterable[Mapping[Exp, GaussianRational]]) -> PolyGermMap:
        polys = list(polys)
        comps = tuple(
            tuple(sorted(((tuple(e), c) for e, c in p.items() if c), key=lambda t: _mono_key(t[0])))
            for p in polys
        )
        return cls(len(polys), comps)

    @classmethod
    def linear(cls, matrix) -> PolyGermMap:
        n = len(matrix)
        polys = []
        for i in range(n):
            polys.append(
                {tuple(int(k == j) for k in range(n)): _as_gq(matrix[i][j])
                 for j in range(n) if matrix[i][j]}
            )
        return cls.from_polys(polys)

    def poly(self, i: int) -> Poly:
        return dict(self.components[i])

    @property
    def degree(self) -> int:
        return max((sum(e) for comp in self.components for e, _ in comp), default=0)

    def linear_part(self) -> list[list[GaussianRational]]:
        """Jacobian matrix ``d_0 gamma``, rows = components."""
        n = self.n
        mat = [[GaussianRational(0) for _ in range(n)] for _ in range(n)]
        for i, comp in enumerate(self.components):
            for e, c in comp:
                if sum(e) == 1:
                    mat[i][e.index(1)] = c
        return mat

    def linear_germ(self) -> PolyGermMap:
        return PolyGermMap.linear(self.linear_part())

    def __call__(self, z: np.ndarray) -> np.ndarray:
        """Float evaluation at a complex point."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(self.n, dtype=complex)
        for i, comp in enumerate(self.components):
            for e, c in comp:
                out[i] += complex(c) * np.prod(z ** np.array(e))
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "components": [
                [{"coeff": c.to_json(), "exponents": list(e)} for e, c in comp]
                for comp in self.components
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PolyGermMap:
        n = int(data["n"])
        polys = []
        for comp in data["components"]:
            poly: dict = {}
            for term in comp:
                e = tuple(int(x) for x in term["exponents"])
                poly = poly_add(poly, {e: GaussianRational.from_json(term["coeff"])})
            polys.append(poly)
        if len(polys) != n:
            raise ValueError(f"germ declares n={n} but has {len(polys)} components")
        return cls.from_polys(polys)


@dataclass(frozen=True)
class JetForm:
    """Truncated holomorphic ``p``-form ``sum_I f_I dz_I`` on ``C^n``."""

    n: int
    p: int
    d: int
    terms: tuple[tuple[tuple[int, ...], tuple[tuple[Exp, GaussianRational], ...]], ...]

    @classmethod
    def from_form(cls, n: int, p: int, d: int, form: Mapping) -> JetForm:
        terms = []
        for idx in sorted(form):
            if len(idx) != p or list(idx) != sorted(set(idx)):
                raise ValueError(f"form index {idx} is not a strictly increasing {p}-tuple")
            poly = poly_truncate(form[idx], d)
            if poly:
                terms.append((tuple(idx), tuple(sorted(poly.items(), key=lambda t: _mono_key(t[0])))))
        return cls(n, p, d, tuple(terms))

    @classmethod
    def from_vector(cls, n: int, p: int, d: int, vec) -> JetForm:
        form: dict = {}
        for (idx, e), c in zip(jet_basis(n, p, d), vec):
            if c:
                form.setdefault(idx, {})[e] = c
        return cls.from_form(n, p, d, form)

    @classmethod
    def basis_element(cls, n: int, p: int, d: int, k: int) -> JetForm:
        idx, e = jet_basis(n, p, d)[k]
        return cls.from_form(n, p, d, {idx: {e: ONE}})

    def form(self) -> Form:
        return {idx: dict(poly) for idx, poly in self.terms}

    def vector(self) -> list[GaussianRational]:
        form = self.form()
        return [form.get(idx, {}).get(e, GaussianRational(0)) for idx, e in jet_basis(self.n, self.p, self.d)]

    def __add__(self, other: JetForm) -> JetForm:
        self._compatible(other)
        out = self.form()
        for idx, poly in other.terms:
            out[idx] = poly_add(out.get(idx, {}), dict(poly))
        return JetForm.from_form(self.n, self.p, self.d, out)

    def __sub__(self, other: JetForm) -> JetForm:
        self._compatible(other)
        out = self.form()
        for idx, poly in other.terms:
            out[idx] = poly_add(out.get(idx, {}), dict(poly), GaussianRational(-1))
        return JetForm.from_form(self.n, self.p, self.d, out)

    def _compatible(self, other: JetForm):
        if (self.n, self.p, self.d) != (other.n, other.p, other.d):
            raise ValueError("forms live in different jet spaces")

    def max_abs(self) -> float:
        return max((abs(complex(c)) for _, poly in self.terms for _, c in poly), default=0.0)

    def constant_term(self) -> GaussianRational:
        if self.p:
            raise ValueError("constant term is only defined for functions")
        for _, poly in self.terms:
            for e, c in poly:
                if sum(e) == 0:
                    return c
        return GaussianRational(0)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "d": self.d,
            "terms": [
                {"index": list(idx), "exponents": list(e), "coeff": c.to_json()}
                for idx, poly in self.terms
                for e, c in poly
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> JetForm:
        n, p, d = int(data["n"]), int(data["p"]), int(data["d"])
        form: dict = {}
        for term in data.get("terms", []):
            idx = tuple(int(i) for i in term["index"])
            e = tuple(int(x) for x in term["exponents"])
            if len(e) != n or any(x < 0 for x in e) or any(not 0 <= i < n for i in idx):
                raise ValueError(f"bad jet term {term!r}")
            if sum(e) > d:
                raise ValueError(f"term {term!r} exceeds truncation order {d}")
            form[idx] = poly_add(form.get(idx, {}), {e: GaussianRational.from_json(term["coeff"])})
        return cls.from_form(n, p, d, form)


def _merge_sign(i: tuple[int, ...], j: tuple[int, ...]) -> int:
    inversions = sum(1 for a in i for b in j if a > b)
    return -1 if inversions % 2 else 1


def wedge(a: Form, b: Form, d: int) -> Form:
    out: dict = {}
    for i, f in a.items():
        for j, g in b.items():
            if set(i) & set(j):
                continue
            k = tuple(sorted(i + j))
            prod = poly_mul(f, g, d)
            if _merge_sign(i, j) < 0:
                prod = {e: -c for e, c in prod.items()}
            out[k] = poly_add(out.get(k, {}), prod)
    return {k: v for k, v in out.items() if v}


class _PullbackCache:
    """Truncated powers ``gamma_i^k`` and differentials ``d gamma_I`` for one (gamma, d)."""

    def __init__(self, gamma: PolyGermMap, d: int):
        self.gamma = gamma
        self.d = d
        self.n = gamma.n
        self.polys = [poly_truncate(gamma.poly(i), d + 1) for i in range(self.n)]
        self._powers = [[{_unit(self.n): ONE}] for _ in range(self.n)]
        self._dgamma: dict = {(): {(): {_unit(self.n): ONE}}}
        self._monomial: dict = {}

    def power(self, i: int, k: int) -> Poly:
        pw = self._powers[i]
        while len(pw) <= k:
            pw.append(poly_mul(pw[-1], self.polys[i], self.d))
        return pw[k]

    def monomial(self, e: Exp) -> Poly:
        """``z^e o gamma`` truncated at degree d."""
        m = self._monomial.get(e)
        if m is None:
            if sum(e) == 0:
                m = {_unit(self.n): ONE}
            else:
                j = max(k for k in range(self.n) if e[k])
                rest = e[:j] + (e[j] - 1,) + e[j + 1 :]
                m = poly_mul(self.monomial(rest), self.power(j, 1), self.d)
            self._monomial[e] = m
        return m

    def dgamma(self, idx: tuple[int, ...]) -> Form:
        """``d gamma_{i_1} ^ ... ^ d gamma_{i_p}`` truncated at degree d."""
        f = self._dgamma.get(idx)
        if f is None:
            head = self.dgamma(idx[:-1])
            i = idx[-1]
            one_form = {
                (j,): poly_truncate(poly_deriv(self.polys[i], j), self.d) for j in range(self.n)
            }
            one_form = {k: v for k, v in one_form.items() if v}
            f = wedge(head, one_form, self.d)
            self._dgamma[idx] = f
        return f

    def compose(self, f: Poly) -> Poly:
        out: dict = {}
        for e, c in f.items():
            out = poly_add(out, self.monomial(e), c)
        return out


@lru_cache(maxsize=64)
def _cache(gamma: PolyGermMap, d: int) -> _PullbackCache:
    return _PullbackCache(gamma, d)


def compose(f: Poly, gamma: PolyGermMap, d: int) -> Poly:
    """``f o gamma`` truncated at degree ``d``."""
    return _cache(gamma, d).compose(poly_truncate(f, d))


def pullback_jet(gamma: PolyGermMap, omega: JetForm) -> JetForm:
    """``gamma^* omega`` truncated at the jet order of ``omega``."""
    if gamma.n != omega.n:
        raise ValueError(f"germ lives in C^{gamma.n}, form in C^{omega.n}")
    cache = _cache(gamma, omega.d)
    d = omega.d
    out: dict = {}
    for idx, poly in omega.terms:
        coeff = cache.compose(dict(poly))
        if not coeff:
            continue
        contrib = wedge({(): coeff}, cache.dgamma(idx), d)
        for k, v in contrib.items():
            out[k] = poly_add(out.get(k, {}), v)
    return JetForm.from_form(omega.n, omega.p, d, out)


def compose_germs(outer: PolyGermMap, inner: PolyGermMap, d: int) -> PolyGermMap:
    """``outer o inner`` truncated at degree ``d``."""
    if outer.n != inner.n:
        raise ValueError("germs live in different dimensions")
    return PolyGermMap.from_polys(compose(outer.poly(i), inner, d) for i in range(outer.n))

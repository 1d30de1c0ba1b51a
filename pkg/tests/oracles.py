"""Reference computations that share no code with the package.

* Hodge and Poincare polynomials: blow-ups multiply the center's polynomial by
  ``uv + ... + (uv)^(r-1)``; a Kato manifold is the Hopf manifold plus the
  accumulated exceptional contributions.
* Toric Betti numbers from the h-vector of an explicit complete fan of CP^n.
* Pullbacks of jets through sympy, using Jacobian minors instead of wedges.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction
from functools import reduce

import sympy as sp

# ---------------------------------------------------------------- polynomials


def _center_polys(center: str):
    """(Hodge polynomial as Counter{(p,q): h}, Poincare as Counter{k: b}, dim)."""
    kind, _, arg = center.partition(":")
    if kind == "point":
        e, dim = Counter({(0, 0): 1}), 0
    elif kind in ("elliptic", "riemann_surface"):
        g = 1 if kind == "elliptic" else int(arg)
        e, dim = Counter({(0, 0): 1, (0, 1): g, (1, 0): g, (1, 1): 1}), 1
    elif kind == "cpn":
        dim = int(arg)
        e = Counter({(i, i): 1 for i in range(dim + 1)})
    else:
        raise ValueError(center)
    poincare = Counter()
    for (p, q), v in e.items():
        poincare[p + q] += v
    return e, poincare, dim


def kato_polynomials(n: int, steps: list[tuple[str, str, int]]):
    """Hodge diamond dict and Betti list of the Kato manifold of ``steps``
    (``(direction, center, codim)``).  Returns None if some number goes negative
    along the way (blow-down infeasible on CP^n hat)."""
    hodge = Counter({(0, 0): 1, (0, 1): 1, (n, n - 1): 1, (n, n): 1})
    betti = Counter({0: 1, 1: 1, 2 * n - 1: 1, 2 * n: 1})
    cpn_h = Counter({(i, i): 1 for i in range(n + 1)})
    for direction, center, codim in steps:
        e, poincare, dim = _center_polys(center)
        assert dim == n - codim
        sign = 1 if direction == "up" else -1
        for i in range(1, codim):
            for (p, q), v in e.items():
                hodge[(p + i, q + i)] += sign * v
                cpn_h[(p + i, q + i)] += sign * v
            for k, v in poincare.items():
                betti[k + 2 * i] += sign * v
        if any(v < 0 for v in cpn_h.values()):
            return None
    return {k: v for k, v in hodge.items() if v}, [betti[k] for k in range(2 * n + 1)]


# ---------------------------------------------------------------- toric


def _content(v):
    return reduce(math.gcd, v, 0)


def complete_fan_betti(n: int, script: list[list[int]]) -> list[int]:
    """Even Betti numbers of the complete toric variety obtained from CP^n by
    star subdividing the listed cones (indices refer to the orthant-first ray
    numbering used by subdivision scripts)."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # the orthant rays come first; the extra CP^n ray is stored last and is never subdivided
    extra = tuple(-1 for _ in range(n))
    cones = {frozenset(c) for c in itertools.combinations(range(n), n)}
    cones |= {frozenset(c) | {"x"} for c in itertools.combinations(range(n), n - 1)}
    lookup = {i: r for i, r in enumerate(rays)}
    lookup["x"] = extra
    for tau in script:
        tau = frozenset(tau)
        new = len(rays)
        v = [sum(lookup[i][k] for i in tau) for k in range(n)]
        g = _content(v)
        v = tuple(x // g for x in v)
        rays.append(v)
        lookup[new] = v
        out = set()
        for c in cones:
            if tau <= c:
                out |= {(c - {i}) | {new} for i in tau}
            else:
                out.add(c)
        cones = out
    f = Counter()
    for c in cones:
        for k in range(n + 1):
            for face in itertools.combinations(sorted(c, key=str), k):
                f[frozenset(face)] = k
    counts = Counter(f.values())
    return [
        sum((-1) ** (i - j) * math.comb(i, j) * counts[n - i] for i in range(j, n + 1)) for j in range(n + 1)
    ]


# ---------------------------------------------------------------- jets


def sympy_pullback(gamma_polys, form, n: int, p: int, d: int):
    """``gamma^* sum_I f_I dz_I`` truncated at degree ``d`` as ``{(I, exponent): Fraction-pair}``.

    ``gamma_polys`` and ``form`` use ``{exponent: (Fraction re, Fraction im)}``.
    """
    z = sp.symbols(f"z0:{n}")

    def to_expr(poly):
        return sum(
            (sp.Rational(re.numerator, re.denominator) + sp.I * sp.Rational(im.numerator, im.denominator))
            * sp.Mul(*[zi**a for zi, a in zip(z, e)])
            for e, (re, im) in poly.items()
        )

    gam = [sp.expand(to_expr(g)) for g in gamma_polys]
    jac = sp.Matrix([[sp.diff(g, zj) for zj in z] for g in gam])
    out: dict = {}
    for idx, poly in form.items():
        f = sp.expand(to_expr(poly).subs(dict(zip(z, gam)), simultaneous=True))
        for cols in itertools.combinations(range(n), p):
            minor = jac.extract(list(idx), list(cols)).det() if p else sp.Integer(1)
            coeff = sp.Poly(sp.expand(f * minor), *z)
            for mono, c in coeff.terms():
                if sum(mono) <= d and c != 0:
                    re, im = sp.re(c), sp.im(c)
                    key = (tuple(cols), tuple(mono))
                    prev = out.get(key, (Fraction(0), Fraction(0)))
                    out[key] = (prev[0] + Fraction(int(re.p), int(re.q)), prev[1] + Fraction(int(im.p), int(im.q)))
    return {k: v for k, v in out.items() if v != (0, 0)}

"""Exact dense linear algebra over Gaussian rationals.

Plain Gauss-Jordan style elimination.  Pivot rows are scanned for their
nonzero columns once, so matrices with many structural zeros (the operator
matrices here are block lower-triangular) eliminate cheaply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from flint import fmpq, fmpq_mat
from gmpy2 import mpq

from .gaussian import ONE, ZERO, GaussianRational

Matrix = list  # list[list[GaussianRational]]

__all__ = [
    "Echelon",
    "echelon",
    "rank",
    "determinant",
    "solve",
    "nullspace",
    "matmul",
    "matvec",
    "matpow",
    "identity",
    "to_complex_array",
    "determinant_ff",
    "solve_ff",
    "realify",
    "rank_exact",
    "solve_exact",
    "block_determinant",
    "block_lower_solve",
    "rank_det_mod",
    "det_mod",
    "MODULUS",
]


@dataclass
class Echelon:
    rows: Matrix
    pivots: list[int]
    det_sign: int
    pivot_product: GaussianRational

    @property
    def rank(self) -> int:
        return len(self.pivots)


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def echelon(a: Matrix, reduced: bool = False) -> Echelon:
    """Row echelon form of a copy of ``a``."""
    m = [list(row) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    sign = 1
    prod = ONE
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        prow = m[r]
        pval = prow[c]
        prod = prod * pval
        inv = pval.inverse()
        support = [j for j in range(c + 1, ncols) if prow[j]]
        targets = range(nrows) if reduced else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if not f:
                continue
            f = f * inv
            for j in support:
                row[j] = row[j] - f * prow[j]
            row[c] = ZERO
        if reduced:
            for j in support:
                prow[j] = prow[j] * inv
            prow[c] = ONE
        pivots.append(c)
        r += 1
    return Echelon(m, pivots, sign, prod)


def rank(a: Matrix) -> int:
    return echelon(a).rank


def determinant(a: Matrix) -> GaussianRational:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    e = echelon(a)
    if e.rank < n:
        return GaussianRational(0)
    return e.pivot_product * e.det_sign


def solve(a: Matrix, b: Matrix) -> Matrix:
    """Solve ``a x = b`` for square invertible ``a``; ``b`` has one column per right-hand side."""
    n = len(a)
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    e = echelon(aug, reduced=True)
    if e.pivots[:n] != list(range(n)) or len(e.pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in e.rows]


def nullspace(a: Matrix) -> list[list[GaussianRational]]:
    ncols = len(a[0])
    e = echelon(a, reduced=True)
    free = [c for c in range(ncols) if c not in set(e.pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, c in zip(e.rows, e.pivots):
            v[c] = -row[f]
        basis.append(v)
    return basis


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([_dot(nz, col) for col in bt])
    return out


def _dot(nz, col) -> GaussianRational:
    s = ZERO
    for k, x in nz:
        y = col[k]
        if y:
            s = s + x * y
    return s


def matvec(a: Matrix, v) -> list[GaussianRational]:
    return [_dot([(k, x) for k, x in enumerate(row) if x], v) for row in a]


def matpow(a: Matrix, k: int) -> Matrix:
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def to_complex_array(a: Matrix):
    import numpy as np

    return np.array([[complex(x) for x in row] for row in a], dtype=complex)


def _gaussian_int_rows(rows) -> tuple[list[list[tuple[int, int]]], list[int]]:
    """Scale each row by the lcm of its denominators; returns integer rows and scales."""
    out, scales = [], []
    for row in rows:
        den = 1
        for x in row:
            den = math.lcm(den, int(x.re.denominator), int(x.im.denominator))
        out.append([(int(x.re * den), int(x.im * den)) for x in row])
        scales.append(den)
    return out, scales


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_div_exact(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    if re % n or im % n:
        raise ArithmeticError("inexact Gaussian-integer division")
    return (re // n, im // n)


def _bareiss(m: list[list[tuple[int, int]]], ncols_a: int) -> tuple[int, tuple[int, int]]:
    """In-place fraction-free forward elimination on the first ``ncols_a`` columns
    of a square-plus-augmented matrix.  Returns (row-swap sign, determinant),
    determinant 0 if singular."""
    n = len(m)
    ncols = len(m[0])
    sign, prev = 1, (1, 0)
    for k in range(n):
        if m[k][k] == (0, 0):
            swap = next((r for r in range(k + 1, n) if m[r][k] != (0, 0)), None)
            if swap is None:
                return sign, (0, 0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pk = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            f = rowi[k]
            for j in range(k + 1, ncols):
                a = _gi_mul(rowi[j], pk)
                if f != (0, 0) and rowk[j] != (0, 0):
                    b = _gi_mul(f, rowk[j])
                    a = (a[0] - b[0], a[1] - b[1])
                rowi[j] = _gi_div_exact(a, prev) if prev != (1, 0) else a
            rowi[k] = (0, 0)
        prev = pk
    return sign, prev


def _gi_to_gq(x: tuple[int, int], scale: tuple[int, int] = (1, 0)) -> GaussianRational:
    if scale == (1, 0):
        return GaussianRational(x[0], x[1])
    n = scale[0] * scale[0] + scale[1] * scale[1]
    num = _gi_mul(x, (scale[0], -scale[1]))
    return GaussianRational._raw(mpq(num[0], n), mpq(num[1], n))


def determinant_ff(a: Matrix) -> GaussianRational:
    """Exact determinant by fraction-free elimination over Gaussian integers."""
    if not a:
        return ONE
    rows, scales = _gaussian_int_rows(a)
    sign, det = _bareiss(rows, len(a))
    total = 1
    for s in scales:
        total *= s
    return _gi_to_gq((sign * det[0], sign * det[1]), (total, 0))


def solve_ff(a: Matrix, b: Matrix) -> Matrix:
    """Exact solution of ``a x = b`` by fraction-free elimination (``a`` invertible)."""
    n = len(a)
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    rows, _ = _gaussian_int_rows(aug)
    _, det = _bareiss(rows, n)
    if det == (0, 0):
        raise ZeroDivisionError("matrix is singular")
    # the trailing pivot is det up to the swap sign; scaled solutions det * x are integral
    det = rows[n - 1][n - 1]
    nrhs = len(b[0])
    x: list = [None] * n
    for i in range(n - 1, -1, -1):
        row = rows[i]
        out = []
        for c in range(nrhs):
            acc = _gi_mul(det, row[n + c])
            for j in range(i + 1, n):
                if row[j] != (0, 0):
                    t = _gi_mul(row[j], x[j][c])
                    acc = (acc[0] - t[0], acc[1] - t[1])
            out.append(_gi_div_exact(acc, row[i]))
        x[i] = out
    return [[_gi_to_gq(v, det) for v in row] for row in x]


def block_determinant(a: Matrix, blocks: list[range]) -> GaussianRational:
    """Determinant of a block lower-triangular matrix from its diagonal blocks.

    The caller is responsible for the triangular structure.
    """
    det = ONE
    for blk in blocks:
        det = det * determinant_ff([[a[i][j] for j in blk] for i in blk])
        if not det:
            break
    return det


def block_lower_solve(a: Matrix, blocks: list[range], b: Matrix) -> Matrix:
    """Forward substitution for block lower-triangular ``a`` with invertible diagonal blocks."""
    ncols = len(b[0])
    x: list = [None] * len(a)
    for blk in blocks:
        rhs = []
        for i in blk:
            row = list(b[i])
            nz = [(j, a[i][j]) for j in range(blk.start) if a[i][j]]
            for j, aij in nz:
                xj = x[j]
                for c in range(ncols):
                    if xj[c]:
                        row[c] = row[c] - aij * xj[c]
            rhs.append(row)
        diag = [[a[i][j] for j in blk] for i in blk]
        # invert against the identity so elimination only sees the small block entries
        sol = matmul(solve_ff(diag, identity(len(blk))), rhs)
        for i, row in zip(blk, sol):
            x[i] = row
    return x


def _fq(x: mpq) -> fmpq:
    return fmpq(int(x.numerator), int(x.denominator))


def realify(a: Matrix) -> fmpq_mat:
    """The real ``2m x 2n`` matrix ``[[A, -B], [B, A]]`` of ``A + iB``.

    Multiplication commutes with this embedding, so ranks double and
    solutions of ``a x = b`` correspond to solutions of the real system.
    """
    m, n = len(a), len(a[0]) if a else 0
    out = fmpq_mat(2 * m, 2 * n)
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            if x.re:
                re = _fq(x.re)
                out[i, j] = re
                out[i + m, j + n] = re
            if x.im:
                im = _fq(x.im)
                out[i, j + n] = -im
                out[i + m, j] = im
    return out


def rank_exact(a: Matrix) -> int:
    """Exact rank over Q(i), computed by FLINT on the real embedding."""
    if not a:
        return 0
    r = realify(a).rank()
    if r % 2:
        raise ArithmeticError("odd rank of a realified complex matrix")
    return r // 2


def _gq_from_fq(x: fmpq) -> mpq:
    return mpq(int(x.p), int(x.q))


def solve_exact(a: Matrix, b: Matrix) -> Matrix:
    """Exact solution of ``a x = b`` for square invertible ``a`` (FLINT, multi-modular)."""
    n, k = len(a), len(b[0])
    rhs = fmpq_mat(2 * n, k)
    for i, row in enumerate(b):
        for c, x in enumerate(row):
            if x.re:
                rhs[i, c] = _fq(x.re)
            if x.im:
                rhs[i + n, c] = _fq(x.im)
    try:
        x = realify(a).solve(rhs)
    except ZeroDivisionError as exc:
        raise ZeroDivisionError("matrix is singular") from exc
    return [
        [GaussianRational._raw(_gq_from_fq(x[i, c]), _gq_from_fq(x[i + n, c])) for c in range(k)]
        for i in range(n)
    ]


# p = 1 mod 4, so -1 is a square and Z[i] maps into F_p
MODULUS = 1000000009


def _sqrt_minus_one(p: int) -> int:
    for a in range(2, 200):
        s = pow(a, (p - 1) // 4, p)
        if s * s % p == p - 1:
            return s
    raise ValueError(f"no square root of -1 found mod {p}")


def reduce_mod(a: Matrix, p: int = MODULUS) -> list[list[int]]:
    """Image of a Gaussian-rational matrix under ``Z[i][1/D] -> F_p``."""
    root = _sqrt_minus_one(p)
    out = []
    for row in a:
        r = []
        for x in row:
            re = int(x.re.numerator) * pow(int(x.re.denominator), -1, p)
            im = int(x.im.numerator) * pow(int(x.im.denominator), -1, p)
            r.append((re + im * root) % p)
        out.append(r)
    return out


def rank_det_mod(a: Matrix, p: int = MODULUS) -> tuple[int, int]:
    """Rank and determinant of the reduction of ``a`` mod ``p``.

    The rank is a lower bound for the rank over Q(i); a nonzero determinant
    mod ``p`` proves the exact determinant is nonzero.
    """
    m = reduce_mod(a, p)
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r, det = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            det = 0
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            det = -det
        prow = m[r]
        det = det * prow[c] % p
        inv = pow(prow[c], -1, p)
        support = [j for j in range(c + 1, ncols) if prow[j]]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f:
                f = f * inv % p
                for j in support:
                    row[j] = (row[j] - f * prow[j]) % p
                row[c] = 0
        r += 1
        if r == nrows:
            break
    if r < nrows or nrows != ncols:
        det = 0
    return r, det % p


def det_mod(x: GaussianRational, p: int = MODULUS) -> int:
    return reduce_mod([[x]], p)[0][0]

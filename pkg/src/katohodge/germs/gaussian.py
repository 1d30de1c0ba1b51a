"""Exact Gaussian rationals ``a + b i`` with ``a, b`` in Q (backed by gmpy2.mpq)."""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

__all__ = ["GaussianRational", "gq", "ZERO", "ONE"]


def _q(x) -> mpq:
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return mpq(x)


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def _raw(re: mpq, im: mpq) -> GaussianRational:
        z = object.__new__(GaussianRational)
        z.re = re
        z.im = im
        return z

    def __add__(self, o):
        if not isinstance(o, GaussianRational):
            o = GaussianRational(o)
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, GaussianRational):
            o = GaussianRational(o)
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussianRational(o) - self

    def __mul__(self, o):
        if not isinstance(o, GaussianRational):
            o = _q(o)
            return GaussianRational._raw(self.re * o, self.im * o)
        return GaussianRational._raw(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, GaussianRational):
            o = GaussianRational(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return GaussianRational(o) * self.inverse()

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> GaussianRational:
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self.re / d, -self.im / d)

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self.re, -self.im)

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, GaussianRational):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Fraction)) or type(o) is type(self.re):
            return self.im == 0 and self.re == o
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, data) -> GaussianRational:
        if isinstance(data, dict):
            return cls(_parse_rational(data.get("re", "0")), _parse_rational(data.get("im", "0")))
        return cls(_parse_rational(data))


def _parse_rational(s) -> mpq:
    if isinstance(s, int) and not isinstance(s, bool):
        return mpq(s)
    if not isinstance(s, str) or "." in s or "e" in s.lower():
        raise ValueError(f"rationals must be given as 'a/b' strings, got {s!r}")
    return mpq(s.strip())


def gq(re=0, im=0) -> GaussianRational:
    return GaussianRational(re, im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)

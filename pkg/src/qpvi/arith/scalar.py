"""Gaussian rationals: exact complex numbers with rational parts."""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

_GAUSS_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*[ij])?\s*$"
)


class GaussQ:
    """re + i*im with Fraction parts. Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussQ is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussQ":
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return cls(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussQ")

    def is_real(self) -> bool:
        return self.im == 0

    def conj(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussQ.coerce(other)
        except TypeError:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussQ(self.re + other, self.im)
        if isinstance(other, GaussQ):
            return GaussQ(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussQ(self.re - other, self.im)
        if isinstance(other, GaussQ):
            return GaussQ(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussQ(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussQ(self.re * other, self.im * other)
        if isinstance(other, GaussQ):
            return GaussQ(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "GaussQ":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        return GaussQ(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return GaussQ(self.re / other, self.im / other)
        if isinstance(other, GaussQ):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = GaussQ(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self):
        return f"GaussQ({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussQ(0, 1)


def parse_scalar(text: str) -> GaussQ:
    """Parse "p/q", "a+bi", "a-b/ci", "i" into a GaussQ."""
    s = text.strip().replace(" ", "")
    if s in ("i", "+i", "j"):
        return GaussQ(0, 1)
    if s == "-i":
        return GaussQ(0, -1)
    if s and s[-1] in "ij" and not any(c in s[1:-1] for c in "+-"):
        # pure imaginary like 3/2i
        body = s[:-1].rstrip("*")
        return GaussQ(0, Fraction(body if body not in ("", "+", "-") else body + "1"))
    m = _GAUSS_RE.match(s)
    if not m:
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if m.group("sign"):
        mag = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        im_part = mag if m.group("sign") == "+" else -mag
    return GaussQ(re_part, im_part)


def gauss_int_gcd(a: GaussQ, b: GaussQ) -> GaussQ:
    """Euclid in Z[i]; inputs must have integer parts."""
    while b:
        quo = a / b
        r = GaussQ(round(quo.re), round(quo.im))
        a, b = b, a - r * b
    return a


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussQ))

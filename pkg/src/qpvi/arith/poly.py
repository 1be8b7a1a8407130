"""Univariate polynomials over Q(i).

A polynomial is stored as a pair of FLINT rational polynomials (real part,
imaginary part). All-real inputs take FLINT's native gcd; genuinely complex
inputs fall back to a subresultant PRS over Z[i].
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm

from flint import fmpq, fmpq_poly

from ..errors import DomainError
from .scalar import GaussQ, gauss_int_gcd

_ZERO = fmpq_poly([])


def to_fmpq(x) -> fmpq:
    if isinstance(x, int):
        return fmpq(x)
    f = Fraction(x)
    return fmpq(f.numerator, f.denominator)


def from_fmpq(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class PolyQ:
    __slots__ = ("re", "im")

    def __init__(self, coeffs=(), im: fmpq_poly | None = None):
        """PolyQ([c0, c1, ...]) with ascending Gaussian-rational coefficients,
        or PolyQ(re_poly, im_poly) from two fmpq_poly."""
        if isinstance(coeffs, fmpq_poly):
            re = coeffs
            im = im if im is not None else _ZERO
        else:
            cs = [GaussQ.coerce(c) for c in coeffs]
            re = fmpq_poly([to_fmpq(c.re) for c in cs])
            im = fmpq_poly([to_fmpq(c.im) for c in cs])
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("PolyQ is immutable")

    @classmethod
    def const(cls, c) -> "PolyQ":
        c = GaussQ.coerce(c)
        return cls(fmpq_poly([to_fmpq(c.re)]), fmpq_poly([to_fmpq(c.im)]))

    @classmethod
    def gen(cls) -> "PolyQ":
        return cls(fmpq_poly([0, 1]))

    # structure

    def degree(self) -> int:
        return max(self.re.degree(), self.im.degree())

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def coeff(self, k: int) -> GaussQ:
        return GaussQ(from_fmpq(self.re[k]), from_fmpq(self.im[k]))

    @property
    def coeffs(self) -> list[GaussQ]:
        return [self.coeff(k) for k in range(self.degree() + 1)]

    def leading(self) -> GaussQ:
        return self.coeff(self.degree())

    def conj(self) -> "PolyQ":
        return PolyQ(self.re, -self.im)

    def __eq__(self, other):
        if not isinstance(other, PolyQ):
            try:
                other = PolyQ.const(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((str(self.re), str(self.im)))

    def __repr__(self):
        return f"PolyQ({[str(c) for c in self.coeffs]})"

    # ring operations

    def _lift(self, other):
        if isinstance(other, PolyQ):
            return other
        if isinstance(other, (int, Fraction, GaussQ)):
            return PolyQ.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return PolyQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return PolyQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, c) -> "PolyQ":
        c = GaussQ.coerce(c)
        a, b = to_fmpq(c.re), to_fmpq(c.im)
        if c.im == 0:
            return PolyQ(self.re * a, self.im * a)
        return PolyQ(self.re * a - self.im * b, self.im * a + self.re * b)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussQ)):
            return self.scale(other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        if other.im.is_zero():
            return PolyQ(self.re * other.re, self.im * other.re)
        if self.im.is_zero():
            return PolyQ(self.re * other.re, self.re * other.im)
        return PolyQ(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = PolyQ.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divexact(self, d: "PolyQ") -> "PolyQ":
        """self / d, assuming d divides self."""
        if d.is_zero():
            raise DomainError("division by zero polynomial")
        if d.im.is_zero():
            return PolyQ(self.re // d.re, self.im // d.re)
        norm = d.re * d.re + d.im * d.im
        prod = self * d.conj()
        return PolyQ(prod.re // norm, prod.im // norm)

    def monic(self) -> "PolyQ":
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def derivative(self) -> "PolyQ":
        return PolyQ(self.re.derivative(), self.im.derivative())

    def __call__(self, x):
        if isinstance(x, complex) or isinstance(x, float):
            return self.eval_complex(complex(x))
        x = GaussQ.coerce(x)
        if x.im == 0:
            v = to_fmpq(x.re)
            return GaussQ(from_fmpq(self.re(v)), from_fmpq(self.im(v)))
        acc = GaussQ(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, x: complex) -> complex:
        acc = 0j
        for k in range(self.degree(), -1, -1):
            acc = acc * x + complex(float(self.re[k]), float(self.im[k]))
        return acc

    def gcd(self, other: "PolyQ") -> "PolyQ":
        """Monic gcd over Q(i); gcd(0, 0) = 0."""
        if self.is_zero():
            return other.monic()
        if other.is_zero():
            return self.monic()
        if self.is_real() and other.is_real():
            return PolyQ(self.re.gcd(other.re))
        return _subresultant_gcd(self.coeffs, other.coeffs)


# subresultant PRS over Z[i]

def _strip(cs):
    while cs and not cs[-1]:
        cs.pop()
    return cs


def _to_gauss_int(cs):
    den = reduce(lcm, (c.re.denominator for c in cs), 1)
    den = lcm(den, reduce(lcm, (c.im.denominator for c in cs), 1))
    return [c * den for c in cs]


def _content(cs):
    g = GaussQ(0)
    for c in cs:
        g = gauss_int_gcd(c, g) if g else c
        if g.norm() == 1:
            break
    return g


def _prem(a, b):
    """Pseudo-remainder of a by b (coefficient lists, Gaussian integers)."""
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for k, bc in enumerate(b):
            r[k + shift] = r[k + shift] - lr * bc
        r.pop()
        _strip(r)
        e -= 1
    if e > 0:
        f = lb ** e
        r = [c * f for c in r]
    return r


def _subresultant_gcd(a, b):
    a, b = _strip(list(a)), _strip(list(b))
    if len(a) < len(b):
        a, b = b, a
    a, b = _to_gauss_int(a), _to_gauss_int(b)
    ca, cb = _content(a), _content(b)
    a = [c / ca for c in a]
    b = [c / cb for c in b]
    g = h = GaussQ(1)
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return PolyQ.const(1)
        a, b = b, [c / (g * h ** delta) for c in r]
        g = a[-1]
        h = g ** delta if delta == 1 else (g ** delta) / (h ** (delta - 1))
    cb = _content(b)
    return PolyQ([c / cb for c in b]).monic()

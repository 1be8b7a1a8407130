"""Reduced univariate rational functions over Q(i)."""
from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError, ResourceCapError
from .poly import PolyQ
from .scalar import GaussQ

DEFAULT_DEGREE_CAP = 4096
_cap = [DEFAULT_DEGREE_CAP]


def set_degree_cap(n: int) -> None:
    _cap[0] = int(n)


def get_degree_cap() -> int:
    return _cap[0]


class RatFunQ:
    """num/den with gcd(num, den) = 1 and monic den; zero is 0/1.

    The variable name is cosmetic. Arithmetic with int, Fraction and GaussQ
    promotes to constants.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if not isinstance(num, PolyQ):
            num = PolyQ.const(num)
        if den is None:
            den = PolyQ.const(1)
            _reduced = True
        elif not isinstance(den, PolyQ):
            den = PolyQ.const(den)
        if den.is_zero():
            raise DomainError("division by zero polynomial")
        if not _reduced:
            num, den = _reduce(num, den)
        elif den.degree() > 0 or den.leading() != 1:
            lc = den.leading()
            if lc != 1:
                inv = lc.inverse()
                num, den = num.scale(inv), den.scale(inv)
        if max(num.degree(), den.degree()) > _cap[0]:
            raise ResourceCapError(
                f"rational function degree {max(num.degree(), den.degree())} exceeds cap {_cap[0]}"
            )
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunQ is immutable")

    @classmethod
    def gen(cls) -> "RatFunQ":
        return cls(PolyQ.gen(), _reduced=True)

    @classmethod
    def coerce(cls, x) -> "RatFunQ":
        if isinstance(x, RatFunQ):
            return x
        if isinstance(x, PolyQ):
            return cls(x, _reduced=True)
        return cls(PolyQ.const(x), _reduced=True)

    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self) -> GaussQ:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussQ, PolyQ)):
            other = RatFunQ.coerce(other)
        if not isinstance(other, RatFunQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunQ({self.num!r} / {self.den!r})"

    # arithmetic

    @staticmethod
    def _other(x):
        if isinstance(x, RatFunQ):
            return x
        if isinstance(x, (int, Fraction, GaussQ, PolyQ)):
            return RatFunQ.coerce(x)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.den == self.den:
            return RatFunQ(self.num + o.num, self.den)
        if o.den.degree() == 0:
            return RatFunQ(self.num + o.num * self.den, self.den, _reduced=True)
        if self.den.degree() == 0:
            return RatFunQ(self.num * o.den + o.num, o.den, _reduced=True)
        return RatFunQ(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunQ(-self.num, self.den, _reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussQ)):
            if not other:
                return RatFunQ(PolyQ(), _reduced=True)
            return RatFunQ(self.num * other, self.den, _reduced=True)
        o = self._other(other)
        if o is None:
            return NotImplemented
        # cross-cancel before multiplying keeps operands small
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n1, d2 = self.num.divexact(g1), o.den.divexact(g1)
        n2, d1 = o.num.divexact(g2), self.den.divexact(g2)
        return RatFunQ(n1 * n2, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunQ":
        if self.num.is_zero():
            raise DomainError("division by zero polynomial")
        return RatFunQ(self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussQ)):
            if not other:
                raise DomainError("division by zero polynomial")
            return RatFunQ(self.num * GaussQ.coerce(other).inverse(), self.den, _reduced=True)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunQ(self.num ** n, self.den ** n, _reduced=True)

    def __call__(self, q0):
        return ratfun_eval(self, q0)

    def pole_free_at(self, q0) -> bool:
        return bool(self.den(q0))


def _reduce(num: PolyQ, den: PolyQ):
    if num.is_zero():
        return PolyQ(), PolyQ.const(1)
    g = num.gcd(den)
    if g.degree() > 0:
        num, den = num.divexact(g), den.divexact(g)
    lc = den.leading()
    if lc != 1:
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def ratfun_reduce(num, den) -> RatFunQ:
    if not isinstance(num, PolyQ):
        num = PolyQ(num) if isinstance(num, (list, tuple)) else PolyQ.const(num)
    if not isinstance(den, PolyQ):
        den = PolyQ(den) if isinstance(den, (list, tuple)) else PolyQ.const(den)
    return RatFunQ(num, den)


def ratfun_eval(f: RatFunQ, q0):
    """f(q0). Exact for Gaussian-rational q0, floating for complex q0."""
    if isinstance(q0, (complex, float)):
        d = f.den.eval_complex(complex(q0))
        if d == 0:
            raise DomainError("pole at evaluation point")
        return f.num.eval_complex(complex(q0)) / d
    d = f.den(q0)
    if not d:
        raise DomainError("pole at evaluation point")
    return f.num(q0) / d

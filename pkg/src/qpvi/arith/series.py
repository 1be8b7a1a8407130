"""Truncated power series sum_k c_k (t - center)^k + O((t - center)^N)."""
from __future__ import annotations

from fractions import Fraction


class SeriesT:
    __slots__ = ("center", "coeffs", "order")

    def __init__(self, coeffs, order: int, center=0):
        cs = list(coeffs)[:order]
        zero = 0 * cs[0] if cs else 0
        cs += [zero] * (order - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "center", center)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesT is immutable")

    @classmethod
    def const(cls, c, order, center=0):
        return cls([c], order, center)

    @classmethod
    def var(cls, order, center=0):
        """The series of t itself around center."""
        return cls([center, 1], order, center)

    def _other(self, o):
        if isinstance(o, SeriesT):
            if o.center != self.center:
                raise ValueError("series centers differ")
            return o
        return SeriesT([o], self.order, self.center)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order

    def __add__(self, other):
        o = self._other(other)
        n = min(self.order, o.order)
        return SeriesT([self.coeffs[k] + o.coeffs[k] for k in range(n)], n, self.center)

    __radd__ = __add__

    def __neg__(self):
        return SeriesT([-c for c in self.coeffs], self.order, self.center)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, SeriesT):
            return SeriesT([c * other for c in self.coeffs], self.order, self.center)
        o = self._other(other)
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        out = []
        for k in range(n):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * b[k - j]
            out.append(acc)
        return SeriesT(out, n, self.center)

    __rmul__ = __mul__

    def inverse(self) -> "SeriesT":
        a = self.coeffs
        if not a[0]:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = 1 / a[0] if not isinstance(a[0], int) else Fraction(1, a[0])
        out = [inv0]
        for k in range(1, self.order):
            acc = a[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + a[j] * out[k - j]
            out.append(-acc * inv0)
        return SeriesT(out, self.order, self.center)

    def __truediv__(self, other):
        if not isinstance(other, SeriesT):
            inv = 1 / other if not isinstance(other, int) else Fraction(1, other)
            return self * inv
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, n: int):
        out = SeriesT.const(1, self.order, self.center)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "SeriesT":
        """d/dt; the result has order one less."""
        return SeriesT([k * self.coeffs[k] for k in range(1, self.order)], self.order - 1, self.center)

    def integral(self, c0) -> "SeriesT":
        """Antiderivative with constant term c0; order grows by one."""
        cs = [c0] + [self.coeffs[k] / (k + 1) if not isinstance(self.coeffs[k], int)
                     else Fraction(self.coeffs[k], k + 1) for k in range(self.order)]
        return SeriesT(cs, self.order + 1, self.center)

    def eval(self, t):
        h = t - self.center
        acc = 0 * h
        for c in reversed(self.coeffs):
            acc = acc * h + c
        return acc

    def __repr__(self):
        return f"SeriesT(center={self.center}, coeffs={list(map(str, self.coeffs))}, order={self.order})"

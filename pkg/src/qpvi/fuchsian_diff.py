"""Differential side: sl2-Fuchsian systems with poles at 0, 1, t, infinity,
their Schlesinger flow and the Painleve VI Hamiltonian system in (y, Z)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith.mat2 import Mat2, _is_zero
from .errors import PreconditionError

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


def exact(x):
    """Promote Python ints to Fraction so that / stays exact."""
    return Fraction(x) if isinstance(x, int) and not isinstance(x, bool) else x


def _promote_fields(obj):
    for name in obj.__dataclass_fields__:
        object.__setattr__(obj, name, exact(getattr(obj, name)))


@dataclass(frozen=True)
class ThetaDiff:
    th0: object
    th1: object
    tht: object
    thinf: object

    def __post_init__(self):
        _promote_fields(self)

    def as_tuple(self):
        return (self.th0, self.th1, self.tht, self.thinf)

    def non_resonant(self) -> bool:
        """True when no theta_i is a nonzero integer."""
        for th in self.as_tuple():
            if isinstance(th, (int, Fraction)) and Fraction(th).denominator == 1 and th != 0:
                return False
            if isinstance(th, complex) and th.imag == 0 and th.real == round(th.real) and th.real != 0:
                return False
            if hasattr(th, "im") and th.im == 0 and th.re.denominator == 1 and th.re != 0:
                return False
        return True


@dataclass(frozen=True)
class TripleDiff:
    lam: object
    y: object
    Z: object
    t: object

    def __post_init__(self):
        _promote_fields(self)


@dataclass(frozen=True)
class FuchsDiff:
    A0: Mat2
    A1: Mat2
    At: Mat2
    t: object

    @property
    def Ainf(self) -> Mat2:
        return -(self.A0 + self.A1 + self.At)

    def __call__(self, x) -> Mat2:
        x = exact(x)
        return self.A0 / x + self.A1 / (x - 1) + self.At / (x - self.t)


def aux_a(y, t, theta: ThetaDiff):
    th0, th1, tht, _ = theta.as_tuple()
    return t * th0**2 / y - (t - 1) * th1**2 / (y - 1) + t * (t - 1) * tht**2 / (y - t)


def _check_triple(triple: TripleDiff, theta: ThetaDiff):
    lam, y, t = triple.lam, triple.y, triple.t
    bad = (
        _is_zero(lam) or _is_zero(y) or _is_zero(y - 1) or _is_zero(y - t)
        or _is_zero(t) or _is_zero(t - 1) or _is_zero(theta.thinf)
    )
    if bad:
        raise PreconditionError("assembly precondition violated")


def c0_c1(y, Z, t, theta: ThetaDiff):
    th0, th1, _, thi = theta.as_tuple()
    a = aux_a(y, t, theta)
    c0 = y / (t * thi**2) * ((y - 1) * (y - t) * (y * Z + thi) * Z + ((y - 1 - t) * thi**2 - a) * QUARTER) ** 2 \
        - t * th0**2 / (4 * y)
    c1 = (y - 1) / ((1 - t) * thi**2) * (y * (y - t) * ((y - 1) * Z + thi) * Z + ((y + 1 - t) * thi**2 - a) * QUARTER) ** 2 \
        - (1 - t) * th1**2 / (4 * (y - 1))
    return c0, c1


def A_entries_printed(x, triple: TripleDiff, theta: ThetaDiff):
    """Entries of A(x) evaluated directly from the closed-form expressions.

    Valid for x outside {0, 1, t, y}."""
    x = exact(x)
    lam, y, Z, t = triple.lam, triple.y, triple.Z, triple.t
    thi = theta.thinf
    a = aux_a(y, t, theta)
    a11 = (y - x) / (4 * thi * x * (x - 1) * (x - t)) * (y * (y - 1) * (y - t) * (2 * Z + thi / (y - x)) ** 2 - a) \
        - thi * QUARTER * (1 / x + 1 / (x - 1) + 1 / (x - t) + 1 / (y - x))
    a12 = lam * (x - y) / (x * (x - 1) * (x - t))
    c0, c1 = c0_c1(y, Z, t, theta)
    a21 = (c0 / x + c1 / (x - 1) - (c0 + c1) / (x - t)) / lam
    return Mat2(a11, a12, a21, -a11)


def _a11_numerator(x, y, Z, t, thi, a):
    """x(x-1)(x-t) * A^(1,1)(x), with the removable pole at x = y cancelled."""
    P = y * (y - 1) * (y - t)
    first = (P * (4 * Z * Z * (y - x) + 4 * Z * thi) - a * (y - x)) / (4 * thi)
    sym = y * y + x * y + x * x - (1 + t) * (x + y) + t
    return first + thi * QUARTER * sym - thi * QUARTER * (3 * x * x - 2 * (1 + t) * x + t)


def assemble_A(triple: TripleDiff, theta: ThetaDiff) -> FuchsDiff:
    _check_triple(triple, theta)
    lam, y, Z, t = triple.lam, triple.y, triple.Z, triple.t
    thi = theta.thinf
    a = aux_a(y, t, theta)
    c0, c1 = c0_c1(y, Z, t, theta)
    # residue at p of N(x)/(x(x-1)(x-t)) is N(p) / prod_{p' != p}(p - p')
    d0, d1, dt = t, 1 - t, t * (t - 1)
    n0 = _a11_numerator(0 * y, y, Z, t, thi, a)
    n1 = _a11_numerator(1 + 0 * y, y, Z, t, thi, a)
    nt = _a11_numerator(t, y, Z, t, thi, a)
    r0, r1, rt = n0 / d0, n1 / d1, nt / dt
    A0 = Mat2(r0, -lam * y / d0, c0 / lam, -r0)
    A1 = Mat2(r1, lam * (1 - y) / d1, c1 / lam, -r1)
    At = Mat2(rt, lam * (t - y) / dt, -(c0 + c1) / lam, -rt)
    return FuchsDiff(A0, A1, At, t)


def extract_triple(F: FuchsDiff) -> TripleDiff:
    """Inverse of assemble_A: read (lambda, y, Z) off the (1,2) and (1,1) entries."""
    t = F.t
    # x(x-1)(x-t)A^(1,2) = lam*(x - y): x-coefficient lam, constant term t*A0^(12) = -lam*y
    lam = -(1 + t) * F.A0.b - t * F.A1.b - F.At.b
    y = -t * F.A0.b / lam
    Z = F(y).a
    return TripleDiff(lam, y, Z, t)


def schlesinger_rhs(F: FuchsDiff, t=None):
    t = F.t if t is None else exact(t)
    if _is_zero(t) or _is_zero(t - 1):
        raise PreconditionError("schlesinger_rhs requires t not in {0, 1}")
    d0 = F.A0.commutator(F.At) / (0 - t)
    d1 = F.A1.commutator(F.At) / (1 - t)
    return d0, d1, -d0 - d1


def hamiltonian(y, Z, t, theta: ThetaDiff):
    y, Z, t = exact(y), exact(Z), exact(t)
    th0, th1, tht, thi = theta.as_tuple()
    return y * (y - 1) * (y - t) / (t * (t - 1)) * (Z * Z + Z / (y - t)) \
        - QUARTER * (((thi - 1) ** 2 - 1) / (t * (t - 1)) * y + th0**2 / ((t - 1) * y)
                     + tht**2 / (y - t) - th1**2 / (t * (y - 1)))


def _check_yt(y, t):
    if _is_zero(y) or _is_zero(y - 1) or _is_zero(y - t) or _is_zero(t) or _is_zero(t - 1):
        raise PreconditionError("p6_rhs requires y not in {0, 1, t} and t not in {0, 1}")


def p6_rhs(y, Z, t, theta: ThetaDiff):
    """(y', Z', lambda'/lambda) of the Painleve VI Hamiltonian system."""
    y, Z, t = exact(y), exact(Z), exact(t)
    _check_yt(y, t)
    th0, th1, tht, thi = theta.as_tuple()
    tt = t * (t - 1)
    dy = y * (y - 1) * (y - t) / tt * (2 * Z + 1 / (y - t))
    dZ = (-3 * y * y + 2 * (t + 1) * y - t) / tt * Z * Z - (2 * y - 1) / tt * Z \
        + QUARTER * ((thi - 1) ** 2 - 1) / tt - QUARTER * th0**2 / ((t - 1) * y * y) \
        - QUARTER * tht**2 / ((y - t) ** 2) + QUARTER * th1**2 / (t * (y - 1) ** 2)
    dlam = (thi - 1) * (y - t) / tt
    return dy, dZ, dlam

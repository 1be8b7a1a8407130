"""q-difference side: q-Fuchsian systems with poles at 0, 1, t, infinity,
their assembly from (lambda, y, Z), the q-Schlesinger step and the q-Lax check."""
from __future__ import annotations

from dataclasses import dataclass, field

from .arith.mat2 import Mat2, _is_zero
from .errors import PreconditionError
from .fuchsian_diff import ThetaDiff, exact

RESONANCE_BOUND = 64


@dataclass(frozen=True)
class ThetaQ:
    th0: object
    th1: object
    tht: object
    thinf: object
    bar0: object = None
    bar1: object = None
    bart: object = None
    barinf: object = None

    def __post_init__(self):
        for name in ("th0", "th1", "tht", "thinf"):
            v = exact(getattr(self, name))
            if _is_zero(v):
                raise PreconditionError("Theta_i must be nonzero")
            object.__setattr__(self, name, v)
            bname = "bar" + name[2:]
            b = getattr(self, bname)
            object.__setattr__(self, bname, 1 / v if b is None else exact(b))

    @classmethod
    def general(cls, thetas, bars):
        """Unconstrained (Theta, Theta-bar); checks the product relation."""
        out = cls(*thetas, *bars)
        lhs = out.th0 * out.bar0
        rhs = out.thinf * out.barinf * out.tht * out.bart * out.th1 * out.bar1
        if not _is_zero(lhs - rhs):
            raise PreconditionError("Theta data violate Theta0*Theta0bar = product relation")
        return out

    @classmethod
    def from_diff(cls, theta: ThetaDiff, q):
        """Theta_i = 1 + (q-1) theta_i / 2 and Theta-bar_i = 1/Theta_i."""
        q = exact(q)
        return cls(*[1 + (q - 1) * th / 2 for th in theta.as_tuple()])

    def pairs(self):
        return ((self.th0, self.bar0), (self.th1, self.bar1),
                (self.tht, self.bart), (self.thinf, self.barinf))

    def p(self, x, t):
        """(x - t Th_t)(x - t Thbar_t)(x - Th_1)(x - Thbar_1)."""
        return (x - t * self.tht) * (x - t * self.bart) * (x - self.th1) * (x - self.bar1)

    def non_resonant(self, q, bound: int = RESONANCE_BOUND) -> bool:
        """Theta_i / Thetabar_i not in q^k for 0 < |k| <= bound (exact scalars only)."""
        q = exact(q)
        for th, bar in self.pairs():
            r = th / bar
            qk = q
            qik = 1 / q
            for _ in range(bound):
                if _is_zero(r - qk) or _is_zero(r - qik):
                    return False
                qk, qik = qk * q, qik / q
        return True


@dataclass(frozen=True)
class TripleQ:
    lam: object
    y: object
    Z: object
    t: object
    q: object

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, exact(getattr(self, name)))


@dataclass(frozen=True)
class FuchsQ:
    A0: Mat2
    A1: Mat2
    At: Mat2
    t: object
    q: object
    aux: dict = field(default_factory=dict, compare=False)

    @property
    def Ainf(self) -> Mat2:
        return self.A0 + self.A1 + self.At / self.t

    def __call__(self, x) -> Mat2:
        x = exact(x)
        return self.A0 + self.A1 * (x / (x - 1)) + self.At * (x / (self.t * (x - self.t)))

    def numerator(self) -> "XPoly":
        """(x-1)(x-t) A(x) as a degree-2 matrix polynomial."""
        t = self.t
        c0 = self.A0 * t
        c1 = -(self.A0 * (1 + t)) - self.A1 * t - self.At / t
        return XPoly([c0, c1, self.Ainf])

    def tilde(self):
        """Residues of (A - I)/((q-1)x): ((A0 - I)/(q-1), A1/(q-1), At/(t(q-1)))."""
        q1 = self.q - 1
        one = Mat2.identity(1 + 0 * self.A0.a)
        return (self.A0 - one) / q1, self.A1 / q1, self.At / (self.t * q1)


class XPoly:
    """Polynomial in x with coefficients in any ring (scalars or Mat2), ascending."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @staticmethod
    def x():
        return XPoly([0, 1])

    def _lift(self, o):
        return o if isinstance(o, XPoly) else XPoly([o])

    def __add__(self, o):
        o = self._lift(o)
        n = max(len(self.c), len(o.c))
        a = self.c + [0] * (n - len(self.c))
        b = o.c + [0] * (n - len(o.c))
        return XPoly([_add(u, v) for u, v in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return XPoly([-u for u in self.c])

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, u in enumerate(self.c):
            for j, v in enumerate(o.c):
                out[i + j] = _add(out[i + j], u * v)
        return XPoly(out)

    def __rmul__(self, s):
        return XPoly([s * u for u in self.c])

    def subs_scale(self, s):
        """p(s x)."""
        out, pw = [], 1
        for u in self.c:
            out.append(u * pw)
            pw = pw * s
        return XPoly(out)

    def __call__(self, x):
        acc = 0
        for u in reversed(self.c):
            acc = _add(acc * x if not (isinstance(acc, int) and acc == 0) else 0, u)
        return acc

    def is_zero(self) -> bool:
        return all(_is_zero(u) if not isinstance(u, Mat2) else u.is_zero() for u in self.c)


def _add(u, v):
    if isinstance(u, int) and u == 0:
        return v
    if isinstance(v, int) and v == 0:
        return u
    return u + v


def _check_triple(triple: TripleQ, theta: ThetaQ):
    lam, y, Z, t, q = triple.lam, triple.y, triple.Z, triple.t, triple.q
    bad = (
        _is_zero(lam) or _is_zero(y) or _is_zero(y - 1) or _is_zero(y - t)
        or _is_zero(1 + (q - 1) * y * Z) or _is_zero(q) or _is_zero(q - 1)
        or _is_zero(t) or _is_zero(t - 1) or _is_zero(theta.thinf - theta.barinf)
    )
    if bad:
        raise PreconditionError("assembly precondition violated")


def assembly_aux(triple: TripleQ, theta: ThetaQ) -> dict:
    """z1, z2, alpha, beta, gamma, delta of the assembly."""
    lam, y, Z, t, q = triple.lam, triple.y, triple.Z, triple.t, triple.q
    Ti, Tbi = theta.thinf, theta.barinf

    def p(x):
        return theta.p(x, t)

    py, p0, p1, pt = p(y), p(0 * y), p(1 + 0 * y), p(t)
    z1 = (y - 1) * (y - t) * (1 + (q - 1) * y * Z) / Tbi
    z2 = py / z1
    s = (p0 - py) / (t * y) + (pt - py) / (t * (t - 1) * (y - t)) - (p1 - py) / ((t - 1) * (y - 1))
    alpha = -(t * (theta.th0 + theta.bar0) - (Tbi * z1 + Ti * z2)) / ((Ti - Tbi) * y) \
        + Ti / (Ti - Tbi) * (1 + t - y + s)
    beta = -(alpha - 1) - (y - t) + s
    gamma = z1 + z2 + alpha * beta + (alpha - 1 + beta) * (y - 1) - (p0 - py) / y + (p1 - py) / (y - 1)
    delta = (p0 - (alpha * y + z1) * (beta * y + z2)) / y
    return dict(z1=z1, z2=z2, alpha=alpha, beta=beta, gamma=gamma, delta=delta)


def assemble_qA(triple: TripleQ, theta: ThetaQ) -> FuchsQ:
    _check_triple(triple, theta)
    lam, y, t, q = triple.lam, triple.y, triple.t, triple.q
    Ti, Tbi = theta.thinf, theta.barinf
    aux = assembly_aux(triple, theta)
    al, be, ga, de = aux["alpha"], aux["beta"], aux["gamma"], aux["delta"]

    def M(x):
        return Mat2(
            Tbi * ((x - y) * (x - al) + aux["z1"]),
            (q - 1) * lam * (x - y),
            Ti * Tbi * (ga * x + de) / ((q - 1) * lam),
            Ti * ((x - y) * (x - be) + aux["z2"]),
        )

    A0 = M(0 * y) / t
    A1 = M(1 + 0 * y) / (1 - t)
    At = M(t) / (t - 1)
    return FuchsQ(A0, A1, At, t, q, aux)


def extract_triple_q(F: FuchsQ) -> TripleQ:
    """Read (lambda, y, Z) back from the (1,2) and (1,1) entries."""
    t, q = F.t, F.q
    ql = (1 - t) * F.A1.b - t * F.A0.b
    lam = ql / (q - 1)
    y = -t * F.A0.b / ql
    Z = (F(y).a - 1) / ((q - 1) * y)
    return TripleQ(lam, y, Z, t, q)


def x_char(triple: TripleQ, theta: ThetaQ):
    """X = (y-1)(y-t)(1+(q-1)yZ) / (Th_inf Thbar_inf (y - Th_1)(y - Thbar_1))."""
    y, Z, t, q = triple.y, triple.Z, triple.t, triple.q
    den = theta.thinf * theta.barinf * (y - theta.th1) * (y - theta.bar1)
    if _is_zero(den):
        raise PreconditionError("degenerate q-Schlesinger configuration")
    return (y - 1) * (y - t) * (1 + (q - 1) * y * Z) / den


def sigma_lambda(triple: TripleQ, theta: ThetaQ):
    """lambda(qt) = lambda (q Thbar_inf X - 1)/(Th_inf X - 1)."""
    X = x_char(triple, theta)
    d = theta.thinf * X - 1
    if _is_zero(d):
        raise PreconditionError("degenerate q-Schlesinger configuration")
    return triple.lam * (triple.q * theta.barinf * X - 1) / d


def compute_B0_C(F: FuchsQ, triple: TripleQ, theta: ThetaQ, sigma_lam=None):
    t, q = F.t, F.q
    Tt, Tbt = theta.tht, theta.bart
    k = (t * Tt - 1) * (t * Tbt - 1)
    if _is_zero(k):
        raise PreconditionError("degenerate q-Schlesinger configuration")
    left = F.Ainf + F.A1 * ((t - 1) / k)
    right = F.A0 / (Tt * Tbt) + F.A1 * (t * (t - 1) / k)
    try:
        B0 = -(q * t) * (left * right.inv())
    except ZeroDivisionError:
        raise PreconditionError("degenerate q-Schlesinger configuration") from None
    if sigma_lam is None:
        sigma_lam = sigma_lambda(triple, theta)
    X = x_char(triple, theta)
    den = q * theta.barinf * X - 1
    if _is_zero(den) or _is_zero(theta.thinf * X - 1):
        raise PreconditionError("degenerate q-Schlesinger configuration")
    c = sigma_lam / triple.lam * (theta.thinf * X - 1) / den
    one = 1 + 0 * c
    return B0, Mat2(c, 0 * c, 0 * c, one)


def qschlesinger_step(F: FuchsQ, triple: TripleQ, theta: ThetaQ, sigma_lam=None) -> FuchsQ:
    """Matrices at time qt from the q-Schlesinger equations."""
    t, q = F.t, F.q
    Tt, Tbt = theta.tht, theta.bart
    B0, C = compute_B0_C(F, triple, theta, sigma_lam)
    one = Mat2.identity(1 + 0 * B0.a)
    k = (t * Tt - 1) * (t * Tbt - 1)
    kq = (q * t * Tt - 1) * (q * t * Tbt - 1)
    if _is_zero(q * t - 1) or _is_zero(kq):
        raise PreconditionError("degenerate q-Schlesinger configuration")
    try:
        Binv = B0.inv()
        IBinv = (one + B0).inv()
        Cinv = C.inv()
    except ZeroDivisionError:
        raise PreconditionError("degenerate q-Schlesinger configuration") from None
    qB = one * q + B0
    nA0 = C * B0 * F.A0 * Binv * Cinv
    nA1 = C * qB * F.A1 * IBinv * Cinv * ((t - 1) / (q * t - 1) * kq / (q * k))
    nAt = -(C * B0 * F.A0 * (one / (Tt * Tbt) + Binv * (q * t)) * Cinv) \
        - C * qB * F.A1 * (one + IBinv * (kq / (q * t - 1))) * Cinv * (t * (t - 1) / k)
    return FuchsQ(nA0, nA1, nAt, q * t, q, {"B0": B0, "C": C})


def qpviyz_step(triple: TripleQ, theta: ThetaQ) -> TripleQ:
    """(lambda, y, Z)(t) -> (lambda, y, Z)(qt) for the q-Painleve VI system."""
    y, t, q = triple.y, triple.t, triple.q
    X = x_char(triple, theta)
    T0, Tb0 = theta.th0, theta.bar0
    Tt, Tbt = theta.tht, theta.bart
    d = (X - 1 / theta.thinf) * (X - 1 / (q * theta.barinf))
    if _is_zero(d):
        raise PreconditionError("degenerate q-Schlesinger configuration")
    sy = theta.th1 * theta.bar1 / y * (X - t * Tt * Tbt / T0) * (X - t * Tt * Tbt / Tb0) / d
    dz = q * (sy - 1) * (sy - q * t) * X
    if _is_zero(sy) or _is_zero(dz):
        raise PreconditionError("degenerate q-Schlesinger configuration")
    sZ = ((sy - q * t * Tt) * (sy - q * t * Tbt) / dz - 1) / ((q - 1) * sy)
    return TripleQ(sigma_lambda(triple, theta), sy, sZ, q * t, q)


def B_matrix(B0: Mat2, C: Mat2, x, t, q, theta: ThetaQ) -> Mat2:
    """B(x) = C (x - qt)(x I + B0) / ((x - qt Th_t)(x - qt Thbar_t))."""
    x = exact(x)
    one = Mat2.identity(1 + 0 * B0.a)
    return C * (one * x + B0) * ((x - q * t) / ((x - q * t * theta.tht) * (x - q * t * theta.bart)))


@dataclass
class LaxReport:
    records: list
    identity_zero: bool | None

    def all_zero(self) -> bool:
        return bool(self.identity_zero) and all(r["exact_zero"] for r in self.records)


def lax_polynomial(F_t: FuchsQ, F_qt: FuchsQ, B0: Mat2, C: Mat2, theta: ThetaQ) -> XPoly:
    """A(x,qt)B(x) - B(qx)A(x,t) with every denominator cleared, as a polynomial in x."""
    t, q = F_t.t, F_t.q
    Tt, Tbt = theta.tht, theta.bart
    x = XPoly.x()
    M = F_t.numerator()
    Mq = F_qt.numerator()
    Bn = (x - q * t) * XPoly([C * B0, C])  # numerator of B(x)
    Bn_q = Bn.subs_scale(q)
    dA = (x - 1) * (x - t)
    dAq = (x - 1) * (x - q * t)
    dB = (x - q * t * Tt) * (x - q * t * Tbt)
    dB_q = dB.subs_scale(q)
    left = Mq * Bn * (dB_q * dA)
    right = Bn_q * M * (dAq * dB)
    return left - right


def qlax_residual(F_t: FuchsQ, F_qt: FuchsQ, B0: Mat2, C: Mat2, x_samples, theta: ThetaQ = None,
                  check_identity: bool = True) -> LaxReport:
    t, q = F_t.t, F_t.q
    bad = [1, t, q * t]
    if theta is not None:
        bad += [q * t * theta.tht, q * t * theta.bart]
    records = []
    for x in x_samples:
        x = exact(x)
        for b in bad:
            if _is_zero(x - b) or _is_zero(q * x - b):
                raise PreconditionError("sample on excluded locus")
        if theta is None:
            raise PreconditionError("qlax_residual needs theta to build B")
        R = F_qt(x) * B_matrix(B0, C, x, t, q, theta) - B_matrix(B0, C, q * x, t, q, theta) * F_t(x)
        records.append({"x": x, "norm": R.norm(), "exact_zero": R.is_zero()})
    ident = None
    if check_identity and theta is not None:
        ident = lax_polynomial(F_t, F_qt, B0, C, theta).is_zero()
    return LaxReport(records, ident)

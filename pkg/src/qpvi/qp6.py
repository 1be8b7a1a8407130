"""The q-Painleve VI map, its modified (y, Z) form, and the biregular step on the
eight-point blow-up of P1 x P1 (Sakai's surface)."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .errors import BasePointError, PreconditionError
from .fuchsian_diff import exact
from .fuchsian_q import ThetaQ


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = _Infinity()
TAGS = ("g0-", "g0+", "g1-", "g1+", "gt-", "gt+", "ginf-", "ginf+")
NUM_TOL = 1e-9


def _numeric(x) -> bool:
    return isinstance(x, (float, complex))


def _zero(x, tol=0.0) -> bool:
    if _numeric(x):
        return abs(x) <= tol
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def _same(a, b, tol=0.0) -> bool:
    if a is INF or b is INF:
        if a is b:
            return True
        # in floating point a huge coordinate is treated as the point at infinity
        w = b if a is INF else a
        return bool(tol) and abs(complex(w)) * tol > 1

    if _numeric(a) or _numeric(b):
        return abs(complex(a) - complex(b)) <= tol * (1 + abs(complex(b)))
    return _zero(a - b)


# ----------------------------------------------------------------------------
# direct maps


def _hom(v):
    """P1 value -> homogeneous pair."""
    return (1, 0) if v is INF else (v, 1)


def _dehom(a, b):
    if _zero(b):
        if _zero(a):
            raise BasePointError("base point; use sakai_step")
        return INF
    return a / b


def g_map(y, z, t, q, th: ThetaQ):
    """z(qt) from (y, z) at t."""
    y0, y1 = _hom(y)
    z0, z1 = _hom(z)
    N = z1 * (y0 - t * th.tht * y1) * (y0 - t * th.bart * y1)
    D = q * z0 * (y0 - th.th1 * y1) * (y0 - th.bar1 * y1)
    return N, D


def qp6_map(p, t, q, theta: ThetaQ):
    """(y, z) at t -> (f, g) at qt. Values in P1 use INF for infinity."""
    t, q = exact(t), exact(q)
    y, z = (exact(v) for v in p)
    N, D = g_map(y, z, t, q, theta)
    if _zero(N) and _zero(D):
        raise BasePointError("base point; use sakai_step")
    y0, y1 = _hom(y)
    th = theta
    fn = (N - t * th.th0 * D) * (N - t * th.bar0 * D) * y1
    fd = y0 * (N - th.thinf / q * D) * (N - th.barinf * D)
    if _zero(fn) and _zero(fd):
        raise BasePointError("base point; use sakai_step")
    return _dehom(fn, fd), _dehom(N, D)


def qp6_relations(p, p1, t, q, theta: ThetaQ):
    """Residuals of both product relations between (y, z) at t and (y', z') at qt."""
    (y, z), (y1, z1) = p, p1
    th = theta
    r1 = y * y1 * (z1 - th.thinf / q) * (z1 - 1 / th.thinf) - (z1 - t * th.th0) * (z1 - t / th.th0)
    r2 = q * z * z1 * (y - th.th1) * (y - 1 / th.th1) - (y - t * th.tht) * (y - t / th.tht)
    return r1, r2


def change_coordinates(p, direction: str, t, q, theta: ThetaQ):
    """Coordinate changes z <-> Z and (y, Z) <-> (u, v) = (y, y(y-1)(y-t)Z).

    direction is one of "z->Z", "Z->z", "Z->uv", "uv->Z", "z->uv", "uv->z".
    """
    t, q = exact(t), exact(q)
    a, b = (exact(v) for v in p)
    th = theta
    if direction == "z->Z":
        y, z = a, b
        den = q * (y - 1) * (y - t) * z
        if _zero(den) or _zero(y):
            raise PreconditionError("singular locus: z = 0 or y in {0, 1, t}")
        return y, ((y - t * th.tht) * (y - t * th.bart) / den - 1) / ((q - 1) * y)
    if direction == "Z->z":
        y, Z = a, b
        den = q * (y - 1) * (y - t) * (1 + (q - 1) * y * Z)
        if _zero(den):
            raise PreconditionError("singular locus: y in {1, t} or 1 + (q-1)yZ = 0")
        return y, (y - t * th.tht) * (y - t * th.bart) / den
    if direction == "Z->uv":
        y, Z = a, b
        return y, y * (y - 1) * (y - t) * Z
    if direction == "uv->Z":
        u, v = a, b
        den = u * (u - 1) * (u - t)
        if _zero(den):
            raise PreconditionError("singular locus: u in {0, 1, t}")
        return u, v / den
    if direction == "z->uv":
        return change_coordinates(change_coordinates(p, "z->Z", t, q, theta), "Z->uv", t, q, theta)
    if direction == "uv->z":
        return change_coordinates(change_coordinates(p, "uv->Z", t, q, theta), "Z->z", t, q, theta)
    raise ValueError(f"unknown direction {direction!r}")


def modified_qp6_map(p, t, q, theta: ThetaQ):
    """(y, Z) at t -> (y, Z) at qt for the modified equation."""
    t, q = exact(t), exact(q)
    y, Z = (exact(v) for v in p)
    th = theta
    w = 1 + (q - 1) * y * Z
    d1 = (y - th.th1) * (y - th.bar1)
    if _zero(w) or _zero(d1) or _zero(y):
        raise PreconditionError("singular locus of the modified map")
    X = (y - 1) * (y - t) * w / d1
    den = y * (X - th.thinf / q) * (X - th.barinf)
    if _zero(den):
        raise BasePointError("base point; use sakai_step")
    sy = (X - t * th.th0) * (X - t * th.bar0) / den
    d2 = q * (sy - 1) * (sy - q * t) * (y - 1) * (y - t) * w
    if _zero(d2) or _zero(sy):
        raise PreconditionError("singular locus of the modified map")
    sZ = ((sy - q * t * th.tht) * (sy - q * t * th.bart) * d1 / d2 - 1) / ((q - 1) * sy)
    return sy, sZ


# ----------------------------------------------------------------------------
# truncated Laurent series in a germ parameter eps


PREC = 10


class Laurent:
    """sum_{k >= val} c_k eps^k, keeping PREC terms."""

    __slots__ = ("val", "c", "tol")

    def __init__(self, val, coeffs, tol=0.0):
        cs = list(coeffs)
        while cs and _zero(cs[0], tol * _scale(cs)):
            cs.pop(0)
            val += 1
        self.val = val
        self.c = (cs + [0] * PREC)[:PREC] if cs else []
        self.tol = tol

    def is_zero(self):
        return not self.c

    def _lift(self, o):
        if isinstance(o, Laurent):
            return o
        return Laurent(0, [o], self.tol)

    def __add__(self, o):
        o = self._lift(o)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        v = min(self.val, o.val)
        top = min(self.val + PREC, o.val + PREC)
        out = []
        for k in range(v, top):
            a = self.c[k - self.val] if 0 <= k - self.val < len(self.c) else 0
            b = o.c[k - o.val] if 0 <= k - o.val < len(o.c) else 0
            out.append(a + b)
        return Laurent(v, out, self.tol)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.val, [-a for a in self.c], self.tol)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, Laurent):
            return Laurent(self.val, [a * o for a in self.c], self.tol)
        if self.is_zero() or o.is_zero():
            return Laurent(0, [], self.tol)
        out = []
        for k in range(PREC):
            acc = 0
            for j in range(k + 1):
                acc = acc + self.c[j] * o.c[k - j]
            out.append(acc)
        return Laurent(self.val + o.val, out, self.tol)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("germ vanishes identically")
        a = self.c
        inv0 = 1 / a[0] if not isinstance(a[0], int) else Fraction(1, a[0])
        out = [inv0]
        for k in range(1, PREC):
            acc = 0
            for j in range(1, k + 1):
                acc = acc + a[j] * out[k - j]
            out.append(-acc * inv0)
        return Laurent(-self.val, out, self.tol)

    def __truediv__(self, o):
        if not isinstance(o, Laurent):
            return self * (1 / o if not isinstance(o, int) else Fraction(1, o))
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def lead(self):
        return self.c[0]


def _scale(cs):
    if cs and _numeric(cs[0]):
        return max(1.0, abs(cs[0]) if len(cs) == 1 else 1.0)
    return 1.0


# ----------------------------------------------------------------------------
# Sakai surface: points, base points and the four-stage factorization


@dataclass(frozen=True)
class SakaiPoint:
    """A point of the blown-up surface: either an ordinary (y, z) in P1 x P1 off
    the base points, or a direction [a:b] on the exceptional line over base point
    `tag`. Directions are in local coordinates (y - y0 or 1/y, z - z0 or 1/z)."""

    y: object = None
    z: object = None
    tag: str | None = None
    direction: tuple | None = None

    @property
    def exceptional(self) -> bool:
        return self.tag is not None

    def projection(self, t, q, theta):
        if not self.exceptional:
            return self.y, self.z
        return base_points(0, t, q, theta)[TAGS.index(self.tag)]


def base_points(stage: int, t, q, th: ThetaQ):
    """The eight blown-up points on the intermediate surface after `stage` stages
    of the forward map out of time t (stage 0 is the surface at t, stage 4 the one at qt)."""
    T0, Tb0, T1, Tb1, Tt, Tbt, Ti, Tbi = th.th0, th.bar0, th.th1, th.bar1, th.tht, th.bart, th.thinf, th.barinf
    if stage == 0:
        return [(0 * t, t * T0 / q), (0 * t, t * Tb0 / q), (Tb1, INF), (T1, INF),
                (t * Tt, 0 * t), (t * Tbt, 0 * t), (INF, Tbi), (INF, Ti / q)]
    if stage == 1:
        return [(0 * t, T0 / (q * t)), (0 * t, Tb0 / (q * t)), (Tb1, 0 * t), (T1, 0 * t),
                (t * Tt, INF), (t * Tbt, INF), (INF, Tbi), (INF, Ti / q)]
    if stage == 2:
        return [(0 * t, t * Tb0), (0 * t, t * T0), (Tb1, INF), (T1, INF),
                (t * Tt, 0 * t), (t * Tbt, 0 * t), (INF, Ti / q), (INF, Tbi)]
    if stage == 3:
        return [(INF, t * Tb0), (INF, t * T0), (Tb1, INF), (T1, INF),
                (Tt / (q * t), 0 * t), (Tbt / (q * t), 0 * t), (0 * t, Ti / q), (0 * t, Tbi)]
    if stage == 4:
        return base_points(0, q * t, q, th)
    raise ValueError(stage)


def _stage_map(k: int, t, q, th: ThetaQ, inverse: bool):
    """Stage k (1..4) of the forward factorization as a function on pairs of
    germs (Laurent) or scalars. Infinity never reaches these formulas: callers
    substitute germs for infinite coordinates."""
    if k == 1:
        def r(y):
            return (y - th.th1) * (y - th.bar1) / ((y - t * th.tht) * (y - t * th.bart))
        if inverse:
            return lambda y, z: (y, z / r(y))
        return lambda y, z: (y, z * r(y))
    if k == 2:
        return lambda y, z: (y, 1 / (q * z))
    if k == 3:
        def s(z):
            return (z - th.thinf / q) * (z - th.barinf) / ((z - t * th.th0) * (z - t * th.bar0))
        if inverse:
            return lambda y, z: (y / s(z), z)
        return lambda y, z: (y * s(z), z)
    if k == 4:
        return lambda y, z: (1 / y, z)
    raise ValueError(k)


def _tol_of(*vals):
    return NUM_TOL if any(_numeric(v) for v in vals if v is not INF) else 0.0


# generic second-order coefficients for germs; any values avoiding special lines work
_CURVE = (Fraction(3, 7), Fraction(-5, 11))
_LINE = (Fraction(1), Fraction(2, 3))


def _germ_coord(center, d1, d2, tol):
    """Germ of a P1 coordinate: center + d1 eps + d2 eps^2 (or its reciprocal at infinity)."""
    loc = Laurent(1, [d1, d2], tol)
    if center is INF:
        return loc.inverse()
    return loc + center


def _limit(germ: Laurent, tol):
    if germ.val < 0:
        return INF
    if germ.val > 0 or germ.is_zero():
        return 0 * germ.lead() if not germ.is_zero() else 0
    return germ.lead()


def _local(germ: Laurent, center):
    return germ.inverse() if center is INF else germ - center


def _direction(ly: Laurent, lz: Laurent, tol):
    if ly.is_zero() and lz.is_zero():
        raise PreconditionError("degenerate germ")
    if lz.is_zero() or (not ly.is_zero() and ly.val < lz.val):
        return (1, 0)
    if ly.is_zero() or lz.val < ly.val:
        return (0, 1)
    return _norm_dir(ly.lead(), lz.lead())


def _norm_dir(a, b):
    if _zero(a):
        return (0, 1)
    return (1, b / a)


def _find_base(pt, bases, tol):
    for i, b in enumerate(bases):
        if _same(pt[0], b[0], tol) and _same(pt[1], b[1], tol):
            return i
    return None


def _germ_from(pt, bases, tol):
    """Germ through a point of a blown-up surface. pt is ("pt", y, z) or ("exc", i, (a, b))."""
    if pt[0] == "exc":
        _, i, (a, b) = pt
        cy, cz = bases[i]
        return (_germ_coord(cy, a, _CURVE[0], tol), _germ_coord(cz, b, _CURVE[1], tol))
    _, y, z = pt
    return (_germ_coord(y, _LINE[0], _CURVE[0], tol), _germ_coord(z, _LINE[1], _CURVE[1], tol))


def _land(gy: Laurent, gz: Laurent, bases, tol):
    y, z = _limit(gy, tol), _limit(gz, tol)
    i = _find_base((y, z), bases, tol)
    if i is None:
        return ("pt", y, z)
    cy, cz = bases[i]
    return ("exc", i, _direction(_local(gy, cy), _local(gz, cz), tol))


def _direct(F, y, z, bases_in, bases_out, tol):
    """Evaluate the stage at an ordinary finite point, or return None when the
    germ machinery is needed (infinite coordinate, 0/0, or landing on a base point)."""
    if y is INF or z is INF:
        return None
    try:
        ny, nz = F(y, z)
    except ZeroDivisionError:
        return None
    if _find_base((ny, nz), bases_out, tol) is not None:
        return None
    return ("pt", ny, nz)


def _apply_stage(pt, F, bases_in, bases_out, tol):
    if pt[0] == "pt":
        r = _direct(F, pt[1], pt[2], bases_in, bases_out, tol)
        if r is not None:
            return r
    gy, gz = _germ_from(pt, bases_in, tol)
    ny, nz = F(gy, gz)
    return _land(ny, nz, bases_out, tol)


def in_S_q(t, q, theta: ThetaQ, bound: int = 64) -> bool:
    """Membership of t in {Th1^e Tht^e', Th0^e Thinf^e'} q^Z, tested for |k| <= bound."""
    th = theta
    seeds = []
    for e1 in (1, -1):
        for e2 in (1, -1):
            seeds.append(th.th1 ** e1 * th.tht ** e2)
            seeds.append(th.th0 ** e1 * th.thinf ** e2)
    numeric = any(_numeric(v) for v in (t, q, *seeds))
    for s in seeds:
        r = t / s
        if numeric:
            r, qq = complex(r), complex(q)
            if abs(qq) == 1 and abs(r) != 1:
                continue
            lq = cmath.log(qq)
            if lq == 0:
                continue
            for k in range(-bound, bound + 1):
                if abs(r - cmath.exp(k * lq)) <= 1e-12 * (1 + abs(r)):
                    return True
            continue
        qk = 1 + 0 * q
        for _ in range(bound + 1):
            if _zero(r - qk) or _zero(r * qk - 1):
                return True
            qk = qk * q
    return False


def check_biregular(t, q, theta: ThetaQ):
    th = theta
    tol = _tol_of(t, q, th.th0, th.th1, th.tht, th.thinf)
    if any(not _zero(a * b - 1, tol) for a, b in theta.pairs()):
        raise PreconditionError("non-biregular parameter")
    bad = (_zero(th.th0 ** 2 - 1) or _zero(th.th1 ** 2 - 1) or _zero(th.tht ** 2 - 1)
           or _zero(th.thinf ** 2 - q) or in_S_q(t, q, theta))
    if bad:
        raise PreconditionError("non-biregular parameter")


def _to_internal(p: SakaiPoint, bases, tol):
    if p.exceptional:
        return ("exc", TAGS.index(p.tag), _norm_dir(*p.direction) if len(p.direction) == 2 else p.direction)
    i = _find_base((p.y, p.z), bases, tol)
    if i is not None:
        raise BasePointError("point is a base point; give an exceptional direction")
    return ("pt", p.y, p.z)


def _from_internal(pt) -> SakaiPoint:
    if pt[0] == "exc":
        return SakaiPoint(tag=TAGS[pt[1]], direction=pt[2])
    return SakaiPoint(pt[1], pt[2])


def sakai_step(p: SakaiPoint, t, q, theta: ThetaQ, direction: str = "forward") -> SakaiPoint:
    """Biregular step of the surface at t to the one at qt (forward) or t/q (backward)."""
    t, q = exact(t), exact(q)
    if direction == "forward":
        t0 = t
    elif direction == "backward":
        t0 = t / q
    else:
        raise ValueError(direction)
    check_biregular(t0, q, theta)
    tol = _tol_of(t, q, p.y, p.z, *(p.direction or ()), theta.th0, theta.thinf)
    stages = [base_points(k, t0, q, theta) for k in range(5)]
    if direction == "forward":
        pt = _to_internal(p, stages[0], tol)
        for k in (1, 2, 3, 4):
            pt = _apply_stage(pt, _stage_map(k, t0, q, theta, False), stages[k - 1], stages[k], tol)
    else:
        pt = _to_internal(p, stages[4], tol)
        for k in (4, 3, 2, 1):
            pt = _apply_stage(pt, _stage_map(k, t0, q, theta, True), stages[k], stages[k - 1], tol)
    return _from_internal(pt)


def point_distance(a: SakaiPoint, b: SakaiPoint) -> float:
    """Chordal distance on each P1 factor (or on the exceptional direction), summed."""
    def chord(u, v):
        if u is INF and v is INF:
            return 0.0
        if u is INF or v is INF:
            w = v if u is INF else u
            return 1 / (1 + abs(complex(w)) ** 2) ** 0.5
        u, v = complex(u), complex(v)
        return abs(u - v) / ((1 + abs(u) ** 2) * (1 + abs(v) ** 2)) ** 0.5

    if a.exceptional != b.exceptional or a.tag != b.tag:
        return float("inf")
    if a.exceptional:
        da, db = _norm_dir(*a.direction), _norm_dir(*b.direction)
        if da[0] == 0 or db[0] == 0:
            return 0.0 if da[0] == db[0] else chord(INF, db[1] if da[0] == 0 else da[1])
        return chord(da[1], db[1])
    return chord(a.y, b.y) + chord(a.z, b.z)


# ----------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class QP6State:
    theta: ThetaQ
    q: object
    t: object
    point: SakaiPoint
    chart: str = "yz"


CHART_SWITCH = 1e6
CHART_BACK = 1e4


def _chart_of(p: SakaiPoint, prev: str) -> str:
    """Numeric chart label with hysteresis: a coordinate moves to its reciprocal
    chart above CHART_SWITCH and returns below CHART_BACK."""
    if p.exceptional:
        return "E:" + p.tag
    labels = []
    for v, name, flipped in ((p.y, "y", "Y"), (p.z, "z", "Z")):
        was = flipped in prev
        if v is INF:
            labels.append(flipped)
            continue
        m = abs(complex(v))
        labels.append(flipped if (m > CHART_SWITCH or (was and m > CHART_BACK)) else name)
    return "".join(labels)


def chart_coords(p: SakaiPoint, chart: str):
    """Coordinates of p in the named chart (Y = 1/y, Z = 1/z; exceptional charts give the direction)."""
    if chart.startswith("E:"):
        return p.direction
    out = []
    for v, flipped in zip((p.y, p.z), chart):
        if flipped.isupper():
            out.append(0 if v is INF else 1 / v)
        else:
            out.append(v)
    return tuple(out)


def discrete_solution(init: QP6State, n_min: int, n_max: int, backend: str = "exact"):
    """States at t0 q^l for l in [n_min, n_max] (n_min <= 0 <= n_max)."""
    if not n_min <= 0 <= n_max:
        raise ValueError("need n_min <= 0 <= n_max")
    th, q = init.theta, exact(init.q)
    if backend == "numeric":
        q, t0 = complex(q), complex(init.t)
        th = ThetaQ(*[complex(v) for v in (th.th0, th.th1, th.tht, th.thinf)])
        p = init.point
        p = SakaiPoint(_c(p.y), _c(p.z), p.tag, tuple(_c(d) for d in p.direction) if p.direction else None)
    elif backend == "exact":
        t0, p = exact(init.t), init.point
    else:
        raise ValueError(f"unknown backend {backend!r}")
    states = {0: QP6State(th, q, t0, p, _chart_of(p, "yz"))}
    cur, t = p, t0
    for ell in range(1, n_max + 1):
        cur = sakai_step(cur, t, q, th, "forward")
        t = t * q
        states[ell] = QP6State(th, q, t, cur, _chart_of(cur, states[ell - 1].chart))
    cur, t = p, t0
    for ell in range(-1, n_min - 1, -1):
        cur = sakai_step(cur, t, q, th, "backward")
        t = t / q
        states[ell] = QP6State(th, q, t, cur, _chart_of(cur, states[ell + 1].chart))
    return [states[k] for k in range(n_min, n_max + 1)]


def _c(v):
    if v is None or v is INF:
        return v
    return complex(v)


def special_orbit_z2(z0, t0, q, theta: ThetaQ):
    """Closed form of z_2 for the orbit through (Thbar_1, z0)."""
    th = theta
    T1, Tb1 = th.th1, th.bar1
    return (T1 - q * t0 * th.tht) * (T1 - q * t0 * th.bart) / (
        (t0 * T1 - th.tht) * (t0 * T1 - th.bart) / z0
        + q * T1 * (T1 - Tb1) * ((th.thinf / q + th.barinf) - t0 * (th.th0 + th.bar0)))

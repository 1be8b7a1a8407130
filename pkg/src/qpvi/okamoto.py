"""Spaces of initial conditions.

Differential side: the Hirzebruch surface F2 with charts (u_i, v_i), the eight
base points of the Painleve VI vector field, blow-up charts at each of them,
the vector field in every chart and an integrator that switches charts.

q side: the critical points of the q-Painleve map on P1 x P1 and of the
modified map on F2, the correspondence phi between the two blown-up surfaces,
and intersection bookkeeping for the boundary divisors."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith.mat2 import _is_zero
from .arith.ratfun import RatFunQ
from .errors import DomainError, InfiniteFieldError, LeftOkamotoSpace, PreconditionError
from .fuchsian_diff import ThetaDiff, exact
from .fuchsian_q import ThetaQ
from .qp6 import INF, TAGS, SakaiPoint

F2_CHARTS = ("0", "1", "2", "3")
BASE_TAGS = ("b0+", "b0-", "b1+", "b1-", "bt+", "bt-", "binf+", "binf-")


@dataclass(frozen=True)
class OkaPoint:
    """A point in one chart: "0".."3" for F2, "<tag>.1" / "<tag>.2" for the two
    charts of the blow-up at base point <tag>."""
    chart: str
    a: object
    b: object

    def coords(self):
        return self.a, self.b


def _host(tag: str) -> str:
    return "2" if tag.startswith("binf") else "0"


def _split(chart: str):
    tag, k = chart.split(".")
    return tag, int(k)


def all_charts():
    return list(F2_CHARTS) + [f"{tag}.{k}" for tag in BASE_TAGS for k in (1, 2)]


# ----------------------------------------------------------------------------
# base points


def check_cond8(theta: ThetaDiff):
    th0, th1, tht, thi = theta.as_tuple()
    if _is_zero(th0) or _is_zero(th1) or _is_zero(tht) or _is_zero(thi - 1):
        raise PreconditionError("fewer than eight base points")


def _centers(t, theta: ThetaDiff):
    """Base point -> coordinates in its host chart."""
    th0, th1, tht, thi = theta.as_tuple()
    half = Fraction(1, 2)
    out = {}
    for s, sg in (("+", 1), ("-", -1)):
        out["b0" + s] = (0 * t, sg * t * th0 * half)
        out["b1" + s] = (1 + 0 * t, sg * (t - 1) * th1 * half)
        out["bt" + s] = (t, sg * t * (t - 1) * tht * half)
    out["binf+"] = (0 * t, (thi - 2) * half)
    out["binf-"] = (0 * t, -thi * half)
    return out


def base_points_diff(theta: ThetaDiff, t):
    """The eight base points as OkaPoints in their host chart ("0" or "2")."""
    t = exact(t)
    check_cond8(theta)
    if _is_zero(t) or _is_zero(t - 1):
        raise PreconditionError("t must avoid {0, 1}")
    return {tag: OkaPoint(_host(tag), *c) for tag, c in _centers(t, theta).items()}


# ----------------------------------------------------------------------------
# symbolic vector fields


@lru_cache(maxsize=None)
def _syms():
    import sympy as sp
    return sp.symbols("u v t th0 th1 tht thi a b")


@lru_cache(maxsize=None)
def _uv_field():
    import sympy as sp
    u, v, t, th0, th1, tht, thi, _, _ = _syms()
    tt = t * (t - 1)
    R = sp.Rational
    du = (2 * v + u * (u - 1)) / tt
    dv = R(1, 4) * ((4 * v**2 - t**2 * th0**2) / (tt * u)
                    + (4 * v**2 - (t - 1)**2 * th1**2) / (tt * (u - 1))
                    + (4 * v**2 - t**2 * (t - 1)**2 * tht**2) / (tt * (u - t))) \
        + thi * (thi - 2) * u * (u - 1) * (u - t) / (4 * tt) \
        + R(1, 4) * (-th0**2 * (u - 1 - t) / (t - 1) + th1**2 * (u + 1 - t) / t
                     - (tt * tht**2 - 4 * v) * (u - 1 + t) / tt)
    return du, dv


def _sym_theta():
    _, _, t, th0, th1, tht, thi, _, _ = _syms()
    return t, ThetaDiff(th0, th1, tht, thi)


@lru_cache(maxsize=None)
def _chart_maps(chart: str):
    """(forward, inverse): chart coords as functions of (u, v, t) and back."""
    import sympy as sp
    u, v, t, _, _, _, _, a, b = _syms()
    if chart == "0":
        return (u, v), (a, b)
    if chart == "1":
        return (u, 1 / v), (a, 1 / b)
    if chart == "2":
        return (1 / u, v / u**2), (1 / a, b / a**2)
    if chart == "3":
        return (1 / u, u**2 / v), (1 / a, 1 / (a**2 * b))
    tag, k = _split(chart)
    (fa, fb), (ia, ib) = _chart_maps(_host(tag))
    ts, th = _sym_theta()
    ac, bc = _centers(ts, th)[tag]
    if k == 1:
        fwd = (fa - ac, (fb - bc) / (fa - ac))
        ha, hb = ac + a, bc + a * b
    else:
        fwd = ((fa - ac) / (fb - bc), fb - bc)
        ha, hb = ac + a * b, bc + b
    inv = (ia.subs({a: ha, b: hb}, simultaneous=True), ib.subs({a: ha, b: hb}, simultaneous=True))
    return tuple(sp.simplify(x) for x in fwd), tuple(sp.cancel(x) for x in inv)


@lru_cache(maxsize=None)
def chart_field(chart: str):
    """Vector field (a', b') in the given chart as ((num_a, den_a), (num_b, den_b))."""
    import sympy as sp
    u, v, t, *_ = _syms()
    a, b = _syms()[7:]
    du, dv = _uv_field()
    (fa, fb), (ia, ib) = _chart_maps(chart)
    out = []
    for f in (fa, fb):
        df = sp.diff(f, u) * du + sp.diff(f, v) * dv + sp.diff(f, t)
        df = sp.cancel(sp.together(df.subs({u: ia, v: ib}, simultaneous=True)))
        out.append(sp.fraction(df))
    return tuple(out)


@lru_cache(maxsize=None)
def _numeric_field(chart: str):
    import sympy as sp
    u, v, t, th0, th1, tht, thi, a, b = _syms()
    (na, da), (nb, db) = chart_field(chart)
    return sp.lambdify((a, b, t, th0, th1, tht, thi), [na, da, nb, db], modules="math")


def _to_sympy(x):
    import sympy as sp
    x = exact(x)
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    if hasattr(x, "re") and hasattr(x, "im"):
        return _to_sympy(x.re) + sp.I * _to_sympy(x.im)
    return sp.sympify(x)


def _from_sympy(e):
    import sympy as sp
    e = sp.nsimplify(e) if not e.is_Rational else e
    if e.is_Rational:
        return Fraction(int(e.p), int(e.q))
    re, im = e.as_real_imag()
    from .arith.scalar import GaussQ
    return GaussQ(_from_sympy(re), _from_sympy(im))


def _is_exact(*xs):
    return not any(isinstance(exact(x), (float, complex)) for x in xs)


FIELD_TOL = 1e-12


def vf_chart(p: OkaPoint, t, theta: ThetaDiff):
    """(a', b', t') = (..., ..., 1) at p."""
    t = exact(t)
    vals = (p.a, p.b, t) + theta.as_tuple()
    if _is_exact(*vals):
        u, v, ts, th0, th1, tht, thi, a, b = _syms()
        sub = dict(zip((a, b, ts, th0, th1, tht, thi), map(_to_sympy, vals)))
        out = []
        for num, den in chart_field(p.chart):
            d = den.subs(sub)
            n = num.subs(sub)
            if d == 0:
                raise InfiniteFieldError("infinite vector field")
            out.append(_from_sympy(n / d))
        return out[0], out[1], 1
    na, da, nb, db = _numeric_field(p.chart)(*map(complex, vals))
    scale = 1 + abs(na) + abs(nb)
    if abs(da) <= FIELD_TOL * scale or abs(db) <= FIELD_TOL * scale:
        raise InfiniteFieldError("infinite vector field")
    return na / da, nb / db, 1


# ----------------------------------------------------------------------------
# chart transitions (plain python, exact or complex)


def _to_uv(p: OkaPoint, t, theta):
    a, b = p.a, p.b
    c = p.chart
    try:
        if c == "0":
            return a, b
        if c == "1":
            return a, 1 / b
        if c == "2":
            return 1 / a, b / (a * a)
        if c == "3":
            return 1 / a, 1 / (a * a * b)
        tag, k = _split(c)
        ac, bc = _centers(t, theta)[tag]
        if k == 1:
            if _is_zero(a):
                raise ZeroDivisionError
            ha, hb = ac + a, bc + a * b
        else:
            if _is_zero(b):
                raise ZeroDivisionError
            ha, hb = ac + a * b, bc + b
        return _to_uv(OkaPoint(_host(tag), ha, hb), t, theta)
    except ZeroDivisionError:
        raise DomainError(f"point not visible in chart (u, v) from chart {c}") from None


def _from_uv(u, v, chart: str, t, theta):
    try:
        if chart == "0":
            return OkaPoint("0", u, v)
        if chart == "1":
            return OkaPoint("1", u, 1 / v)
        if chart == "2":
            return OkaPoint("2", 1 / u, v / (u * u))
        if chart == "3":
            return OkaPoint("3", 1 / u, u * u / v)
        tag, k = _split(chart)
        h = _from_uv(u, v, _host(tag), t, theta)
        ac, bc = _centers(t, theta)[tag]
        da, db = h.a - ac, h.b - bc
        if k == 1:
            return OkaPoint(chart, da, db / da)
        return OkaPoint(chart, da / db, db)
    except ZeroDivisionError:
        raise DomainError(f"point not visible in chart {chart}") from None


def _host_coords(p: OkaPoint, t, theta):
    """Coordinates in the host chart of a blow-up chart point."""
    tag, k = _split(p.chart)
    ac, bc = _centers(t, theta)[tag]
    if k == 1:
        return ac + p.a, bc + p.a * p.b
    return ac + p.a * p.b, bc + p.b


def change_chart(p: OkaPoint, target: str, t, theta: ThetaDiff) -> OkaPoint:
    t = exact(t)
    if p.chart == target:
        return p
    if "." in p.chart and "." in target and _split(p.chart)[0] == _split(target)[0]:
        a, b = p.a, p.b
        # (a2, b2) = (1/b1, a1 b1) and back
        if _is_zero(b):
            raise DomainError(f"point not visible in chart {target}")
        if target.endswith(".2"):
            return OkaPoint(target, 1 / b, a * b)
        return OkaPoint(target, a * b, 1 / a)
    if "." in p.chart and target == _host(_split(p.chart)[0]):
        tag, k = _split(p.chart)
        if (k == 1 and _is_zero(p.a)) or (k == 2 and _is_zero(p.b)):
            raise DomainError(f"point on the exceptional line is not visible in chart {target}")
        return OkaPoint(target, *_host_coords(p, t, theta))
    u, v = _to_uv(p, t, theta)
    return _from_uv(u, v, target, t, theta)


def y_of(p: OkaPoint, t, theta: ThetaDiff):
    """The Painleve coordinate y = u of a point (INF on the line at infinity)."""
    c = p.chart
    if c in ("0", "1"):
        return p.a
    if c in ("2", "3"):
        return INF if _is_zero(p.a) else 1 / p.a
    tag = _split(c)[0]
    ha, _ = _host_coords(p, exact(t), theta)
    if _host(tag) == "2":
        return INF if _is_zero(ha) else 1 / ha
    return ha


def on_removed_divisor(p: OkaPoint, t, theta: ThetaDiff, tol=0.0) -> bool:
    """True on H, on a D_i**, i.e. on the removed set I^t."""
    def z(x):
        return abs(x) <= tol if isinstance(x, (float, complex)) else _is_zero(x)
    c = p.chart
    if c == "1" or c == "3":
        if z(p.b):
            return True
    if "." in c:
        # D_i** is {a2 = 0} in the second chart
        return c.endswith(".2") and z(p.a)
    # vertical lines D_i away from the base points
    t = exact(t)
    if c in ("0", "1"):
        u = p.a
        for w in (0, 1, t):
            if z(u - w):
                if c == "1":
                    return True
                cs = [ctr for tag, ctr in _centers(t, theta).items() if _host(tag) == "0" and z(ctr[0] - w)]
                return not any(z(p.b - bc) for _, bc in cs)
    if c in ("2", "3") and z(p.a):
        if c == "3":
            return True
        cs = [ctr for tag, ctr in _centers(t, theta).items() if _host(tag) == "2"]
        return not any(z(p.b - bc) for _, bc in cs)
    return False


# ----------------------------------------------------------------------------
# integration with chart switching

BIG = 1e3
NEAR = 0.1


@dataclass
class Trajectory:
    samples: list = field(default_factory=list)  # (t, chart, a, b)
    chart_log: list = field(default_factory=list)  # (t, chart)

    @property
    def final(self):
        t, c, a, b = self.samples[-1]
        return t, OkaPoint(c, a, b)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["t", "chart", "c1", "c2"])
        for t, c, a, b in self.samples:
            w.writerow([t, c, a, b])
        return buf.getvalue()


def _radius(t, theta):
    """Neighbourhood size around host-chart base points."""
    cs = list(_centers(t, theta).items())
    r = 1.0
    for i, (ti, ci) in enumerate(cs):
        for tj, cj in cs[i + 1:]:
            if _host(ti) == _host(tj):
                d = max(abs(complex(ci[0]) - complex(cj[0])), abs(complex(ci[1]) - complex(cj[1])))
                r = min(r, d)
    return NEAR * r


def _choose_chart(p: OkaPoint, t, theta, R) -> OkaPoint:
    """Pick a well-conditioned chart for a (complex) point."""
    r = _radius(t, theta)
    if "." in p.chart:
        tag, k = _split(p.chart)
        ha, hb = (complex(x) for x in _host_coords(p, t, theta)) if not (
            (k == 1 and p.a == 0) or (k == 2 and p.b == 0)) else (None, None)
        ac, bc = (complex(x) for x in _centers(t, theta)[tag])
        if ha is None or max(abs(ha - ac), abs(hb - bc)) < 2 * r:
            if k == 1 and abs(p.b) > 2:
                return change_chart(p, tag + ".2", t, theta)
            if k == 2 and abs(p.a) > 2:
                return change_chart(p, tag + ".1", t, theta)
            return p
        p = OkaPoint(_host(tag), ha, hb)
    # host-level point: check neighbourhoods of base points first
    try:
        u, v = _to_uv(p, t, theta)
        u, v = complex(u), complex(v)
    except (DomainError, ZeroDivisionError):
        u = v = None
    for tag, (ac, bc) in _centers(t, theta).items():
        host = _host(tag)
        try:
            h = p if p.chart == host else change_chart(p, host, t, theta)
        except (DomainError, ZeroDivisionError):
            continue
        if max(abs(complex(h.a) - complex(ac)), abs(complex(h.b) - complex(bc))) < r:
            q = _from_uv(*_to_uv(h, t, theta), tag + ".1", t, theta) if host == "0" else None
            if q is None:
                da, db = h.a - ac, h.b - bc
                q = OkaPoint(tag + ".1", da, db / da)
            return q if abs(q.b) <= 1 else change_chart(q, tag + ".2", t, theta)
    if u is None:
        return p
    if abs(u) <= R:
        return OkaPoint("0", u, v) if abs(v) <= BIG else OkaPoint("1", u, 1 / v)
    v2 = v / (u * u)
    return OkaPoint("2", 1 / u, v2) if abs(v2) <= BIG else OkaPoint("3", 1 / u, 1 / v2)


def _switch_events(p: OkaPoint, t_of, theta, R):
    """Terminal events (functions of s, state) signalling that the chart should change."""
    c = p.chart
    evs = []
    if "." in c:
        tag, k = _split(c)
        evs.append(lambda s, w: 2.5 - abs(w[1] if k == 1 else w[0]))

        def leave(s, w, tag=tag, k=k):
            t = t_of(s)
            r = _radius(t, theta)
            ac, bc = (complex(x) for x in _centers(t, theta)[tag])
            q = OkaPoint(c, w[0], w[1])
            if (k == 1 and w[0] == 0) or (k == 2 and w[1] == 0):
                return 1.0
            ha, hb = (complex(x) for x in _host_coords(q, t, theta))
            return 3 * r - max(abs(ha - ac), abs(hb - bc))
        evs.append(leave)
    else:
        evs.append(lambda s, w: 2 * BIG - max(abs(w[0]), abs(w[1])))

        def near(s, w):
            t = t_of(s)
            r = _radius(t, theta)
            best = math.inf
            for tag, (ac, bc) in _centers(t, theta).items():
                if _host(tag) == c:
                    best = min(best, max(abs(w[0] - complex(ac)), abs(w[1] - complex(bc))))
            return best - 0.5 * r
        evs.append(near)
        if c in ("0", "1"):
            evs.append(lambda s, w: 2 * R - abs(w[0]))
        else:
            evs.append(lambda s, w: 2 / R - abs(w[0]))
        if c in ("1", "3"):
            evs.append(lambda s, w: 2 / BIG - abs(w[1]))
    for e in evs:
        e.terminal = True
    return evs


def integrate_okamoto(p0: OkaPoint, t0, t1, theta: ThetaDiff, rtol=1e-12, atol=1e-14,
                      max_switches: int = 10000) -> Trajectory:
    """Integrate the Painleve VI foliation from p0 at t0 to t1 along the straight
    segment, switching charts so that the field is always evaluated off I^t."""
    import numpy as np
    from scipy.integrate import solve_ivp

    tr = Trajectory()
    tr.samples.append((t0, p0.chart, p0.a, p0.b))
    tr.chart_log.append((t0, p0.chart))
    if t1 == t0:
        return tr
    check_cond8(theta)
    tc0, tc1 = complex(t0), complex(t1)
    thc = ThetaDiff(*[complex(x) for x in theta.as_tuple()])

    def t_of(s):
        return tc0 + s * (tc1 - tc0)

    if on_removed_divisor(p0, t0, theta):
        raise LeftOkamotoSpace("left Okamoto space")
    p = OkaPoint(p0.chart, complex(p0.a), complex(p0.b))
    R = 4 * max(1.0, abs(tc0), abs(tc1))
    p = _choose_chart(p, tc0, thc, R)
    s = 0.0
    for _ in range(max_switches):
        f = _numeric_field(p.chart)

        def rhs(s_, w, f=f):
            na, da, nb, db = f(w[0], w[1], t_of(s_), *thc.as_tuple())
            return np.array([na / da, nb / db]) * (tc1 - tc0)

        evs = _switch_events(p, t_of, thc, R)
        # ignore events that are already active at the start
        evs = [e for e in evs if e(s, np.array([p.a, p.b])) > 0]
        for e in evs:
            e.terminal = True
        sol = solve_ivp(rhs, (s, 1.0), np.array([p.a, p.b], dtype=complex), method="DOP853",
                        rtol=rtol, atol=atol, events=evs or None)
        if sol.status == -1:
            raise LeftOkamotoSpace("left Okamoto space: " + sol.message)
        s = float(sol.t[-1])
        w = sol.y[:, -1]
        t = t_of(s)
        q = OkaPoint(p.chart, complex(w[0]), complex(w[1]))
        tr.samples.append((t, q.chart, q.a, q.b))
        if on_removed_divisor(q, t, thc, tol=1e-12):
            raise LeftOkamotoSpace("left Okamoto space")
        if sol.status == 0 or s >= 1.0:
            return tr
        p = _choose_chart(q, t, thc, R)
        if p.chart != q.chart:
            tr.chart_log.append((t, p.chart))
            tr.samples.append((t, p.chart, p.a, p.b))
    raise LeftOkamotoSpace("too many chart switches")


# ----------------------------------------------------------------------------
# q side: critical points on P1 x P1 and on F2


def check_theta_red(th: ThetaQ, q):
    q = exact(q)
    if any(_is_zero(x * x - 1) for x in (th.th0, th.th1, th.tht)) or _is_zero(th.thinf * th.thinf - q):
        raise PreconditionError("reducibility conditions violated")


def check_t_red(th: ThetaQ, t, q):
    t, q = exact(t), exact(q)
    bad = []
    for e in (th.th0, th.bar0):
        bad += [e * th.thinf / q, e * th.barinf]
    for e in (th.tht, th.bart):
        bad += [e * th.th1, e * th.bar1]
    if any(_is_zero(t - x) for x in bad):
        raise PreconditionError("reducibility conditions violated")


def gamma_points(th: ThetaQ, t, q):
    """Critical points of the q-Painleve map, keyed by the qp6 tags."""
    t, q = exact(t), exact(q)
    return {
        "g0-": (0 * t, t * th.th0 / q), "g0+": (0 * t, t * th.bar0 / q),
        "g1-": (th.bar1, INF), "g1+": (th.th1, INF),
        "gt-": (t * th.tht, 0 * t), "gt+": (t * th.bart, 0 * t),
        "ginf-": (INF, th.barinf), "ginf+": (INF, th.thinf / q),
    }


def beta_points_q(th: ThetaQ, t, q):
    """Indeterminacy points of the modified map on F2, as host-chart OkaPoints."""
    t, q = exact(t), exact(q)
    q1 = q - 1
    out = {}
    for s, T in (("-", th.bar0), ("+", th.th0)):
        out["b0" + s] = OkaPoint("0", 0 * t, t * (T - 1) / q1)
    for s, T in (("-", th.bar1), ("+", th.th1)):
        out["b1" + s] = OkaPoint("0", T, (T - 1) * (t - T) / q1)
    for s, T in (("-", th.tht), ("+", th.bart)):
        out["bt" + s] = OkaPoint("0", t * T, -t * (T - 1) * (t * T - 1) / q1)
    out["binf-"] = OkaPoint("2", 0 * t, (th.barinf - 1) / q1)
    out["binf+"] = OkaPoint("2", 0 * t, (th.thinf - q) / (q * q1))
    return out


def base_points_q(th: ThetaQ, t, q):
    check_theta_red(th, q)
    check_t_red(th, t, q)
    return {"gamma": gamma_points(th, t, q), "beta": beta_points_q(th, t, q)}


def beta_family(theta: ThetaDiff, t):
    """The curves q -> beta_i(q) over Q(q) written with theta directly."""
    q = RatFunQ.gen()
    th = ThetaQ.from_diff(theta, q)
    t = exact(t)
    th0, th1, tht, thi = theta.as_tuple()
    half = Fraction(1, 2)
    return {
        "b0-": OkaPoint("0", 0 * q, -t * th0 * half / th.th0),
        "b0+": OkaPoint("0", 0 * q, t * th0 * half + 0 * q),
        "b1-": OkaPoint("0", 1 / th.th1, -th1 * half * (t - 1 / th.th1) / th.th1),
        "b1+": OkaPoint("0", th.th1, th1 * (t - th.th1) * half),
        "bt-": OkaPoint("0", t * th.tht, -t * tht * half * (t * th.tht - 1)),
        "bt+": OkaPoint("0", t / th.tht, t * (t - th.tht) * tht * half / (th.tht * th.tht)),
        "binf-": OkaPoint("2", 0 * q, -thi * half / th.thinf),
        "binf+": OkaPoint("2", 0 * q, (thi * half - 1) / q),
    }


def _real(x):
    return x.re if getattr(x, "im", None) == 0 else x


def beta_limit(theta: ThetaDiff, t):
    """Values at q = 1 of the confluent beta_i(q)."""
    q = RatFunQ.gen()
    th = ThetaQ.from_diff(theta, q)
    pts = beta_points_q(th, RatFunQ.coerce(exact(t)), q)
    out = {}
    for tag, p in pts.items():
        a, b = RatFunQ.coerce(p.a), RatFunQ.coerce(p.b)
        if not (a.pole_free_at(1) and b.pole_free_at(1)):
            raise PreconditionError(f"beta point {tag} has a pole at q = 1")
        out[tag] = OkaPoint(p.chart, _real(a(1)), _real(b(1)))
    return out


# ----------------------------------------------------------------------------
# the correspondence phi between P_t and the modified surface


def phi_uv(y, z, t, q, th: ThetaQ):
    return y, ((y - t * th.tht) * (y - t * th.bart) - q * (y - 1) * (y - t) * z) / (q * (q - 1) * z)


def psi_yz(u, v, t, q, th: ThetaQ):
    return u, (u - t * th.tht) * (u - t * th.bart) / (q * ((u - 1) * (u - t) + (q - 1) * v))


_GAMMA_LOCAL = {"g0-": "yz", "g0+": "yz", "gt-": "yz", "gt+": "yz",
                "g1-": "yw", "g1+": "yw", "ginf-": "sz", "ginf+": "sz"}


def _rf(x):
    return RatFunQ.coerce(exact(x))


def _yz_arc(point, direction, local):
    """Arc through a point of P1 x P1 in local coordinates, returned as (y, z)
    over Q(eps), with INF handled by the local chart."""
    e = RatFunQ.gen()
    y0, z0 = point
    da, db = direction
    # generic second order terms keep the arc off every contracted curve
    ly, lz = e * da + e * e, e * db + e * e / 3
    if local == "yz":
        return _rf(y0) + ly, _rf(z0) + lz
    if local == "yw":
        return _rf(y0) + ly, 1 / lz
    return 1 / ly, _rf(z0) + lz


def _at0(f: RatFunQ):
    if not f.pole_free_at(0):
        return INF
    return _real(f(0))


def _slope(num: RatFunQ, den: RatFunQ):
    """Limit of num/den at eps = 0 for two arcs through zero."""
    if den.is_zero():
        return INF
    return _at0(num / den)


def _land_F2(u: RatFunQ, v: RatFunQ, t, q, th: ThetaQ):
    """Limit point at eps = 0 of an arc in F2, as a host chart point or, if it
    lands on a beta point, as a point of the corresponding exceptional line."""
    u0 = _at0(u)
    if u0 is INF:
        a, b = 1 / u, v / (u * u)
        host = "2"
    else:
        a, b = u, v
        host = "0"
    a0, b0 = _at0(a), _at0(b)
    for tag, bp in beta_points_q(th, t, q).items():
        if bp.chart != host or b0 is INF:
            continue
        if _is_zero(a0 - bp.a) and _is_zero(b0 - bp.b):
            m = _slope(b - bp.b, a - bp.a)
            if m is INF:
                return OkaPoint(tag + ".2", _slope(a - bp.a, b - bp.b), 0 * a0)
            return OkaPoint(tag + ".1", 0 * a0, m)
    if b0 is INF:
        if host == "0":
            return OkaPoint("1", a0, _at0(1 / b))
        return OkaPoint("3", a0, _at0(1 / b))
    return OkaPoint(host, a0, b0)


def _land_F0(y: RatFunQ, z: RatFunQ, t, q, th: ThetaQ):
    y0 = _at0(y)
    z0 = _at0(z)
    for tag, (gy, gz) in gamma_points(th, t, q).items():
        same_y = (y0 is INF and gy is INF) or (y0 is not INF and gy is not INF and _is_zero(y0 - gy))
        same_z = (z0 is INF and gz is INF) or (z0 is not INF and gz is not INF and _is_zero(z0 - gz))
        if same_y and same_z:
            ly = 1 / y if gy is INF else y - gy
            lz = 1 / z if gz is INF else z - gz
            m = _slope(lz, ly)
            direction = (0, 1) if m is INF else (1, m)
            return SakaiPoint(tag=tag, direction=direction)
    return SakaiPoint(y=y0, z=z0)


def _arc_uv(p: OkaPoint, t, q, th: ThetaQ):
    e = RatFunQ.gen()
    c = p.chart
    if "." in c:
        tag, k = _split(c)
        bp = beta_points_q(th, t, q)[tag]
        if k == 1:
            ha, hb = _rf(bp.a) + e, _rf(bp.b) + e * _rf(p.b) + e * e
        else:
            ha, hb = _rf(bp.a) + e * _rf(p.a) + e * e, _rf(bp.b) + e
        if bp.chart == "2":
            return 1 / ha, hb / (ha * ha)
        return ha, hb
    a, b = _rf(p.a), _rf(p.b)
    d = e / 7 + e * e / 5
    if c == "0":
        return a + e, b + d
    if c == "1":
        return a + e, 1 / (b + d)
    if c == "2":
        return 1 / (a + e), (b + d) / ((a + e) * (a + e))
    return 1 / (a + e), 1 / ((a + e) * (a + e) * (b + d))


def phi_map(p, direction: str, t, q, th: ThetaQ):
    """phi: P_t -> modified surface ("phi") or its inverse ("psi").

    For "phi", p is a SakaiPoint (ordinary (y, z) or an exceptional direction
    over a gamma point); the result is an OkaPoint (host chart, or the first
    or second blow-up chart over a beta point). For "psi" it is the reverse.
    Exact rational input only."""
    t, q = exact(t), exact(q)
    if direction == "phi":
        if p.exceptional:
            pt = gamma_points(th, t, q)[p.tag]
            y, z = _yz_arc(pt, p.direction, _GAMMA_LOCAL[p.tag])
        else:
            for tag, (gy, gz) in gamma_points(th, t, q).items():
                if _same_p1(p.y, gy) and _same_p1(p.z, gz):
                    raise PreconditionError("singular locus without exceptional coordinate")
            local = ("sz" if p.y is INF else "yw" if p.z is INF else "yz")
            y, z = _yz_arc((p.y, p.z), (1, Fraction(1, 7)), local)
        u, v = phi_uv(y, z, _rf(t), _rf(q), th)
        return _land_F2(u, v, t, q, th)
    if direction == "psi":
        if "." not in p.chart:
            for tag, bp in beta_points_q(th, t, q).items():
                if bp.chart == p.chart and _is_zero(p.a - bp.a) and _is_zero(p.b - bp.b):
                    raise PreconditionError("singular locus without exceptional coordinate")
        u, v = _arc_uv(p, t, q, th)
        y, z = psi_yz(u, v, _rf(t), _rf(q), th)
        return _land_F0(y, z, t, q, th)
    raise ValueError(f"unknown direction {direction!r}")


def _same_p1(a, b):
    if a is INF or b is INF:
        return a is b
    return _is_zero(a - b)


# ----------------------------------------------------------------------------
# divisor classes and intersection diagrams


@dataclass(frozen=True)
class DivisorClass:
    """Integer combination of basis classes. Basis for blow-ups of P1 x P1:
    H1 (fibre y = const), H2 (fibre z = const); for F2: F (fibre), S (section
    with S.S = 2); exceptional classes E:<tag>."""
    coeffs: tuple  # sorted ((name, coeff), ...)

    @classmethod
    def of(cls, **kw):
        return cls(tuple(sorted((k.replace("__", ":"), v) for k, v in kw.items() if v)))

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    def as_dict(self):
        return dict(self.coeffs)

    def __add__(self, other):
        d = self.as_dict()
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + v
        return DivisorClass.from_dict(d)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, n: int):
        return DivisorClass.from_dict({k: n * v for k, v in self.coeffs})

    def __str__(self):
        return " + ".join(f"{v}*{k}" for k, v in self.coeffs) or "0"


def _basic_pair(a: str, b: str) -> int:
    if a.startswith("E:") or b.startswith("E:"):
        return -1 if a == b else 0
    table = {("H1", "H1"): 0, ("H2", "H2"): 0, ("H1", "H2"): 1,
             ("F", "F"): 0, ("S", "S"): 2, ("F", "S"): 1}
    key = (a, b) if (a, b) in table else (b, a)
    if key not in table:
        raise ValueError(f"classes {a}, {b} live on different surfaces")
    return table[key]


def pairing(x: DivisorClass, y: DivisorClass) -> int:
    return sum(u * v * _basic_pair(a, b) for a, u in x.coeffs for b, v in y.coeffs)


def strict_transform(cls: DivisorClass, through) -> DivisorClass:
    """Subtract the exceptional class of every blown-up point on the curve (multiplicity one)."""
    return cls - DivisorClass.from_dict({"E:" + tag: 1 for tag in through})


@dataclass
class Diagram:
    components: dict  # name -> DivisorClass
    notes: dict = field(default_factory=dict)

    def self_intersections(self):
        return {n: pairing(c, c) for n, c in self.components.items()}

    def edges(self):
        names = list(self.components)
        out = []
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                m = pairing(self.components[a], self.components[b])
                if m:
                    out.append((a, b, m))
        return out

    def degrees(self):
        deg = {n: 0 for n in self.components}
        for a, b, m in self.edges():
            deg[a] += m
            deg[b] += m
        return deg

    def is_cycle(self) -> bool:
        e = self.edges()
        return len(e) == len(self.components) and all(m == 1 for *_, m in e) \
            and all(d == 2 for d in self.degrees().values()) and _connected(self)

    def is_star(self) -> bool:
        e = self.edges()
        deg = self.degrees()
        centers = [n for n, d in deg.items() if d == len(self.components) - 1]
        return len(e) == len(self.components) - 1 and len(centers) == 1 \
            and all(m == 1 for *_, m in e)

    def to_dot(self) -> str:
        lines = ["graph intersections {"]
        si = self.self_intersections()
        for n in self.components:
            lines.append(f'  "{n}" [label="{n} ({si[n]})"];')
        for a, b, m in self.edges():
            lines.append(f'  "{a}" -- "{b}" [label="{m}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> str:
        si = self.self_intersections()
        return json.dumps({
            "components": {n: {"class": str(c), "self_intersection": si[n]} for n, c in self.components.items()},
            "edges": [[a, b, m] for a, b, m in self.edges()],
            "notes": self.notes,
        })


def _connected(d: Diagram) -> bool:
    names = list(d.components)
    if not names:
        return True
    adj = {n: set() for n in names}
    for a, b, _ in d.edges():
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {names[0]}, [names[0]]
    while stack:
        for m in adj[stack.pop()] - seen:
            seen.add(m)
            stack.append(m)
    return len(seen) == len(names)


def _on_F0_line(kind, val, pt):
    y, z = pt
    if kind == "y":
        return _same_p1(y, val)
    return _same_p1(z, val)


def _F2_incidence(t, q, th):
    """Which beta points lie on H, D0, Dinf and C (modified surface)."""
    pts = beta_points_q(th, t, q)
    inc = {"H": [], "D0": [], "Dinf": [], "C": []}
    for tag, p in pts.items():
        if p.chart == "0":
            u, v = p.a, p.b
            if _is_zero(u):
                inc["D0"].append(tag)
            if _is_zero((u - 1) * (u - t) - (1 - q) * v):
                inc["C"].append(tag)
        else:
            inc["Dinf"].append(tag)
            # on u2 = 0 the curve C is at v3 = 1 - q, i.e. v2 = 1/(1 - q)
            if _is_zero(p.b * (1 - q) - 1):
                inc["C"].append(tag)
    return inc


def intersection_diagram(space: str, theta=None, t=None, q=None) -> Diagram:
    """space: "q-okamoto" (P_t, boundary J^t), "q-okamoto-mod" (modified surface,
    boundary I^t), "diff-okamoto" (Okamoto space, boundary I^t), "omega-limit"."""
    if space == "q-okamoto":
        t, q = exact(t), exact(q)
        check_theta_red(theta, q)
        gam = gamma_points(theta, t, q)
        lines = {"H0": ("z", 0 * t), "Hinf": ("z", INF), "V0": ("y", 0 * t), "Vinf": ("y", INF)}
        comps = {}
        for name, (kind, val) in lines.items():
            base = DivisorClass.of(H2=1) if kind == "z" else DivisorClass.of(H1=1)
            comps[name] = strict_transform(base, [g for g, p in gam.items() if _on_F0_line(kind, val, p)])
        return Diagram(comps)
    if space == "q-okamoto-mod":
        t, q = exact(t), exact(q)
        check_theta_red(theta, q)
        inc = _F2_incidence(t, q, theta)
        F, S = DivisorClass.of(F=1), DivisorClass.of(S=1)
        comps = {
            "H": strict_transform(S - 2 * F, inc["H"]),
            "D0": strict_transform(F, inc["D0"]),
            "C": strict_transform(S, inc["C"]),
            "Dinf": strict_transform(F, inc["Dinf"]),
        }
        return Diagram(comps, {"C_before_blowup": pairing(S, S), "C_points": inc["C"]})
    if space == "diff-okamoto":
        t = exact(t)
        pts = base_points_diff(theta, t)
        F, S = DivisorClass.of(F=1), DivisorClass.of(S=1)
        comps = {"H": S - 2 * F}
        for i in ("0", "1", "t", "inf"):
            comps["D" + i] = strict_transform(F, [tag for tag in pts if tag[1:-1] == i])
        return Diagram(comps)
    if space == "omega-limit":
        F, S = DivisorClass.of(F=1), DivisorClass.of(S=1)
        c4 = strict_transform(S, ["b1+", "b1-", "bt+", "bt-"])
        parts = {
            "H": S - 2 * F,
            "D1": strict_transform(F, ["b1+", "b1-"]),
            "Dt": strict_transform(F, ["bt+", "bt-"]),
        }
        total = parts["H"] + parts["D1"] + parts["Dt"]
        d = Diagram(parts, {"C": str(c4), "C_self_intersection": pairing(c4, c4),
                            "C_equals_sum": total == c4})
        return d
    raise ValueError(f"unknown space {space!r}")

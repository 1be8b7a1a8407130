"""The limit q -> 1: confluent spectral data, the a_n / b_n expansion of discrete
solutions, a power-series oracle for Painleve VI, and limit checks for the
q-Schlesinger system and the modified q-Painleve map."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith.mat2 import Mat2, _is_zero
from .arith.ratfun import RatFunQ
from .arith.series import SeriesT
from .errors import ConfluenceViolation, DomainError, PreconditionError
from .fuchsian_diff import QUARTER, ThetaDiff, exact, hamiltonian, p6_rhs
from .fuchsian_q import ThetaQ
from .qp6 import modified_qp6_map


@dataclass(frozen=True)
class ConfluentSpectral:
    theta: ThetaDiff
    thetaq: ThetaQ
    degenerate: bool = False

    @property
    def q(self) -> RatFunQ:
        return RatFunQ.gen()


def make_confluent(theta: ThetaDiff) -> ConfluentSpectral:
    """Theta_i(q) = 1 + (q-1) theta_i / 2 over Q(q)."""
    q = RatFunQ.gen()
    thq = ThetaQ.from_diff(theta, q)
    degenerate = all(_is_zero(th) for th in theta.as_tuple())
    return ConfluentSpectral(theta, thq, degenerate)


def xe_forms(y, Z, t, q, th: ThetaQ):
    """The auxiliary X and E of the modified equation."""
    y, Z, t, q = exact(y), exact(Z), exact(t), exact(q)
    X = (y - 1) * (y - t) * (1 + (q - 1) * y * Z) / ((y - th.th1) * (y - th.bar1))
    E = q / y * (X - t * th.th0) * (X - t * th.bar0) / ((th.thinf * X - 1) * (q * th.barinf * X - 1))
    return X, E


# ----------------------------------------------------------------------------
# binomial transforms between sigma-data and delta-data


def to_delta(ys, q):
    """a_n = (q-1)^-n sum_k C(n,k) (-1)^(n-k) y_k."""
    out = []
    for n in range(len(ys)):
        acc = 0
        for k in range(n + 1):
            acc = acc + math.comb(n, k) * (-1) ** (n - k) * ys[k]
        out.append(acc / (q - 1) ** n)
    return out


def from_delta(a, q):
    """y_n = sum_k C(n,k) (q-1)^k a_k."""
    out = []
    for n in range(len(a)):
        acc = 0
        for k in range(n + 1):
            acc = acc + math.comb(n, k) * (q - 1) ** k * a[k]
        out.append(acc)
    return out


@dataclass
class ConfluenceSequences:
    ys: list
    Zs: list
    a: list
    b: list
    t0: object = None
    theta: ThetaDiff = None

    def a_at_1(self):
        return [an(1) for an in self.a]

    def b_at_1(self):
        return [bn(1) for bn in self.b]


def _check_init(y0, t0):
    if _is_zero(t0) or _is_zero(t0 - 1):
        raise PreconditionError("t0 must avoid {0, 1}")
    if _is_zero(y0) or _is_zero(y0 - 1) or _is_zero(y0 - t0):
        raise PreconditionError("y0 must avoid {0, 1, t0}")


def orbit_in_q(init, theta: ThetaDiff, n_max: int):
    """(y_n, Z_n) for n = 0..n_max as rational functions of q."""
    y0, Z0, t0 = (exact(v) for v in init)
    _check_init(y0, t0)
    conf = make_confluent(theta)
    q = conf.q
    ys, Zs = [RatFunQ.coerce(y0)], [RatFunQ.coerce(Z0)]
    t = RatFunQ.coerce(t0)
    for _ in range(n_max):
        y, Z = modified_qp6_map((ys[-1], Zs[-1]), t, q, conf.thetaq)
        ys.append(y)
        Zs.append(Z)
        t = t * q
    return ys, Zs


def an_bn(init, theta: ThetaDiff, n_max: int) -> ConfluenceSequences:
    ys, Zs = orbit_in_q(init, theta, n_max)
    q = RatFunQ.gen()
    a, b = to_delta(ys, q), to_delta(Zs, q)
    for n, (an, bn) in enumerate(zip(a, b)):
        if not (an.pole_free_at(1) and bn.pole_free_at(1)):
            raise ConfluenceViolation(f"confluence theorem violated at n={n}")
    return ConfluenceSequences(ys, Zs, a, b, exact(init[2]), theta)


# ----------------------------------------------------------------------------
# power-series oracle


def _rhs_raw(y, Z, t, theta: ThetaDiff):
    th0, th1, tht, thi = theta.as_tuple()
    tt = t * (t - 1)
    dy = y * (y - 1) * (y - t) / tt * (2 * Z + 1 / (y - t))
    dZ = (-3 * y * y + 2 * (t + 1) * y - t) / tt * Z * Z - (2 * y - 1) / tt * Z \
        + QUARTER * ((thi - 1) ** 2 - 1) / tt - QUARTER * th0**2 / ((t - 1) * y * y) \
        - QUARTER * tht**2 / ((y - t) * (y - t)) + QUARTER * th1**2 / (t * (y - 1) * (y - 1))
    return dy, dZ


def p6_taylor(init, theta: ThetaDiff, N: int):
    """Series solution (y, Z) in powers of (t - t0), exact through order N."""
    y0, Z0, t0 = (exact(v) for v in init)
    _check_init(y0, t0)
    T = SeriesT.var(N + 1, t0)
    Y = SeriesT.const(y0, N + 1, t0)
    Z = SeriesT.const(Z0, N + 1, t0)
    # each pass fixes one more coefficient
    for _ in range(N + 1):
        dy, dZ = _rhs_raw(Y, Z, T, theta)
        Y, Z = dy.integral(y0), dZ.integral(Z0)
        Y = SeriesT(Y.coeffs, N + 1, t0)
        Z = SeriesT(Z.coeffs, N + 1, t0)
    return Y, Z


def series_residual(Y: SeriesT, Z: SeriesT, theta: ThetaDiff):
    """Coefficients of Y' - rhs and Z' - rhs; zero through order N-1."""
    T = SeriesT.var(Y.order, Y.center)
    dy, dZ = _rhs_raw(Y, Z, T, theta)
    return (Y.derivative() - dy).coeffs, (Z.derivative() - dZ).coeffs


def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def taylor_weighted(Y: SeriesT, n: int):
    """t0^n n! c_n: the n-th derivative of q -> y(q t0) at q = 1."""
    t0 = Y.center
    return t0**n * math.factorial(n) * Y[n]


def euler_derivative(Y: SeriesT, n: int):
    """(t d/dt)^n y at t0 = sum_k S(n,k) t0^k k! c_k."""
    t0 = Y.center
    return sum((stirling2(n, k) * t0**k * math.factorial(k) * Y[k] for k in range(n + 1)), Fraction(0))


def euler_derivatives_sympy(init, theta: ThetaDiff, n_max: int = 3):
    """(t d/dt)^n y at t0 for n <= n_max via the chain-rule tower
    H^(n) = dH^(n-1)/dy * H_1 + dH^(n-1)/dZ * H_2 + t dH^(n-1)/dt."""
    import sympy as sp

    y, Z, t = sp.symbols("y Z t")
    th = [sp.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else sp.nsimplify(v)
          for v in theta.as_tuple()]
    H = hamiltonian(y, Z, t, ThetaDiff(*th))
    H1 = t * sp.diff(H, Z)
    H2 = -t * sp.diff(H, y)
    y0, Z0, t0 = (sp.Rational(str(exact(v))) for v in init)
    out = [y0]
    cur = y
    for _ in range(n_max):
        cur = sp.diff(cur, y) * H1 + sp.diff(cur, Z) * H2 + t * sp.diff(cur, t)
        val = sp.nsimplify(sp.simplify(cur.subs({y: y0, Z: Z0, t: t0})))
        out.append(Fraction(int(sp.numer(val)), int(sp.denom(val))))
    return out


def confluence_report(init, theta: ThetaDiff, n_max: int = 5):
    """Per n: a_n(1) against the weighted Taylor coefficient and the Euler derivative."""
    seq = an_bn(init, theta, n_max)
    Y, _ = p6_taylor(init, theta, n_max)
    recs = []
    for n, an in enumerate(seq.a):
        v = an(1)
        tc = taylor_weighted(Y, n)
        ed = euler_derivative(Y, n)
        recs.append({
            "n": n, "a_n_at_1": str(v), "taylor_coeff": str(tc), "equal": v == tc,
            "euler_derivative": str(ed), "equal_euler": v == ed,
        })
    return recs


# ----------------------------------------------------------------------------
# numerical integration of Painleve VI


def integrate_p6(init, theta: ThetaDiff, t_end, rtol=1e-13, atol=1e-15):
    """(y, Z) at t_end by Dormand-Prince 8 along the straight segment from t0."""
    import numpy as np
    from scipy.integrate import solve_ivp

    y0, Z0, t0 = (complex(v) for v in init)
    t_end = complex(t_end)
    th = ThetaDiff(*[complex(v) for v in theta.as_tuple()])

    def f(s, u):
        t = t0 + s * (t_end - t0)
        dy, dZ = _rhs_raw(u[0], u[1], t, th)
        return np.array([dy, dZ]) * (t_end - t0)

    sol = solve_ivp(f, (0.0, 1.0), np.array([y0, Z0], dtype=complex), method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise DomainError("integration failed: " + sol.message)
    y, Z = sol.y[:, -1]
    return y, Z


def partial_sum(values, q, n_max=None):
    """sum_n values[n] / n! (q-1)^n."""
    n_max = len(values) - 1 if n_max is None else n_max
    return sum(complex(values[n]) / math.factorial(n) * (q - 1) ** n for n in range(n_max + 1))


# ----------------------------------------------------------------------------
# slope fits


def slope_ratio(errs):
    """err(q1)/err(q2) for two samples; inf when the second vanishes."""
    e1, e2 = errs
    if e2 == 0:
        return math.inf if e1 else float("nan")
    return e1 / e2


def _mnorm(M: Mat2) -> float:
    return max(abs(complex(v)) for v in (M.a, M.b, M.c, M.d))


def qschles_rhs(At0, At1, t, q, theta: ThetaDiff):
    """(f0, f1, ft, B0) evaluated at tilde-matrices for the given q."""
    t, q = exact(t), exact(q)
    th = ThetaQ.from_diff(theta, q)
    one = Mat2.identity(1 + 0 * t)
    Tt, Tbt = th.tht, th.bart
    k = (t * Tt - 1) * (t * Tbt - 1)
    kq = (q * t * Tt - 1) * (q * t * Tbt - 1)
    q1 = q - 1
    Ainf = Mat2((1 - th.barinf) / q1, 0 * t, 0 * t, (1 - th.thinf) / q1)
    Att = -(At0 + At1 + Ainf)
    try:
        B0 = -(q * t) * ((one + ((t - 1) / k * At1 - Ainf) * q1)
                         * (one + (At0 + t * (t - 1) / k * At1) * q1).inv())
        Binv = B0.inv()
        IBinv = (one + B0).inv()
    except ZeroDivisionError:
        raise PreconditionError("degenerate q-Schlesinger configuration") from None
    qB = one * q + B0
    tt = Tt * Tbt
    f0 = (B0 * At0 * Binv - At0) / (q1 * t)
    f1 = ((t - 1) / (q * t - 1) * kq / (q * k) * (qB * At1 * IBinv) - At1) / (q1 * t)
    ft = -(one + B0 / (q * t * tt)) / (q1 * q1 * t) \
        - (B0 * At0 * (one / (q * t * tt) + Binv) + Att) / (q1 * t) \
        - (qB * At1 * (one + IBinv * (kq / (q * t - 1)))) * ((t - 1) / (q * q1 * t * k))
    return f0, f1, ft, B0, Att


def btilde(B0: Mat2, x, t, q, theta: ThetaDiff) -> Mat2:
    x, t, q = exact(x), exact(t), exact(q)
    th = ThetaQ.from_diff(theta, q)
    one = Mat2.identity(1 + 0 * t)
    return ((one * x + B0) * ((x - q * t) / ((x - q * t * th.tht) * (x - q * t * th.bart))) - one) \
        / ((q - 1) * t)


@dataclass
class SlopeReport:
    rows: list = field(default_factory=list)

    def ratios(self):
        return {r["name"]: r["ratio"] for r in self.rows}

    def ok(self, lo=8.0, hi=12.0):
        return all(lo <= r["ratio"] <= hi for r in self.rows)


def qschles_limit_check(At0: Mat2, At1: Mat2, t, theta: ThetaDiff,
                        q_samples=(Fraction(1001, 1000), Fraction(10001, 10000)), x_samples=(5,)):
    """Residuals of the q-Schlesinger right-hand sides against the Schlesinger
    brackets, and of B-tilde against -At/(x-t), at each q; two-point slope."""
    t = exact(t)
    res = {"f0": [], "f1": [], "ft": []}
    bres = {x: [] for x in x_samples}
    for q in q_samples:
        f0, f1, ft, B0, Att = qschles_rhs(At0, At1, t, q, theta)
        s0 = At0.commutator(Att) / (0 - t)
        s1 = At1.commutator(Att) / (1 - t)
        res["f0"].append(_mnorm(f0 - s0))
        res["f1"].append(_mnorm(f1 - s1))
        res["ft"].append(_mnorm(ft + s0 + s1))
        for x in x_samples:
            x = exact(x)
            bres[x].append(_mnorm(btilde(B0, x, t, q, theta) + Att / (x - t)))
    rep = SlopeReport()
    dq = float(q_samples[0] - 1)
    for name, errs in list(res.items()) + [(f"B(x={x})", e) for x, e in bres.items()]:
        rep.rows.append({"name": name, "errors": errs, "ratio": slope_ratio(errs), "C": errs[0] / dq})
    return rep


def remark_estimate_check(init, theta: ThetaDiff, n_max: int = 4,
                          q_samples=(Fraction(1001, 1000), Fraction(10001, 10000)), seq=None):
    """|y_n(q) - y(q^n t0)| at two q samples, with y from numerical integration."""
    seq = an_bn(init, theta, n_max) if seq is None else seq
    t0 = exact(init[2])
    rows = []
    for n in range(n_max + 1):
        errs = []
        for q in q_samples:
            yn = complex(seq.ys[n](q))
            if n == 0:
                ref = complex(exact(init[0]))
            else:
                ref, _ = integrate_p6(init, theta, q**n * t0)
            errs.append(abs(yn - ref))
        rows.append({"n": n, "errors": errs, "ratio": slope_ratio(errs)})
    return rows


def hamilton_remainders(y, Z, t, theta: ThetaDiff):
    """(q-1) R_1 and (q-1) R_2 as rational functions of q at a fixed point (y, Z, t).

    R_i is the gap between the modified map written with q-derivatives and
    the q-derivatives of the Painleve VI Hamiltonian."""
    y, Z, t = (RatFunQ.coerce(exact(v)) for v in (y, Z, t))
    conf = make_confluent(theta)
    q = conf.q
    f, g = modified_qp6_map((y, Z), t, q, conf.thetaq)
    P = y * (y - 1) * (y - t)
    dqZ = P / (t * (t - 1)) * ((q + 1) * Z + 1 / (y - t))
    dqy = (hamiltonian(q * y, Z, t, theta) - hamiltonian(y, Z, t, theta)) / ((q - 1) * y)
    r1 = (f - y) / ((q - 1) * t) - dqZ
    r2 = (g - Z) / ((q - 1) * t) + dqy
    return r1, r2

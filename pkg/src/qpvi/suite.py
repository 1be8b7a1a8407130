"""Invariant checks shared by the verify command and the test suite.

Each check returns (name, ok, detail). Random inputs come from a seeded
generator so that runs are reproducible."""
from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction as Fr

from .arith.mat2 import Mat2
from .arith.ratfun import RatFunQ
from .errors import BasePointError, PreconditionError, QpviError
from .fuchsian_diff import ThetaDiff, TripleDiff, assemble_A
from .fuchsian_q import (ThetaQ, TripleQ, assemble_qA, compute_B0_C, lax_polynomial,
                         qpviyz_step, qschlesinger_step)

THETA = ThetaDiff(Fr(1, 2), Fr(1, 3), Fr(1, 5), Fr(1, 7))


# ----------------------------------------------------------------------------
# random exact inputs


def rfrac(rng, lo=-9, hi=9, den=7, avoid=()):
    while True:
        x = Fr(rng.randint(lo, hi), rng.randint(1, den))
        if x != 0 and x not in avoid:
            return x


def rtheta(rng):
    """Non-resonant theta with theta_inf not in {0, 1}."""
    vals = []
    for _ in range(4):
        while True:
            x = rfrac(rng, -7, 7, 9)
            if x.denominator != 1:
                break
        vals.append(x)
    return ThetaDiff(*vals)


def rtriple_diff(rng):
    t = rfrac(rng, avoid=(1,))
    y = rfrac(rng, avoid=(1, t))
    return TripleDiff(rfrac(rng), y, rfrac(rng), t)


def rtriple_q(rng, q):
    while True:
        t = rfrac(rng, avoid=(1,))
        y = rfrac(rng, avoid=(1, t))
        Z = rfrac(rng)
        if 1 + (q - 1) * y * Z != 0:
            return TripleQ(rfrac(rng), y, Z, t, q)


# ----------------------------------------------------------------------------
# assembly


def diff_invariants(F, theta: ThetaDiff) -> bool:
    quarter = Fr(1, 4)
    ok = all(M.trace() == 0 for M in (F.A0, F.A1, F.At))
    for M, th in ((F.A0, theta.th0), (F.A1, theta.th1), (F.At, theta.tht)):
        ok &= M.det() == -th * th * quarter
    return ok and F.Ainf == Mat2.diag(theta.thinf / 2, -theta.thinf / 2)


def q_invariants(F, th: ThetaQ) -> bool:
    ok = F.Ainf == Mat2.diag(th.barinf, th.thinf)
    ok &= F.A0.trace() == th.th0 + th.bar0 and F.A0.det() == th.th0 * th.bar0
    # det((x-1)(x-t)A) has degree 4, so agreement at 5 points is an identity
    N = F.numerator()
    for x in range(-2, 3):
        ok &= N(Fr(x)).det() == th.thinf * th.barinf * th.p(Fr(x), F.t)
    return ok


def check_assembly(n=100, seed=1):
    rng = random.Random(seed)
    bad = done = 0
    while done < n:
        theta = rtheta(rng)
        q = rfrac(rng, 2, 30, 9, avoid=(1,))
        try:
            thq = ThetaQ.from_diff(theta, q)
            Fq = assemble_qA(rtriple_q(rng, q), thq)
        except PreconditionError:
            continue
        bad += not diff_invariants(assemble_A(rtriple_diff(rng), theta), theta)
        bad += not q_invariants(Fq, thq)
        done += 1
    return "assembly identities", bad == 0, f"{n} random inputs per side, {bad} failures"


def check_matrix_confluence(n=20, seed=2):
    """(A - I)/((q-1)x) has no pole at q = 1 and its residues reduce to assemble_A."""
    rng = random.Random(seed)
    q = RatFunQ.gen()
    bad = 0
    for _ in range(n):
        theta = rtheta(rng)
        tr = rtriple_diff(rng)
        # Theta_i = 1 + (q-1) theta_i/2 is a nonzero rational function of q
        F = assemble_qA(TripleQ(tr.lam, tr.y, tr.Z, tr.t, q), ThetaQ.from_diff(theta, q))
        D = assemble_A(tr, theta)
        for M, R in zip(F.tilde(), (D.A0, D.A1, D.At)):
            if not all(e.pole_free_at(1) for e in M.entries()) or M.map(lambda e: e(1)) != R:
                bad += 1
    return "matrix confluence", bad == 0, f"{n} inputs, {bad} failures"


def _q_instances(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        q = rfrac(rng, 2, 30, 9, avoid=(1,))
        try:
            th = ThetaQ.from_diff(rtheta(rng), q)
            tr = rtriple_q(rng, q)
            F = assemble_qA(tr, th)
            G = qschlesinger_step(F, tr, th)
            out.append((tr, th, F, G))
        except (PreconditionError, ZeroDivisionError):
            continue
    return out


def check_qlax(n=20, seed=3):
    bad = 0
    for tr, th, F, G in _q_instances(n, seed):
        B0, C = compute_B0_C(F, tr, th)
        if not lax_polynomial(F, G, B0, C, th).is_zero():
            bad += 1
    return "q-Lax polynomial identity", bad == 0, f"{n} instances, {bad} nonzero"


def check_prop_schlesinger(n=20, seed=4):
    bad = 0
    for tr, th, F, G in _q_instances(n, seed):
        H = assemble_qA(qpviyz_step(tr, th), th)
        if (G.A0, G.A1, G.At) != (H.A0, H.A1, H.At):
            bad += 1
    return "q-Schlesinger = reassembled qPVI step", bad == 0, f"{n} instances, {bad} mismatches"


# ----------------------------------------------------------------------------
# Sakai surface


def check_sakai(n=200, seed=5, n_exc=16):
    from .qp6 import TAGS, SakaiPoint, point_distance, sakai_step, special_orbit_z2
    rng = random.Random(seed)
    q, t = Fr(11, 10), Fr(2)
    th = ThetaQ(Fr(3, 2), Fr(5, 3), Fr(7, 4), Fr(9, 5))
    worst, count, exc = 0.0, 0, 0
    while count < n:
        if exc < n_exc:
            tag = TAGS[exc % len(TAGS)]
            d = (0, 1) if exc % 3 == 2 else (1, rfrac(rng))
            p = SakaiPoint(tag=tag, direction=d)
            exc += 1
        else:
            p = SakaiPoint(rfrac(rng), rfrac(rng))
        try:
            f = sakai_step(p, t, q, th)
        except (BasePointError, PreconditionError):
            continue
        g = sakai_step(f, q * t, q, th, "backward")
        worst = max(worst, point_distance(g, p))
        count += 1
    z0 = Fr(3, 7)
    s1 = sakai_step(SakaiPoint(th.bar1, z0), t, q, th)
    s2 = sakai_step(s1, q * t, q, th)
    special = (not s2.exceptional) and s2.z == special_orbit_z2(z0, t, q, th)
    ok = worst <= 1e-10 and special and exc >= n_exc
    return "Sakai biregularity", ok, f"{count} points ({exc} exceptional), worst {worst:.1e}, special orbit exact: {special}"


# ----------------------------------------------------------------------------
# confluence of discrete solutions


CONF_INITS = [
    (Fr(3), Fr(1, 4), Fr(2)), (Fr(-2, 3), Fr(5, 7), Fr(7, 3)), (Fr(5, 2), Fr(-1, 3), Fr(-2)),
    (Fr(4), Fr(2, 5), Fr(3, 2)), (Fr(-3), Fr(1, 6), Fr(5)), (Fr(7, 4), Fr(-2, 7), Fr(-3, 2)),
    (Fr(1, 3), Fr(3, 4), Fr(4)), (Fr(-5, 2), Fr(1, 2), Fr(5, 3)), (Fr(6), Fr(-1, 5), Fr(3)),
    (Fr(2, 5), Fr(4, 3), Fr(-4)),
]


def check_confluence_euler(inits=CONF_INITS[:3], theta=THETA, n_max=5):
    """a_n(1) is the n-th Euler derivative (t d/dt)^n y at t0, and the series in
    (q-1) sums to y(t0 e^(q-1))."""
    from .confluence import an_bn, euler_derivative, integrate_p6, p6_taylor
    bad, worst = 0, 0.0
    for init in inits:
        seq = an_bn(init, theta, n_max)
        Y, _ = p6_taylor(init, theta, n_max)
        vals = seq.a_at_1()
        bad += sum(v != euler_derivative(Y, n) for n, v in enumerate(vals))
        h = 1e-3
        s = sum(complex(v) / math.factorial(n) * h**n for n, v in enumerate(vals))
        ref, _ = integrate_p6(init, theta, complex(init[2]) * math.exp(h))
        worst = max(worst, abs(s - ref))
    ok = bool(bad == 0 and worst < 1e-10)
    return "confluence (Euler form)", ok, f"{len(inits)} inits, {bad} mismatches, series error {worst:.1e}"


# ----------------------------------------------------------------------------
# Okamoto space


def check_okamoto_exceptional(n=64, seed=6, theta=THETA, t0=Fr(2)):
    from .okamoto import OkaPoint, vf_chart
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        try:
            vf_chart(OkaPoint("b0-.1", 0, rfrac(rng, -30, 30, 11)), t0, theta)
        except QpviError:
            bad += 1
    return "field finite on E0-", bad == 0, f"{n} points, {bad} infinite"


def okamoto_taylor(alpha, theta=THETA, t0=Fr(2), h=1e-2, K=16):
    """First two Taylor coefficients of y at t0 from integrate_okamoto on a circle."""
    from .okamoto import OkaPoint, integrate_okamoto, y_of
    ys = []
    for k in range(K):
        t1 = complex(t0) + h * cmath.exp(2j * cmath.pi * k / K)
        tt, p = integrate_okamoto(OkaPoint("b0-.1", 0, alpha), t0, t1, theta).final
        ys.append(complex(y_of(p, tt, theta)))
    return [sum(ys[k] * cmath.exp(-2j * cmath.pi * k * n / K) for k in range(K)) / K / h**n
            for n in (1, 2)]


def check_okamoto_taylor(alpha=Fr(3, 4), theta=THETA, t0=Fr(2)):
    c1, c2 = okamoto_taylor(alpha, theta, t0)
    th0 = theta.th0
    e1 = -th0 / (t0 - 1)
    e2 = -th0 * (2 * alpha - 1 - t0) / (2 * t0 * (t0 - 1) ** 2)
    err = max(abs(c1 - float(e1)), abs(c2 - float(e2)))
    return "Okamoto Taylor coefficients", err <= 1e-8, f"error {err:.1e}"


def check_diagrams(theta=THETA, t=Fr(7, 3), q=Fr(11, 10)):
    from .okamoto import intersection_diagram
    thq = ThetaQ.from_diff(theta, q)
    dq = intersection_diagram("q-okamoto", thq, t, q)
    dm = intersection_diagram("q-okamoto-mod", thq, t, q)
    dd = intersection_diagram("diff-okamoto", theta, t)
    ok = dq.is_cycle() and set(dq.self_intersections().values()) == {-2}
    ok &= dm.is_cycle() and set(dm.self_intersections().values()) == {-2}
    ok &= dd.is_star() and len(dd.components) == 5 and set(dd.self_intersections().values()) == {-2}
    c_before, c_after = dm.notes["C_before_blowup"], dm.self_intersections()["C"]
    ok &= (c_before, c_after, len(dm.notes["C_points"])) == (2, -2, 4)
    return "intersection diagrams", ok, f"q: 4-cycle {dq.is_cycle()}, diff: star {dd.is_star()}, C: {c_before} -> {c_after}"


# ----------------------------------------------------------------------------
# Birkhoff


def birkhoff_family(q=Fr(2), theta=THETA, triple=(Fr(1), Fr(5, 2), Fr(1, 4), Fr(3))):
    th = ThetaQ.from_diff(theta, q)
    tr = TripleQ(*triple, q)
    F = assemble_qA(tr, th)
    return th, F, qschlesinger_step(F, tr, th)


BIRKHOFF_X = (1.7 + 0.4j, -2.3 + 1j, 0.5 - 0.9j, 4.1 + 2j, -0.7 - 3j)


def check_birkhoff(perturbation=Fr(1, 5)):
    from . import birkhoff as bk
    from .fuchsian_q import FuchsQ
    fe = max(abs(bk.theta_eval(2 * x, 2) / bk.theta_eval(x, 2) - x) for x in (1.5, 0.7 + 0.2j, -2.1))
    th, F, G = birkhoff_family()
    S0 = bk.local_solution(F, "0", 8, eigenvalues=(th.th0, th.bar0))
    Si = bk.local_solution(F, "inf", 8)
    res = max(bk.series_residual(S0) + bk.series_residual(Si))
    P0 = bk.local_solution(F, "0", 1, eigenvalues=(th.th0, th.bar0)).P
    Pq = bk.transported_P(P0, G, th)
    pc = bk.pseudo_constancy(F, G, BIRKHOFF_X, P_t=P0, P_qt=Pq).max_residual
    binf = max(bk.b_inf_check(F, G, bk.rational_B(G, th), BIRKHOFF_X))
    E = Mat2(0, perturbation, 0, 0)
    Gp = FuchsQ(G.A0, G.A1 + E, G.At - E * G.t, G.t, G.q, G.aux)
    pert = bk.pseudo_constancy(F, Gp, BIRKHOFF_X, P_t=P0, P_qt=Pq).max_residual
    ok = bool(fe <= 1e-12 and res <= 1e-10 and pc <= 1e-8 and binf <= 1e-8 and pert >= 1e-2)
    return "Birkhoff suite", ok, (f"theta eq {fe:.1e}, series {res:.1e}, pseudo-constancy {pc:.1e}, "
                                  f"B_inf {binf:.1e}, perturbed {pert:.1e}")


# ----------------------------------------------------------------------------
# q-Schlesinger limit


def check_schlesinger_limit(n=3, seed=7, theta=THETA, t=Fr(2)):
    from .confluence import qschles_limit_check
    rng = random.Random(seed)
    ratios = []
    for _ in range(n):
        A0 = Mat2(*[rfrac(rng, -9, 9, 5) for _ in range(4)])
        A1 = Mat2(*[rfrac(rng, -9, 9, 5) for _ in range(4)])
        rep = qschles_limit_check(A0, A1, t, theta)
        ratios += [r["ratio"] for r in rep.rows]
    ok = all(8 <= r <= 12 for r in ratios)
    return "q-Schlesinger -> Schlesinger", ok, f"ratios in [{min(ratios):.2f}, {max(ratios):.2f}]"


SUITES = {
    "assembly": [check_assembly, check_matrix_confluence],
    "lax": [check_qlax, check_prop_schlesinger],
    "sakai": [check_sakai],
    "confluence": [check_confluence_euler, check_schlesinger_limit],
    "okamoto": [check_okamoto_exceptional, check_okamoto_taylor, check_diagrams],
    "birkhoff": [check_birkhoff],
}


def run_suite(name="all"):
    if name == "all":
        checks = [c for cs in SUITES.values() for c in cs]
    elif name in SUITES:
        checks = SUITES[name]
    else:
        raise PreconditionError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    out = []
    for c in checks:
        try:
            out.append(c())
        except QpviError as exc:
            out.append((c.__name__, False, f"{type(exc).__name__}: {exc}"))
    return out

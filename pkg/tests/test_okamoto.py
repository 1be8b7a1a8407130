import random
from fractions import Fraction as Fr

import pytest
import sympy as sp

from qpvi.confluence import integrate_p6
from qpvi.errors import InfiniteFieldError, PreconditionError
from qpvi.fuchsian_diff import ThetaDiff
from qpvi.fuchsian_q import ThetaQ
from qpvi.okamoto import (DivisorClass, OkaPoint, _chart_maps, _syms, all_charts,
                          base_points_diff, base_points_q, beta_limit, change_chart,
                          integrate_okamoto, intersection_diagram, on_removed_divisor, pairing,
                          phi_map, psi_yz, phi_uv, vf_chart, y_of)
from qpvi.qp6 import INF, TAGS, SakaiPoint

THETA = ThetaDiff(Fr(1, 2), Fr(1, 3), Fr(1, 5), Fr(1, 7))
T0 = Fr(2)
Q, TQ = Fr(11, 10), Fr(7, 3)
THQ = ThetaQ.from_diff(THETA, Q)


# base points and the field


def test_field_example():
    assert vf_chart(OkaPoint("0", 2, 0), 3, THETA)[0] == Fr(1, 3)


def test_base_points_diff():
    pts = base_points_diff(THETA, T0)
    assert len(pts) == 8
    assert pts["b0+"] == OkaPoint("0", 0, T0 * THETA.th0 / 2)
    assert pts["b0-"] == OkaPoint("0", 0, -T0 * THETA.th0 / 2)
    assert pts["binf-"] == OkaPoint("2", 0, -THETA.thinf / 2)


@pytest.mark.parametrize("theta", [ThetaDiff(0, 1, 1, 2), ThetaDiff(1, 1, 1, 1)])
def test_cond8(theta):
    with pytest.raises(PreconditionError, match="fewer than eight base points"):
        base_points_diff(theta, T0)


def test_base_point_indeterminate_but_blowup_finite():
    b = base_points_diff(THETA, T0)["b0-"]
    with pytest.raises(InfiniteFieldError, match="infinite vector field"):
        vf_chart(b, T0, THETA)
    da, db, _ = vf_chart(OkaPoint("b0-.1", 0, Fr(3, 4)), T0, THETA)
    assert da == -THETA.th0 / (T0 - 1)


def test_printed_blowup_chart():
    u, v, t, th0, *_ = _syms()
    fwd, _ = _chart_maps("b0-.1")
    assert sp.simplify(fwd[0] - u) == 0
    assert sp.simplify(fwd[1] - (2 * v + t * th0) / (2 * u)) == 0
    fwd2, _ = _chart_maps("b0-.2")
    assert sp.simplify(fwd2[0] - 1 / fwd[1]) == 0 and sp.simplify(fwd2[1] - fwd[0] * fwd[1]) == 0


def test_chart_round_trips():
    rng = random.Random(8)
    for _ in range(10):
        u = Fr(rng.randint(2, 40), rng.randint(1, 9)) + Fr(1, 97)
        v = Fr(rng.randint(-20, 20), rng.randint(1, 9)) + Fr(1, 89)
        p = OkaPoint("0", u, v)
        for c in all_charts():
            assert change_chart(change_chart(p, c, T0, THETA), "0", T0, THETA) == p


def _pushforward(chart, u0, v0, t0):
    """d/dt of the chart coordinates along the (u, v) field, via the chain rule."""
    u, v, t, th0, th1, tht, thi, _, _ = _syms()
    subs = {th0: sp.Rational(1, 2), th1: sp.Rational(1, 3), tht: sp.Rational(1, 5), thi: sp.Rational(1, 7)}
    du, dv, _ = vf_chart(OkaPoint("0", u0, v0), t0, THETA)
    out = []
    for f in _chart_maps(chart)[0]:
        g = [sp.diff(f, s).subs(subs) for s in (u, v, t)]
        val = [complex(x.subs({u: u0, v: v0, t: t0})) for x in g]
        out.append(val[0] * du + val[1] * dv + val[2])
    return out


@pytest.mark.parametrize("chart", ["1", "2", "3", "b0-.1", "b1+.2", "bt-.1", "binf+.2"])
def test_field_transforms_by_jacobian(chart):
    u0, v0, t0 = 2.7 + 0.3j, -0.4 + 1.1j, 2.0
    p = change_chart(OkaPoint("0", u0, v0), chart, t0, THETA)
    got = vf_chart(p, t0, THETA)[:2]
    want = _pushforward(chart, u0, v0, t0)
    for a, b in zip(got, want):
        assert abs(a - b) <= 1e-10 * (1 + abs(b))


def test_removed_divisor():
    assert on_removed_divisor(OkaPoint("0", 0, 5), T0, THETA)
    assert not on_removed_divisor(base_points_diff(THETA, T0)["b0+"], T0, THETA)
    assert on_removed_divisor(OkaPoint("b0+.2", 0, Fr(1, 3)), T0, THETA)
    assert not on_removed_divisor(OkaPoint("b0+.1", 0, Fr(1, 3)), T0, THETA)
    assert y_of(OkaPoint("2", 0, 1), T0, THETA) is INF


# integration


def test_trivial_trajectory():
    p = OkaPoint("0", Fr(3), Fr(1, 2))
    tr = integrate_okamoto(p, T0, T0, THETA)
    assert len(tr.samples) == 1 and tr.final[1] == p
    assert tr.to_csv().splitlines()[0] == "t,chart,c1,c2"


def test_interior_matches_direct_integration():
    y0, Z0 = 3.0, 0.25
    t1 = 2.3 + 0.2j
    v0 = y0 * (y0 - 1) * (y0 - 2) * Z0
    t, p = integrate_okamoto(OkaPoint("0", y0, v0), 2.0, t1, THETA).final
    y_ref, _ = integrate_p6((Fr(3), Fr(1, 4), T0), THETA, t1)
    assert abs(complex(y_of(p, t, THETA)) - y_ref) <= 1e-9


def test_reparametrization_consistency():
    p0 = OkaPoint("b0-.1", 0.0, 0.75)
    t1, t2 = 2.05 + 0.05j, 2.1 - 0.03j
    _, p1 = integrate_okamoto(p0, 2.0, t1, THETA).final
    _, a = integrate_okamoto(p1, t1, t2, THETA).final
    _, b = integrate_okamoto(p0, 2.0, t2, THETA).final
    ya, yb = complex(y_of(a, t2, THETA)), complex(y_of(b, t2, THETA))
    assert abs(ya - yb) <= 1e-9


# q side


def test_base_points_q():
    pts = base_points_q(THQ, TQ, Q)
    assert pts["gamma"]["g0-"] == (0, TQ * THQ.th0 / Q)
    assert pts["beta"]["binf+"] == OkaPoint("2", 0, (THQ.thinf - Q) / (Q * (Q - 1)))
    with pytest.raises(PreconditionError):
        base_points_q(ThetaQ(1, Fr(3, 2), Fr(5, 4), Fr(7, 6)), TQ, Q)


def test_beta_limit_matches_diff():
    assert beta_limit(THETA, T0) == base_points_diff(THETA, T0)


def test_phi_psi_round_trip():
    y, z = Fr(5, 2), Fr(3, 7)
    u, v = phi_uv(y, z, TQ, Q, THQ)
    assert psi_yz(u, v, TQ, Q, THQ) == (y, z)
    p = phi_map(SakaiPoint(y, z), "phi", TQ, Q, THQ)
    back = phi_map(p, "psi", TQ, Q, THQ)
    assert (back.y, back.z) == (y, z)


EXC = {"g0-": "b0-", "g0+": "b0+", "g1-": "b1-", "g1+": "b1+", "ginf-": "binf+", "ginf+": "binf-"}


@pytest.mark.parametrize("tag", TAGS)
def test_phi_on_exceptional_lines(tag):
    for d in ((1, Fr(2, 3)), (0, 1)):
        p = SakaiPoint(tag=tag, direction=d)
        img = phi_map(p, "phi", TQ, Q, THQ)
        if tag in EXC:
            assert img.chart.split(".")[0] == EXC[tag]
        elif d == (0, 1):
            assert img.chart == "b" + tag[1:] + ".2"
        else:
            # generic directions over gamma_t land on the fibre u = t Theta_t^(+-1)
            T = THQ.tht if tag == "gt-" else THQ.bart
            assert img.chart == "0" and img.a == TQ * T
        assert phi_map(img, "psi", TQ, Q, THQ) == p


def test_phi_needs_exceptional_coordinate():
    with pytest.raises(PreconditionError, match="singular locus without exceptional coordinate"):
        phi_map(SakaiPoint(0, TQ * THQ.th0 / Q), "phi", TQ, Q, THQ)


# divisors


def test_pairing_blowup_rules():
    E = DivisorClass.of(**{"E__b0+": 1})
    for D in (DivisorClass.of(F=1), DivisorClass.of(S=1), DivisorClass.of(F=2, S=-1)):
        assert pairing(D, E) == 0
    assert pairing(E, E) == -1
    assert pairing(DivisorClass.of(S=1), DivisorClass.of(S=1)) == 2


def test_diagrams():
    dq = intersection_diagram("q-okamoto", THQ, TQ, Q)
    assert dq.is_cycle() and set(dq.self_intersections().values()) == {-2}
    dd = intersection_diagram("diff-okamoto", THETA, T0)
    assert dd.is_star() and dd.degrees()["H"] == 4 and set(dd.self_intersections().values()) == {-2}
    dm = intersection_diagram("q-okamoto-mod", THQ, TQ, Q)
    assert dm.notes["C_before_blowup"] == 2 and dm.self_intersections()["C"] == -2
    assert sorted(dm.notes["C_points"]) == sorted(["b1+", "b1-", "bt+", "bt-"])
    assert '"H" -- "D0"' in dd.to_dot()


def test_omega_limit_decomposition():
    d = intersection_diagram("omega-limit")
    assert d.notes["C_equals_sum"] and d.notes["C_self_intersection"] == -2
    assert set(d.components) == {"H", "D1", "Dt"}

from fractions import Fraction as Fr

import pytest

from qpvi.arith import Mat2, RatFunQ
from qpvi.confluence import (an_bn, btilde, euler_derivative, euler_derivatives_sympy, from_delta,
                             hamilton_remainders, make_confluent, p6_taylor, qschles_limit_check,
                             qschles_rhs, remark_estimate_check, series_residual, stirling2,
                             taylor_weighted, to_delta)
from qpvi.errors import PreconditionError
from qpvi.fuchsian_diff import ThetaDiff, p6_rhs

THETA = ThetaDiff(Fr(1, 2), Fr(1, 3), Fr(1, 5), Fr(1, 7))
INIT = (Fr(3), Fr(1, 4), Fr(2))
q = RatFunQ.gen()


def test_make_confluent():
    c = make_confluent(ThetaDiff(Fr(2, 3), Fr(-1, 5), 1, Fr(3, 7)))
    th = c.thetaq
    assert th.tht == (q + 1) / 2
    assert th.th0 * th.bar0 == th.thinf * th.barinf * th.tht * th.bart * th.th1 * th.bar1


def test_delta_transforms_inverse():
    ys = [q, q * q + 1, 1 / (q + 3), RatFunQ.coerce(Fr(2, 5))]
    assert from_delta(to_delta(ys, q), q) == ys


def test_an_bn_low_orders():
    seq = an_bn(INIT, THETA, 2)
    assert seq.a[0] == INIT[0] and seq.b[0] == INIT[1]
    assert seq.a_at_1()[1] == INIT[2] * p6_rhs(*INIT, THETA)[0]


def test_an_bn_precondition():
    with pytest.raises(PreconditionError):
        an_bn((Fr(2), Fr(1), Fr(2)), THETA, 2)


def test_taylor_series():
    Y, Z = p6_taylor(INIT, THETA, 6)
    assert Y[1] == p6_rhs(*INIT, THETA)[0]
    ry, rz = series_residual(Y, Z, THETA)
    assert all(c == 0 for c in ry[:6]) and all(c == 0 for c in rz[:6])


def test_euler_form():
    seq = an_bn(INIT, THETA, 5)
    Y, _ = p6_taylor(INIT, THETA, 5)
    assert seq.a_at_1() == [euler_derivative(Y, n) for n in range(6)]
    # the weighted Taylor coefficient is the same quantity only for n <= 1
    assert [taylor_weighted(Y, n) == euler_derivative(Y, n) for n in range(4)] == [True, True, False, False]


def test_chain_rule_tower():
    Y, _ = p6_taylor(INIT, THETA, 3)
    assert euler_derivatives_sympy(INIT, THETA, 3) == [euler_derivative(Y, n) for n in range(4)]


def test_stirling():
    assert [stirling2(4, k) for k in range(5)] == [0, 1, 7, 6, 1]


def test_hamilton_remainders_vanish_at_one():
    for y, Z, t in [(3, Fr(1, 4), 2), (Fr(-2, 3), Fr(5, 7), Fr(7, 3))]:
        r1, r2 = hamilton_remainders(y, Z, t, THETA)
        assert r1.pole_free_at(1) and r2.pole_free_at(1)
        assert r1(1) == 0 and r2(1) == 0


def test_qschles_limit_diagonal():
    At0, At1 = Mat2.diag(Fr(1, 3), Fr(-1, 3)), Mat2.diag(Fr(2, 5), Fr(-2, 5))
    rep = qschles_limit_check(At0, At1, 2, ThetaDiff(Fr(2, 3), Fr(4, 5), 0, Fr(1, 2)))
    rows = {r["name"]: r for r in rep.rows}
    assert rows["f0"]["errors"] == [0.0, 0.0]
    # a diagonal A1 is rescaled by a scalar 1 + O(q-1), so f1 and ft keep a first-order term
    for name in ("f1", "ft"):
        assert 8 <= rows[name]["ratio"] <= 12


def test_btilde_limit_value():
    At0, At1 = Mat2(Fr(1, 3), Fr(2), Fr(-1, 5), Fr(1, 2)), Mat2(Fr(-1, 4), Fr(1, 3), Fr(3), Fr(2, 7))
    errs = []
    for qq in (Fr(1001, 1000), Fr(10001, 10000)):
        *_, B0, Att = qschles_rhs(At0, At1, 2, qq, THETA)
        D = btilde(B0, 5, 2, qq, THETA) + Att / 3
        errs.append(max(abs(complex(v)) for v in D.entries()))
    assert errs[1] < 1e-2 and 8 <= errs[0] / errs[1] <= 12


def test_remark_n0_exact():
    rows = remark_estimate_check(INIT, THETA, 1)
    assert rows[0]["errors"] == [0, 0]

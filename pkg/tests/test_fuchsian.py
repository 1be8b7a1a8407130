import random
from fractions import Fraction as Fr

import numpy as np
import pytest
import sympy as sp

from qpvi.arith import Mat2, solve_linear
from qpvi.errors import PreconditionError
from qpvi.fuchsian_diff import (ThetaDiff, TripleDiff, assemble_A, extract_triple, hamiltonian,
                                p6_rhs, schlesinger_rhs)
from qpvi.fuchsian_q import (ThetaQ, TripleQ, assemble_qA, compute_B0_C, extract_triple_q,
                             qlax_residual, qpviyz_step, qschlesinger_step)
from qpvi.suite import diff_invariants, q_invariants, rtheta, rtriple_diff, rtriple_q

THETA = ThetaDiff(Fr(1, 2), Fr(1, 3), Fr(1, 5), Fr(1, 7))


# differential side


def test_assemble_A_invariants_random():
    rng = random.Random(11)
    for _ in range(20):
        theta = rtheta(rng)
        tr = rtriple_diff(rng)
        F = assemble_A(tr, theta)
        assert diff_invariants(F, theta)
        assert F(tr.y).b == 0
        assert F(tr.y).a == tr.Z
        assert extract_triple(F) == tr


def test_residues_from_evaluations():
    theta = ThetaDiff(1, 1, 1, 2)
    tr = TripleDiff(1, 3, 0, 2)
    F = assemble_A(tr, theta)
    # partial-fraction fit: A(x) = R0/x + R1/(x-1) + Rt/(x-2) from three samples, entry by entry
    xs = [Fr(5), Fr(7), Fr(11)]
    rows = [[1 / x, 1 / (x - 1), 1 / (x - 2)] for x in xs]
    for k in range(4):
        vals = [list(F(x).entries())[k] for x in xs]
        r0, r1, rt = solve_linear(rows, vals)
        assert (r0, r1, rt) == tuple(list(M.entries())[k] for M in (F.A0, F.A1, F.At))


@pytest.mark.parametrize("tr", [TripleDiff(1, 0, 1, 2), TripleDiff(1, 2, 1, 2), TripleDiff(0, 3, 1, 2)])
def test_assemble_A_preconditions(tr):
    with pytest.raises(PreconditionError, match="assembly precondition violated"):
        assemble_A(tr, THETA)


def test_assemble_A_rejects_zero_theta_inf():
    with pytest.raises(PreconditionError, match="assembly precondition violated"):
        assemble_A(TripleDiff(1, 3, 1, 2), ThetaDiff(1, 1, 1, 0))


def test_schlesinger_rhs():
    F = assemble_A(TripleDiff(2, Fr(3, 2), Fr(1, 3), 5), THETA)
    d0, d1, dt = schlesinger_rhs(F)
    assert (d0 + d1 + dt).is_zero()
    A0, At = F.A0, F.At
    assert d0.b == (A0.a * At.b + A0.b * At.d - At.a * A0.b - At.b * A0.d) / (-F.t)
    D = assemble_A(TripleDiff(2, Fr(3, 2), Fr(1, 3), 5), THETA)
    diag = type(D)(Mat2.diag(1, -1), Mat2.diag(2, -2), Mat2.diag(3, -3), D.t)
    assert all(m.is_zero() for m in schlesinger_rhs(diag))
    with pytest.raises(PreconditionError):
        schlesinger_rhs(F, 1)


def test_p6_rhs_matches_symbolic_hamiltonian():
    y, Z, t = sp.symbols("y Z t")
    H = hamiltonian(y, Z, t, ThetaDiff(*[sp.Rational(v.numerator, v.denominator) for v in THETA.as_tuple()]))
    at = {y: 3, Z: sp.Rational(1, 4), t: 2}
    dy, dZ, _ = p6_rhs(3, Fr(1, 4), 2, THETA)
    assert sp.Rational(str(dy)) == sp.simplify(sp.diff(H, Z).subs(at))
    assert sp.Rational(str(dZ)) == sp.simplify(-sp.diff(H, y).subs(at))


def test_p6_rhs_examples():
    dy, _, _ = p6_rhs(Fr(5, 3), 0, Fr(7, 2), THETA)
    y, t = Fr(5, 3), Fr(7, 2)
    assert dy == y * (y - 1) / (t * (t - 1))
    assert p6_rhs(3, 1, 2, ThetaDiff(1, 2, 3, 1))[2] == 0
    with pytest.raises(PreconditionError):
        p6_rhs(2, 1, 2, THETA)


def test_hamiltonian_finite_differences():
    th = ThetaDiff(*[float(v) for v in THETA.as_tuple()])
    y, Z, t, h = 3.3, 0.25, 2.1, 1e-6
    dy, dZ, _ = p6_rhs(y, Z, t, th)
    assert abs((hamiltonian(y, Z + h, t, th) - hamiltonian(y, Z - h, t, th)) / (2 * h) - dy) < 1e-8
    assert abs(-(hamiltonian(y + h, Z, t, th) - hamiltonian(y - h, Z, t, th)) / (2 * h) - dZ) < 1e-8


def test_schlesinger_spectrum_drift():
    F = assemble_A(TripleDiff(2, Fr(3, 2), Fr(1, 3), 5), THETA)
    rhs = schlesinger_rhs(F)
    for M, R in zip((F.A0, F.A1, F.At), rhs):
        m = np.array([[float(v) for v in r] for r in M.rows()])
        r = np.array([[float(v) for v in row] for row in R.rows()])
        drift = []
        for h in (1e-3, 1e-4):
            e0 = np.sort_complex(np.linalg.eigvals(m))
            e1 = np.sort_complex(np.linalg.eigvals(m + h * r))
            drift.append(np.abs(e1 - e0).max())
        assert drift[1] < 1e-5 and drift[0] / drift[1] > 50


# q side


def test_assemble_qA_example():
    q = Fr(2)
    th = ThetaQ.from_diff(ThetaDiff(1, 1, 1, 2), q)
    assert (th.th0, th.thinf) == (Fr(3, 2), 2)
    F = assemble_qA(TripleQ(1, 5, Fr(1, 7), 3, q), th)
    assert F.A0.trace() == Fr(13, 6)
    assert F(5).b == 0 and F(5).a == 1 + (q - 1) * 5 * Fr(1, 7)
    assert q_invariants(F, th)


def test_assemble_qA_random_round_trip():
    rng = random.Random(12)
    for _ in range(15):
        q = Fr(rng.randint(2, 9), rng.randint(1, 5))
        if q == 1:
            continue
        th = ThetaQ.from_diff(rtheta(rng), q)
        tr = rtriple_q(rng, q)
        try:
            F = assemble_qA(tr, th)
        except PreconditionError:
            continue
        assert q_invariants(F, th)
        assert extract_triple_q(F) == tr


def test_assemble_qA_rejects_equal_theta_inf():
    th = ThetaQ(Fr(3, 2), Fr(5, 4), Fr(7, 6), 1)
    with pytest.raises(PreconditionError, match="assembly precondition violated"):
        assemble_qA(TripleQ(1, 5, Fr(1, 7), 3, 2), th)


def _instance():
    q = Fr(2)
    th = ThetaQ.from_diff(THETA, q)
    tr = TripleQ(1, Fr(5, 2), Fr(1, 4), 3, q)
    return q, th, tr, assemble_qA(tr, th)


def test_B0_spectrum_and_adjugate_oracle():
    q, th, tr, F = _instance()
    B0, C = compute_B0_C(F, tr, th)
    t = tr.t
    assert B0.trace() == -q * t * (th.tht + th.bart)
    assert B0.det() == (q * t) ** 2 * th.tht * th.bart
    k = (t * th.tht - 1) * (t * th.bart - 1)
    M = F.A0 / (th.tht * th.bart) + F.A1 * (t * (t - 1) / k)
    adj_inv = M.adj() / M.det()
    assert B0 == -(q * t) * ((F.Ainf + F.A1 * ((t - 1) / k)) * adj_inv)
    assert (Mat2.identity() + B0).det() != 0


def test_qschlesinger_step_properties():
    q, th, tr, F = _instance()
    G = qschlesinger_step(F, tr, th)
    assert G.A0.trace() == th.th0 + th.bar0
    assert G.Ainf == Mat2.diag(th.barinf, th.thinf)
    assert G.t == q * tr.t
    H = assemble_qA(qpviyz_step(tr, th), th)
    assert (G.A0, G.A1, G.At) == (H.A0, H.A1, H.At)


def test_qlax_residual():
    q, th, tr, F = _instance()
    G = qschlesinger_step(F, tr, th)
    B0, C = compute_B0_C(F, tr, th)
    xs = [Fr(7, 3), Fr(-5), Fr(11, 2)]
    assert qlax_residual(F, G, B0, C, xs, th).all_zero()
    bad = qlax_residual(F, F, B0, C, xs, th, check_identity=False)
    assert not any(r["exact_zero"] for r in bad.records)
    with pytest.raises(PreconditionError):
        qlax_residual(F, G, B0, C, [Fr(3, 2)], th)


def test_qlax_identity_with_trivial_c():
    q, th, tr, F = _instance()
    B0, C = compute_B0_C(F, tr, th)
    G = qschlesinger_step(F, tr, th)
    # conjugating the evolved system by C^-1 gives the family with c = identity
    Ci = C.inv()
    G1 = type(G)(Ci * G.A0 * C, Ci * G.A1 * C, Ci * G.At * C, G.t, G.q)
    assert qlax_residual(F, G1, B0, Mat2.identity(), [Fr(7, 3), Fr(-5)], th).all_zero()

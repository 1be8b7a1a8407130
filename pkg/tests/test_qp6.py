import random
from fractions import Fraction as Fr

import pytest

from qpvi.errors import BasePointError, PreconditionError
from qpvi.fuchsian_diff import ThetaDiff
from qpvi.fuchsian_q import ThetaQ
from qpvi.qp6 import (INF, TAGS, QP6State, SakaiPoint, change_coordinates, discrete_solution,
                      modified_qp6_map, point_distance, qp6_map, qp6_relations, sakai_step,
                      special_orbit_z2)

Q, T = Fr(2), Fr(3)
THQ = ThetaQ.from_diff(ThetaDiff(1, 1, 1, 2), Q)
# a parameter set where the surface map is biregular
SQ, ST = Fr(11, 10), Fr(2)
STH = ThetaQ(Fr(3, 2), Fr(5, 3), Fr(7, 4), Fr(9, 5))


def test_qp6_map_satisfies_relations():
    p = (Fr(5), Fr(7))
    p1 = qp6_map(p, T, Q, THQ)
    assert qp6_relations(p, p1, T, Q, THQ) == (0, 0)


def test_qp6_map_zero_at_t_theta_t():
    y = T * THQ.tht
    assert qp6_map((y, Fr(4)), T, Q, THQ)[1] == 0


def test_qp6_map_base_point():
    with pytest.raises(BasePointError, match="base point; use sakai_step"):
        qp6_map((T * THQ.tht, 0), T, Q, THQ)


def test_change_coordinates_round_trips():
    p = (Fr(5, 2), Fr(7, 3))
    Zp = change_coordinates(p, "z->Z", T, Q, THQ)
    assert change_coordinates(Zp, "Z->z", T, Q, THQ) == p
    y, Z = Zp
    assert change_coordinates(Zp, "Z->uv", T, Q, THQ) == (y, y * (y - 1) * (y - T) * Z)
    uv = change_coordinates(p, "z->uv", T, Q, THQ)
    assert change_coordinates(uv, "uv->z", T, Q, THQ) == p
    with pytest.raises(PreconditionError, match="singular locus"):
        change_coordinates((Fr(1), Fr(2)), "z->Z", T, Q, THQ)


def test_next_z_is_X():
    p = (Fr(5, 2), Fr(7, 3))
    y, Z = change_coordinates(p, "z->Z", T, Q, THQ)
    th = THQ
    X = (y - 1) * (y - T) * (1 + (Q - 1) * y * Z) / (th.thinf * th.barinf * (y - th.th1) * (y - th.bar1))
    assert qp6_map(p, T, Q, THQ)[1] == X


def test_modified_map_is_conjugate():
    rng = random.Random(3)
    for _ in range(10):
        y, Z = Fr(rng.randint(2, 30), rng.randint(1, 7)), Fr(rng.randint(-9, 9), rng.randint(1, 7))
        try:
            direct = modified_qp6_map((y, Z), T, Q, THQ)
            p = change_coordinates((y, Z), "Z->z", T, Q, THQ)
            via = change_coordinates(qp6_map(p, T, Q, THQ), "z->Z", Q * T, Q, THQ)
        except (PreconditionError, BasePointError):
            continue
        assert direct == via


def test_modified_map_example():
    q = Fr(11, 10)
    th = ThetaQ.from_diff(ThetaDiff(Fr(1, 2), Fr(1, 3), Fr(1, 5), Fr(1, 7)), q)
    y, Z, t = Fr(3), Fr(1, 4), Fr(2)
    sy, sZ = modified_qp6_map((y, Z), t, q, th)
    # the two-line form: sigma-z from (y, Z), then sigma-y from sigma-z, then Z from sigma-z at qt
    z1 = qp6_map(change_coordinates((y, Z), "Z->z", t, q, th), t, q, th)
    assert (sy, sZ) == change_coordinates(z1, "z->Z", q * t, q, th)


def test_sakai_interior_agrees_with_qp6():
    p = SakaiPoint(Fr(5, 2), Fr(7, 3))
    f = sakai_step(p, ST, SQ, STH)
    assert (f.y, f.z) == qp6_map((p.y, p.z), ST, SQ, STH)


@pytest.mark.parametrize("tag", TAGS)
def test_sakai_exceptional_round_trip(tag):
    p = SakaiPoint(tag=tag, direction=(1, Fr(2, 3)))
    f = sakai_step(p, ST, SQ, STH)
    back = sakai_step(f, SQ * ST, SQ, STH, "backward")
    assert point_distance(back, p) == 0


def test_sakai_gamma1_minus_line():
    f = sakai_step(SakaiPoint(tag="g1-", direction=(1, Fr(1, 2))), ST, SQ, STH)
    assert isinstance(f, SakaiPoint)


def test_sakai_rejects_non_biregular():
    with pytest.raises(PreconditionError, match="non-biregular parameter"):
        sakai_step(SakaiPoint(Fr(5, 2), Fr(7, 3)), ST, SQ, ThetaQ(1, Fr(5, 3), Fr(7, 4), Fr(9, 5)))
    # t in the exceptional set S_q
    with pytest.raises(PreconditionError, match="non-biregular parameter"):
        sakai_step(SakaiPoint(Fr(5, 2), Fr(7, 3)), STH.th1 * STH.tht * SQ**2, SQ, STH)


def test_special_orbit():
    z0 = Fr(3, 7)
    s = discrete_solution(QP6State(STH, SQ, ST, SakaiPoint(STH.bar1, z0)), 0, 2)
    assert s[2].point.z == special_orbit_z2(z0, ST, SQ, STH)


def test_discrete_solution_backends_agree():
    init = QP6State(STH, SQ, ST, SakaiPoint(Fr(5, 2), Fr(7, 3)))
    assert [s.point for s in discrete_solution(init, 0, 0)] == [init.point]
    ex = discrete_solution(init, -2, 4)
    nu = discrete_solution(init, -2, 4, "numeric")
    for a, b in zip(ex, nu):
        assert point_distance(a.point, b.point) <= 1e-9
    for a, b in zip(ex, ex[1:]):
        pa, pb = a.point, b.point
        if not (pa.exceptional or pb.exceptional) and INF not in (pa.y, pa.z, pb.y, pb.z):
            assert qp6_relations((pa.y, pa.z), (pb.y, pb.z), a.t, SQ, STH) == (0, 0)

"""Acceptance criteria, one test per criterion (criteria 6 and 7 are split).

Each criterion records a PASS/FAIL line; tests/conftest.py prints them at the end
of the session. Running this file directly prints the same lines.

Criteria 6 and 7 are stated in a form that does not hold. They are run as
stated, marked xfail, and accompanied by the corrected statements, which pass."""
import math
import time

import pytest

from qpvi import suite
from qpvi.confluence import (an_bn, euler_derivative, integrate_p6, p6_taylor, partial_sum,
                             remark_estimate_check, taylor_weighted)

RESULTS = {}


def record(key, name, ok, detail, elapsed, limit):
    within = elapsed <= limit
    ok = bool(ok and within)
    RESULTS[key] = f"{'PASS' if ok else 'FAIL'} [{key}] {name}: {detail} ({elapsed:.1f}s, limit {limit}s)"
    return ok


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def _suite_criterion(key, check, limit, **kw):
    (name, ok, detail), dt = timed(check, **kw)
    assert record(key, name, ok, detail, dt, limit), RESULTS[key]


def test_c01_assembly():
    _suite_criterion("1", suite.check_assembly, 10, n=100)


def test_c02_matrix_confluence():
    _suite_criterion("2", suite.check_matrix_confluence, 30, n=20)


def test_c03_qlax():
    _suite_criterion("3", suite.check_qlax, 60, n=20)


def test_c04_schlesinger_vs_reassembly():
    _suite_criterion("4", suite.check_prop_schlesinger, 60, n=20)


def test_c05_sakai():
    _suite_criterion("5", suite.check_sakai, 30, n=200, n_exc=16)


# criterion 6: confluence of discrete solutions

INITS = suite.CONF_INITS
H = 1e-3


def _sequences():
    if "seq" not in _cache:
        t = time.perf_counter()
        _cache["seq"] = [(an_bn(i, suite.THETA, 5), p6_taylor(i, suite.THETA, 5)[0]) for i in INITS]
        _cache["seq_time"] = time.perf_counter() - t
    return _cache["seq"]


_cache = {}


def test_c06_pole_free_and_euler_form():
    """a_n, b_n pole-free at q = 1 (an_bn raises otherwise); a_n(1) is the n-th
    Euler derivative (t d/dt)^n y(t0); the (q-1)-series sums to y(t0 e^(q-1))."""
    seqs = _sequences()
    t = time.perf_counter()
    bad, worst = 0, 0.0
    for init, (seq, Y) in zip(INITS, seqs):
        vals = seq.a_at_1()
        bad += sum(v != euler_derivative(Y, n) for n, v in enumerate(vals))
        s = sum(complex(v) / math.factorial(n) * H**n for n, v in enumerate(vals))
        ref, _ = integrate_p6(init, suite.THETA, complex(init[2]) * math.exp(H))
        worst = max(worst, abs(s - ref))
    dt = _cache["seq_time"] + time.perf_counter() - t
    ok = bad == 0 and worst <= 1e-10
    assert record("6a", "confluence, pole-free + Euler form", ok,
                  f"{len(INITS)} inits, n <= 5, {bad} mismatches, series vs y(t0 e^h) {worst:.1e}",
                  dt, 300), RESULTS["6a"]


@pytest.mark.xfail(strict=True, reason="a_n(1) equals the Euler derivative sum_k S(n,k) t0^k k! c_k, "
                                       "which differs from t0^n n! c_n for n >= 2")
def test_c06_literal_taylor_identity():
    seqs = _sequences()
    t = time.perf_counter()
    mism = [n for seq, Y in seqs for n, v in enumerate(seq.a_at_1()) if v != taylor_weighted(Y, n)]
    ok = not mism
    record("6b", "confluence, a_n(1) = t0^n n! c_n as stated", ok,
           f"{len(mism)} mismatches, first at n = {min(mism) if mism else '-'}",
           _cache["seq_time"] + time.perf_counter() - t, 300)
    assert ok, RESULTS["6b"]


@pytest.mark.xfail(strict=True, reason="the series sums to y(t0 e^(q-1)), which is O((q-1)^2) away from y(q t0)")
def test_c06_literal_partial_sum():
    seqs = _sequences()
    t = time.perf_counter()
    worst = 0.0
    for init, (seq, _) in zip(INITS, seqs):
        s = partial_sum(seq.a_at_1(), 1 + H)
        ref, _ = integrate_p6(init, suite.THETA, complex(init[2]) * (1 + H))
        worst = max(worst, abs(s - ref))
    ok = worst <= 1e-10
    record("6c", "confluence, partial sum vs y(q t0) as stated", ok, f"error {worst:.1e} (tol 1e-10)",
           _cache["seq_time"] + time.perf_counter() - t, 300)
    assert ok, RESULTS["6c"]


# criterion 7: |y_n(q) - y(q^n t0)| slope


def _remark_rows():
    if "remark" not in _cache:
        t = time.perf_counter()
        _cache["remark"] = remark_estimate_check(INITS[0], suite.THETA, 4)
        _cache["remark_time"] = time.perf_counter() - t
    return _cache["remark"], _cache["remark_time"]


@pytest.mark.xfail(strict=True, reason="y_n(q) - y(q^n t0) is O((q-1)^2) for this normalisation, so the "
                                       "two-point ratio is about 100, and n = 0 is identically 0")
def test_c07_remark_slope():
    rows, dt = _remark_rows()
    ratios = [r["ratio"] for r in rows]
    ok = all(8 <= r <= 12 for r in ratios)
    record("7", "y_n(q) - y(q^n t0) slope ratio in [8, 12]", ok,
           "ratios " + ", ".join(f"{r:.1f}" for r in ratios), dt, 60)
    assert ok, RESULTS["7"]


def test_c07_observed_order():
    """What does hold: the gap is O((q-1)^2) for n >= 1 and vanishes for n = 0."""
    rows, dt = _remark_rows()
    assert rows[0]["errors"] == [0, 0]
    assert all(80 <= r["ratio"] <= 120 for r in rows[1:])
    assert dt <= 60


def test_c08_okamoto():
    t = time.perf_counter()
    _, ok1, d1 = suite.check_okamoto_exceptional(n=64)
    _, ok2, d2 = suite.check_okamoto_taylor()
    dt = time.perf_counter() - t
    assert record("8", "Okamoto regularisation", ok1 and ok2, f"{d1}; Taylor {d2}", dt, 30), RESULTS["8"]


def test_c09_diagrams():
    _suite_criterion("9", suite.check_diagrams, 1)


def test_c10_birkhoff():
    _suite_criterion("10", suite.check_birkhoff, 60)


def test_c11_schlesinger_limit():
    _suite_criterion("11", suite.check_schlesinger_limit, 30)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

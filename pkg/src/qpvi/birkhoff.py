"""Local fundamental solutions of q-Fuchsian systems at 0 and infinity and the
Birkhoff connection matrix.

Everything here assumes |q| > 1. Characters are built from the Jacobi theta
function, so all solutions live on C* without branch cuts."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .arith.mat2 import Mat2, _is_zero
from .arith.mat2 import solve_sylvester as _sylvester
from .errors import DomainError, PreconditionError, ResonanceError
from .fuchsian_diff import exact
from .fuchsian_q import B_matrix, FuchsQ, ThetaQ

EPS = 1e-18


# ----------------------------------------------------------------------------
# theta, characters, q-logarithm


@dataclass(frozen=True)
class ThetaFn:
    """theta_q(x) = sum over n in Z of q^(-n(n+1)/2) x^n, truncated to |n| <= N.
    With n_terms None the truncation is chosen per argument from the tail bound."""
    q: complex
    n_terms: int | None = None

    def __post_init__(self):
        if abs(complex(self.q)) <= 1:
            raise PreconditionError("theta requires |q|>1")

    def error_bound(self, x, N: int) -> float:
        """Bound on the omitted tail |n| > N. The largest omitted term is
        |q|^(-N(N+1)/2) m^(N+1) with m = max(|x|, 1/|x|); later terms on each side
        shrink at least by r = m |q|^-(N+1), hence the factor 2/(1-r)."""
        m = max(abs(x), 1 / abs(x))
        lq = math.log(abs(complex(self.q)))
        lr = math.log(m) - (N + 1) * lq
        if lr >= 0:
            return math.inf
        e = -N * (N + 1) / 2 * lq + (N + 1) * math.log(m)
        return 2 * math.exp(e) / (1 - math.exp(lr)) if e > -700 else 0.0

    def terms_for(self, x) -> int:
        if self.n_terms is not None:
            return self.n_terms
        N = 1
        while self.error_bound(x, N) > EPS or N < 2:
            N += 1
        return N

    def _sums(self, x):
        x = complex(x)
        if x == 0:
            raise DomainError("theta requires x != 0")
        q = complex(self.q)
        N = self.terms_for(x)
        s = ds = 0j
        for n in range(-N, N + 1):
            w = q ** (-n * (n + 1) / 2) * x ** n
            s += w
            ds += n * w
        return s, ds

    def __call__(self, x) -> complex:
        return self._sums(x)[0]

    def x_deriv(self, x) -> complex:
        """x d/dx theta_q(x)."""
        return self._sums(x)[1]


def theta_eval(x, q, n_terms=None) -> complex:
    return ThetaFn(q, n_terms)(x)


def qchar_eval(a, x, q, n_terms=None) -> complex:
    """e_{q,a}(x) = theta(x)/theta(x/a), which satisfies e(qx) = a e(x)."""
    a = complex(a)
    if a == 0:
        raise DomainError("q-character requires a != 0")
    th = ThetaFn(q, n_terms)
    den = th(complex(x) / a)
    if abs(den) < 1e-300:
        raise DomainError("zero of theta in denominator")
    return th(x) / den


def qlog_eval(x, q, n_terms=None) -> complex:
    """l_q(x) = x theta'(x)/theta(x), which satisfies l(qx) = l(x) + 1."""
    th = ThetaFn(q, n_terms)
    s, ds = th._sums(x)
    if abs(s) < 1e-300:
        raise DomainError("zero of theta in denominator")
    return ds / s


# ----------------------------------------------------------------------------
# helpers


def _np(m: Mat2):
    return np.array([[complex(m.a), complex(m.b)], [complex(m.c), complex(m.d)]])


def _lex(z):
    z = complex(z)
    return (z.real, z.imag)


def diagonalizer(A0: Mat2, eigenvalues=None):
    """(P, J0, jordan) with P A0 P^-1 = J0. Rows of P are normalised to have first
    entry 1 where possible; eigenvalues are ordered lexicographically (re, im)."""
    a, b, c, d = A0.entries()
    if eigenvalues is None:
        tr, det = complex(a + d), complex(a * d - b * c)
        disc = np.sqrt(complex(tr * tr - 4 * det))
        eigenvalues = ((tr - disc) / 2, (tr + disc) / 2)
    mus = sorted(eigenvalues, key=_lex)
    one = 1 + 0 * a

    def left_vec(mu):
        if not _is_zero(c):
            return (one, (mu - a) / c)
        if not _is_zero(mu - d):
            return (one, b / (mu - d))
        return (0 * one, one)

    if _is_zero(mus[0] - mus[1]) or abs(complex(mus[0]) - complex(mus[1])) < 1e-14:
        mu = mus[0]
        if A0.commutator(Mat2.identity(one)).is_zero() and _is_zero(b) and _is_zero(c):
            return Mat2.identity(one), Mat2.diag(mu, mu), False
        r2 = left_vec(mu)
        # r1 (A0 - mu) = r2
        B = A0 - Mat2.identity(one) * mu
        if not _is_zero(B.a) or not _is_zero(B.c):
            # try r1 = (1, s)
            if not _is_zero(B.c):
                s = (r2[0] - B.a) / B.c
                r1 = (one, s)
            else:
                r1 = (r2[0] / B.a, 0 * one)
        else:
            r1 = (0 * one, r2[1] / B.d)
        P = Mat2(r1[0], r1[1], r2[0], r2[1])
        return P, Mat2(mu, one, 0 * one, mu), True
    r1, r2 = left_vec(mus[0]), left_vec(mus[1])
    P = Mat2(r1[0], r1[1], r2[0], r2[1])
    return P, Mat2.diag(mus[0], mus[1]), False


# ----------------------------------------------------------------------------
# local solutions


@dataclass
class LocalSolution:
    """H(x) = sum H_n x^(+-n) with H_0 = I, plus the data turning it into a
    fundamental solution U = H P^-1 L (side 0) or U = H L (side infinity)."""
    side: str
    coeffs: list
    F: FuchsQ
    P: Mat2
    J0: Mat2
    jordan: bool = False
    accuracy: float = 1e-10
    _num: list = field(default=None, repr=False)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def numeric_coeffs(self):
        if self._num is None:
            self._num = [_np(h) for h in self.coeffs]
        return self._num

    # radius of the direct series
    def _rho(self):
        t = abs(complex(self.F.t))
        return min(1.0, t) if self.side == "0" else max(1.0, t)

    def _direct(self, x):
        H = self.numeric_coeffs()
        w = x if self.side == "0" else 1 / x
        s = np.zeros((2, 2), complex)
        p = 1
        for h in H:
            s = s + h * p
            p *= w
        tail = np.abs(H[-1]).max() * abs(w) ** (len(H) - 1) * 2
        return s, tail

    def H(self, x, max_push: int = 200):
        """Value of H at x with an error estimate; uses the functional equation to
        reach x outside the disc of convergence."""
        x = complex(x)
        if x == 0 and self.side == "0":
            return np.eye(2, dtype=complex), 0.0
        q = complex(self.F.q)
        A = lambda z: _np(self.F(z))
        rho = self._rho()
        k = 0
        if self.side == "0":
            z = x
            while abs(z) > rho / 2:
                z /= q
                k += 1
                if k > max_push:
                    raise PreconditionError("sample outside accuracy annulus")
            val, err = self._direct(z)
            A0inv = np.linalg.inv(_np(self.F.A0))
            for _ in range(k):
                _check_pole(z, self.F)
                val = A(z) @ val @ A0inv
                z *= q
        else:
            z = x
            while abs(z) < 2 * rho:
                z *= q
                k += 1
                if k > max_push:
                    raise PreconditionError("sample outside accuracy annulus")
            val, err = self._direct(z)
            Ainf = _np(self.F.Ainf)
            for _ in range(k):
                z /= q
                _check_pole(z, self.F)
                M = A(z)
                if abs(np.linalg.det(M)) < 1e-14:
                    raise DomainError("A(x) is singular at a pushed sample")
                val = np.linalg.solve(M, val) @ Ainf
        grow = max(1.0, np.abs(val).max())
        err = err * grow
        if err > self.accuracy:
            raise PreconditionError(f"sample outside accuracy annulus: error bound {err:.3e}")
        return val, err

    def L(self, x):
        q = self.F.q
        J = self.J0
        if self.side == "0" and self.jordan:
            mu = complex(J.a)
            e = qchar_eval(mu, x, q)
            return np.array([[e, e * qlog_eval(x, q) / mu], [0, e]])
        return np.diag([qchar_eval(J.a, x, q), qchar_eval(J.d, x, q)])

    def U(self, x):
        h, err = self.H(x)
        if self.side == "0":
            return h @ np.linalg.inv(_np(self.P)) @ self.L(x), err
        return h @ self.L(x), err


def _check_pole(z, F):
    for p in (1, complex(F.t)):
        if abs(z - p) < 1e-12 * max(1.0, abs(p)):
            raise DomainError("sample lies on a pole of the pushed solution")


def _expansion(F: FuchsQ, side: str, n: int):
    """Coefficient of x^n (side 0) or x^-n (side infinity) in A(x), n >= 1."""
    t = F.t
    if side == "0":
        return -F.A1 - F.At / t ** (n + 1)
    return F.A1 + F.At * t ** (n - 1)


def _numeric_fuchs(F: FuchsQ) -> FuchsQ:
    f = lambda m: m.map(lambda e: complex(e))
    return FuchsQ(f(F.A0), f(F.A1), f(F.At), complex(F.t), complex(F.q), F.aux)


def local_solution(F: FuchsQ, side, order: int, *, P=None, eigenvalues=None,
                   exact_arith: bool = False, accuracy: float = 1e-10) -> LocalSolution:
    """Series solution of sigma_x H . A_side = A(x) H with H(side) = I.

    side "0": A_side = A0 and H_n = Psi_{q^n}^-1 (sum_{i=1..n} A_i H_{n-i}).
    side "inf": A_side = A_inf (must be diagonal) and the same recursion in 1/x."""
    side = {"0": "0", 0: "0", "inf": "inf", "∞": "inf", math.inf: "inf"}.get(side)
    if side is None:
        raise ValueError("side must be 0 or inf")
    if abs(complex(F.q)) <= 1:
        raise PreconditionError("local solutions require |q|>1")
    G = F if exact_arith else _numeric_fuchs(F)
    q = G.q
    one = 1 + 0 * G.A0.a
    if side == "0":
        base = G.A0
        if P is None:
            P, J0, jordan = diagonalizer(G.A0, eigenvalues)
        else:
            P = P if exact_arith else P.map(complex)
            J0 = P * G.A0 * P.inv()
            jordan = not (_is_zero(J0.b) and _is_zero(J0.c))
    else:
        base = G.Ainf
        if not (_is_zero(base.b) and _is_zero(base.c)) and (
                exact_arith or abs(base.b) + abs(base.c) > 1e-12):
            raise PreconditionError("A_inf must be diagonal")
        P, J0, jordan = Mat2.identity(one), Mat2.diag(base.a, base.d), False
    H = [Mat2.identity(one)]
    for n in range(1, order + 1):
        R = Mat2.identity(0 * one)
        for i in range(1, n + 1):
            R = R + _expansion(G, side, i) * H[n - i]
        lam = q ** n if side == "0" else 1 / q ** n
        try:
            X = _sylvester(lam, base, R)
        except ResonanceError:
            raise ResonanceError(f"resonant exponent n={n}") from None
        H.append(X)
    return LocalSolution(side, H, G, P, J0, jordan, accuracy)


def series_residual(sol: LocalSolution, order=None):
    """Coefficient norms of sigma_x H . A_side - A(x) H through the given order."""
    order = sol.order if order is None else order
    G = sol.F
    q = complex(G.q)
    base = _np(G.A0 if sol.side == "0" else G.Ainf)
    H = sol.numeric_coeffs()
    out = []
    for n in range(order + 1):
        lam = q ** n if sol.side == "0" else q ** (-n)
        r = lam * H[n] @ base - base @ H[n]
        for i in range(1, n + 1):
            r = r - _np(_expansion(G, sol.side, i)) @ H[n - i]
        out.append(float(np.abs(r).max()))
    return out


# ----------------------------------------------------------------------------
# Birkhoff matrix and the two tests


@dataclass
class BirkhoffSamples:
    x: list
    P: list  # numpy 2x2 complex
    err: list

    def to_json(self) -> str:
        def m(a):
            return [[[z.real, z.imag] for z in row] for row in a]
        return json.dumps([{"x": [complex(x).real, complex(x).imag], "P": m(p), "error_bound": e}
                           for x, p, e in zip(self.x, self.P, self.err)])


def birkhoff_matrix(U0: LocalSolution, Uinf: LocalSolution, x_samples, variant: str = "P"):
    """Samples of P = U_inf^-1 U_0. variant "Ptilde" uses U_0 P instead of U_0."""
    xs, Ps, errs = [], [], []
    for x in x_samples:
        u0, e0 = U0.U(x)
        ui, ei = Uinf.U(x)
        if variant == "Ptilde":
            u0 = u0 @ _np(U0.P)
        elif variant != "P":
            raise ValueError(f"unknown variant {variant!r}")
        xs.append(x)
        Ps.append(np.linalg.solve(ui, u0))
        errs.append(e0 + ei)
    return BirkhoffSamples(xs, Ps, errs)


def rational_B(F_qt: FuchsQ, theta: ThetaQ):
    """x -> B(x) for a family produced by the q-Schlesinger step from time t."""
    B0, C = F_qt.aux["B0"], F_qt.aux["C"]
    t = F_qt.t / F_qt.q
    return lambda x: B_matrix(B0, C, exact(x), t, F_qt.q, theta)


def transported_P(P_t: Mat2, F_qt: FuchsQ, theta: ThetaQ) -> Mat2:
    """P(qt) = P(t) B(0)^-1: the diagonaliser carried along the orbit."""
    return P_t * rational_B(F_qt, theta)(0).inv()


def _rel(a, b):
    return float(np.abs(a - b).max() / max(1e-300, np.abs(b).max()))


@dataclass
class PseudoConstancyReport:
    residuals: list
    x: list

    @property
    def max_residual(self):
        return max(self.residuals)


def pseudo_constancy(F_t: FuchsQ, F_qt: FuchsQ, x_samples, order: int = 40, *, P_t=None,
                     P_qt=None, eigenvalues=None) -> PseudoConstancyReport:
    """Relative size of P(x, qt) - P(x, t) at the samples."""
    S0 = local_solution(F_t, "0", order, P=P_t, eigenvalues=eigenvalues)
    Si = local_solution(F_t, "inf", order)
    T0 = local_solution(F_qt, "0", order, P=P_qt, eigenvalues=eigenvalues)
    Ti = local_solution(F_qt, "inf", order)
    a = birkhoff_matrix(S0, Si, x_samples)
    b = birkhoff_matrix(T0, Ti, x_samples)
    return PseudoConstancyReport([_rel(pb, pa) for pa, pb in zip(a.P, b.P)], list(x_samples))


def b_inf_check(F_t: FuchsQ, F_qt: FuchsQ, B, x_samples, order: int = 40):
    """max |B_inf(x) - B(x)| with B_inf = H_inf(x, qt) H_inf(x, t)^-1 and B a callable."""
    Si = local_solution(F_t, "inf", order)
    Ti = local_solution(F_qt, "inf", order)
    out = []
    for x in x_samples:
        hs, _ = Si.H(x)
        ht, _ = Ti.H(x)
        binf = ht @ np.linalg.inv(hs)
        out.append(float(np.abs(binf - _np(B(x))).max()))
    return out

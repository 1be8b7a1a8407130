"""2x2 matrices over any commutative ring supporting + - * and, for inversion, /."""
from __future__ import annotations

from fractions import Fraction

from ..errors import ResonanceError


class Mat2:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def identity(cls, one=1):
        return cls(one, 0 * one, 0 * one, one)

    @classmethod
    def diag(cls, x, y):
        return cls(x, 0 * x, 0 * y, y)

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries()[2 * i + j]

    def map(self, f) -> "Mat2":
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries(), other.entries()))

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"

    def __add__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(
                self.a * o.a + self.b * o.c,
                self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c,
                self.c * o.b + self.d * o.d,
            )
        return Mat2(self.a * o, self.b * o, self.c * o, self.d * o)

    def __rmul__(self, s):
        return Mat2(s * self.a, s * self.b, s * self.c, s * self.d)

    def __truediv__(self, s):
        return Mat2(self.a / s, self.b / s, self.c / s, self.d / s)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def adj(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inv(self) -> "Mat2":
        dt = self.det()
        if _is_zero(dt):
            raise ZeroDivisionError("singular matrix")
        return self.adj() / dt

    def commutator(self, o: "Mat2") -> "Mat2":
        return self * o - o * self

    def is_zero(self) -> bool:
        return all(_is_zero(e) for e in self.entries())

    def norm(self) -> float:
        """Frobenius norm of a numerically-convertible matrix."""
        return sum(abs(complex(e)) ** 2 for e in self.entries()) ** 0.5


def _is_zero(x) -> bool:
    if isinstance(x, (complex, float)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return not x


def _numeric(x) -> bool:
    return isinstance(x, (complex, float))


def solve_linear(A, rhs):
    """Gaussian elimination on a square list-of-lists system. Returns None if singular.

    Exact entries pivot on the first nonzero; floating entries use partial pivoting
    with a relative singularity threshold.
    """
    n = len(A)
    M = [[Fraction(e) if isinstance(e, int) else e for e in list(row) + [r]]
         for row, r in zip(A, rhs)]
    numeric = any(_numeric(e) for row in M for e in row)
    scale = max((abs(complex(e)) for row in A for e in row), default=1.0) if numeric else None
    for col in range(n):
        if numeric:
            piv = max(range(col, n), key=lambda r: abs(complex(M[r][col])))
            if abs(complex(M[piv][col])) <= 1e-13 * (scale or 1.0):
                return None
        else:
            piv = next((r for r in range(col, n) if not _is_zero(M[r][col])), None)
            if piv is None:
                return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        for r in range(n):
            if r != col and not _is_zero(M[r][col]):
                f = M[r][col] / p
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def sylvester_matrix(lam, M: Mat2):
    """4x4 matrix of X -> lam*X*M - M*X on (x11, x12, x21, x22)."""
    m = [[M.a, M.b], [M.c, M.d]]
    out = []
    for i in range(2):
        for j in range(2):
            row = []
            for k in range(2):
                for l in range(2):
                    v = 0
                    if k == i:
                        v = v + lam * m[l][j]
                    if l == j:
                        v = v - m[i][k]
                    row.append(v)
            out.append(row)
    return out


def solve_sylvester(lam, M: Mat2, RHS: Mat2) -> Mat2:
    """Solve lam*X*M - M*X = RHS."""
    sol = solve_linear(sylvester_matrix(lam, M), list(RHS.entries()))
    if sol is None:
        raise ResonanceError("resonant Sylvester operator")
    return Mat2(*sol)

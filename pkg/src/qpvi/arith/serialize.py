"""JSON encoding: rationals as "p/q" strings, complex as {"re", "im"},
polynomials as ascending coefficient arrays, rational functions as {"num", "den"}."""
from __future__ import annotations

from fractions import Fraction

from .mat2 import Mat2
from .poly import PolyQ
from .ratfun import RatFunQ
from .scalar import GaussQ


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def to_json(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return _frac_str(x)
    if isinstance(x, GaussQ):
        if x.im == 0:
            return _frac_str(x.re)
        return {"re": _frac_str(x.re), "im": _frac_str(x.im)}
    if isinstance(x, float):
        return x
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, PolyQ):
        return [to_json(c) for c in x.coeffs]
    if isinstance(x, RatFunQ):
        return {"num": to_json(x.num), "den": to_json(x.den)}
    if isinstance(x, Mat2):
        return [[to_json(x.a), to_json(x.b)], [to_json(x.c), to_json(x.d)]]
    if isinstance(x, (list, tuple)):
        return [to_json(e) for e in x]
    if isinstance(x, dict):
        return {k: to_json(v) for k, v in x.items()}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def scalar_from_json(obj):
    if isinstance(obj, str):
        return GaussQ(Fraction(obj))
    if isinstance(obj, dict):
        re, im = obj["re"], obj["im"]
        if isinstance(re, str) and isinstance(im, str):
            return GaussQ(Fraction(re), Fraction(im))
        return complex(float(re), float(im))
    if isinstance(obj, (int, float)):
        return obj
    raise TypeError(f"not a scalar encoding: {obj!r}")


def poly_from_json(obj) -> PolyQ:
    return PolyQ([scalar_from_json(c) for c in obj])


def ratfun_from_json(obj) -> RatFunQ:
    return RatFunQ(poly_from_json(obj["num"]), poly_from_json(obj["den"]))


def from_json(obj, kind: str):
    """Decode obj as kind in {"scalar", "poly", "ratfun", "mat2", "mat2-ratfun"}."""
    if kind == "scalar":
        return scalar_from_json(obj)
    if kind == "poly":
        return poly_from_json(obj)
    if kind == "ratfun":
        return ratfun_from_json(obj)
    if kind in ("mat2", "mat2-ratfun"):
        f = ratfun_from_json if kind == "mat2-ratfun" else scalar_from_json
        (a, b), (c, d) = obj
        return Mat2(f(a), f(b), f(c), f(d))
    raise ValueError(f"unknown kind {kind!r}")

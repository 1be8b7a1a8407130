from .mat2 import Mat2, solve_linear, solve_sylvester
from .poly import PolyQ
from .ratfun import RatFunQ, get_degree_cap, ratfun_eval, ratfun_reduce, set_degree_cap
from .scalar import GaussQ, I, parse_scalar
from .series import SeriesT
from .serialize import from_json, to_json

__all__ = [
    "GaussQ", "I", "parse_scalar", "PolyQ", "RatFunQ", "ratfun_reduce", "ratfun_eval",
    "set_degree_cap", "get_degree_cap", "SeriesT", "Mat2", "solve_sylvester",
    "solve_linear", "to_json", "from_json",
]

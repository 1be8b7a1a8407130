"""Command line front end.

Exit codes: 0 ok, 1 failed check, 2 bad configuration, 3 resource cap."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith.scalar import GaussQ, parse_scalar
from .arith.serialize import to_json
from .errors import QpviError, ResourceCapError
from .fuchsian_diff import ThetaDiff
from .fuchsian_q import ThetaQ, TripleQ, assemble_qA, compute_B0_C, qlax_residual, qschlesinger_step
from .qp6 import INF, QP6State, SakaiPoint, change_coordinates, chart_coords, discrete_solution

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def parse_number(text, allow_float=False):
    """Exact "p/q" or "a+bi"; floats only when allow_float."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        if not allow_float:
            raise ConfigError(f"float {text!r} needs the numeric backend")
        return text
    s = str(text).strip()
    try:
        g = parse_scalar(s)
    except (ValueError, TypeError):
        if not allow_float:
            raise ConfigError(f"cannot parse {text!r} as an exact number") from None
        try:
            return complex(s.replace("i", "j")) if "i" in s or "j" in s else float(s)
        except ValueError:
            raise ConfigError(f"cannot parse {text!r}") from None
    return g.re if g.im == 0 else g


def parse_list(text, n=None, allow_float=False):
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = [p for p in str(text).split(",") if p.strip()]
    vals = [parse_number(p, allow_float) for p in parts]
    if n is not None and len(vals) != n:
        raise ConfigError(f"expected {n} comma separated values, got {len(vals)}")
    return vals


# ----------------------------------------------------------------------------
# argument model


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpvi", description="q-Painleve VI toolkit")
    p.add_argument("--config", help="JSON config file (exclusive with other flags)")
    sub = p.add_subparsers(dest="command")

    def common(sp, q=True):
        sp.add_argument("--theta", help="theta_0,theta_1,theta_t,theta_inf")
        if q:
            sp.add_argument("--Theta", help="Theta_0,Theta_1,Theta_t,Theta_inf (bars are inverses)")
            sp.add_argument("--q")
        sp.add_argument("--t0")
        sp.add_argument("--out", help="output path (default stdout)")

    o = sub.add_parser("orbit", help="discrete solution of q-Painleve VI")
    common(o)
    o.add_argument("--y0")
    o.add_argument("--Z0")
    o.add_argument("--z0")
    o.add_argument("--steps", type=int, default=4)
    o.add_argument("--back", type=int, default=0)
    o.add_argument("--backend", choices=("exact", "numeric"), default="exact")

    c = sub.add_parser("confluence", help="a_n / b_n report at q = 1")
    common(c, q=False)
    c.add_argument("--y0")
    c.add_argument("--Z0")
    c.add_argument("--n-max", type=int, default=5)

    la = sub.add_parser("lax", help="q-Lax residual after one q-Schlesinger step")
    common(la)
    la.add_argument("--y0")
    la.add_argument("--Z0")
    la.add_argument("--lam0", default="1")
    la.add_argument("--x", default="17/7,-13/5,29/3", help="sample points")

    ok = sub.add_parser("okamoto", help="trajectory or intersection diagram")
    common(ok)
    ok.add_argument("--diagram", choices=("diff-okamoto", "q-okamoto", "q-okamoto-mod", "omega-limit"))
    ok.add_argument("--format", choices=("json", "dot", "csv"), default=None)
    ok.add_argument("--t1")
    ok.add_argument("--chart", default="0")
    ok.add_argument("--a")
    ok.add_argument("--b")

    b = sub.add_parser("birkhoff", help="Birkhoff connection matrix report")
    common(b)
    b.add_argument("--y0")
    b.add_argument("--Z0")
    b.add_argument("--lam0", default="1")
    b.add_argument("--order", type=int, default=40)
    b.add_argument("--x", default="1.7+0.4i,-2.3+1i,0.5-0.9i,4.1+2i,-0.7-3i")

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--suite", default="all")
    v.add_argument("--out")
    return p


def _flags_given(argv) -> bool:
    return any(a.startswith("--") and not a.startswith("--config") for a in argv)


def load_config(path, parser):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    if "command" not in cfg:
        raise ConfigError("config needs a 'command' key")
    argv = [cfg.pop("command")]
    for k, v in cfg.items():
        flag = "--" + k.replace("_", "-") if k not in ("Theta", "Z0", "z0") else "--" + k
        if isinstance(v, list):
            v = ",".join(str(e) for e in v)
        argv += [flag, str(v)]
    return parser.parse_args(argv)


# ----------------------------------------------------------------------------
# helpers


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise ConfigError(f"missing required parameter --{n.replace('_', '-')}")


def _theta_q(args, q, allow_float=False):
    if getattr(args, "Theta", None):
        vals = parse_list(args.Theta, 4, allow_float)
        return ThetaQ(*vals)
    _need(args, "theta")
    return ThetaQ.from_diff(ThetaDiff(*parse_list(args.theta, 4, allow_float)), q)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _is_exact(x):
    return isinstance(x, (Fraction, GaussQ))


def _json_val(v):
    if v is INF:
        return "inf"
    return to_json(v)


# ----------------------------------------------------------------------------
# commands


def cmd_orbit(args):
    numeric = args.backend == "numeric"
    _need(args, "q", "t0", "y0")
    q = parse_number(args.q, numeric)
    t0 = parse_number(args.t0, numeric)
    th = _theta_q(args, q, numeric)
    y0 = parse_number(args.y0, numeric)
    if args.z0 is not None:
        z0 = parse_number(args.z0, numeric)
    else:
        _need(args, "Z0")
        _, z0 = change_coordinates((y0, parse_number(args.Z0, numeric)), "Z->z", t0, q, th)
    init = QP6State(th, q, t0, SakaiPoint(y0, z0))
    states = discrete_solution(init, -args.back, args.steps, args.backend)
    lines = []
    for ell, s in zip(range(-args.back, args.steps + 1), states):
        p = s.point
        rec = {"ell": ell, "t": _json_val(s.t)}
        if p.exceptional:
            rec.update(y=None, z=None, tag=p.tag, direction=[_json_val(d) for d in p.direction])
        else:
            rec.update(y=_json_val(p.y), z=_json_val(p.z))
        rec.update(chart=s.chart, coords=[_json_val(c) for c in chart_coords(p, s.chart)],
                   exact=not numeric)
        lines.append(json.dumps(rec, sort_keys=True))
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_confluence(args):
    from .confluence import confluence_report
    _need(args, "theta", "t0", "y0", "Z0")
    theta = ThetaDiff(*parse_list(args.theta, 4))
    init = (parse_number(args.y0), parse_number(args.Z0), parse_number(args.t0))
    recs = confluence_report(init, theta, args.n_max)
    _emit(json.dumps(recs, indent=1), args.out)
    return EXIT_OK


def _family(args):
    _need(args, "q", "t0", "y0", "Z0")
    q = parse_number(args.q)
    th = _theta_q(args, q)
    tr = TripleQ(parse_number(args.lam0), parse_number(args.y0), parse_number(args.Z0),
                 parse_number(args.t0), q)
    F = assemble_qA(tr, th)
    return tr, th, F, qschlesinger_step(F, tr, th)


def cmd_lax(args):
    tr, th, F, Fq = _family(args)
    B0, C = compute_B0_C(F, tr, th)
    rep = qlax_residual(F, Fq, B0, C, parse_list(args.x), th)
    out = {"identity_zero": rep.identity_zero,
           "records": [{"x": to_json(r["x"]), "norm": r["norm"], "exact_zero": r["exact_zero"]}
                       for r in rep.records]}
    _emit(json.dumps(out, indent=1), args.out)
    return EXIT_OK if rep.all_zero() else EXIT_FAIL


def cmd_okamoto(args):
    from . import okamoto as ok
    if args.diagram:
        _need(args, "t0")
        t = parse_number(args.t0)
        if args.diagram.startswith("q-"):
            _need(args, "q")
            q = parse_number(args.q)
            d = ok.intersection_diagram(args.diagram, _theta_q(args, q), t, q)
        else:
            _need(args, "theta")
            d = ok.intersection_diagram(args.diagram, ThetaDiff(*parse_list(args.theta, 4)), t)
        _emit(d.to_dot() if args.format == "dot" else d.to_json(), args.out)
        return EXIT_OK
    _need(args, "theta", "t0", "t1", "a", "b")
    theta = ThetaDiff(*parse_list(args.theta, 4))
    t0 = parse_number(args.t0)
    t1 = parse_number(args.t1, allow_float=True)
    p0 = ok.OkaPoint(args.chart, parse_number(args.a, True), parse_number(args.b, True))
    tr = ok.integrate_okamoto(p0, t0, t1, theta)
    if args.format == "json":
        def c(z):
            z = complex(z)
            return [z.real, z.imag]
        txt = json.dumps({"samples": [[c(t), ch, c(a), c(b)] for t, ch, a, b in tr.samples],
                          "chart_log": [[c(t), ch] for t, ch in tr.chart_log]})
    else:
        txt = tr.to_csv()
    _emit(txt, args.out)
    return EXIT_OK


def cmd_birkhoff(args):
    from . import birkhoff as bk
    tr, th, F, Fq = _family(args)
    xs = parse_list(args.x, allow_float=True)
    S0 = bk.local_solution(F, "0", args.order, eigenvalues=(th.th0, th.bar0))
    Si = bk.local_solution(F, "inf", args.order)
    samples = bk.birkhoff_matrix(S0, Si, xs)
    Pq = bk.transported_P(S0.P, Fq, th)
    pc = bk.pseudo_constancy(F, Fq, xs, args.order, P_t=S0.P, P_qt=Pq, eigenvalues=(th.th0, th.bar0))
    binf = bk.b_inf_check(F, Fq, bk.rational_B(Fq, th), xs, args.order)
    out = {"samples": json.loads(samples.to_json()),
           "pseudo_constancy": pc.residuals, "b_inf_vs_rational": binf}
    _emit(json.dumps(out, indent=1), args.out)
    return EXIT_OK


def cmd_verify(args):
    from .suite import run_suite
    results = run_suite(args.suite)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    _emit("\n".join(lines), args.out)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


COMMANDS = {"orbit": cmd_orbit, "confluence": cmd_confluence, "lax": cmd_lax,
            "okamoto": cmd_okamoto, "birkhoff": cmd_birkhoff, "verify": cmd_verify}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        if args.config:
            if args.command is not None or _flags_given(argv):
                raise ConfigError("--config and command line flags are mutually exclusive")
            args = load_config(args.config, parser)
        if args.command is None:
            raise ConfigError("no command given")
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (QpviError, ValueError, ZeroDivisionError) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

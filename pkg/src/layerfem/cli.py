"""Command-line front end: meshes, solves, convergence tables, verification.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 degenerate
mesh regime.  CSV output uses ',' separators, '.' decimal points, LF line
endings and a mandatory header; numbers carry 17 significant digits.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .analysis import convergence_study, interpolation_study
from .calculus import layer_integral
from .errors import DegenerateRegimeError, LayerFemError, ParameterError
from .fem import galerkin_solve
from .mesh import build_mesh
from .problem import SCENARIO_NAMES, get_scenario
from .verify import (
    check_barrier_operator,
    check_bound_uniformity,
    check_integral_lemma_random,
)

_FMT = "%.17g"


def _num(value) -> str:
    return _FMT % float(value)


def parse_h(text: str) -> float:
    """Accept decimals and fractions like '1/64'."""
    if "/" in text:
        num, den = text.split("/", 1)
        h = float(num) / float(den)
    else:
        h = float(text)
    if not (0.0 < h < 1.0):
        raise ParameterError(f"h must lie in (0, 1), got {text!r}")
    return h


def _parse_list(text: str, parse=float):
    return [parse(tok) for tok in text.split(",") if tok]


def _emit(rows, header, fmt, meta, out):
    if fmt == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(
                _num(v) if isinstance(v, (int, float, np.floating)) else str(v)
                for v in row) + "\n")
    elif fmt == "json":
        payload = {
            "meta": meta,
            "rows": [dict(zip(header, row)) for row in rows],
        }
        out.write(json.dumps(payload, allow_nan=True))
        out.write("\n")
    else:  # pretty
        widths = [max(len(h_), 12) for h_ in header]
        out.write("  ".join(h_.ljust(w) for h_, w in zip(header, widths)) + "\n")
        for row in rows:
            cells = ["%.6g" % v if isinstance(v, (int, float, np.floating))
                     else str(v) for v in row]
            out.write("  ".join(c.ljust(w) for c, w in zip(cells, widths)) + "\n")


def _meta(args, **extra):
    meta = {"version": __version__, "subcommand": args.command}
    for key in ("scenario", "eps0", "h", "delta", "format", "seed", "suite"):
        if hasattr(args, key):
            meta[key] = getattr(args, key)
    meta.update(extra)
    return meta


def cmd_mesh(args, out) -> int:
    scenario = get_scenario(args.scenario, _parse_list(args.eps0)[0])
    e = layer_integral(scenario.coeffs, "e")
    msh = build_mesh(scenario.coeffs, e, parse_h(args.h), args.delta)
    rows = [(i, x, r) for i, (x, r) in
            enumerate(zip(msh.nodes, msh.regions()))]
    _emit(rows, ["index", "x", "region"], args.format, _meta(args), out)
    return 0


def cmd_solve(args, out) -> int:
    scenario = get_scenario(args.scenario, _parse_list(args.eps0)[0])
    e = layer_integral(scenario.coeffs, "e")
    msh = build_mesh(scenario.coeffs, e, parse_h(args.h), args.delta)
    sol = galerkin_solve(scenario, msh)
    header = ["x", "u_h"]
    if args.exact:
        if scenario.exact is None:
            raise ParameterError(
                f"scenario {scenario.name!r} has no closed-form solution")
        header.append("exact")
        rows = [(x, u, ue) for x, u, ue in
                zip(msh.nodes, sol.coefficients, scenario.exact(msh.nodes))]
    else:
        rows = list(zip(msh.nodes, sol.coefficients))
    _emit(rows, header, args.format, _meta(args), out)
    return 0


def cmd_converge(args, out) -> int:
    eps0_list = _parse_list(args.eps0)
    h_list = _parse_list(args.h, parse_h)
    family = lambda eps0: get_scenario(args.scenario, eps0)
    table = convergence_study(family, h_list, eps0_list, args.delta)
    rows = [
        (r.eps0, r.h, r.node_count, r.energy_error, r.l2_error,
         "" if r.rate is None else _num(r.rate))
        for r in table.rows if r.skipped_reason is None
    ]
    _emit(rows, ["eps0", "h", "nodes", "energy_err", "l2_err", "rate"],
          args.format, _meta(args), out)
    skipped = [r for r in table.rows if r.skipped_reason is not None]
    for r in skipped:
        sys.stderr.write(f"skipped eps0={r.eps0} h={r.h}: {r.skipped_reason}\n")
    return 0


def cmd_interp(args, out) -> int:
    scenario = get_scenario(args.scenario, _parse_list(args.eps0)[0])
    h_list = _parse_list(args.h, parse_h)
    rows_raw = interpolation_study(scenario, h_list, args.delta)
    rows = [
        (r.h, r.node_count, r.smooth_l2, r.smooth_h1, r.layer_l2_coarse,
         r.layer_max_coarse, r.layer_wl2_fine, r.layer_wh1_fine)
        for r in rows_raw
    ]
    _emit(rows, ["h", "nodes", "smooth_l2", "smooth_h1", "layer_l2_coarse",
                 "layer_max_coarse", "layer_wl2_fine", "layer_wh1_fine"],
          args.format, _meta(args), out)
    return 0


def _verify_reports(suite: str, seed: int, eps0: float):
    from .problem import builtin_scenarios

    rng = np.random.default_rng(seed)
    reports = []
    scenarios = builtin_scenarios(eps0)
    if suite in ("lemmas", "all"):
        for sc in scenarios:
            e = layer_integral(sc.coeffs, "e")
            reports.append(check_integral_lemma_random(sc, 100, rng, e=e))
    if suite in ("barriers", "all"):
        for sc in scenarios:
            e = layer_integral(sc.coeffs, "e")
            reports.append(check_barrier_operator(sc.coeffs, e,
                                                  sample_count=10000,
                                                  label=sc.name))
    if suite in ("bounds", "all"):
        for name in SCENARIO_NAMES:
            family = lambda z, name=name: get_scenario(name, z)
            for which in ("U0", "U1"):
                reports.append(check_bound_uniformity(family, which))
    return reports


def cmd_verify(args, out) -> int:
    reports = _verify_reports(args.suite, args.seed, _parse_list(args.eps0)[0])
    if args.format == "json":
        rows = [(r.name, r.worst_margin, r.worst_point,
                 "PASS" if r.passed else "FAIL") for r in reports]
        _emit(rows, ["name", "worst_margin", "worst_point", "status"],
              args.format, _meta(args), out)
    else:
        for r in reports:
            out.write("%-50s margin=%-13.6g at x=%-12.6g %s\n" % (
                r.name, r.worst_margin, r.worst_point,
                "PASS" if r.passed else "FAIL"))
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="layerfem",
        description="Layer-adapted FEM for 1-D convection-diffusion with "
                    "variable small diffusion")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, h_default=None):
        sp.add_argument("--scenario", default="manufactured",
                        choices=SCENARIO_NAMES)
        sp.add_argument("--eps0", default="0.01",
                        help="diffusion scale eps0, or comma list")
        sp.add_argument("--h", default=h_default,
                        help="mesh parameter(s); decimals or fractions like 1/64")
        sp.add_argument("--delta", type=float, default=1.0)
        sp.add_argument("--format", default="csv",
                        choices=("csv", "json", "pretty"))
        sp.add_argument("--output", default=None)
        sp.add_argument("--seed", type=int, default=12345)

    common(sub.add_parser("mesh", help="emit mesh nodes"), "0.1")
    common(sub.add_parser("solve", help="solve and emit nodal values"), "0.1")
    sub.choices["solve"].add_argument("--exact", action="store_true",
                                      help="include the exact solution column")
    common(sub.add_parser("converge", help="convergence table"),
           "1/8,1/16,1/32,1/64")
    common(sub.add_parser("interp", help="interpolation-error table"),
           "1/16,1/32,1/64,1/128")
    vp = sub.add_parser("verify", help="run a verification suite")
    common(vp, "1/64")
    vp.add_argument("--suite", default="all",
                    choices=("lemmas", "barriers", "bounds", "all"))
    return p


_DISPATCH = {
    "mesh": cmd_mesh,
    "solve": cmd_solve,
    "converge": cmd_converge,
    "interp": cmd_interp,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.output:
            with open(args.output, "w", newline="") as fh:
                return _DISPATCH[args.command](args, fh)
        return _DISPATCH[args.command](args, sys.stdout)
    except DegenerateRegimeError as exc:
        sys.stderr.write(f"degenerate regime: {exc}\n")
        return 3
    except (ParameterError, ValueError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except LayerFemError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

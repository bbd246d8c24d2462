"""Command line interface.

Subcommands: validate, equations, solve, layout, verify, descartes.
Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
3 solver non-convergence.  Machine-readable errors go to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from . import errors
from .complexes import (Complex, build_complex, curve_from_spec_entry,
                        spec_from_json, SurfaceKind)
from .descartes import (m_from_flower, normalized_descartes_residual,
                        random_flower, symmetric_descartes_residual)
from .equations import (Assignment, assemble_system, Flavor, Mode,
                        residual as system_residual)
from .layout import (check_packing, Packing, realize_disc, realize_sphere,
                     realize_torus)
from .solver import SolveConfig, dimension_audit, solve, verify_solution
from .svg import packing_svg

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NOCONV = 3


def _default_tol() -> float:
    return float(os.environ.get("SODDY_TOLERANCE", "1e-9"))


def _load_complex(path: str) -> Complex:
    with open(path) as fh:
        return build_complex(spec_from_json(fh.read()))


def _load_assignment(path: str) -> Assignment:
    with open(path) as fh:
        data = json.load(fh)
    rows = data["assignment"] if "assignment" in data else data["values"]
    return Assignment({(int(f), int(c)): float(v) for f, c, v in rows})


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_pins(items):
    pins = {}
    for item in items or []:
        key, _, val = item.partition("=")
        f, c = key.split(",")
        pins[(int(f), int(c))] = float(val)
    return pins


def _parse_ratios(spec: Optional[str]):
    if not spec:
        return None
    out = {}
    for item in spec.split(","):
        key, _, val = item.partition("=")
        out[int(key)] = float(val)
    return out


def _parse_side(spec: Optional[str]):
    if spec is None:
        return None
    f, s = spec.split(",")
    return (int(f), int(s))


def _system_from_args(cx: Complex, args) -> "EquationSystem":
    flavor = Flavor.REDUCED if args.reduced else Flavor.FULL
    mode = Mode.UNBRANCHED if args.unbranched else Mode.BRANCHED
    e0 = None
    if args.e0 is not None:
        e0 = cx.edge_index(_parse_side(args.e0))
    lam = mu = None
    if args.curves:
        names = args.curves.split(",")
        if len(names) != 2:
            raise errors.OptionMismatch("--curves needs two names")
        lam = curve_from_spec_entry(cx, cx.spec.curves[names[0]])
        mu = curve_from_spec_entry(cx, cx.spec.curves[names[1]])
    return assemble_system(
        cx, flavor=flavor, mode=mode, delta0=args.delta0, e0=e0, v0=args.v0,
        lambda_curve=lam, mu_curve=mu,
        pins=_parse_pins(args.pin) or None,
        boundary_ratios=_parse_ratios(args.ratios))


def _add_system_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reduced", action="store_true",
                   help="reduced flavor (sphere/torus)")
    p.add_argument("--full", action="store_true", help="full flavor "
                   "(default)")
    p.add_argument("--unbranched", action="store_true",
                   help="angle-sum equations instead of polynomial ones")
    p.add_argument("--delta0", type=int, default=None,
                   help="distinguished sphere face")
    p.add_argument("--e0", default=None, metavar="F,S",
                   help="distinguished edge (side key) for reduced systems")
    p.add_argument("--v0", type=int, default=None,
                   help="distinguished vertex for reduced torus systems")
    p.add_argument("--curves", default=None,
                   help="two named curves from the complex file, e.g. "
                   "'lambda,mu'")
    p.add_argument("--pin", action="append", metavar="F,C=V",
                   help="pin a corner value (disc); repeatable")
    p.add_argument("--ratios", default=None, metavar="V=W,...",
                   help="boundary curvature weights per boundary vertex")


def _realize(system, assignment, scale):
    kind = system.complex.kind
    if kind is SurfaceKind.DISC:
        return realize_disc(system, assignment, scale=scale)
    if kind is SurfaceKind.SPHERE:
        return realize_sphere(system, assignment, plane_scale=scale)
    return realize_torus(system, assignment, scale=scale)


def cmd_validate(args) -> int:
    cx = _load_complex(args.complex)
    report = cx.check_hypotheses()
    info = {
        "surface": cx.kind.value,
        "faces": cx.num_faces,
        "edges": cx.num_edges,
        "vertices": cx.num_vertices,
        "boundary_vertices": len(cx.boundary_vertices),
        "euler_characteristic": cx.euler_characteristic,
        "hypothesis_checks": {name: ok for name, ok in report.checks},
        "hypotheses_pass": report.passed,
        "dimension_audit": dimension_audit(
            assemble_system(cx)).to_json_dict(),
    }
    _write(args.output, json.dumps(info, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_equations(args) -> int:
    cx = _load_complex(args.complex)
    system = _system_from_args(cx, args)
    _write(args.output, system.to_json())
    return EXIT_OK


def cmd_solve(args) -> int:
    cx = _load_complex(args.complex)
    system = _system_from_args(cx, args)
    cfg = SolveConfig(seed=args.seed,
                      max_iterations=args.max_iterations,
                      residual_tolerance=args.tolerance,
                      collect_trace=args.trace is not None)
    if args.init:
        cfg.initial = _load_assignment(args.init)
    report = solve(system, cfg)
    _write(args.output, report.to_json())
    if args.trace:
        _write(args.trace, report.trace_csv())
    if not report.converged:
        print(f"did not converge: residual {report.residual_norm:.3e}",
              file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def cmd_layout(args) -> int:
    cx = _load_complex(args.complex)
    system = _system_from_args(cx, args)
    assignment = _load_assignment(args.assignment)
    packing = _realize(system, assignment, args.scale)
    _write(args.output, packing.to_json())
    if args.svg:
        _write(args.svg, packing_svg(packing))
    return EXIT_OK


def cmd_verify(args) -> int:
    cx = _load_complex(args.complex)
    system = _system_from_args(cx, args)
    tol = args.tolerance
    out = {}
    ok = True
    assignment = _load_assignment(args.assignment)
    vr = verify_solution(system, assignment, tol=tol)
    out["solution"] = vr.to_json_dict()
    ok &= vr.passed
    if args.packing:
        with open(args.packing) as fh:
            packing = Packing.from_json(fh.read())
    elif vr.passed:
        packing = _realize(system, assignment, args.scale)
    else:
        packing = None
    if packing is not None:
        cr = check_packing(packing, tol=tol)
        out["packing"] = cr.to_json_dict()
        ok &= cr.passed
    _write(args.output, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_descartes(args) -> int:
    rows = ["seed,n,beta,residual,normalized"]
    worst = 0.0
    for k in range(args.count):
        seed = args.seed + k
        flower = random_flower(args.flower_n, args.beta, seed=seed)
        ms = m_from_flower(flower)
        res = symmetric_descartes_residual(ms)
        nres = normalized_descartes_residual(ms)
        worst = max(worst, abs(nres))
        rows.append(f"{seed},{args.flower_n},{args.beta},{res!r},{nres!r}")
    _write(args.output, "\n".join(rows) + "\n")
    return EXIT_OK if worst < args.threshold else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="soddy",
        description="Circle packings of triangulated discs, spheres and "
        "tori via polynomial corner equations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="classify a complex and audit it")
    p.add_argument("complex")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("equations", help="write the equation system JSON")
    p.add_argument("complex")
    _add_system_args(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_equations)

    p = sub.add_parser("solve", help="solve for a positive assignment")
    p.add_argument("complex")
    _add_system_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--init", default=None,
                   help="assignment JSON to start from")
    p.add_argument("--trace", default=None, metavar="CSV",
                   help="write the iteration trace")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("layout", help="realize a packing from a solution")
    p.add_argument("complex")
    _add_system_args(p)
    p.add_argument("--assignment", required=True,
                   help="solve report or assignment JSON")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--svg", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("verify", help="re-check a solution and its packing")
    p.add_argument("complex")
    _add_system_args(p)
    p.add_argument("--assignment", required=True)
    p.add_argument("--packing", default=None)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=_default_tol())
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("descartes", help="run random-flower identity checks")
    p.add_argument("--flower-n", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--threshold", type=float, default=1e-10)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_descartes)
    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return EXIT_USAGE if ex.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (errors.OptionMismatch, errors.InvalidReductionChoice,
            errors.ComplexError, errors.CurveError, FileNotFoundError,
            KeyError, ValueError) as ex:
        json.dump({"error": type(ex).__name__, "message": str(ex)},
                  sys.stderr)
        sys.stderr.write("\n")
        return EXIT_USAGE
    except (errors.Underdetermined, errors.DidNotConverge,
            errors.NonFiniteResidual) as ex:
        json.dump({"error": type(ex).__name__, "message": str(ex)},
                  sys.stderr)
        sys.stderr.write("\n")
        return EXIT_NOCONV
    except errors.SoddyError as ex:
        json.dump({"error": type(ex).__name__, "message": str(ex)},
                  sys.stderr)
        sys.stderr.write("\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

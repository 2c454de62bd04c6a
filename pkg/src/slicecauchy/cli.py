"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or input error,
3 numeric or geometry error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import verify
from .algebra import (
    Algebra,
    Element,
    builtin_algebra,
    dump_algebra,
    load_algebra,
    validate_alternative,
    validate_involution,
)
from .cauchy import QuadratureParams, evaluate_record
from .cone import default_imaginary_unit, is_imaginary_unit, plane_coordinate
from .errors import AlgebraError, SliceError
from .geometry import Contour, PlanarDomain
from .literals import LiteralError, parse_element, parse_polynomial
from .series import (
    convergence_report,
    default_contour,
    power_coefficients,
    spherical_coefficients,
)
from .slices import Poly, SliceFunction, conjugation, half_plane_function, stem_from_dict

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument helpers ----------------------------------------------------------------


def _algebra(args) -> Algebra:
    if getattr(args, "spec", None):
        return load_algebra(Path(args.spec))
    return builtin_algebra(args.algebra or "quaternions")


def _symbols(args, alg: Algebra) -> dict[str, Element]:
    if getattr(args, "J", None):
        return {"J": parse_element(args.J, alg)}
    return {}


def _unit(args, alg: Algebra) -> Element:
    J = _symbols(args, alg).get("J")
    if J is None:
        J = default_imaginary_unit(alg)
    if not is_imaginary_unit(J):
        raise UsageError(f"--J {args.J!r} is not a square root of -1")
    return J


def _function(spec: str, alg: Algebra, symbols: dict[str, Element], domain=None) -> SliceFunction:
    kind, _, rest = spec.partition(":")
    if kind == "poly":
        return SliceFunction(Poly(parse_polynomial(rest, alg, symbols)), alg, domain)
    if kind == "conj":
        return conjugation(alg, domain)
    if kind == "halfplane":
        J = parse_element(rest, alg, symbols) if rest else symbols.get("J", default_imaginary_unit(alg))
        return half_plane_function(J)
    if kind == "json":
        data = json.loads(Path(rest).read_text())
        return SliceFunction(stem_from_dict(data.get("stem", data)), alg, domain)
    raise UsageError(f"unknown function form {spec!r}; use poly:, conj, halfplane: or json:")


def _params(args) -> QuadratureParams:
    n = args.N
    nr, nt = args.area_nodes
    if getattr(args, "quick", False):
        n, nr, nt = max(n // 2, 1), max(nr // 2, 1), max(nt // 2, 1)
    return QuadratureParams(n, args.area_scheme, (nr, nt))


def _emit(payload, args, csv_text: str | None = None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "csv", False) and csv_text is not None:
        text = csv_text
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------------


def cmd_algebra_info(args) -> int:
    alg = _algebra(args)
    if args.dump:
        dump_algebra(alg, Path(args.dump))
    _emit({"name": alg.name, "dim": alg.dim, "basis": list(alg.basis_names),
           "conj_diagonal": np.diag(alg.conj_matrix).tolist()}, args)
    return EXIT_OK


def cmd_validate(args) -> int:
    alg = _algebra(args)
    alt = validate_alternative(alg, samples=args.samples, seed=args.seed)
    inv = validate_involution(alg, samples=args.samples, seed=args.seed)
    _emit({"algebra": alg.name, "alternative": alt.to_dict(), "involution": inv.to_dict()}, args)
    return EXIT_OK if alt.passed and inv.passed else EXIT_CHECK


def cmd_eval(args) -> int:
    alg = _algebra(args)
    sym = _symbols(args, alg)
    f = _function(args.f, alg, sym)
    x = parse_element(args.x, alg, sym)
    _emit({"x": x.coeffs.tolist(), "value_coeffs": f(x).coeffs.tolist(), "basis": list(alg.basis_names)}, args)
    return EXIT_OK


def cmd_cauchy(args) -> int:
    alg = _algebra(args)
    sym = _symbols(args, alg)
    J = _unit(args, alg)
    domain = PlanarDomain.disk(0, args.radius)
    f = _function(args.f, alg, sym, domain if args.mode == "pompeiu" else None)
    x = parse_element(args.x, alg, sym)
    rec = evaluate_record(args.mode, f, domain, J, x, _params(args))
    payload = rec.to_dict()
    payload["mode"] = args.mode
    payload["basis"] = list(alg.basis_names)
    _emit(payload, args)
    return EXIT_OK


def cmd_expand(args) -> int:
    alg = _algebra(args)
    sym = _symbols(args, alg)
    J = _unit(args, alg)
    if args.x0 is None:
        raise UsageError("expand needs --x0/--center")
    x0 = parse_element(args.x0, alg, sym)
    f = _function(args.f, alg, sym)
    params = _params(args)
    if args.contour_radius is not None:
        contour = Contour.circle(plane_coordinate(x0, J), args.contour_radius, params.boundary_nodes)
    elif args.r is not None and args.r_prime is not None:
        contour = default_contour(x0, J, args.r, args.r_prime, params.boundary_nodes)
    else:
        raise UsageError("expand needs --contour-radius or both --r and --r-prime")
    fn = power_coefficients if args.kind == "power" else spherical_coefficients
    result = fn(f, contour, x0, J, args.K, params)
    csv_text = None
    payload = result.to_dict()
    if args.r is not None and args.r_prime is not None:
        rep = convergence_report(f, x0, J, args.r, args.r_prime, args.K, params, args.kind,
                                 seed=args.seed, plane_only=args.plane_only, contour=contour)
        payload["residual_norms"] = [r for _, r in rep.rows]
        payload["convergence"] = rep.to_dict()
        csv_text = rep.to_csv()
        if args.residual_csv:
            Path(args.residual_csv).write_text(csv_text)
    _emit(payload, args, csv_text)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    results = verify.run_all(quick=args.quick, seed=args.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    checks = []
    for r in results:
        d = r.to_dict()
        d.pop("seconds")
        if d["details"].get("timing"):
            d["measured"] = None  # wall-clock values would make the report non-reproducible
        checks.append(d)
    _emit({"passed": ok, "quick": args.quick, "checks": checks}, args)
    return EXIT_OK if ok else EXIT_CHECK


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slicecauchy", description="Slice functions over real alternative algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_flags(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--algebra", "--builtin", dest="algebra",
                       help="builtin name: complex, quaternions, octonions, sedenions, clifford:p,q")
        g.add_argument("--spec", help="algebra JSON file")
        sp.add_argument("--out", help="write the payload to this file instead of stdout")

    def numeric_flags(sp):
        sp.add_argument("--N", type=int, default=1024, help="boundary quadrature nodes")
        sp.add_argument("--area-nodes", type=int, nargs=2, default=(256, 512), metavar=("NR", "NTHETA"))
        sp.add_argument("--area-scheme", choices=("polar", "cartesian"), default="polar")
        sp.add_argument("--quick", action="store_true", help="halve all node counts")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("algebra-info", help="basis and dimension of an algebra")
    algebra_flags(sp)
    sp.add_argument("--dump", help="also write the algebra as JSON to this path")
    sp.set_defaults(run=cmd_algebra_info)

    sp = sub.add_parser("validate", help="alternativity and involution checks")
    algebra_flags(sp)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(run=cmd_validate)

    sp = sub.add_parser("eval", help="evaluate a slice function at a point")
    algebra_flags(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--J")
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("cauchy", help="evaluate a Cauchy-type formula on a disk")
    algebra_flags(sp)
    numeric_flags(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--J")
    sp.add_argument("--mode", choices=("slice", "pointwise", "pompeiu"), default="slice")
    sp.add_argument("--radius", type=float, default=2.0, help="disk radius")
    sp.set_defaults(run=cmd_cauchy)

    sp = sub.add_parser("expand", help="power or spherical expansion coefficients")
    algebra_flags(sp)
    numeric_flags(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--J")
    sp.add_argument("--x0", "--center", dest="x0")
    sp.add_argument("--kind", choices=("power", "spherical"), required=True)
    sp.add_argument("--K", type=int, default=6)
    sp.add_argument("--contour-radius", type=float)
    sp.add_argument("--r", type=float)
    sp.add_argument("--r-prime", type=float)
    sp.add_argument("--plane-only", action="store_true", help="sample residuals only in the plane of J")
    sp.add_argument("--csv", action="store_true", help="emit the residual table as CSV")
    sp.add_argument("--residual-csv", help="also write the residual table to this path")
    sp.set_defaults(run=cmd_expand)

    sp = sub.add_parser("verify-paper", help="run the reproduction checks")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_verify_paper)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, LiteralError, AlgebraError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SliceError, ZeroDivisionError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

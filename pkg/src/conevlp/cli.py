"""Command-line front end.

Exit codes: 0 success, 2 no solution exists (certificate printed),
3 infeasible, 4 parse or validation error, 5 desk-scale limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .benson import solve_via_benson
from .duality import verify_geometric_duality
from .extract import (
    NoSolutionCertificate,
    extract_dual,
    extract_primal,
)
from .formats import ParseError
from .polyhedra import DeskScaleError, face_lattice
from .projection import ConeHRep, solve_p, solve_p_star
from .vlp import (
    InfeasibleProblemError,
    VlpInstance,
    VlpValidationError,
    build_gh,
    dual_is_feasible,
    lower_image_hrep,
    upper_image_hrep,
)

EXIT_OK = 0
EXIT_NO_SOLUTION = 2
EXIT_INFEASIBLE = 3
EXIT_PARSE = 4
EXIT_SCALE = 5


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    kind = formats.detect_format(text)
    if kind == "cone":
        return formats.parse_cone_file(text)
    return formats.parse_vlp_file(text)


def _cone_solutions(cone: ConeHRep, algorithm: str, trace: bool):
    if algorithm == "benson":
        tracer = None
        if trace:
            def tracer(step, vertex, cut, nverts):
                print(
                    f"trace: cut {step} at vertex ({formats.fmt_vec(vertex)}) "
                    f"inequality {cut} vertices {nverts}",
                    file=sys.stderr,
                )
        return solve_via_benson(cone, trace=tracer)
    return solve_p(cone), solve_p_star(cone)


def _emit(report, as_json: bool) -> None:
    sys.stdout.write(report.json() if as_json else report.text())


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="conevlp",
        description="Exact solver for linear vector optimisation via cone projection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "solve the vector problem (primal side)"),
        ("solve-dual", "solve the geometric dual problem"),
        ("project", "solve the cone projection problem"),
        ("polar", "solve the polar-cone generation problem"),
        ("faces", "face lattices of the upper and lower images"),
        ("verify-duality", "check the geometric duality correspondence"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("input", help="instance file (cone or vlp format)")
        cmd.add_argument(
            "--algorithm",
            choices=("dd", "benson"),
            default="dd",
            help="direct double description or the outer-approximation route",
        )
        cmd.add_argument("--json", action="store_true", help="structured output")
        cmd.add_argument("--trace", action="store_true", help="stream cutting steps")
        cmd.add_argument(
            "--decimals",
            type=int,
            default=None,
            metavar="N",
            help="annotate rationals with N-digit decimal approximations",
        )
    args = parser.parse_args(argv)

    try:
        instance = _load(args.input)
        if args.command in ("solve", "solve-dual", "faces", "verify-duality") and not isinstance(
            instance, VlpInstance
        ):
            raise ParseError(f"command '{args.command}' needs a vlp instance file")

        if args.command in ("project", "polar"):
            cone = instance if isinstance(instance, ConeHRep) else build_gh(instance)
            primal, polar = _cone_solutions(cone, args.algorithm, args.trace)
            if args.command == "project":
                report = formats.render_cone_solution("project", primal, ("x", "y"), args.decimals)
            else:
                report = formats.render_cone_solution("polar", polar, ("u", "w"), args.decimals)
            _emit(report, args.json)
            return EXIT_OK

        if args.command == "solve":
            cone = build_gh(instance)
            primal_cs, _ = _cone_solutions(cone, args.algorithm, args.trace)
            sol = extract_primal(instance, primal_cs)
            report = formats.render_primal(instance, sol, args.decimals)
            _emit(report, args.json)
            return EXIT_NO_SOLUTION if isinstance(sol, NoSolutionCertificate) else EXIT_OK

        if args.command == "solve-dual":
            if not dual_is_feasible(instance):
                raise InfeasibleProblemError("the dual feasible set is empty")
            cone = build_gh(instance)
            _, polar_cs = _cone_solutions(cone, args.algorithm, args.trace)
            sol = extract_dual(instance, polar_cs)
            report = formats.render_dual(instance, sol, args.decimals)
            _emit(report, args.json)
            return EXIT_NO_SOLUTION if isinstance(sol, NoSolutionCertificate) else EXIT_OK

        if args.command == "faces":
            if not dual_is_feasible(instance):
                raise InfeasibleProblemError("the dual feasible set is empty")
            upper = face_lattice(upper_image_hrep(instance))
            lower = face_lattice(lower_image_hrep(instance))
            _emit(formats.render_faces(upper, lower, args.decimals), args.json)
            return EXIT_OK

        if args.command == "verify-duality":
            if not dual_is_feasible(instance):
                raise InfeasibleProblemError("the dual feasible set is empty")
            report = verify_geometric_duality(instance)
            _emit(formats.render_duality(report, args.decimals), args.json)
            return EXIT_OK

        raise AssertionError(f"unhandled command {args.command}")
    except (ParseError, VlpValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DeskScaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

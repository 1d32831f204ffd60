"""Command line front end: ``classify``, ``diagram``, ``simulate``, ``verify``.

Exit status: 0 success, 1 usage error, 2 numerical failure (chart exit or
step failure), 3 verification failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .bifurcation import bifurcation_diagram, classify_top, trunk_flip
from .dynamics import (ADAPTIVE_RK, IMPLICIT_MIDPOINT, BoundaryExit, IntegratorConfig,
                       ReducedSystem, SphereSystem, StepFailure, integrate,
                       relative_equilibrium_point)
from .potential import DomainError, PotentialSpecError, parse_potential
from .reduction_checks import DEFAULT_SEED, embed_f, verify

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _tol(text: str):
    try:
        rel, abs_ = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected REL,ABS, got {text!r}") from None
    if not (rel > 0 and abs_ > 0):
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return rel, abs_


def _float_list(text: str):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default: json for classify/verify, csv otherwise)")
    common.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
    common.add_argument("--tol", type=_tol, default=(1e-10, 1e-10), metavar="REL,ABS",
                        help="integrator tolerances")

    parser = _Parser(prog="sleeping-top", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="stability case of the upright top")
    p.add_argument("potential")

    p = sub.add_parser("diagram", parents=[common], help="bifurcation diagram over an r-grid")
    p.add_argument("potential")
    p.add_argument("r_min", type=float)
    p.add_argument("r_max", type=float)
    p.add_argument("steps", type=int)

    p = sub.add_parser("simulate", parents=[common], help="integrate the reduced or sphere system")
    p.add_argument("system", choices=("reduced", "sphere"))
    p.add_argument("potential")
    p.add_argument("r", type=float)
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--pu", type=float, default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--px", type=float, default=None)
    p.add_argument("--py", type=float, default=None)
    p.add_argument("--releq-u", type=float, default=None,
                   help="start on the relative equilibrium through u (sphere system)")
    p.add_argument("--T", type=float, default=100.0)
    p.add_argument("--scheme", choices=(ADAPTIVE_RK, IMPLICIT_MIDPOINT), default=ADAPTIVE_RK)
    p.add_argument("--max-step", type=float, default=float("inf"))
    p.add_argument("--step", type=float, default=1e-2, help="fixed step of ImplicitMidpoint")

    p = sub.add_parser("verify", parents=[common], help="numerical checks of the reduction map")
    p.add_argument("--r", type=_float_list, default=[0.0, 0.5, 1.8, 2.0, 5.0])
    p.add_argument("--n", type=int, default=200)
    return parser


def run_config(args: argparse.Namespace) -> dict:
    """Parsed arguments as a plain, deterministic dict echoed into JSON output."""
    out = {}
    for key, val in sorted(vars(args).items()):
        if isinstance(val, Path):
            val = str(val)
        elif isinstance(val, tuple):
            val = list(val)
        elif isinstance(val, float) and not np.isfinite(val):
            val = None
        out[key] = val
    return out


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def _info(args, message: str):
    # summaries go to stderr when the data itself is on stdout
    print(message, file=sys.stderr if args.out is None else sys.stdout)


def cmd_classify(args) -> int:
    W = parse_potential(args.potential)
    rep = classify_top(W)
    lines = [f"potential: {args.potential}", f"case: {rep.case}",
             f"W'(0) = {serialize.fmt(rep.w1)}", f"W''(0) = {serialize.fmt(rep.w2)}",
             f"r0 = {serialize.fmt(rep.r0) if rep.r0 is not None else 'none'}"]
    doc = serialize.dumps({"config": run_config(args), "report": vars(rep)}) + "\n"
    print("\n".join(lines))
    if args.out is None:
        sys.stdout.write(doc)
    else:
        _emit(doc, args.out)
    return EXIT_OK


def cmd_diagram(args) -> int:
    W = parse_potential(args.potential)
    if not 0 <= args.r_min < args.r_max or args.steps < 2:
        raise UsageError("need 0 <= r_min < r_max and steps >= 2")
    diagram = bifurcation_diagram(W, args.r_min, args.r_max, args.steps)
    if args.format == "json":
        text = serialize.diagram_to_json(diagram, run_config(args))
    else:
        text = serialize.diagram_to_csv(diagram)
    _emit(text, args.out)
    flip = trunk_flip(diagram)
    _info(args, f"case {diagram.report.case}; trunk flip at r = "
                f"{'none' if flip is None else serialize.fmt(flip)}; "
                f"{len(diagram.branch)} branch samples")
    return EXIT_OK


def _initial_state(args):
    if args.system == "reduced":
        if args.releq_u is not None:
            return (args.releq_u, 0.0)
        return (args.u or 0.0, args.pu or 0.0)
    W = parse_potential(args.potential)
    if args.releq_u is not None:
        return tuple(relative_equilibrium_point(W, args.r, args.releq_u))
    if args.u is not None or args.pu is not None:
        return tuple(embed_f(args.r, args.u or 0.0, args.pu or 0.0))
    return (args.x or 0.0, args.y or 0.0, args.px or 0.0, args.py or 0.0)


def _write_trajectory(args, traj):
    if args.format == "json":
        text = serialize.trajectory_to_json(traj, run_config(args))
    else:
        text = serialize.trajectory_to_csv(traj)
    _emit(text, args.out)


def cmd_simulate(args) -> int:
    W = parse_potential(args.potential)
    cfg = IntegratorConfig(rel_tol=args.tol[0], abs_tol=args.tol[1], max_step=args.max_step,
                           scheme=args.scheme, step=args.step)
    system = (ReducedSystem if args.system == "reduced" else SphereSystem)(W, args.r)
    s0 = _initial_state(args)
    try:
        traj = integrate(system, s0, args.T, cfg)
    except BoundaryExit as exc:
        _write_trajectory(args, exc.trajectory)
        print(f"boundary exit at t = {serialize.fmt(exc.t_exit)}", file=sys.stderr)
        return EXIT_NUMERIC
    except StepFailure as exc:
        print(f"step failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _write_trajectory(args, traj)
    radius = np.sqrt(np.sum(traj.states[:, : len(traj.labels) // 2] ** 2, axis=1))
    _info(args, f"final energy_drift = {serialize.fmt(traj.energy_drift[-1])}; "
                f"final moment_drift = {serialize.fmt(traj.moment_drift[-1])}; "
                f"max |u| = {serialize.fmt(radius.max())}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    reports = verify(args.r, args.n, args.seed)
    _emit(serialize.reports_to_json(reports), args.out)
    failed = [rep for rep in reports if not rep.passed]
    for rep in failed:
        print(f"FAIL {rep.name} r={rep.r:g}: {rep.max_residual:.3g} >= {rep.threshold:g}",
              file=sys.stderr)
    _info(args, f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"classify": cmd_classify, "diagram": cmd_diagram,
            "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PotentialSpecError, UsageError, DomainError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

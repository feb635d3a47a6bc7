"""Command-line entry point: ``check``, ``compute`` and ``verify-pde``.

Exit status 0 means success, 1 a mathematical rejection (the configuration
or a theorem check failed), 2 a usage or I/O problem.  Every flag can also be
given through an environment variable ``ELLPERIODS_<FLAG>``, e.g.
``ELLPERIODS_PRECISION=128``; command-line flags win.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import PipelineError
from .serialize import InputFormatError, dumps, load_points, pde_record, period_record

ENV_PREFIX = "ELLPERIODS_"
EXIT_OK, EXIT_REJECTED, EXIT_USAGE = 0, 1, 2

PDE_TOLERANCE = 1e-8
PDE_DIAGONAL_TOLERANCE = 1e-40
PDE_CONDITION_LIMIT = 1e6
PDE_RATIO_RANGE = (3.5, 4.5)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class JobConfig:
    command: str
    points: object = None          # None: the reference configuration
    precision: int = 256
    delta: Fraction = Fraction(1, 2 ** 20)
    seed: object = None
    out: object = None

    def __post_init__(self):
        if self.precision < 64:
            raise UsageError(f"precision must be at least 64 bits, got {self.precision}")
        d = Fraction(self.delta)
        if d <= 0 or d.denominator & (d.denominator - 1):
            raise UsageError(f"delta must be a positive dyadic rational, got {self.delta}")


def parse_dyadic(text):
    """``2^-20``, ``2**-20``, ``1/1048576`` or a decimal such as ``0.5``."""
    t = text.strip().replace("**", "^")
    try:
        if t.startswith("2^"):
            return Fraction(2) ** int(t[2:])
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read delta {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="ellperiods",
                                description="Period matrices of rational elliptic surfaces "
                                            "obtained by blowing up eight plane points.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (("check", "general position and genericity only"),
                       ("compute", "full period-matrix computation"),
                       ("verify-pde", "finite-difference check of the differential system")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--points", help="JSON file: array of 8 arrays of 3 integer strings")
        s.add_argument("--precision", type=int, help="working precision in bits (default 256)")
        s.add_argument("--delta", help="dyadic step for verify-pde (default 2^-20)")
        s.add_argument("--seed", type=int, help="draw the verify-pde directions from this seed")
        s.add_argument("--out", help="write the JSON result here instead of stdout")
    return p


def resolve_config(args, environ=None):
    env = os.environ if environ is None else environ

    def pick(name):
        v = getattr(args, name)
        return v if v is not None else env.get(ENV_PREFIX + name.upper())

    try:
        precision = int(pick("precision") or 256)
        seed = pick("seed")
        seed = int(seed) if seed is not None else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    delta = pick("delta")
    return JobConfig(args.command, pick("points"), precision,
                     parse_dyadic(str(delta)) if delta is not None else Fraction(1, 2 ** 20),
                     seed, pick("out"))


def _configuration(job):
    from .geometry import PointConfig
    from .pipeline import reference_configuration
    if job.points is None:
        return reference_configuration()
    return PointConfig(load_points(job.points))


def _emit(record, job):
    text = dumps(record)
    if job.out:
        with open(job.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(job):
    from .geometry import anticanonical_model, certify_genericity, check_general_position
    from .geometry import model_from_configuration
    cfg = _configuration(job)
    record = {"points": [[str(c) for c in p] for p in cfg.integer_points()]}
    gp = check_general_position(cfg)
    record["general_position"] = gp.to_dict()
    status = EXIT_OK
    if gp.ok:
        try:
            model = model_from_configuration(cfg, anticanonical=anticanonical_model(cfg))
            cert, model = certify_genericity(model)
            record["genericity"] = cert.to_dict()
        except PipelineError as exc:
            record["genericity"] = exc.report()
            status = EXIT_REJECTED
    else:
        status = EXIT_REJECTED
    record["certified"] = status == EXIT_OK
    _emit(record, job)
    return status


def cmd_compute(job):
    from .pipeline import run_pipeline
    result = run_pipeline(_configuration(job), job.precision)
    _emit(period_record(result), job)
    return EXIT_OK


def cmd_verify_pde(job):
    from .pde import default_directions, random_directions, richardson
    cfg = _configuration(job)
    directions = default_directions() if job.seed is None else random_directions(job.seed)
    rep = richardson(cfg, job.delta, job.precision, directions)
    r = rep.coarse
    criteria = {
        "residuals_below": str(PDE_TOLERANCE),
        "residuals_ok": bool(r.worst() < PDE_TOLERANCE),
        "ratios_ok": rep.within(*PDE_RATIO_RANGE),
        "diagonal_ok": bool(r.residual_c_diagonal < PDE_DIAGONAL_TOLERANCE),
        "condition_ok": bool(r.condition < PDE_CONDITION_LIMIT),
    }
    _emit(pde_record(r, job.precision, cfg.integer_points(), directions, rep.jacobian, rep, criteria),
          job)
    return EXIT_OK if all(v for k, v in criteria.items() if k.endswith("_ok")) else EXIT_REJECTED


COMMANDS = {"check": cmd_check, "compute": cmd_compute, "verify-pde": cmd_verify_pde}


def main(argv=None, environ=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        job = resolve_config(args, environ)
        return COMMANDS[job.command](job)
    except (UsageError, InputFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed point sets (wrong count, zero vectors) are input problems
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PipelineError as exc:
        print(json.dumps(exc.report()), file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())

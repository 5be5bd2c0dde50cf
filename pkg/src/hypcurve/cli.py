"""Command-line entry point.

Exit codes: 0 success, 1 numeric failure, 2 degenerate pair, 3 malformed or
invalid input, 4 unsupported petal kind or parameter out of range,
5 infeasible Pick problem.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import interpolation, operators, petals
from .errors import (
    DegenerateInputError,
    DomainError,
    HypCurveError,
    NumericError,
    PreconditionError,
    UnsupportedError,
)
from .intersection import BlaschkePair, solve_pair

EXIT_OK, EXIT_NUMERIC, EXIT_DEGENERATE, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_INFEASIBLE = 0, 1, 2, 3, 4, 5
DIGITS = 12


class InputError(Exception):
    pass


def _clean(obj):
    """Round floats to a fixed number of significant digits for stable output."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        x = float(f"{x:.{DIGITS}g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    return obj


def _emit(obj, out):
    out.write(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


# --------------------------------------------------------------------------

def cmd_intersect(args, out):
    try:
        pair = BlaschkePair.from_json(_load(args.file))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid pair: {exc}") from exc
    report = solve_pair(pair, tol=args.tol, seed=args.seed)
    if args.out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re_lambda", "im_lambda", "re_mu", "im_mu", "region", "multiplicity"])
        for p in report.points:
            w.writerow([*_clean([p.lam.real, p.lam.imag, p.mu.real, p.mu.imag]), p.region, p.multiplicity])
        out.write(buf.getvalue())
    else:
        _emit(report.to_json(), out)
    return EXIT_DEGENERATE if report.degenerate else EXIT_OK


def _petal(args):
    kind = args.kind
    if kind == "neil":
        spec = petals.cusp1(args.alpha)
        return spec, petals.neil_holization(args.alpha), {}
    if kind == "crossing":
        spec = petals.single_crossing(args.a1, args.a2)
        h = petals.single_crossing_holization(args.a1, args.a2)
        return spec, h, {"invariant": petals.single_crossing_invariant(args.a1, args.a2)}
    if kind == "triple":
        spec = petals.triple_point(0, args.a2, args.a3)
        h = petals.triple_point_embedding(args.a2, args.a3)
        M = petals.triple_point_jacobian_closed_form(args.a2, args.a3)
        return spec, h, {"jacobian_determinant": complex(np.linalg.det(M))}
    if kind == "cusp2":
        if args.cmod is None:
            raise InputError("cusp2 needs --cmod")
        try:
            h, c = petals.cusp2_holization(args.cmod)
        except DomainError as exc:
            raise UnsupportedError(str(exc)) from exc
        alpha = complex(h.components[1].num.coeffs[2])
        return petals.cusp2(c), h, {"realized_c": c, "alpha": alpha}
    if kind == "twocross":
        try:
            h = petals.two_crossing_holization(args.a1, args.a2, args.b1, args.b2)
        except PreconditionError as exc:
            raise UnsupportedError(str(exc)) from exc
        return petals.two_crossings(args.a1, args.a2, args.b1, args.b2), h, {}
    if kind == "nodal":
        return None, petals.nodal_cubic_fixture(), {"connection": "nodal"}
    if kind == "a3":
        return None, petals.a3_fixture(), {"connection": "a3"}
    raise UnsupportedError(f"unsupported petal kind {kind!r}")


def cmd_petal(args, out):
    spec, h, extra = _petal(args)
    if spec is not None:
        conn = spec.connection
    else:
        conn = petals.nodal_cubic_connection() if args.kind == "nodal" else petals.a3_connection()
    checks = []
    for comp in h.components:
        ok, res = petals.verify_membership(comp, conn, args.tol)
        checks.append({"member": ok, "residuals": res})
    body = {
        "kind": args.kind,
        "holization": h.to_json(),
        "ambient_dim": h.ambient_dim,
        "membership": checks,
        **extra,
    }
    if spec is not None:
        body["spec"] = spec.to_json()
    _emit(body, out)
    return EXIT_OK


def cmd_pick(args, out):
    obj = _load(args.file)
    try:
        prob = interpolation.PickProblem.from_json(obj)
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"invalid problem: {exc}") from exc
    verdict = interpolation.analyze(prob, args.tol)
    _emit(verdict.to_json(), out)
    return EXIT_OK if verdict.solvable else EXIT_INFEASIBLE


def cmd_opcheck(args, out):
    obj = _load(args.file)
    try:
        if "T1" in obj:
            T = operators.OperatorPair.from_json(obj)
            ok, sup, marginal = operators.spectral_set_test(T, args.grid, args.tol)
            comm, var = T.relation_residuals()
            body = {"spectral_set": ok, "sup_norm": sup, "marginal": marginal,
                    "commutator_residual": comm, "relation_residual": var}
        else:
            A = operators.matrix_from_json(obj["A"])
            B = operators.matrix_from_json(obj["B"])
            body = {"sup_norm": operators.pencil_sup_norm(A, B, args.grid)}
            try:
                lhs, rhs = operators.lemma_equivalence(A, B, args.grid, args.tol)
                body.update(lhs=lhs, rhs=rhs, agree=lhs == rhs)
            except DomainError as exc:
                body.update(lhs=body["sup_norm"] <= 1 + args.tol, rhs=None, rhs_error=str(exc))
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"invalid operator input: {exc}") from exc
    _emit(body, out)
    return EXIT_OK


def cmd_wold(args, out):
    obj = _load(args.file)
    try:
        T = operators.OperatorPair.from_json(obj)
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"invalid operator input: {exc}") from exc
    try:
        body = {"unitary": True, **operators.wold_decompose(T).to_json()}
    except UnsupportedError:
        body = {"unitary": False, "defects": operators.wold_defect_report(T)}
    _emit(body, out)
    return EXIT_OK


def cmd_neil_extreme(args, out):
    mu = operators.herglotz_masses(args.atoms)
    body = {**mu.to_json(), "residual": operators.herglotz_residual(mu),
            "first_moment": mu.first_moment()}
    if args.alphas is not None and args.betas is not None:
        body["zero_moduli_match"] = operators.min_inner_zero_check(args.alphas, args.betas)
    _emit(body, out)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", type=int, default=operators.GRID)
    common.add_argument("--out", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="hypcurve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("intersect", parents=[common], help="intersection points of a Blaschke pair")
    p.add_argument("file")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("petal", parents=[common], help="build and verify a petal holization")
    p.add_argument("kind")
    for name in ("alpha", "a1", "a2", "a3", "b1", "b2"):
        p.add_argument(f"--{name}", type=_complex, default=0j)
    p.add_argument("--cmod", type=float)
    p.set_defaults(func=cmd_petal)

    p = sub.add_parser("pick", parents=[common], help="Pick-matrix feasibility")
    p.add_argument("file")
    p.set_defaults(func=cmd_pick)

    p = sub.add_parser("opcheck", parents=[common], help="spectral-set test or lemma check")
    p.add_argument("file")
    p.set_defaults(func=cmd_opcheck)

    p = sub.add_parser("wold", parents=[common], help="Wold-type decomposition of an operator pair")
    p.add_argument("file")
    p.set_defaults(func=cmd_wold)

    p = sub.add_parser("neil-extreme", parents=[common], help="Herglotz masses for extreme points")
    p.add_argument("--atoms", type=lambda s: [float(x) for x in s.split(",")], required=True)
    p.add_argument("--alphas", type=lambda s: [_complex(x) for x in s.split(",")])
    p.add_argument("--betas", type=lambda s: [_complex(x) for x in s.split(",")])
    p.set_defaults(func=cmd_neil_extreme)
    return parser


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.tol <= 0 or args.grid < 64:
        err.write("error: --tol must be positive and --grid at least 64\n")
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except UnsupportedError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_UNSUPPORTED
    except DegenerateInputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DEGENERATE
    except NumericError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NUMERIC
    except (DomainError, PreconditionError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except HypCurveError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NUMERIC

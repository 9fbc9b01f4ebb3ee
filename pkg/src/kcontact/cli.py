"""Command-line front end.

Every command prints one JSON report (sorted keys) containing the tool
version, the effective parameters and the result.  Exit status is 0 on
success, 1 when the mathematics rejects the input (e.g. a Reeb parameter
fails its checks) and 2 on unusable input.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .cohomology import PresentationError, dump_presentation, is_primitive, parse_presentation
from .gysin import total_space_betti, total_space_cohomology
from .reeb import (
    InvalidMomentData,
    ParameterRejected,
    ReebParameter,
    SearchExhausted,
    closed_orbit_census,
    dump_moment_data,
    parse_moment_data,
    subtorus_same_fixed_set,
)
from .relations import DEFAULT_DPS, default_tolerance, integer_relations
from .sphere_flow import SpherePoint, WeightedFlow, closure_census, flow, orbit_closure, verify_invariance
from .verdicts import HypothesisError, Hypotheses, chern_criterion, pi1_total_space, sphere_verdict


class InputError(Exception):
    pass


class Rejected(Exception):
    def __init__(self, message: str, result: dict | None = None):
        super().__init__(message)
        self.result = result


# -- literal parsing ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(sqrt)|(\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)|(.))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        out.append(m.group(0).strip())
        pos = m.end()
    return [t for t in out if t]


def parse_real(text: str):
    """Exact-or-irrational literal: ``3``, ``-1.25``, ``2/7``, ``sqrt(2)``, ``1+2*sqrt(3)``.

    Returns a Fraction when the value is rational, otherwise an mpmath real
    at the current working precision.
    """
    toks = _tokens(text)
    if not toks:
        raise InputError(f"empty number literal {text!r}")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise InputError(f"malformed number literal {text!r}")
        pos += 1
        return t

    def atom():
        t = peek()
        if t == "sqrt":
            take()
            take("(")
            arg = expr()
            take(")")
            arg_f = Fraction(arg) if isinstance(arg, Fraction) else None
            if arg < 0:
                raise InputError(f"square root of a negative number in {text!r}")
            if arg_f is not None:
                num, den = arg_f.numerator, arg_f.denominator
                rn, rd = math.isqrt(num), math.isqrt(den)
                if rn * rn == num and rd * rd == den:
                    return Fraction(rn, rd)
            return mpmath.sqrt(_mpf(arg))
        if t == "(":
            take()
            v = expr()
            take(")")
            return v
        if t is not None and (t[0].isdigit() or t[0] == "."):
            take()
            return Fraction(t)
        raise InputError(f"malformed number literal {text!r}")

    def unary():
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
            return sign * unary()
        return atom()

    def term():
        v = unary()
        while peek() in ("*", "/"):
            op = take()
            rhs = unary()
            if op == "*":
                v = v * rhs
            else:
                if rhs == 0:
                    raise InputError(f"division by zero in {text!r}")
                v = v / rhs
        return v

    def expr():
        v = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            v = v + rhs if op == "+" else v - rhs
        return v

    value = expr()
    if pos != len(toks):
        raise InputError(f"malformed number literal {text!r}")
    return value


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def parse_xi(text: str) -> ReebParameter:
    if text.count(";") != 1:
        raise InputError(f"--xi must look like 'a,b,...;c', got {text!r}")
    left, right = text.split(";")
    xi1 = tuple(parse_real(s) for s in left.split(","))
    try:
        return ReebParameter(xi1, parse_real(right))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _number_json(x):
    if isinstance(x, Fraction):
        return str(x)
    return mpmath.nstr(x, 30)


# -- commands ----------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_ring(path: str):
    try:
        return parse_presentation(_read(path))
    except PresentationError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_moment(path: str):
    try:
        return parse_moment_data(_read(path))
    except InvalidMomentData as exc:
        raise InputError(f"{path}: {exc}") from None


def _hypotheses(P, args) -> Hypotheses:
    return Hypotheses(
        pi1_base_trivial=True if args.pi1 == "trivial" else None,
        h2_base_is_Z=P.group(2).free_rank == 1 and not P.group(2).torsion,
        euler_primitive=any(P.euler_class_coords) and is_primitive(P.euler_class_coords),
        hamiltonian_circle_isolated_fixed_points=args.pi1 == "hamiltonian-isolated",
        fixed_point_count=getattr(args, "fixed_points", None),
        base_is_kahler=getattr(args, "kahler", False),
    )


def cmd_total_space(args) -> dict:
    P = _load_ring(args.base)
    try:
        return total_space_cohomology(P).to_json()
    except PresentationError as exc:
        raise Rejected(str(exc)) from None


def cmd_betti(args) -> dict:
    P = _load_ring(args.base)
    return {"betti": total_space_betti(P)}


def cmd_sphere_check(args) -> dict:
    P = _load_ring(args.base)
    try:
        return sphere_verdict(P, _hypotheses(P, args)).to_json()
    except HypothesisError as exc:
        raise Rejected(str(exc)) from None
    except PresentationError as exc:
        raise Rejected(str(exc)) from None


def cmd_pi1_check(args) -> dict:
    P = _load_ring(args.base)
    h = _hypotheses(P, args)
    res = pi1_total_space(h)
    return {
        "pi1_trivial": res,
        "h2_base_is_Z": h.h2_base_is_Z,
        "euler_primitive": h.euler_primitive,
        "base_simply_connected": h.pi1_base_trivial is True or h.hamiltonian_circle_isolated_fixed_points,
    }


def cmd_chern_check(args) -> dict:
    h = Hypotheses(
        hamiltonian_circle_isolated_fixed_points=args.hamiltonian_isolated,
        fixed_point_count=args.fixed_points,
        c1_coefficient=args.c1,
    )
    try:
        return chern_criterion(args.n, h).to_json()
    except HypothesisError as exc:
        raise Rejected(str(exc)) from None


def cmd_reeb_census(args) -> dict:
    d = _load_moment(args.moment)
    if args.tol is None:
        args.tol = default_tolerance(d.torus_rank + 1, args.bound)
    with mpmath.workdps(args.dps):
        xi = parse_xi(args.xi)
        try:
            orbits, check = closed_orbit_census(d, xi, args.bound, args.tol, args.dps)
        except ParameterRejected as exc:
            raise Rejected(str(exc), {"check": exc.check.to_json()}) from None
        except InvalidMomentData as exc:
            raise InputError(str(exc)) from None
        return {
            "xi": {"xi1": [_number_json(x) for x in xi.xi1], "xi2": _number_json(xi.xi2)},
            "check": check.to_json(),
            "orbit_count": len(orbits),
            "orbits": [o.to_json() for o in orbits],
        }


def cmd_subtorus(args) -> dict:
    d = _load_moment(args.moment)
    try:
        basis = subtorus_same_fixed_set(d, args.k, args.bound)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    except SearchExhausted as exc:
        raise Rejected(str(exc)) from None
    return {"basis": [list(v) for v in basis]}


def cmd_sphere_flow(args) -> dict:
    with mpmath.workdps(DEFAULT_DPS):
        exact = [parse_real(s) for s in args.weights.split(",")]
    try:
        w = WeightedFlow(tuple(float(x) for x in exact))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rel_tol = default_tolerance(len(exact), args.bound)
    rels = integer_relations(exact, args.bound, rel_tol)
    out = {
        "relations": [list(r) for r in rels],
        "relation_tol": rel_tol,
        "census": closure_census(w, args.random_points, args.seed, args.bound, args.tol),
        "invariance": verify_invariance(w, args.samples, args.seed, args.invariance_tol),
    }
    if args.point:
        coords = [float(parse_real(s)) for s in args.point.split(",")]
        try:
            p = SpherePoint.normalized(coords)
            c = orbit_closure(w, p, args.bound, args.tol)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        point = {"point": coords, **c.to_json()}
        if c.closed:
            point["return_distance"] = float(max(abs(flow(w, p, c.period).z - p.z)))
        out["point"] = point
    return out


def cmd_validate(args) -> dict:
    files = {}
    for path in args.files:
        text = _read(path)
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = None
        if isinstance(data, dict) and "fixed_points" in data:
            d = _load_moment(path)
            again = parse_moment_data(dump_moment_data(d))
            files[path] = {"kind": "moment", "round_trip": again == d}
        else:
            P = _load_ring(path)
            again = parse_presentation(dump_presentation(P))
            files[path] = {"kind": "ring", "round_trip": dump_presentation(again) == dump_presentation(P)}
    if not all(f["round_trip"] for f in files.values()):
        raise Rejected("round trip changed a file", {"files": files})
    return {"files": files}


# -- driver ------------------------------------------------------------------

def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kcontact", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"kcontact {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def ring_cmd(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--base", required=True, help="ring description file")
        p.set_defaults(func=fn)
        return p

    ring_cmd("total-space", cmd_total_space, "integral cohomology of the total space")
    ring_cmd("betti", cmd_betti, "Betti numbers of the total space")
    for name, fn, help_ in [("sphere-check", cmd_sphere_check, "sphere verdict with justification"),
                            ("pi1-check", cmd_pi1_check, "simple connectivity of the total space")]:
        p = ring_cmd(name, fn, help_)
        p.add_argument("--pi1", choices=["trivial", "hamiltonian-isolated", "unknown"], default="unknown")
        if name == "sphere-check":
            p.add_argument("--fixed-points", type=_positive_int)
            p.add_argument("--kahler", action="store_true")

    p = sub.add_parser("chern-check", parents=[common], help="first Chern class criterion")
    p.add_argument("--n", type=_positive_int, required=True, help="complex dimension of the base")
    p.add_argument("--c1", type=int, required=True, help="c_1(N) as a multiple of x")
    p.add_argument("--fixed-points", type=_positive_int, required=True)
    p.add_argument("--hamiltonian-isolated", action="store_true")
    p.set_defaults(func=cmd_chern_check)

    p = sub.add_parser("reeb-census", parents=[common], help="closed Reeb orbits of a perturbed contact form")
    p.add_argument("--moment", required=True, help="moment data file")
    p.add_argument("--xi", required=True, help="'xi1_1,...,xi1_l;xi2', entries like 2, 1.5, 3/7, sqrt(2)")
    p.add_argument("--bound", type=_positive_int, default=10**6, help="integer relation bound")
    p.add_argument("--tol", type=_positive_float, help="relation tolerance (default scales with the bound)")
    p.add_argument("--dps", type=_positive_int, default=DEFAULT_DPS, help="decimal working precision")
    p.set_defaults(func=cmd_reeb_census)

    p = sub.add_parser("subtorus", parents=[common], help="subtorus with the same fixed set")
    p.add_argument("--moment", required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--bound", type=_positive_int, default=5)
    p.set_defaults(func=cmd_subtorus)

    p = sub.add_parser("sphere-flow", parents=[common], help="weighted Reeb flow on the odd sphere")
    p.add_argument("--lambda", dest="weights", required=True, help="comma-separated positive weights")
    p.add_argument("--point", help="comma-separated real coordinates, normalized to the sphere")
    p.add_argument("--bound", type=_positive_int, default=1000, help="denominator and relation bound")
    p.add_argument("--tol", type=_positive_float, default=1e-9, help="closure tolerance |q r - p|")
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--random-points", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--invariance-tol", type=_positive_float, default=1e-10)
    p.set_defaults(func=cmd_sphere_flow)

    p = sub.add_parser("validate", parents=[common], help="parse and round-trip input files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)
    return ap


def _params(args) -> dict:
    skip = {"func", "command", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = {"tool": "kcontact", "version": __version__, "command": args.command}
    try:
        report["result"] = args.func(args)
        report["status"] = "ok"
        code = 0
    except Rejected as exc:
        report["status"] = "rejected"
        report["error"] = str(exc)
        if exc.result is not None:
            report["result"] = exc.result
        code = 1
    except InputError as exc:
        print(f"kcontact: error: {exc}", file=sys.stderr)
        return 2
    # commands may fill in defaults that depend on the input
    report["parameters"] = _params(args)
    try:
        _emit(report, args.output)
    except OSError as exc:
        print(f"kcontact: error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())

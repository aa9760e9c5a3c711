"""Command-line front end: ``isolab <command> ...``.

Output is JSON (CSV for ``survey``) on stdout.  Exit status: 0 success,
1 domain error (NotStable, UnsupportedMultiplicity, RankUncertain, ...),
2 malformed input.  Errors are reported as ``{"error": {"type", "message"}}``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from ._rational import fmt, fmt_value, to_fraction
from .errors import IsolabError
from .filtered import GrassmannianPoint, t_H, weak_admissible
from .isocrystal import Isocrystal, charpoly_slopes, newton_slopes, t_N
from .padic_core import TeichmullerPolynomial, theta
from .phi_series import HomCandidate, bad_locus_point, example_candidate, theta_of_phi_power, verify_hom
from .phimod_types import degree_from_filtration, enumerate_types, hn_bounds_for_ML

DEFAULT_CUTOFF = "40"
CSV_HEADER = ["index", "point_hash", "admissible", "witness"]

# options whose values may start with '-' (e.g. --min -3/5)
_SIGNED_OPTIONS = {"--min", "--max", "--degree", "--s", "--k", "--cutoff", "--expect-th"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _join_signed(argv: Sequence[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _default_cutoff() -> str:
    return os.environ.get("ISOLAB_PRECISION", DEFAULT_CUTOFF)


def _subspace(path: str | None):
    if path is None:
        return None
    data = _load(path)
    basis = data["basis"] if isinstance(data, dict) else data
    return [[to_fraction(x) for x in row] for row in basis]


def cmd_newton(args) -> dict:
    D = Isocrystal.from_json(_load(args.isocrystal))
    slopes = newton_slopes(D)
    out = {"slopes": slopes.to_json()}
    if args.check:
        cp = charpoly_slopes(D)
        out["charpoly_slopes"] = cp.to_json()
        out["agree"] = cp == slopes
    return out


def cmd_tn(args) -> dict:
    D = Isocrystal.from_json(_load(args.isocrystal))
    return {"t_N": t_N(D, _subspace(args.subspace))}


def cmd_th(args) -> dict:
    D = Isocrystal.from_json(_load(args.isocrystal))
    L = GrassmannianPoint.from_json(_load(args.point))
    return {"t_H": t_H(D, L, _subspace(args.subspace))}


def cmd_weakadm(args) -> dict:
    D = Isocrystal.from_json(_load(args.isocrystal))
    L = GrassmannianPoint.from_json(_load(args.point))
    extra = [_subspace(path) for path in args.extra] if args.extra else None
    expect = None if args.expect_th is None else int(args.expect_th)
    return weak_admissible(D, L, extra, expect).to_json()


def cmd_slope_types(args) -> list:
    return [t.to_json() for t in enumerate_types(args.rank, args.degree, to_fraction(args.min), to_fraction(args.max))]


def cmd_hn_bounds(args) -> dict:
    D = Isocrystal.from_json(_load(args.isocrystal))
    L = GrassmannianPoint.from_json(_load(args.point)) if args.point else None
    b = hn_bounds_for_ML(D, L)
    out = b.to_json()
    out["types"] = [t.to_json() for t in enumerate_types(b.rank, b.degree, b.lo, b.hi)]
    return out


def cmd_degree_ml(args) -> dict:
    D = Isocrystal.from_json(_load(args.isocrystal))
    L = GrassmannianPoint.from_json(_load(args.point))
    return {"degree": degree_from_filtration(D, L)}


def cmd_verify_hom(args) -> dict:
    if args.example:
        cand = example_candidate(args.p)
    elif args.candidate:
        cand = HomCandidate.from_json(_load(args.candidate))
    else:
        raise UsageError("verify-hom needs --candidate FILE or --example")
    return verify_hom(cand).to_json()


def cmd_bad_locus(args) -> dict:
    cutoff = to_fraction(args.cutoff or _default_cutoff())
    return bad_locus_point(to_fraction(args.s), cutoff, args.p).to_json()


def cmd_theta_eval(args) -> dict:
    cutoff = to_fraction(args.cutoff or _default_cutoff())
    if args.series:
        return theta(TeichmullerPolynomial.from_json(_load(args.series)), cutoff).to_json()
    if args.k is None or args.s is None:
        raise UsageError("theta-eval needs --series FILE or both --k and --s")
    return theta_of_phi_power(int(args.k), to_fraction(args.s), cutoff, args.p).to_json()


def random_point(rng: random.Random, h: int, k: int, height: int) -> GrassmannianPoint:
    """Uniform integer coordinates in [-height, height], rejecting rank-deficient draws."""
    while True:
        cols = [[Fraction(rng.randint(-height, height)) for _ in range(k)] for _ in range(h)]
        try:
            return GrassmannianPoint.rational(cols)
        except ValueError:
            continue


def point_hash(L: GrassmannianPoint) -> str:
    blob = json.dumps(L.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def cmd_survey(args) -> str:
    D = Isocrystal.from_json(_load(args.isocrystal))
    k = args.dim if args.dim is not None else D.h + sum(c for c, _ in D.blocks)
    if not 0 <= k <= D.h:
        raise UsageError(f"point dimension {k} outside [0, {D.h}]; pass --dim")
    if args.height < 1:
        raise UsageError("--height must be >= 1")
    rng = random.Random(args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for i in range(args.n):
        L = random_point(rng, D.h, k, args.height)
        rep = weak_admissible(D, L)
        writer.writerow([i, point_hash(L), str(rep.admissible).lower(), rep.witness.label if rep.witness else ""])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isolab", description="Exact computations with filtered isocrystals.")
    parser.add_argument("--version", action="version", version=f"isolab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("newton", help="Newton slopes of an isocrystal")
    p.add_argument("--isocrystal", required=True)
    p.add_argument("--check", action="store_true", help="cross-check against the characteristic polynomial")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("tn", help="Newton slope t_N of D or a stable subspace")
    p.add_argument("--isocrystal", required=True)
    p.add_argument("--subspace")
    p.set_defaults(func=cmd_tn)

    p = sub.add_parser("th", help="Hodge slope t_H")
    p.add_argument("--isocrystal", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--subspace")
    p.set_defaults(func=cmd_th)

    p = sub.add_parser("weakadm", help="weak-admissibility report")
    p.add_argument("--isocrystal", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--extra", action="append", help="additional stable subspace (repeatable)")
    p.add_argument("--expect-th", dest="expect_th", help="assert t_H(D) equals this integer")
    p.set_defaults(func=cmd_weakadm)

    p = sub.add_parser("slope-types", help="enumerate slope types")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--min", required=True)
    p.add_argument("--max", required=True)
    p.set_defaults(func=cmd_slope_types)

    p = sub.add_parser("hn-bounds", help="slope window and candidate types of M_L")
    p.add_argument("--isocrystal", required=True)
    p.add_argument("--point")
    p.set_defaults(func=cmd_hn_bounds)

    p = sub.add_parser("degree-ml", help="degree t_N - t_H of M_L")
    p.add_argument("--isocrystal", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_degree_ml)

    p = sub.add_parser("verify-hom", help="check a phi-series matrix intertwines the Frobenius")
    p.add_argument("--candidate")
    p.add_argument("--example", action="store_true", help="use the built-in 5x2 matrix")
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_verify_hom)

    p = sub.add_parser("bad-locus", help="generate a bad-locus point theta(A)")
    p.add_argument("--s", required=True)
    p.add_argument("--cutoff")
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_bad_locus)

    p = sub.add_parser("theta-eval", help="theta of phi^k(x) or of a Teichmüller series")
    p.add_argument("--k")
    p.add_argument("--s")
    p.add_argument("--series")
    p.add_argument("--cutoff")
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_theta_eval)

    p = sub.add_parser("survey", help="weak-admissibility statistics over random rational points")
    p.add_argument("--isocrystal", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--height", type=int, default=5)
    p.add_argument("--dim", type=int)
    p.set_defaults(func=cmd_survey)
    return parser


def _error(kind: str, message: str) -> str:
    return json.dumps({"error": {"type": kind, "message": message}}, sort_keys=True)


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_signed(argv))
        if not getattr(args, "func", None):
            raise UsageError("missing command")
        result = args.func(args)
    except IsolabError as exc:
        print(_error(type(exc).__name__, str(exc)), file=stdout)
        return 1
    except UsageError as exc:
        print(_error("UsageError", str(exc)), file=stdout)
        return 2
    except (ValueError, KeyError, TypeError, ZeroDivisionError, OSError, json.JSONDecodeError) as exc:
        print(_error(type(exc).__name__, str(exc)), file=stdout)
        return 2
    if isinstance(result, str):
        stdout.write(result)
    else:
        print(json.dumps(result, sort_keys=True), file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "fmt", "fmt_value"]

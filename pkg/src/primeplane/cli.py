"""Batch command-line front end.

Subcommands: verify, sweep, hunt, frontier, geometry, classify,
emit-curves.  Every report embeds the run configuration and the package
version, and identical configurations produce byte-identical output.
Exit codes: 0 on success, 2 when a violation witness was found, 64 on
usage errors (bad flags, malformed literals, exceeded ceilings).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__, bounds, search
from .bounds import VIOLATED, BoundReport, classify_exception
from .cyclotomic import check_prime
from .fourier import GFunc
from .plane import (
    bounded_line_direction,
    directions_determined,
    min_blocking_size,
    parse_pointset,
    pencil_stability,
    rich_direction_search,
)
from .search import SearchSpace, construct, hunt, frontier, make_space, sweep

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_USAGE = 64

CEILING_ENV = "PRIMEPLANE_CEILING"

def _default_checks(func: GFunc) -> List[str]:
    if func.rank == 1:
        return ["product", "birotao"]
    if func.p == 2:
        return ["product", "meshulam"]
    names = ["product", "meshulam"]
    if func.is_rational_valued():
        names.append("rational")
    return names + ["kp1", "kp2", "product3"]

_CHECK_DISPATCH = {
    "product": lambda f, a: bounds.check_product(f),
    "birotao": lambda f, a: bounds.check_birotao(f),
    "meshulam": lambda f, a: bounds.check_meshulam(f),
    "rational": lambda f, a: bounds.check_rational(f),
    "kp1": lambda f, a: bounds.check_kp1(f),
    "kp2": lambda f, a: bounds.check_kp2(f),
    "product3": lambda f, a: bounds.check_product3(f),
    "conjecture": lambda f, a: bounds.check_conjecture(f, _need_k(a)),
    "roots": lambda f, a: bounds.check_roots(f),
    "asym2": lambda f, a: bounds.check_asym2(f, Fraction(a.epsilon)),
    "asym3": lambda f, a: bounds.check_asym3(f, Fraction(a.epsilon)),
    "coset-counts": lambda f, a: bounds.check_coset_counts(f),
}


def _need_k(args) -> int:
    if args.k is None:
        raise ValueError("the conjecture check requires --k")
    return args.k


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._fail(message))

    def _fail(self, message) -> int:
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


@dataclass
class RunConfig:
    subcommand: str
    p: Optional[int] = None
    function: Optional[str] = None
    file: Optional[str] = None
    family: Optional[str] = None
    m: Optional[int] = None
    n: Optional[int] = None
    theorems: Optional[List[str]] = None
    k: Optional[int] = None
    epsilon: Optional[str] = None
    alphabet: Optional[str] = None
    rank: int = 2
    mode: str = "exhaustive"
    seed: int = 0
    budget: int = 10000
    char_twist: bool = False
    ceiling: Optional[int] = None
    query: Optional[str] = None
    points: Optional[str] = None
    out: Optional[str] = None
    format: Optional[str] = None
    jobs: int = 1

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _emit(text: str, args) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, args) -> None:
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args)


def _ceiling(args) -> int:
    if getattr(args, "ceiling", None):
        return args.ceiling
    env = os.environ.get(CEILING_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"{CEILING_ENV} must be an integer, got {env!r}") from exc
    return search.DEFAULT_CEILING


def _config_from(args, sub: str) -> RunConfig:
    cfg = RunConfig(subcommand=sub)
    for name in vars(cfg):
        if name in ("subcommand", "theorems"):
            continue
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "theorem") and args.theorem:
        cfg.theorems = list(args.theorem)
    return cfg


def _load_function(args) -> GFunc:
    sources = [s for s in (args.function, args.file, args.family) if s]
    if len(sources) != 1:
        raise ValueError("provide exactly one of --function, --file, --family")
    if args.function:
        return GFunc.from_literal(args.function)
    if args.file:
        return GFunc.from_literal(Path(args.file).read_text(encoding="utf-8").strip())
    if args.p is None:
        raise ValueError("--family requires --p")
    params = {}
    if args.family == "sharp1d":
        if args.m is None:
            raise ValueError("sharp1d requires --m")
        params["m"] = args.m
    elif args.family == "sharp2d":
        if args.m is None or args.n is None:
            raise ValueError("sharp2d requires --m and --n")
        params.update(m=args.m, n=args.n)
    return construct(args.family, args.p, **params).func


def _space_from(args) -> SearchSpace:
    if args.p is None:
        raise ValueError("a candidate space requires --p")
    alphabet = [s.strip() for s in (args.alphabet or "-1,0,1").split(",") if s.strip()]
    if not alphabet:
        raise ValueError("alphabet must be nonempty")
    return make_space(args.p, alphabet=alphabet, rank=args.rank, mode=args.mode,
                      seed=args.seed, budget=args.budget, char_twist=args.char_twist,
                      ceiling=_ceiling(args))


def _reports_payload(cfg: RunConfig, reports: Sequence[BoundReport]) -> dict:
    return {
        "version": __version__,
        "config": cfg.to_json(),
        "reports": [r.to_json() for r in reports],
    }


# -- subcommands --------------------------------------------------------------


def _cmd_verify(args) -> int:
    func = _load_function(args)
    names = list(args.theorem) if args.theorem else _default_checks(func)
    reports = []
    for name in names:
        if name not in _CHECK_DISPATCH:
            raise ValueError(f"unknown theorem id {name!r}")
        reports.append(_CHECK_DISPATCH[name](func, args))
    cfg = _config_from(args, "verify")
    _emit_json(_reports_payload(cfg, reports), args)
    return EXIT_VIOLATION if any(r.verdict == VIOLATED for r in reports) else EXIT_OK


def _cmd_classify(args) -> int:
    func = _load_function(args)
    desc = classify_exception(func)
    cfg = _config_from(args, "classify")
    payload = {
        "version": __version__,
        "config": cfg.to_json(),
        "classification": None if desc is None else desc.to_json(),
    }
    _emit_json(payload, args)
    return EXIT_OK


def _cmd_geometry(args) -> int:
    cfg = _config_from(args, "geometry")
    result: dict
    if args.query == "blocking-min":
        if args.p is None:
            raise ValueError("blocking-min requires --p")
        size, witness = min_blocking_size(args.p)
        result = {"minimum": size, "witness": witness.literal()}
    else:
        if not args.points:
            raise ValueError(f"query {args.query!r} requires --points")
        pts = parse_pointset(args.points)
        if args.query == "directions":
            result = {"directions": sorted(directions_determined(pts)),
                      "size": pts.size}
        elif args.query == "pencil":
            rep = pencil_stability(pts)
            result = {"k": rep.k, "m": rep.m, "bound": rep.bound,
                      "holds": rep.holds, "is_blocking": rep.is_blocking,
                      "size": rep.size}
        elif args.query == "rich-direction":
            result = {"direction": rich_direction_search(pts), "size": pts.size}
        elif args.query == "bounded-direction":
            result = {"direction": bounded_line_direction(pts), "size": pts.size}
        else:
            raise ValueError(f"unknown geometry query {args.query!r}")
    payload = {"version": __version__, "config": cfg.to_json(), "result": result}
    _emit_json(payload, args)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    space = _space_from(args)
    if not args.theorem:
        raise ValueError("sweep requires at least one --theorem")
    result = sweep(space, list(args.theorem), k=args.k,
                   eps=Fraction(args.epsilon) if args.epsilon else None,
                   jobs=args.jobs)
    cfg = _config_from(args, "sweep")
    payload = {"version": __version__, "config": cfg.to_json(), "sweep": result.to_json()}
    _emit_json(payload, args)
    return EXIT_VIOLATION if result.violations else EXIT_OK


def _cmd_hunt(args) -> int:
    space = _space_from(args)
    if not args.theorem or len(args.theorem) != 1:
        raise ValueError("hunt requires exactly one --theorem")
    result = hunt(args.theorem[0], space, k=args.k,
                  eps=Fraction(args.epsilon) if args.epsilon else None)
    cfg = _config_from(args, "hunt")
    payload = {"version": __version__, "config": cfg.to_json(), "hunt": result.to_json()}
    _emit_json(payload, args)
    return EXIT_VIOLATION if result.found else EXIT_OK


def _cmd_frontier(args) -> int:
    space = _space_from(args)
    result = frontier(space)
    cfg = _config_from(args, "frontier")
    if (args.format or "csv") == "json":
        _emit_json({"version": __version__, "config": cfg.to_json(),
                    "frontier": result.to_json()}, args)
    else:
        _emit(result.to_csv(), args)
    return EXIT_OK


def _curve_rows(p: int):
    """Exact sample rows for every bound curve on the integer min-axis grid."""
    n = p * p
    rows = []

    def frac(x: Fraction) -> str:
        return str(Fraction(x))

    for s in range(1, n + 1):
        rows.append(("product", s, frac(Fraction(n, s))))
    for s in range(1, n + 1):
        x = Fraction(p * (p + 1 - s))
        if x >= 0:
            rows.append(("meshulam", s, frac(x)))
    for s in range(1, n + 1):
        x = (p - 1) * (p + 1 - Fraction(s, 2))
        if x >= 0:
            rows.append(("rational", s, frac(x)))
    for s in range(1, n + 1):
        x = 2 * (p + 1 - Fraction(s, p - 1))
        if x >= 0:
            rows.append(("kp1", s, frac(x)))
    if p > 2:
        for s in range(1, n + 1):
            x = 3 * (p + 1 - Fraction(s, p - 2))
            if x >= 0:
                rows.append(("kp2", s, frac(x)))
    for s in range(1, n + 1):
        rows.append(("product3", s, frac(Fraction(3 * p * (p - 2), s))))
    for s in range(1, n + 1):
        root = (p + 1) - s**0.5
        if root >= 0:
            rows.append(("roots", s, repr(root * root)))
    for k in range(1, p + 1):
        for s in range(1, n + 1):
            x = (p + 1 - k) * (p + 1 - Fraction(s, k))
            if x >= 0:
                rows.append((f"conjecture_k={k}", s, frac(x)))
    for s, x in search.attainable_lattice(p):
        rows.append(("lattice", s, str(x)))
    return rows


def _cmd_emit_curves(args) -> int:
    if args.p is None:
        raise ValueError("emit-curves requires --p")
    check_prime(args.p)
    lines = ["curve,s,x"]
    lines.extend(f"{name},{s},{x}" for name, s, x in _curve_rows(args.p))
    _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


# -- argument wiring ------------------------------------------------------------


def _add_function_args(sub):
    sub.add_argument("--function", help="function literal 'p; rank; v0,v1,...'")
    sub.add_argument("--file", help="path to a file holding a function literal")
    sub.add_argument("--family", choices=sorted(search.GALLERY),
                     help="construction family name")
    sub.add_argument("--p", type=int, help="prime order (for --family)")
    sub.add_argument("--m", type=int, help="family parameter m")
    sub.add_argument("--n", type=int, help="family parameter n")


def _add_space_args(sub):
    sub.add_argument("--p", type=int, required=True, help="prime order")
    sub.add_argument("--rank", type=int, default=2, choices=(1, 2))
    sub.add_argument("--alphabet", default="-1,0,1",
                     help="comma-separated value literals (default '-1,0,1')")
    sub.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--budget", type=int, default=10000,
                     help="sample count for random mode")
    sub.add_argument("--char-twist", dest="char_twist", action="store_true",
                     help="multiply the alphabet by every character")
    sub.add_argument("--ceiling", type=int, default=None,
                     help=f"candidate ceiling (or ${CEILING_ENV})")
    sub.add_argument("--jobs", type=int, default=1, help="worker processes")


def _add_common_output(sub):
    sub.add_argument("--out", help="write output to this path instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"), default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="primeplane",
                     description="Exact support-uncertainty toolkit for prime planes.")
    parser.add_argument("--version", action="version", version=f"primeplane {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("verify", parents=[], help="evaluate bounds on one function")
    _add_function_args(sp)
    sp.add_argument("--theorem", action="append",
                    choices=sorted(_CHECK_DISPATCH), help="check id (repeatable)")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--epsilon", default="1/2")
    _add_common_output(sp)
    sp.set_defaults(handler=_cmd_verify)

    sp = subs.add_parser("classify", help="recover the exceptional structure of a function")
    _add_function_args(sp)
    _add_common_output(sp)
    sp.set_defaults(handler=_cmd_classify)

    sp = subs.add_parser("geometry", help="plane geometry queries")
    sp.add_argument("--query", required=True,
                    choices=("blocking-min", "directions", "pencil",
                             "rich-direction", "bounded-direction"))
    sp.add_argument("--p", type=int, help="prime order (blocking-min)")
    sp.add_argument("--points", help="point-set literal 'p; (x,y),...'")
    _add_common_output(sp)
    sp.set_defaults(handler=_cmd_geometry)

    sp = subs.add_parser("sweep", help="evaluate checks over a candidate space")
    _add_space_args(sp)
    sp.add_argument("--theorem", action="append", help="check id (repeatable)")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--epsilon", default=None)
    _add_common_output(sp)
    sp.set_defaults(handler=_cmd_sweep)

    sp = subs.add_parser("hunt", help="search a space for a violation witness")
    _add_space_args(sp)
    sp.add_argument("--theorem", action="append", help="check id (exactly one)")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--epsilon", default=None)
    _add_common_output(sp)
    sp.set_defaults(handler=_cmd_hunt)

    sp = subs.add_parser("frontier", help="map attained (|S|, |X|) pairs")
    _add_space_args(sp)
    _add_common_output(sp)
    sp.set_defaults(handler=_cmd_frontier)

    sp = subs.add_parser("emit-curves", help="emit the bound curves as CSV")
    sp.add_argument("--p", type=int, required=True)
    _add_common_output(sp)
    sp.set_defaults(handler=_cmd_emit_curves)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"primeplane: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 2 a verification predicate failed, 3 parameter search
exhausted, 4 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .divisors import (
    CurveConstraint,
    build_family,
    check_primitivity,
    default_curves,
    nakai_moishezon,
    search_parameters,
    simply_connected_witness,
)
from .errors import (
    DegenerateEulerClass,
    InadmissibleC2,
    K3TorusError,
    MissingAssumption,
    NonNegativeSquare,
    NoPositiveSolution,
    PipelineError,
    PredicateFailed,
    SearchExhausted,
    ZeroDenominator,
)
from .lattice import as_rational, format_rational
from .resolution import enumerate_table, pinned_table, render_table, table_to_json
from .strominger import certify
from .wps import WeightedFamily, default_catalog_path, load_catalog, singularity_content, well_formed

EXIT_OK = 0
EXIT_PREDICATE = 2
EXIT_EXHAUSTED = 3
EXIT_INPUT = 4

CONFIG_ENV = "K3TORUS_CONFIG"

_PREDICATE_ERRORS = (
    PredicateFailed,
    InadmissibleC2,
    NoPositiveSolution,
    NonNegativeSquare,
    ZeroDenominator,
    DegenerateEulerClass,
    MissingAssumption,
)


def golden_table_path() -> Path:
    return Path(__file__).with_name("data") / "euler_table.txt"


@dataclass
class Config:
    catalog: Path = field(default_factory=default_catalog_path)
    alpha: Fraction = Fraction(2)
    curves: list[CurveConstraint] | None = None
    bounds: tuple[int, int] = (100, 100)
    output: str = "text"
    precision: int = 10

    def __post_init__(self):
        self.catalog = Path(self.catalog)
        self.alpha = as_rational(self.alpha)
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if min(self.bounds) < 1:
            raise ValueError("search bounds must be at least (1, 1)")
        if not 1 <= self.precision <= 50:
            raise ValueError("precision must lie in 1..50")
        if self.output not in ("text", "machine"):
            raise ValueError("output must be 'text' or 'machine'")

    @classmethod
    def load(cls, path: str | Path | None) -> "Config":
        if path is None:
            path = os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        kw = {}
        if "catalog" in raw:
            kw["catalog"] = Path(path).parent / raw["catalog"]
        if "alpha" in raw:
            kw["alpha"] = as_rational(str(raw["alpha"]))
        if "curves" in raw:
            kw["curves"] = [CurveConstraint(int(c["h_dot"]), bool(c.get("through_singularity", True)))
                            for c in raw["curves"]]
        if "bounds" in raw:
            kw["bounds"] = (int(raw["bounds"][0]), int(raw["bounds"][1]))
        for key in ("output", "precision"):
            if key in raw:
                kw[key] = raw[key]
        return cls(**kw)


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        # "--c" must never be read as a prefix of "--config"/"--catalog"
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _curve(text):
    h, _, where = text.partition(",")
    try:
        return CurveConstraint(int(h), where.strip() != "away")
    except (ValueError, K3TorusError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _rational(text):
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="k3torus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("--catalog", help="family catalog (JSON)")
    p.add_argument("--format", choices=("text", "machine"), dest="fmt")
    p.add_argument("--precision", type=int, help="decimal places for t")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="singularities of a family")
    a.add_argument("family", nargs="?")
    a.add_argument("--weights", type=_int_list)
    a.add_argument("--degree", type=int)

    t = sub.add_parser("table", help="Euler numbers of partial resolutions")
    t.add_argument("--all", action="store_true", help="full enumeration instead of the pinned table")

    def divisor_flags(sp):
        sp.add_argument("--case", required=True, type=str.upper, choices=("A3", "A4"))
        sp.add_argument("--c", type=int, required=True)
        sp.add_argument("--curve", type=_curve, action="append",
                        help="H.D of a base curve, optionally ',away' (repeatable)")

    d = sub.add_parser("divisors", help="build and verify one divisor family")
    divisor_flags(d)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--m", type=int, required=True)

    s = sub.add_parser("search", help="smallest (m, k) passing every check")
    divisor_flags(s)
    s.add_argument("--k-max", type=int)
    s.add_argument("--m-max", type=int)
    s.add_argument("--require-prime", action="store_true")

    c = sub.add_parser("certify", help="run the whole pipeline and write a certificate")
    c.add_argument("family")
    c.add_argument("--resolve", required=True, help="comma-separated types, e.g. A4 or A3,A6")
    c.add_argument("--case", required=True, type=str.upper, choices=("A3", "A4"))
    c.add_argument("--c", type=int, required=True)
    c.add_argument("--c2", type=int, required=True)
    c.add_argument("--alpha", type=_rational)
    c.add_argument("--curve", type=_curve, action="append")
    c.add_argument("--k-max", type=int)
    c.add_argument("--m-max", type=int)
    c.add_argument("--require-prime", action="store_true")
    c.add_argument("--output", "-o", dest="cert_path", help="certificate path (JSON)")
    return p


def _emit(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _resolve_family(args, cfg) -> WeightedFamily:
    if args.weights is not None:
        if args.degree is None:
            raise ValueError("--weights needs --degree")
        return WeightedFamily.from_weights(args.weights, args.degree, args.family)
    if not args.family:
        raise ValueError("give a family name or --weights/--degree")
    catalog = load_catalog(cfg.catalog)
    if args.family not in catalog:
        raise ValueError(f"unknown family {args.family!r}; catalog has {sorted(catalog)}")
    return catalog[args.family]


def cmd_analyze(args, cfg, out) -> int:
    fam = _resolve_family(args, cfg)
    if not well_formed(fam):
        print(f"{fam.name}: weights {fam.weights} are not well-formed", file=sys.stderr)
        return EXIT_INPUT
    pts = singularity_content(fam)
    if cfg.output == "machine":
        out.write(_emit({"family": fam.to_json(), "singularities": [p.to_json() for p in pts]}))
    else:
        out.write(f"{fam.name} in P{fam.weights}, degree {fam.degree}\n")
        for p in pts:
            out.write(f"  {p.label:<4} {p.locus}\n")
        out.write(f"  total index {sum(p.n for p in pts)}\n")
    return EXIT_OK


def cmd_table(args, cfg, out) -> int:
    catalog = load_catalog(cfg.catalog)
    if not catalog:
        print("catalog is empty", file=sys.stderr)
        return EXIT_INPUT
    fams = list(catalog.values())
    if args.all:
        rows = enumerate_table(fams)
    else:
        try:
            rows = pinned_table(fams)
        except K3TorusError as exc:
            print(f"table disagrees with enumeration: {exc}", file=sys.stderr)
            return EXIT_PREDICATE
        text = render_table(rows)
        if text != golden_table_path().read_text(encoding="utf-8"):
            print("rendered table differs from the pinned golden file", file=sys.stderr)
            return EXIT_PREDICATE
    out.write(table_to_json(rows) if cfg.output == "machine" else render_table(rows))
    return EXIT_OK


def cmd_divisors(args, cfg, out) -> int:
    fam = build_family(args.case, args.c, args.k, args.m)
    curves = args.curve or cfg.curves or default_curves(args.c)
    prim = check_primitivity(fam)
    nakai = nakai_moishezon(fam, curves)
    wits = [simply_connected_witness(fam, i) for i in range(3)]
    ok = prim.passed and nakai.passed and all(w.ok for w in wits)
    if cfg.output == "machine":
        out.write(_emit({
            "family": fam.to_json(),
            "primitivity": prim.to_json(),
            "nakai_moishezon": nakai.to_json(),
            "witnesses": [w.to_json() for w in wits],
            "passed": ok,
        }))
    else:
        out.write(f"case {fam.case}  c={args.c} k={args.k} m={args.m}  q={format_rational(fam.q)}\n")
        out.write(f"E  = {fam.E}\n")
        for i, d in enumerate(fam.D):
            out.write(f"D{i} = {d}\n")
        out.write("\nprimitivity\n" + prim.render())
        out.write("\nNakai-Moishezon\n" + nakai.render())
        out.write("\nwitnesses\n")
        for w in wits:
            if w.ok:
                vals = ", ".join(f"({c}) = {v}" for c, v in zip(w.classes, w.values))
                out.write(f"D{w.divisor}: {vals}\n")
            else:
                out.write(f"D{w.divisor}: none found\n")
    return EXIT_OK if ok else EXIT_PREDICATE


def _bounds(args, cfg):
    k_max = args.k_max if args.k_max is not None else cfg.bounds[0]
    m_max = args.m_max if args.m_max is not None else cfg.bounds[1]
    return k_max, m_max


def cmd_search(args, cfg, out) -> int:
    curves = args.curve or cfg.curves or default_curves(args.c)
    try:
        res = search_parameters(args.case, args.c, curves, _bounds(args, cfg), args.require_prime)
    except SearchExhausted as exc:
        print(f"{exc}; failures: {exc.stats}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if cfg.output == "machine":
        out.write(_emit(res.to_json()))
    else:
        out.write(f"case {res.case}, c = {args.c}: m = {res.m}, k = {res.k} "
                  f"(after {res.tried} candidates)\n")
    return EXIT_OK


def cmd_certify(args, cfg, out) -> int:
    catalog = load_catalog(cfg.catalog)
    if args.family not in catalog:
        raise ValueError(f"unknown family {args.family!r}")
    fam = catalog[args.family]
    alpha = args.alpha if args.alpha is not None else cfg.alpha
    curves = args.curve or cfg.curves
    plan = [x for x in args.resolve.split(",") if x.strip()]
    try:
        cert = certify(fam, plan, args.case, args.c, _bounds(args, cfg), args.c2, alpha,
                       curves=curves, require_prime=args.require_prime, precision=cfg.precision)
    except PipelineError as exc:
        cause = exc.cause
        print(f"stage {exc.stage}: {type(cause).__name__}: {cause}", file=sys.stderr)
        verdict = getattr(cause, "verdict", None)
        if verdict is not None:
            sys.stderr.write(verdict.render())
        if isinstance(cause, SearchExhausted):
            return EXIT_EXHAUSTED
        if isinstance(cause, _PREDICATE_ERRORS):
            return EXIT_PREDICATE
        return EXIT_INPUT
    envelope = {
        "tool": "k3torus",
        "version": __version__,
        "inputs": {
            "family": fam.name,
            "resolve": plan,
            "case": args.case,
            "c": args.c,
            "c2": args.c2,
            "alpha": format_rational(alpha),
            "bounds": list(_bounds(args, cfg)),
            "require_prime": args.require_prime,
        },
        "certificate": cert.to_json(),
    }
    if args.cert_path:
        Path(args.cert_path).write_text(_emit(envelope), encoding="utf-8")
    out.write(_emit(envelope) if cfg.output == "machine" else cert.render())
    return EXIT_OK


_COMMANDS = {
    "analyze": cmd_analyze,
    "table": cmd_table,
    "divisors": cmd_divisors,
    "search": cmd_search,
    "certify": cmd_certify,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        cfg = Config.load(args.config)
        if args.catalog:
            cfg.catalog = Path(args.catalog)
        if args.fmt:
            cfg.output = args.fmt
        if args.precision is not None:
            if not 1 <= args.precision <= 50:
                raise ValueError("precision must lie in 1..50")
            cfg.precision = args.precision
        return _COMMANDS[args.command](args, cfg, out)
    except SearchExhausted as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_EXHAUSTED
    except _PREDICATE_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PREDICATE
    except (K3TorusError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

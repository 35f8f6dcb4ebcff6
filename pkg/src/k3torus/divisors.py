"""Ample class E and the three E-primitive divisors over a resolved A3 or A4 point.

For parameters (c, k, m) the classes are written in the basis of the preset
lattices (H = pulled-back ample class with H^2 = c, C_i exceptional). The
module builds them, checks E.D_i = 0 and the Nakai-Moishezon inequalities with
exact values, finds gcd witnesses for simple connectivity of the associated
Seifert bundles, and searches (m, k) for a parameter pair passing everything.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt
from typing import Sequence, Union

from .errors import InvalidParameter, SearchExhausted
from .lattice import (
    C0,
    C1,
    C2,
    C3,
    H,
    DivisorClass,
    IntersectionLattice,
    format_rational,
    preset_a3_lattice,
    preset_a4_lattice,
)

__all__ = [
    "A3",
    "A4",
    "A3Params",
    "A4Params",
    "DivisorFamily",
    "CurveConstraint",
    "Check",
    "Verdict",
    "Witness",
    "SearchResult",
    "build_a3_family",
    "build_a4_family",
    "build_family",
    "check_primitivity",
    "nakai_moishezon",
    "simply_connected_witness",
    "exceptional_support_ok",
    "default_curves",
    "search_parameters",
    "is_prime",
]

A3 = "A3"
A4 = "A4"


def _pos_int(name, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InvalidParameter(f"{name} must be a positive integer, got {value!r}")
    return value


def normalize_case(case: str) -> str:
    key = str(case).strip().upper()
    if key not in (A3, A4):
        raise InvalidParameter(f"case must be A3 or A4, got {case!r}")
    return key


@dataclass(frozen=True)
class A3Params:
    c: int
    k: int
    m: int

    def __post_init__(self):
        for name in ("c", "k", "m"):
            _pos_int(name, getattr(self, name))

    @property
    def a(self) -> int:
        return 3 * self.m + self.c - 1

    @property
    def b(self) -> int:
        return self.c + self.m

    def to_json(self) -> dict:
        return {"c": self.c, "k": self.k, "m": self.m, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class A4Params:
    c: int
    k: int
    m: int

    def __post_init__(self):
        for name in ("c", "k", "m"):
            _pos_int(name, getattr(self, name))

    @property
    def x0(self) -> int:
        return self.c + self.m

    @property
    def x1(self) -> int:
        return 2 * self.m + self.c - 1

    @property
    def x2(self) -> int:
        return self.c + self.m

    @property
    def x3(self) -> int:
        return 4 * self.m + self.c - 1

    def to_json(self) -> dict:
        return {"c": self.c, "k": self.k, "m": self.m,
                "x0": self.x0, "x1": self.x1, "x2": self.x2, "x3": self.x3}


Params = Union[A3Params, A4Params]


@dataclass(frozen=True)
class DivisorFamily:
    case: str
    params: Params
    E: DivisorClass
    D: tuple[DivisorClass, DivisorClass, DivisorClass]
    lattice: IntersectionLattice
    q: Fraction

    @property
    def exceptional_labels(self) -> tuple[str, ...]:
        return tuple(b for b in self.lattice.basis if b != "H")

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "params": self.params.to_json(),
            "q": format_rational(self.q),
            "E": self.E.to_json(),
            "D": [d.to_json() for d in self.D],
            "lattice": self.lattice.to_json(),
        }


def build_a3_family(c: int, k: int, m: int) -> DivisorFamily:
    p = A3Params(c, k, m)
    a, b = p.a, p.b
    q = Fraction(k * (3 * a - b) * (3 * b - a), c)
    E = DivisorClass({"H": q, "C0": Fraction(-1, 2), "C1": -a, "C2": -b})
    D0 = DivisorClass({"H": 1, "C0": -(k * (3 * b - a) - 1) * (3 * a - b), "C1": -2})
    D1 = DivisorClass({"H": 1, "C1": -2 * k * (3 * b - a)})
    D2 = DivisorClass({"H": 1, "C2": -2 * k * (3 * a - b)})
    return DivisorFamily(A3, p, E, (D0, D1, D2), preset_a3_lattice(c), q)


def build_a4_family(c: int, k: int, m: int) -> DivisorFamily:
    p = A4Params(c, k, m)
    x0, x1, x2, x3 = p.x0, p.x1, p.x2, p.x3
    u, v, w = 2 * x0 - x1, 2 * x1 - x0, 4 * x2 - x3
    q = Fraction(k * u * v * w, c)
    E = DivisorClass({"H": q, "C0": -x0, "C1": -x1, "C2": -x2, "C3": -x3})
    D0 = DivisorClass({"H": 1, "C0": -k * v * w})
    D1 = DivisorClass({"H": 1, "C1": -k * u * w})
    D2 = DivisorClass({"H": 1, "C2": -3 * k * u * v})
    return DivisorFamily(A4, p, E, (D0, D1, D2), preset_a4_lattice(c), q)


def build_family(case: str, c: int, k: int, m: int) -> DivisorFamily:
    case = normalize_case(case)
    return build_a3_family(c, k, m) if case == A3 else build_a4_family(c, k, m)


@dataclass(frozen=True)
class CurveConstraint:
    """A curve family on the base: its degree H.D and whether it meets the resolved point."""

    h_dot: int
    through_singularity: bool = True

    def __post_init__(self):
        _pos_int("h_dot", self.h_dot)


def default_curves(c: int) -> list[CurveConstraint]:
    return [CurveConstraint(c, True)]


_RELATIONS = {
    "=": lambda x, y: x == y,
    ">": lambda x, y: x > y,
    "<": lambda x, y: x < y,
    "!=": lambda x, y: x != y,
}


@dataclass(frozen=True)
class Check:
    name: str
    lhs: Fraction
    relation: str
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return _RELATIONS[self.relation](self.lhs, self.rhs)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": format_rational(self.lhs),
            "relation": self.relation,
            "rhs": format_rational(self.rhs),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class Verdict:
    checks: tuple[Check, ...]

    @classmethod
    def of(cls, checks) -> "Verdict":
        return cls(tuple(checks))

    @property
    def passed(self) -> bool:
        return all(ch.holds for ch in self.checks)

    def failures(self) -> list[Check]:
        return [ch for ch in self.checks if not ch.holds]

    def __getitem__(self, name: str) -> Check:
        for ch in self.checks:
            if ch.name == name:
                return ch
        raise KeyError(name)

    def render(self) -> str:
        rows = [(ch.name, format_rational(ch.lhs), ch.relation, format_rational(ch.rhs),
                 "ok" if ch.holds else "FAIL") for ch in self.checks]
        if not rows:
            return "(no checks)\n"
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        return "".join(
            "  ".join(r[i].rjust(widths[i]) if i in (1, 3) else r[i].ljust(widths[i])
                      for i in range(5)).rstrip() + "\n"
            for r in rows
        )

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [ch.to_json() for ch in self.checks]}


def check_primitivity(family: DivisorFamily, E: DivisorClass | None = None) -> Verdict:
    """E.D_i = 0 for i = 0, 1, 2. ``E`` overrides the family's ample class."""
    E = family.E if E is None else E
    L = family.lattice
    return Verdict.of(Check(f"E.D{i}", L.pair(E, d), "=", Fraction(0)) for i, d in enumerate(family.D))


def _curve_offset(family: DivisorFamily) -> DivisorClass:
    # proper transform of a curve through the point loses these two curves
    return C1 + C2 if family.case == A3 else C2 + C3


def nakai_moishezon(family: DivisorFamily, curves: Sequence[CurveConstraint] | None = None) -> Verdict:
    L, E = family.lattice, family.E
    if curves is None:
        curves = default_curves(family.params.c)
    checks = [Check("E^2", L.self_intersection(E), ">", Fraction(0))]
    for label in family.exceptional_labels:
        checks.append(Check(f"E.{label}", L.pair(E, DivisorClass.generator(label)), ">", Fraction(0)))
    offset = L.pair(E, _curve_offset(family))
    for idx, cur in enumerate(curves):
        value = family.q * cur.h_dot
        if cur.through_singularity:
            value -= offset
        tag = "through" if cur.through_singularity else "away"
        checks.append(Check(f"E.curve{idx}[h={cur.h_dot},{tag}]", value, ">", Fraction(0)))
    return Verdict.of(checks)


def exceptional_support_ok(family: DivisorFamily) -> bool:
    """Each D_i - H lives on this point's exceptional curves only."""
    allowed = set(family.exceptional_labels)
    return all((d - H).support <= allowed for d in family.D)


@dataclass(frozen=True)
class Witness:
    divisor: int
    ok: bool
    classes: tuple[str, ...] = ()
    values: tuple[int, ...] = ()
    skipped: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "divisor": f"D{self.divisor}",
            "ok": self.ok,
            "classes": list(self.classes),
            "values": list(self.values),
            "skipped": list(self.skipped),
        }


_CANDIDATES = (("H", H), ("-C0", -C0), ("-C1", -C1), ("-C2", -C2), ("-C3", -C3))

# the test classes used in the hand argument, tried before the general scan
_PREFERRED = {
    (A3, 0): ("-C2",),
    (A3, 1): ("H", "-C2"),
    (A3, 2): ("H", "-C1"),
    (A4, 0): ("H", "-C1"),
    (A4, 1): ("H", "-C0"),
    (A4, 2): ("H", "-C3"),
}


def simply_connected_witness(family: DivisorFamily, i: int) -> Witness:
    """Test classes whose intersection numbers with D_i have gcd 1.

    Candidates come from {H, -C0, -C1, -C2, -C3}; a single value of +-1 is
    enough on its own. Candidates with a non-integral intersection are
    skipped and listed.
    """
    D = family.D[i]
    L = family.lattice
    values: dict[str, int] = {}
    skipped = []
    for name, cls in _CANDIDATES:
        if not cls.support <= set(L.basis):
            continue
        v = L.pair(D, cls)
        if v.denominator != 1:
            skipped.append(name)
            continue
        values[name] = int(v)

    def found(names):
        return Witness(i, True, tuple(names), tuple(values[n] for n in names), tuple(skipped))

    pref = _PREFERRED[(family.case, i)]
    # gcd of a single value is its absolute value, so one rule covers both shapes
    if all(n in values for n in pref) and gcd(*(values[n] for n in pref)) == 1:
        return found(pref)
    for n, v in values.items():
        if abs(v) == 1:
            return found((n,))
    for a, b in combinations(values, 2):
        if gcd(values[a], values[b]) == 1:
            return found((a, b))
    return Witness(i, False, skipped=tuple(skipped))


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


def _prime_device(case: str, m: int) -> int:
    return 8 * m - 3 if case == A3 else 3 * m - 2


@dataclass(frozen=True)
class SearchResult:
    case: str
    m: int
    k: int
    family: DivisorFamily
    primitivity: Verdict
    nakai: Verdict
    witnesses: tuple[Witness, Witness, Witness]
    tried: int

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "m": self.m,
            "k": self.k,
            "tried": self.tried,
            "primitivity": self.primitivity.to_json(),
            "nakai": self.nakai.to_json(),
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def evaluate(family: DivisorFamily, curves: Sequence[CurveConstraint]):
    """All three predicates at once: (primitivity, nakai, witnesses, failing predicate names)."""
    prim = check_primitivity(family)
    nakai = nakai_moishezon(family, curves)
    wits = tuple(simply_connected_witness(family, i) for i in range(3))
    failed = []
    if not prim.passed:
        failed.append("primitivity")
    if not nakai.passed:
        failed.append("nakai")
    failed += [f"witness_D{w.divisor}" for w in wits if not w.ok]
    return prim, nakai, wits, failed


def _first_failure(family: DivisorFamily, curves) -> str | None:
    # cheapest predicates first; witnesses are what usually fails
    for i in range(3):
        if not simply_connected_witness(family, i).ok:
            return f"witness_D{i}"
    if not check_primitivity(family).passed:
        return "primitivity"
    if not nakai_moishezon(family, curves).passed:
        return "nakai"
    return None


def search_parameters(
    case: str,
    c: int,
    curves: Sequence[CurveConstraint] | None = None,
    bounds: tuple[int, int] = (100, 100),
    require_prime: bool = False,
) -> SearchResult:
    """Lexicographically smallest (m, k) within ``bounds = (k_max, m_max)`` passing every check.

    With ``require_prime`` only m making 8m - 3 (A3) or 3m - 2 (A4) prime are
    considered. ``SearchExhausted.stats`` counts each rejected candidate under
    its first failing predicate.
    """
    case = normalize_case(case)
    _pos_int("c", c)
    k_max, m_max = bounds
    _pos_int("k_max", k_max)
    _pos_int("m_max", m_max)
    if curves is None:
        curves = default_curves(c)
    stats: Counter = Counter()
    tried = 0
    for m in range(1, m_max + 1):
        if require_prime and not is_prime(_prime_device(case, m)):
            stats["not_prime"] += 1
            continue
        for k in range(1, k_max + 1):
            fam = build_family(case, c, k, m)
            tried += 1
            failed = _first_failure(fam, curves)
            if failed:
                stats[failed] += 1
                continue
            prim, nakai, wits, _ = evaluate(fam, curves)
            return SearchResult(case, m, k, fam, prim, nakai, wits, tried)
    raise SearchExhausted(
        f"no (m, k) within m <= {m_max}, k <= {k_max} for case {case}, c = {c}",
        dict(sorted(stats.items())),
    )

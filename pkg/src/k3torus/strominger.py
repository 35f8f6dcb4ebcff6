"""Anomaly budget, the torsion parameter t, and certificate assembly.

The integrated Bianchi identity on the resolved orbisurface reduces to one
scalar equation,

    (alpha / 2) * (e_orb - c2(V)) = t^2 * sum_j D_j . D_j,

so t^2 is an exact rational. :func:`certify` runs every upstream stage and
collects the exact data into a :class:`G2Certificate`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .divisors import (
    A3,
    A4,
    Check,
    CurveConstraint,
    SearchResult,
    Verdict,
    default_curves,
    exceptional_support_ok,
    normalize_case,
    search_parameters,
)
from .errors import (
    InadmissibleC2,
    InvalidParameter,
    K3TorusError,
    NonNegativeSquare,
    NoPositiveSolution,
    PipelineError,
    PredicateFailed,
    ZeroDenominator,
)
from .lattice import DivisorClass, IntersectionLattice, as_rational, format_rational
from .resolution import OrbiSurfaceState, initial_state, orbifold_euler, resolve, resolve_labels
from .seifert import (
    BettiVector,
    TowerSpec,
    base_betti,
    gysin_betti,
    gysin_les_betti,
    padded_lattice,
    closed_form_y3_betti,
    smoothness_check,
    y2_diffeo_label,
)
from .wps import SingularPoint, WeightedFamily

__all__ = [
    "MIN_C2",
    "BUNDLE_FAMILIES",
    "STANDING_ASSUMPTIONS",
    "BundleData",
    "TorsionSolution",
    "G2Certificate",
    "q_of",
    "anomaly_budget",
    "solve_t",
    "bundle_admissibility",
    "select_target",
    "certify",
    "recompute_t_squared",
]

MIN_C2 = 5
BUNDLE_FAMILIES = ("X36", "X50")

STANDING_ASSUMPTIONS = (
    {
        "claim": "The generic member of the family is well-formed and quasi-smooth.",
        "paper_anchor": "weighted hypersurface lists of Iano-Fletcher and Reid (cited, not verified)",
    },
    {
        "claim": "The Seifert S^1-bundle with first Chern class H is smooth and simply connected.",
        "paper_anchor": "hypothesis on the ample class H in the divisor-construction lemma",
    },
    {
        "claim": "A stable rank-2 bundle V with c1(V) = 0 and c2(V) = c2 exists on the partial resolution.",
        "paper_anchor": "stable-bundle lemma via the Serre construction (cited, not computed)",
    },
    {
        "claim": "The T^3 ansatz identities and the instanton (hyperholomorphic) conditions hold on the total space.",
        "paper_anchor": "ansatz identities of Clarke, Garcia-Fernandez and Tipler; hyperholomorphic connections of Verbitsky",
    },
)

_ASD_ASSUMPTION = {
    "claim": "Each D_j carries an anti-self-dual harmonic representative; only D_j . E = 0 is checked.",
    "paper_anchor": "primitivity with respect to the ample class E in the divisor-construction lemma",
}

_PI0_ASSUMPTION = {
    "claim": "The preliminary blow-ups reducing the target point to A3/A4 leave E-bar = H in the pairings used.",
    "paper_anchor": "preliminary blow-up chain pi_0 in the divisor-construction lemma",
}


@dataclass(frozen=True)
class BundleData:
    c2: int
    rank: int = 2
    c1: int = 0
    stable: bool = True

    def __post_init__(self):
        if self.rank != 2 or self.c1 != 0:
            raise InvalidParameter("only rank-2 bundles with c1 = 0 are admissible")
        if self.c2 < MIN_C2:
            raise InadmissibleC2(f"c2(V) = {self.c2} < {MIN_C2}")


def q_of(lattice: IntersectionLattice, D: DivisorClass) -> Fraction:
    """Self-intersection of D, required negative for an anti-self-dual representative."""
    v = lattice.self_intersection(D)
    if v >= 0:
        raise NonNegativeSquare(f"D^2 = {format_rational(v)} >= 0 for D = {D}")
    return v


def anomaly_budget(e_orb, c2: int, alpha=2) -> Fraction:
    """(alpha / 2) * (e_orb - c2), exact."""
    alpha = as_rational(alpha)
    if alpha <= 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")
    if c2 < MIN_C2:
        raise InadmissibleC2(f"c2(V) = {c2} < {MIN_C2}")
    return alpha / 2 * (as_rational(e_orb) - c2)


def _exact_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _decimal_sqrt(x: Fraction, places: int) -> str:
    with localcontext() as ctx:
        ctx.prec = places + 30
        root = (Decimal(x.numerator) / Decimal(x.denominator)).sqrt()
        return str(root.quantize(Decimal(1).scaleb(-places)))


@dataclass(frozen=True)
class TorsionSolution:
    t_squared: Fraction
    precision: int

    @property
    def exact(self) -> Fraction | None:
        return _exact_sqrt(self.t_squared)

    @property
    def radicand(self) -> str:
        return format_rational(self.t_squared)

    @property
    def decimal(self) -> str:
        return _decimal_sqrt(self.t_squared, self.precision)

    def render(self) -> str:
        ex = self.exact
        return format_rational(ex) if ex is not None else f"sqrt({self.radicand})"

    def to_json(self) -> dict:
        ex = self.exact
        return {
            "t_squared": self.radicand,
            "exact": format_rational(ex) if ex is not None else None,
            "symbolic": self.render(),
            "decimal": self.decimal,
            "precision": self.precision,
        }


def solve_t(budget, q_sum, precision: int = 10) -> TorsionSolution:
    budget, q_sum = as_rational(budget), as_rational(q_sum)
    if not 1 <= precision <= 50:
        raise InvalidParameter(f"precision must lie in 1..50, got {precision}")
    if q_sum == 0:
        raise ZeroDenominator("sum of D_j^2 is zero")
    if q_sum > 0:
        raise InvalidParameter(f"sum of D_j^2 must be negative, got {format_rational(q_sum)}")
    t2 = budget / q_sum
    if t2 <= 0:
        raise NoPositiveSolution(
            f"t^2 = {format_rational(t2)} <= 0; need c2(V) > e_orb (budget {format_rational(budget)})"
        )
    return TorsionSolution(t2, precision)


def bundle_admissibility(state: OrbiSurfaceState, c2: int) -> Verdict:
    """Conditions under which the cited stable-bundle existence result applies."""
    k = state.blowups
    return Verdict.of([
        Check("c2(V)", Fraction(c2), ">", Fraction(MIN_C2 - 1)),
        Check("k = sum resolved n", Fraction(k), ">", Fraction(1)),
        Check("b2 - k", Fraction(state.b2 - k), "=", Fraction(4)),
        Check("family has stable bundles for c2 >= 5",
              Fraction(int(state.family.name in BUNDLE_FAMILIES)), "=", Fraction(1)),
    ])


def select_target(state: OrbiSurfaceState, case: str) -> SingularPoint:
    """The fully resolved point the divisor family lives over.

    Blowing up an A_n point leaves an A_{n-2} point, so odd n >= 3 reduce to
    A3 and even n >= 4 to A4. Exact A3/A4 points are preferred.
    """
    case = normalize_case(case)
    parity = 1 if case == A3 else 0
    floor = 3 if case == A3 else 4
    cands = [p for p in state.resolved if p.n >= floor and p.n % 2 == parity]
    if not cands:
        raise PredicateFailed(
            f"{state.family.name}: no fully resolved A_n with n >= 3 reducible to {case} "
            f"(resolved: {','.join(state.resolved_labels) or 'none'})"
        )
    return min(cands, key=lambda p: (p.n, p.locus))


@dataclass(frozen=True)
class G2Certificate:
    family: WeightedFamily
    state: OrbiSurfaceState
    target: SingularPoint
    search: SearchResult
    smoothness: Verdict
    bundle: Verdict
    e_orb: Fraction
    c2: int
    alpha: Fraction
    q_values: tuple[Fraction, Fraction, Fraction]
    budget: Fraction
    torsion: TorsionSolution
    betti: tuple[BettiVector, BettiVector, BettiVector]
    betti_y3_closed_form: BettiVector
    r: int
    diffeo_label_y2: str
    flags: tuple[str, ...]
    assumptions: tuple[dict, ...]

    @property
    def q_sum(self) -> Fraction:
        return sum(self.q_values, Fraction(0))

    @property
    def t_squared(self) -> Fraction:
        return self.torsion.t_squared

    @property
    def e(self) -> int:
        return self.state.e

    def to_json(self) -> dict:
        fam = self.search.family
        return {
            "family": self.family.to_json(),
            "resolution": {
                **self.state.to_json(),
                "target": self.target.to_json(),
                "blowups": self.state.blowups,
            },
            "divisors": {
                "case": fam.case,
                "params": fam.params.to_json(),
                "q": format_rational(fam.q),
                "E": fam.E.to_json(),
                "D": [d.to_json() for d in fam.D],
                "lattice": fam.lattice.to_json(),
                "search_tried": self.search.tried,
            },
            "verdicts": {
                "primitivity": self.search.primitivity.to_json(),
                "nakai_moishezon": self.search.nakai.to_json(),
                "witnesses": [w.to_json() for w in self.search.witnesses],
                "smoothness": self.smoothness.to_json(),
                "bundle": self.bundle.to_json(),
            },
            "e": self.e,
            "e_orb": format_rational(self.e_orb),
            "c2": self.c2,
            "alpha": format_rational(self.alpha),
            "q_values": [format_rational(v) for v in self.q_values],
            "q_sum": format_rational(self.q_sum),
            "budget": format_rational(self.budget),
            "t_squared": format_rational(self.t_squared),
            "t": self.torsion.to_json(),
            "r": self.r,
            "betti": {
                "Y1": self.betti[0].to_json(),
                "Y2": self.betti[1].to_json(),
                "Y3": self.betti[2].to_json(),
                "Y3_closed_form": self.betti_y3_closed_form.to_json(),
            },
            "diffeo_label_Y2": self.diffeo_label_y2,
            "flags": list(self.flags),
            "assumptions": [dict(a) for a in self.assumptions],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def render(self) -> str:
        fam = self.search.family
        p = fam.params
        lines = [
            f"family        {self.family.name}  P{self.family.weights}  degree {self.family.degree}",
            f"resolved      {','.join(self.state.resolved_labels) or '-'}  "
            f"(target {self.target.label} at {self.target.locus})",
            f"remaining     {','.join(self.state.remaining_labels) or '-'}",
            f"e, b2         {self.e}, {self.state.b2}",
            f"divisors      case {fam.case}, c = {p.c}, k = {p.k}, m = {p.m}, q = {format_rational(fam.q)}",
            f"  E  = {fam.E}",
        ]
        lines += [f"  D{i} = {d}" for i, d in enumerate(fam.D)]
        lines += ["", "primitivity", self.search.primitivity.render().rstrip(),
                  "", "Nakai-Moishezon", self.search.nakai.render().rstrip(), "", "witnesses"]
        for w in self.search.witnesses:
            pairs = ", ".join(f"D{w.divisor}.({c}) = {v}" for c, v in zip(w.classes, w.values))
            lines.append(f"  {pairs}")
        lines += ["", "smoothness", self.smoothness.render().rstrip(),
                  "", "bundle", self.bundle.render().rstrip(), ""]
        lines += [
            f"e_orb         {format_rational(self.e_orb)}",
            f"c2(V), alpha  {self.c2}, {format_rational(self.alpha)}",
            f"D_j^2         {', '.join(format_rational(v) for v in self.q_values)}  (sum {format_rational(self.q_sum)})",
            f"budget        {format_rational(self.budget)}",
            f"t^2           {format_rational(self.t_squared)}",
            f"t             {self.torsion.render()} ~ {self.torsion.decimal}",
            f"r             {self.r}",
            f"Y2            {self.diffeo_label_y2}",
            f"b(Y3)         {self.betti[2].b}",
        ]
        if self.flags:
            lines += ["", "flags"] + [f"  - {f}" for f in self.flags]
        lines += ["", "assumptions"] + [f"  - {a['claim']} [{a['paper_anchor']}]" for a in self.assumptions]
        return "\n".join(lines) + "\n"


def recompute_t_squared(cert: G2Certificate) -> Fraction:
    """t^2 from the stored e_orb, c2, alpha and D_j^2 alone."""
    return cert.alpha / 2 * (cert.e_orb - cert.c2) / cert.q_sum


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except K3TorusError as exc:
        raise PipelineError(name, exc) from exc


def _require(name, verdict: Verdict):
    if not verdict.passed:
        failed = ", ".join(ch.name for ch in verdict.failures())
        raise PipelineError(name, PredicateFailed(f"failed checks: {failed}", verdict))
    return verdict


def certify(
    family: WeightedFamily,
    plan: Sequence,
    case: str,
    c: int,
    bounds: tuple[int, int] = (100, 100),
    c2: int = 8,
    alpha=2,
    curves: Sequence[CurveConstraint] | None = None,
    require_prime: bool = False,
    precision: int = 10,
) -> G2Certificate:
    """Run every stage for one family and resolution plan.

    ``plan`` lists the points to resolve fully, as :class:`SingularPoint`
    objects or type labels such as ``"A4"``. Any failure is raised as a
    :class:`PipelineError` naming the stage.
    """
    alpha = as_rational(alpha)
    start = _stage("singularities", initial_state, family)
    plan = list(plan)
    if all(isinstance(p, SingularPoint) for p in plan):
        state = _stage("resolve", resolve, start, plan)
    else:
        state = _stage("resolve", resolve_labels, start, [str(p) for p in plan])

    target = _stage("divisors", select_target, state, case)
    _stage("bundle", BundleData, c2)
    bundle = _require("bundle", bundle_admissibility(state, c2))

    curves = list(curves) if curves is not None else default_curves(c)
    found = _stage("search", search_parameters, case, c, curves, bounds, require_prime)
    fam = found.family
    _require("primitivity", found.primitivity)
    _require("nakai", found.nakai)
    if not exceptional_support_ok(fam):
        raise PipelineError("divisors", PredicateFailed("D_i - H leaves the target's exceptional curves"))

    tower = TowerSpec.from_family(fam, target, found.witnesses, hbar_smooth_simply_connected=True)
    smooth = _require("smoothness", _stage("smoothness", smoothness_check, tower, state))

    e_orb = orbifold_euler(state)
    q_values = tuple(_stage("q", q_of, fam.lattice, d) for d in fam.D)
    budget = _stage("budget", anomaly_budget, e_orb, c2, alpha)
    torsion = _stage("solve_t", solve_t, budget, sum(q_values, Fraction(0)), precision)

    b2 = state.b2
    betti = tuple(_stage("betti", gysin_betti, base_betti(b2), 3))
    les = _stage("betti", gysin_les_betti, padded_lattice(fam.lattice, b2), fam.D)
    if [v.b for v in les] != [v.b for v in betti]:
        raise PipelineError("betti", PredicateFailed(
            f"Gysin closed form {[v.b for v in betti]} disagrees with model {[v.b for v in les]}"))
    r = b2 - 2
    flags = []
    if not 5 <= r <= 20:
        flags.append(f"r = {r} lies outside the range 5..20 reachable from the catalog families")
    if betti[2] != closed_form_y3_betti(r):
        flags.append(
            f"b(Y3) = {betti[2].b} differs from the closed form {closed_form_y3_betti(r).b} "
            "in degrees 3 and 4"
        )
    try:
        label = y2_diffeo_label(r)
    except K3TorusError as exc:
        raise PipelineError("betti", exc) from exc

    assumptions = list(STANDING_ASSUMPTIONS) + [_ASD_ASSUMPTION]
    if target.n > 4:
        assumptions.append(_PI0_ASSUMPTION)

    return G2Certificate(
        family=family,
        state=state,
        target=target,
        search=found,
        smoothness=smooth,
        bundle=bundle,
        e_orb=e_orb,
        c2=c2,
        alpha=alpha,
        q_values=q_values,
        budget=budget,
        torsion=torsion,
        betti=betti,
        betti_y3_closed_form=closed_form_y3_betti(r),
        r=r,
        diffeo_label_y2=label,
        flags=tuple(flags),
        assumptions=tuple(assumptions),
    )

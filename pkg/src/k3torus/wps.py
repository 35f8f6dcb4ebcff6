"""Singularities of generic hypersurfaces X_d in weighted projective 3-space.

A generic member inherits its singularities from the ambient space: cyclic
quotient points at coordinate vertices it passes through, and isolated points
where it meets a singular edge. Only the set of degree-d monomials matters,
never their coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from pathlib import Path
from typing import Iterable

from .errors import (
    EmptyRestriction,
    InvalidParameter,
    NotOnSurface,
    NotWellFormed,
    SmoothPoint,
)

__all__ = [
    "WeightedFamily",
    "Locus",
    "SingularPoint",
    "well_formed",
    "vertex_on_surface",
    "vertex_type",
    "edge_monomials",
    "edge_analysis",
    "singularity_content",
    "load_catalog",
    "default_catalog_path",
    "default_catalog",
]


@dataclass(frozen=True)
class WeightedFamily:
    """Generic degree-``degree`` hypersurface in P(weights).

    ``quasi_smooth`` is an input assumption; nothing here verifies it.
    """

    name: str
    weights: tuple[int, int, int, int]
    degree: int
    quasi_smooth: bool = True

    def __post_init__(self):
        w = tuple(int(a) for a in self.weights)
        if len(w) != 4 or any(a < 1 for a in w):
            raise InvalidParameter(f"need four positive weights, got {self.weights!r}")
        if int(self.degree) < 1:
            raise InvalidParameter(f"degree must be positive, got {self.degree!r}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "degree", int(self.degree))

    @classmethod
    def from_weights(cls, weights: Iterable[int], degree: int, name: str | None = None):
        weights = tuple(weights)
        return cls(name or f"X{degree}", weights, degree)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "weights": list(self.weights),
            "degree": self.degree,
            "quasi_smooth": self.quasi_smooth,
        }


@dataclass(frozen=True, order=True)
class Locus:
    """Vertex(i) or Edge(i, j, k): the k-th point on the edge x_i x_j."""

    kind: str
    indices: tuple[int, ...]

    @classmethod
    def vertex(cls, i: int) -> "Locus":
        return cls("vertex", (i,))

    @classmethod
    def edge(cls, i: int, j: int, point: int) -> "Locus":
        i, j = sorted((i, j))
        return cls("edge", (i, j, point))

    def __str__(self):
        if self.kind == "vertex":
            return f"vertex {self.indices[0]}"
        if self.kind != "edge":
            return self.kind
        i, j, k = self.indices
        return f"edge ({i},{j}) #{k}"


@dataclass(frozen=True, order=True)
class SingularPoint:
    """An A_n point; ordering is (n, locus)."""

    n: int
    locus: Locus = field(default_factory=lambda: Locus("unplaced", ()))

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter(f"A_n needs n >= 1, got {self.n}")

    @property
    def label(self) -> str:
        return f"A{self.n}"

    def __str__(self):
        return f"{self.label} ({self.locus})"

    def to_json(self) -> dict:
        return {"type": self.label, "n": self.n, "locus": self.locus.kind,
                "indices": list(self.locus.indices)}


def well_formed(family: WeightedFamily) -> bool:
    """Every three of the four weights are coprime."""
    return all(gcd(gcd(a, b), c) == 1 for a, b, c in combinations(family.weights, 3))


def vertex_on_surface(family: WeightedFamily, i: int) -> bool:
    # a pure power x_i^m of degree d exists iff a_i | d, and then the vertex is avoided
    return family.degree % family.weights[i] != 0


def vertex_type(family: WeightedFamily, i: int) -> SingularPoint:
    a = family.weights[i]
    if a == 1:
        raise SmoothPoint(f"{family.name}: vertex {i} has weight 1")
    if not vertex_on_surface(family, i):
        raise NotOnSurface(f"{family.name}: {a} divides {family.degree}, vertex {i} is off the surface")
    return SingularPoint(a - 1, Locus.vertex(i))


def edge_monomials(family: WeightedFamily, i: int, j: int) -> list[tuple[int, int]]:
    """Exponent pairs (p, q) with p*a_i + q*a_j = d."""
    ai, aj, d = family.weights[i], family.weights[j], family.degree
    return [(p, (d - p * ai) // aj) for p in range(d // ai + 1) if (d - p * ai) % aj == 0]


def edge_reduced_degree(family: WeightedFamily, i: int, j: int) -> tuple[int, int, int]:
    """(reduced a_i, reduced a_j, reduced degree) of the residual binary form."""
    ai, aj = family.weights[i], family.weights[j]
    monos = edge_monomials(family, i, j)
    if not monos:
        raise EmptyRestriction(
            f"{family.name}: no degree-{family.degree} monomial in x{i}, x{j}; "
            "generic member contains the whole edge"
        )
    pmin = min(p for p, _ in monos)
    qmin = min(q for _, q in monos)
    residual = family.degree - pmin * ai - qmin * aj
    g = gcd(ai, aj)
    if residual % g:
        raise EmptyRestriction(
            f"{family.name}: residual degree {residual} on edge ({i},{j}) not divisible by {g}"
        )
    return ai // g, aj // g, residual // g


def edge_analysis(family: WeightedFamily, i: int, j: int) -> list[SingularPoint]:
    if i == j:
        raise InvalidParameter("edge needs two distinct coordinates")
    g = gcd(family.weights[i], family.weights[j])
    if g < 2:
        return []
    bi, bj, d_red = edge_reduced_degree(family, i, j)
    count = d_red // (bi * bj)
    return [SingularPoint(g - 1, Locus.edge(i, j, k)) for k in range(count)]


def singularity_content(family: WeightedFamily) -> list[SingularPoint]:
    if not well_formed(family):
        raise NotWellFormed(f"{family.name}: weights {family.weights} are not well-formed")
    points = []
    for i, a in enumerate(family.weights):
        if a >= 2 and vertex_on_surface(family, i):
            points.append(vertex_type(family, i))
    for i, j in combinations(range(4), 2):
        points.extend(edge_analysis(family, i, j))
    return sorted(points)


def default_catalog_path() -> Path:
    return Path(__file__).with_name("data") / "catalog.json"


def load_catalog(path: str | Path | None = None) -> dict[str, WeightedFamily]:
    """Read a JSON catalog: ``{"families": [{name, weights, degree, quasi_smooth}]}``."""
    path = Path(path) if path is not None else default_catalog_path()
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    families = {}
    for rec in data.get("families", []):
        fam = WeightedFamily(
            rec["name"], tuple(rec["weights"]), rec["degree"], bool(rec.get("quasi_smooth", True))
        )
        families[fam.name] = fam
    return families


def default_catalog() -> dict[str, WeightedFamily]:
    return load_catalog()

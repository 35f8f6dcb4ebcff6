"""Euler-number and b2 bookkeeping for partial resolutions of A_n points.

A K3 surface with A_n points of total index N behaves rationally like a K3
with N exceptional (-2)-curves collapsed: e = 24 - N and b2 = e - 2. Fully
resolving an A_n point adds its n curves back.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InconsistentFamily, NotASingularity
from .wps import SingularPoint, WeightedFamily, singularity_content

__all__ = [
    "SMOOTH_K3_EULER",
    "OrbiSurfaceState",
    "TableRow",
    "initial_state",
    "resolve",
    "resolve_labels",
    "orbifold_euler",
    "enumerate_table",
    "pinned_table",
    "load_table_selection",
    "render_table",
    "table_to_json",
]

SMOOTH_K3_EULER = 24


def _labels(points: Iterable[SingularPoint]) -> tuple[str, ...]:
    return tuple(p.label for p in sorted(points))


@dataclass(frozen=True)
class OrbiSurfaceState:
    family: WeightedFamily
    resolved: tuple[SingularPoint, ...]
    remaining: tuple[SingularPoint, ...]
    e: int
    b2: int

    @property
    def blowups(self) -> int:
        """Number of exceptional curve classes added so far (sum of resolved n)."""
        return sum(p.n for p in self.resolved)

    @property
    def resolved_labels(self) -> tuple[str, ...]:
        return _labels(self.resolved)

    @property
    def remaining_labels(self) -> tuple[str, ...]:
        return _labels(self.remaining)

    def to_json(self) -> dict:
        return {
            "family": self.family.name,
            "resolved": list(self.resolved_labels),
            "remaining": list(self.remaining_labels),
            "e": self.e,
            "b2": self.b2,
        }


def initial_state(family: WeightedFamily) -> OrbiSurfaceState:
    content = tuple(singularity_content(family))
    e = SMOOTH_K3_EULER - sum(p.n for p in content)
    if e - 2 < 1:
        # an ample class alone forces b2 >= 1
        raise InconsistentFamily(
            f"{family.name}: singularity indices sum to {24 - e}, leaving b2 = {e - 2}"
        )
    return OrbiSurfaceState(family, (), content, e, e - 2)


def resolve(state: OrbiSurfaceState, subset: Iterable[SingularPoint]) -> OrbiSurfaceState:
    subset = list(subset)
    left = Counter(state.remaining)
    want = Counter(subset)
    missing = want - left
    if missing:
        raise NotASingularity(
            f"not among the remaining points of {state.family.name}: "
            + ", ".join(str(p) for p in sorted(missing.elements()))
        )
    if not subset:
        return state
    added = sum(p.n for p in subset)
    remaining = tuple(sorted((left - want).elements()))
    resolved = tuple(sorted(state.resolved + tuple(subset)))
    return OrbiSurfaceState(state.family, resolved, remaining, state.e + added, state.b2 + added)


def resolve_labels(state: OrbiSurfaceState, labels: Sequence[str]) -> OrbiSurfaceState:
    """Resolve by type name ("A4"), taking the first unused point of each type."""
    pool = list(state.remaining)
    chosen = []
    for label in labels:
        label = label.strip()
        hit = next((p for p in pool if p.label == label), None)
        if hit is None:
            raise NotASingularity(f"{state.family.name} has no remaining {label} point")
        pool.remove(hit)
        chosen.append(hit)
    return resolve(state, chosen)


def orbifold_euler(state: OrbiSurfaceState) -> Fraction:
    return state.e - sum((Fraction(p.n, p.n + 1) for p in state.remaining), Fraction(0))


@dataclass(frozen=True, order=True)
class TableRow:
    e: int
    surface: str
    resolved: tuple[str, ...]
    remaining: tuple[str, ...]

    def render(self) -> str:
        return " | ".join(
            [str(self.e), self.surface, ",".join(self.resolved) or "-", ",".join(self.remaining) or "-"]
        )

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "surface": self.surface,
            "resolved": list(self.resolved),
            "remaining": list(self.remaining),
        }


def _row(state: OrbiSurfaceState) -> TableRow:
    return TableRow(state.e, state.family.name, state.resolved_labels, state.remaining_labels)


def enumerate_table(families: Iterable[WeightedFamily]) -> list[TableRow]:
    """Every resolution subset of every family, one row each, sorted by (e, surface, resolved)."""
    rows = set()
    for fam in families:
        start = initial_state(fam)
        pts = start.remaining
        for r in range(len(pts) + 1):
            for subset in combinations(pts, r):
                rows.add(_row(resolve(start, subset)))
    return sorted(rows)


def _selection_path() -> Path:
    return Path(__file__).with_name("data") / "euler_table_selection.json"


def load_table_selection(path: str | Path | None = None) -> list[TableRow]:
    with open(path or _selection_path(), encoding="utf-8") as fh:
        data = json.load(fh)
    return [
        TableRow(r["e"], r["surface"], tuple(r["resolved"]), tuple(r["remaining"]))
        for r in data["rows"]
    ]


def pinned_table(
    families: Iterable[WeightedFamily], selection: Sequence[TableRow] | None = None
) -> list[TableRow]:
    """The pinned one-row-per-e table, checked against the full enumeration.

    Several subsets can share an e value; the chosen surface and
    subset is pinned data, and each pinned row must appear verbatim in the
    enumeration.
    """
    selection = list(selection if selection is not None else load_table_selection())
    full = set(enumerate_table(families))
    missing = [r for r in selection if r not in full]
    if missing:
        raise InconsistentFamily(
            "rows not reachable by any resolution: " + "; ".join(r.render() for r in missing)
        )
    return sorted(selection)


def render_table(rows: Sequence[TableRow]) -> str:
    """Aligned text rendering, one row per line, trailing newline."""
    header = ("e", "Surface", "Resolved", "Remaining")
    cells = [header] + [
        (str(r.e), r.surface, ",".join(r.resolved) or "-", ",".join(r.remaining) or "-")
        for r in rows
    ]
    widths = [max(len(c[i]) for c in cells) for i in range(4)]
    lines = [" | ".join(c[i].ljust(widths[i]) for i in range(4)).rstrip() for c in cells]
    return "\n".join(lines) + "\n"


def table_to_json(rows: Sequence[TableRow]) -> str:
    return json.dumps({"rows": [r.to_json() for r in rows]}, indent=2) + "\n"

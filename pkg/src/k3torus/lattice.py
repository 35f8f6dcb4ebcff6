"""Exact rational intersection lattices over labeled divisor bases.

Everything here is exact: rationals are :class:`fractions.Fraction`, classes
are sparse label -> Fraction maps, and Gram matrices are dense tuples of
Fractions. The two preset lattices model the Picard lattice of a K3
orbisurface near a fully resolved A3 or A4 point, with the ample class H
spanning the pulled-back part.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

from .errors import InvalidParameter, UnknownLabel

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "DivisorClass",
    "IntersectionLattice",
    "pair",
    "self_intersection",
    "preset_a3_lattice",
    "preset_a4_lattice",
    "H",
    "C0",
    "C1",
    "C2",
    "C3",
]

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction; refuse floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(x) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    return str(as_rational(x))


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise ValueError(f"not an exact rational literal: {text!r}")
    return Fraction(text)


class DivisorClass:
    """A divisor class as a sparse, immutable map from basis label to Fraction.

    Zero coefficients are dropped on construction, so equality of classes is
    equality of the stored maps.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coefficients: Mapping[str, object] | None = None):
        coeffs = {}
        for label, value in (coefficients or {}).items():
            q = as_rational(value)
            if q:
                coeffs[str(label)] = q
        # H first, then exceptional labels in order
        self._coeffs = dict(sorted(coeffs.items(), key=lambda kv: (kv[0] != "H", kv[0])))
        self._hash = None

    @classmethod
    def generator(cls, label: str) -> "DivisorClass":
        return cls({label: 1})

    @classmethod
    def zero(cls) -> "DivisorClass":
        return cls()

    @property
    def coefficients(self) -> dict[str, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, label: str) -> Fraction:
        return self._coeffs.get(label, Fraction(0))

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        out = dict(self._coeffs)
        for label, q in other._coeffs.items():
            out[label] = out.get(label, 0) + q
        return DivisorClass(out)

    def __neg__(self):
        return DivisorClass({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        try:
            s = as_rational(scalar)
        except TypeError:
            return NotImplemented
        return DivisorClass({k: s * v for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def to_json(self) -> dict[str, str]:
        return {k: format_rational(v) for k, v in self._coeffs.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "DivisorClass":
        return cls({k: parse_rational(str(v)) for k, v in data.items()})

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for label, q in self._coeffs.items():
            sign = "-" if q < 0 else "+"
            mag = abs(q)
            term = label if mag == 1 else f"{mag}*{label}"
            parts.append((sign, term))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text

    def __repr__(self):
        return f"DivisorClass({str(self)!r})"


H = DivisorClass.generator("H")
C0 = DivisorClass.generator("C0")
C1 = DivisorClass.generator("C1")
C2 = DivisorClass.generator("C2")
C3 = DivisorClass.generator("C3")


class IntersectionLattice:
    """Labeled basis with a symmetric exact-rational Gram matrix."""

    __slots__ = ("basis", "gram", "_index")

    def __init__(self, basis: Sequence[str], gram: Sequence[Sequence[object]]):
        basis = tuple(str(b) for b in basis)
        if len(set(basis)) != len(basis):
            raise InvalidParameter(f"duplicate labels in basis {basis}")
        n = len(basis)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise InvalidParameter("gram matrix shape does not match basis")
        g = tuple(tuple(as_rational(x) for x in row) for row in gram)
        for i in range(n):
            for j in range(i + 1, n):
                if g[i][j] != g[j][i]:
                    raise InvalidParameter(
                        f"gram not symmetric at ({basis[i]}, {basis[j]})"
                    )
        self.basis = basis
        self.gram = g
        self._index = {label: i for i, label in enumerate(basis)}

    @classmethod
    def from_pairs(
        cls, basis: Sequence[str], values: Mapping[tuple[str, str], object]
    ) -> "IntersectionLattice":
        """Build from a partial table of pairings; unspecified entries are 0."""
        idx = {b: i for i, b in enumerate(basis)}
        gram = [[Fraction(0)] * len(basis) for _ in basis]
        for (a, b), v in values.items():
            i, j = idx[a], idx[b]
            gram[i][j] = gram[j][i] = as_rational(v)
        return cls(basis, gram)

    def __len__(self):
        return len(self.basis)

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        if not isinstance(other, IntersectionLattice):
            return NotImplemented
        return self.basis == other.basis and self.gram == other.gram

    def __hash__(self):
        return hash((self.basis, self.gram))

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} is not in basis {self.basis}") from None

    def entry(self, a: str, b: str) -> Fraction:
        return self.gram[self.index(a)][self.index(b)]

    def vector(self, d: DivisorClass) -> list[Fraction]:
        """Dense coordinates of ``d`` in this basis."""
        v = [Fraction(0)] * len(self.basis)
        for label, q in d.items():
            v[self.index(label)] = q
        return v

    def pair(self, d1: DivisorClass, d2: DivisorClass) -> Fraction:
        total = Fraction(0)
        for a, p in d1.items():
            row = self.gram[self.index(a)]
            for b, q in d2.items():
                g = row[self.index(b)]
                if g:
                    total += p * g * q
        return total

    def self_intersection(self, d: DivisorClass) -> Fraction:
        return self.pair(d, d)

    def extended(
        self,
        labels: Sequence[str],
        block: Sequence[Sequence[object]],
        cross: Mapping[tuple[str, str], object] | None = None,
    ) -> "IntersectionLattice":
        """Append new basis labels with their Gram block.

        ``cross`` gives pairings between an existing label and a new one;
        missing cross terms are 0. This is how a non-trivial preliminary
        blow-up chain is attached to a preset lattice.
        """
        labels = tuple(labels)
        n, m = len(self.basis), len(labels)
        basis = self.basis + labels
        gram = [list(row) + [Fraction(0)] * m for row in self.gram]
        gram += [[Fraction(0)] * n + [as_rational(x) for x in row] for row in block]
        idx = {b: i for i, b in enumerate(basis)}
        for (a, b), v in (cross or {}).items():
            if a not in self._index or b not in labels:
                raise InvalidParameter(f"cross term ({a}, {b}) must pair old with new")
            i, j = idx[a], idx[b]
            gram[i][j] = gram[j][i] = as_rational(v)
        return IntersectionLattice(basis, gram)

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "gram": [[format_rational(x) for x in row] for row in self.gram],
        }

    def __repr__(self):
        return f"IntersectionLattice(basis={self.basis!r})"


def pair(lattice: IntersectionLattice, d1: DivisorClass, d2: DivisorClass) -> Fraction:
    """Bilinear pairing ``sum_ij d1_i * gram_ij * d2_j``, exact."""
    return lattice.pair(d1, d2)


def self_intersection(lattice: IntersectionLattice, d: DivisorClass) -> Fraction:
    return lattice.pair(d, d)


def _check_c(c) -> int:
    if isinstance(c, bool) or not isinstance(c, int) or c < 1:
        raise InvalidParameter(f"H^2 = c must be a positive integer, got {c!r}")
    return c


def preset_a3_lattice(c: int) -> IntersectionLattice:
    """H plus the three curves over a resolved A3 point.

    C1, C2 come from the first blow-up and meet in the A1 point whose
    resolution contributes C0.
    """
    return _a3(_check_c(c))


def preset_a4_lattice(c: int) -> IntersectionLattice:
    """H plus the four curves over a resolved A4 point.

    C2, C3 come from the first blow-up; C0, C1 resolve the residual A2.
    """
    return _a4(_check_c(c))


# lattices are immutable, so the search loop can share them
@lru_cache(maxsize=None)
def _a3(c: int) -> IntersectionLattice:
    half = Fraction(1, 2)
    return IntersectionLattice.from_pairs(
        ("H", "C0", "C1", "C2"),
        {
            ("H", "H"): c,
            ("C0", "C0"): -2,
            ("C1", "C1"): -3 * half,
            ("C2", "C2"): -3 * half,
            ("C1", "C2"): half,
        },
    )


@lru_cache(maxsize=None)
def _a4(c: int) -> IntersectionLattice:
    third = Fraction(1, 3)
    return IntersectionLattice.from_pairs(
        ("H", "C0", "C1", "C2", "C3"),
        {
            ("H", "H"): c,
            ("C0", "C0"): -2,
            ("C1", "C1"): -2,
            ("C0", "C1"): 1,
            ("C2", "C2"): -4 * third,
            ("C3", "C3"): -4 * third,
            ("C2", "C3"): third,
        },
    )

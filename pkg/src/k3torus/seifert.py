"""Seifert circle bundles over the resolved surface and the Betti numbers of the tower.

The tower Y1 -> X~, Y2 -> Y1, Y3 -> Y2 is built from three circle bundles
whose Euler classes are the certified divisors D0, D1, D2. Rational Betti
numbers are obtained two ways:

* :func:`gysin_betti` runs the Gysin sequence on Betti numbers alone, with the
  cup-with-Euler-class ranks that hold for independent Euler classes;
* :func:`gysin_les_betti` builds the cochain model H*(X) (x) Lambda(theta_0..)
  with d theta_s = D_s, and at each step computes the actual ranks of cup
  product with D_s on the cohomology of the previous stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Mapping, Sequence

from .errors import DegenerateEulerClass, InvalidBranchData, InvalidParameter, MissingAssumption, OutOfRange
from .exact_linalg import kernel, rank
from .lattice import DivisorClass, IntersectionLattice, as_rational
from .divisors import Check, DivisorFamily, Verdict, Witness
from .resolution import OrbiSurfaceState
from .wps import SingularPoint

__all__ = [
    "BranchDatum",
    "seifert_c1",
    "BettiVector",
    "TowerSpec",
    "smoothness_check",
    "base_betti",
    "gysin_step",
    "gysin_betti",
    "closed_form_y3_betti",
    "padded_lattice",
    "TorusBundleModel",
    "gysin_les_betti",
    "y2_diffeo_label",
]


@dataclass(frozen=True)
class BranchDatum:
    divisor: DivisorClass
    m: int
    b: int


def seifert_c1(B: DivisorClass, branch_data: Sequence = ()) -> DivisorClass:
    """First Chern class [B] + sum (b_i / m_i) [D_i] of a Seifert bundle.

    Branch entries are :class:`BranchDatum` or ``(divisor, m, b)`` triples;
    a divisor may be given as a basis label.
    """
    total = B
    for entry in branch_data:
        if isinstance(entry, BranchDatum):
            D, m, b = entry.divisor, entry.m, entry.b
        else:
            D, m, b = entry
        if isinstance(D, str):
            D = DivisorClass.generator(D)
        if m < 1 or not 0 <= b < m or gcd(b, m) != 1:
            raise InvalidBranchData(f"need 0 <= b < m with gcd(b, m) = 1, got b={b}, m={m}")
        total = total + Fraction(b, m) * D
    return total


@dataclass(frozen=True)
class BettiVector:
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))

    @property
    def dim(self) -> int:
        return len(self.b) - 1

    def __getitem__(self, i):
        return self.b[i] if 0 <= i < len(self.b) else 0

    def __iter__(self):
        return iter(self.b)

    def __len__(self):
        return len(self.b)

    def poincare_dual(self) -> bool:
        return self.b == self.b[::-1]

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * x for i, x in enumerate(self.b))

    def to_json(self) -> list[int]:
        return list(self.b)


def base_betti(b2: int) -> BettiVector:
    """Rational Betti numbers of a K3-like orbisurface with the given b2."""
    return BettiVector((1, 0, b2, 0, 1))


def closed_form_y3_betti(r: int) -> BettiVector:
    """The closed form (1, 0, r-1, r+1, r+1, r-1, 0, 1) stated for Y3 alongside the Y2 label."""
    return BettiVector((1, 0, r - 1, r + 1, r + 1, r - 1, 0, 1))


def gysin_step(base: BettiVector) -> BettiVector:
    """Betti numbers of a circle bundle over a closed simply connected ``base``.

    Uses b_k(E) = coker(e: H^{k-2} -> H^k) + ker(e: H^{k-1} -> H^{k+1}) with
    cup-by-e of rank 1 out of H^0 and into the top degree (Poincare dual of
    the former) and rank 0 in between. The middle maps vanish on these towers
    because H^2 of each stage is pulled back from the 4-dimensional base.
    """
    n = base.dim

    def cup_rank(j):
        if j < 0 or j + 2 > n:
            return 0
        if j == 0 or j + 2 == n:
            return 1 if base[j] and base[j + 2] else 0
        return 0

    b = []
    for k in range(n + 2):
        coker = base[k] - cup_rank(k - 2)
        ker = base[k - 1] - cup_rank(k - 1)
        b.append(coker + ker)
    return BettiVector(b)


def gysin_betti(base: BettiVector, steps: int = 3) -> list[BettiVector]:
    """Iterated circle-bundle reduction; returns the Betti vectors of Y1 .. Y_steps."""
    if base.dim != 4 or (base[0], base[1], base[3], base[4]) != (1, 0, 0, 1):
        raise InvalidParameter(f"base must look like (1, 0, b2, 0, 1), got {base.b}")
    if base[2] < steps:
        raise DegenerateEulerClass(
            f"b2 = {base[2]} cannot hold {steps} independent Euler classes"
        )
    out = []
    cur = base
    for _ in range(steps):
        cur = gysin_step(cur)
        out.append(cur)
    return out


def y2_diffeo_label(r: int) -> str:
    if not 5 <= r <= 22:
        raise OutOfRange(f"r = {r} outside 5..22")
    return f"#{r}(S2×S4) # #{r + 1}(S3×S3)"


def padded_lattice(lattice: IntersectionLattice, b2: int, prefix: str = "R") -> IntersectionLattice:
    """Extend by orthogonal (-2)-classes up to rank ``b2``.

    The complement only enters the tower's cohomology through its rank, since
    it pairs to zero with every Euler class supported on ``lattice``.
    """
    extra = b2 - len(lattice)
    if extra < 0:
        raise InvalidParameter(f"lattice already has rank {len(lattice)} > {b2}")
    labels = [f"{prefix}{i}" for i in range(extra)]
    block = [[-2 if i == j else 0 for j in range(extra)] for i in range(extra)]
    return lattice.extended(labels, block)


class TorusBundleModel:
    """Cochain model H*(X) (x) Lambda(theta_0, ..., theta_{s-1}), d theta_t = D_t.

    H*(X) has a unit in degree 0, the lattice in degree 2 and a volume class
    in degree 4, with x.y = Q(x, y) vol.
    """

    def __init__(self, lattice: IntersectionLattice, euler_classes: Sequence[DivisorClass]):
        self.lattice = lattice
        self.n2 = len(lattice)
        self.D = [lattice.vector(d) for d in euler_classes]
        for t, v in enumerate(self.D):
            if not any(self._pair_row(v)):
                raise DegenerateEulerClass(f"Euler class {t} pairs to zero with every class")
        self.s = len(self.D)
        atoms = [(0, None)] + [(2, i) for i in range(self.n2)] + [(4, None)]
        self.basis: dict[int, list] = {}
        for a in atoms:
            for r in range(self.s + 1):
                for I in combinations(range(self.s), r):
                    self.basis.setdefault(a[0] + r, []).append((a, I))
        self.index = {k: {x: i for i, x in enumerate(v)} for k, v in self.basis.items()}
        self.top = 4 + self.s
        self._d = {}

    def _pair_row(self, v):
        g = self.lattice.gram
        return [sum(g[i][j] * v[j] for j in range(self.n2)) for i in range(self.n2)]

    def dim(self, k) -> int:
        return len(self.basis.get(k, ()))

    def _mul_atom(self, atom, D):
        deg, i = atom
        if deg == 0:
            return {(2, j): D[j] for j in range(self.n2) if D[j]}
        if deg == 2:
            g = self.lattice.gram[i]
            v = sum(g[j] * D[j] for j in range(self.n2))
            return {(4, None): v} if v else {}
        return {}

    def multiply(self, k, vec, D):
        """Multiply a degree-k cochain by a degree-2 class D (dense vector)."""
        out = [Fraction(0)] * self.dim(k + 2)
        for c, coef in enumerate(vec):
            if not coef:
                continue
            atom, I = self.basis[k][c]
            for a2, v in self._mul_atom(atom, D).items():
                out[self.index[k + 2][(a2, I)]] += coef * v
        return out

    def differential(self, k):
        """Matrix (rows = degree k+1 basis) of d on degree-k cochains."""
        if k in self._d:
            return self._d[k]
        src, tgt = self.basis.get(k, []), self.basis.get(k + 1, [])
        M = [[Fraction(0)] * len(src) for _ in tgt]
        for c, (atom, I) in enumerate(src):
            for p, t in enumerate(I):
                J = I[:p] + I[p + 1:]
                for a2, v in self._mul_atom(atom, self.D[t]).items():
                    M[self.index[k + 1][(a2, J)]][c] += (-1) ** p * v
        self._d[k] = M
        return M

    def _rank_d(self, k):
        if not self.dim(k) or not self.dim(k + 1):
            return 0
        return rank(self.differential(k))

    def betti(self) -> BettiVector:
        return BettiVector(
            [self.dim(k) - self._rank_d(k) - self._rank_d(k - 1) for k in range(self.top + 1)]
        )

    def cocycles(self, k):
        if not self.dim(k):
            return []
        if not self.dim(k + 1):
            return [[Fraction(int(i == j)) for j in range(self.dim(k))] for i in range(self.dim(k))]
        return kernel(self.differential(k), self.dim(k))

    def coboundaries(self, k):
        """Spanning set of the image of d into degree k."""
        if not self.dim(k - 1) or not self.dim(k):
            return []
        M = self.differential(k - 1)
        return [list(col) for col in zip(*M)]

    def cup_rank(self, j, D) -> int:
        """Rank of cup-by-D from H^j to H^{j+2} of this model."""
        Z = self.cocycles(j)
        if not Z or not self.dim(j + 2):
            return 0
        B = self.coboundaries(j + 2)
        images = [self.multiply(j, z, D) for z in Z]
        return rank(images + B) - (rank(B) if B else 0)


def gysin_les_betti(
    lattice: IntersectionLattice, euler_classes: Sequence[DivisorClass]
) -> list[BettiVector]:
    """Betti vectors of Y1, Y2, ... from the Gysin sequence, one circle at a time.

    Step s reads b_k(Y_s) = (h^k - rank e_{k-2}) + (h^{k-1} - rank e_{k-1})
    off the previous stage's model, with e the cup product by D_s; the result
    is checked against the cohomology of the extended model.
    """
    out = []
    prev = TorusBundleModel(lattice, [])
    prev_betti = prev.betti()
    for s, d in enumerate(euler_classes):
        D = lattice.vector(d)
        ranks = {j: prev.cup_rank(j, D) for j in range(prev.top - 1)}
        b = []
        for k in range(prev.top + 2):
            coker = prev_betti[k] - ranks.get(k - 2, 0)
            ker = prev_betti[k - 1] - ranks.get(k - 1, 0)
            b.append(coker + ker)
        step = BettiVector(b)
        nxt = TorusBundleModel(lattice, euler_classes[: s + 1])
        direct = nxt.betti()
        if direct != step:
            raise AssertionError(f"Gysin step {s + 1} gives {step.b}, model gives {direct.b}")
        out.append(step)
        prev, prev_betti = nxt, direct
    return out


@dataclass(frozen=True)
class TowerSpec:
    """The three Euler classes of the tower plus what is known about them.

    ``support`` maps each exceptional label to the singular point whose
    resolution produced it. ``hbar_smooth_simply_connected`` records the
    standing hypothesis on the ample class H; None means not asserted.
    """

    euler_classes: tuple[DivisorClass, DivisorClass, DivisorClass]
    support: Mapping[str, SingularPoint]
    witnesses: tuple[Witness, ...] = ()
    hbar_smooth_simply_connected: bool | None = None

    @classmethod
    def from_family(
        cls,
        family: DivisorFamily,
        point: SingularPoint,
        witnesses: Sequence[Witness] = (),
        hbar_smooth_simply_connected: bool | None = True,
    ) -> "TowerSpec":
        return cls(
            tuple(family.D),
            {label: point for label in family.exceptional_labels},
            tuple(witnesses),
            hbar_smooth_simply_connected,
        )

    @property
    def simply_connected(self) -> bool:
        return len(self.witnesses) == 3 and all(w.ok for w in self.witnesses)


def smoothness_check(tower: TowerSpec, state: OrbiSurfaceState) -> Verdict:
    """Each D_i agrees with H away from fully resolved points, and H is assumed good.

    One check per Euler class counts the labels of D_i - H that are not
    exceptional curves of a resolved point (must be 0).
    """
    if tower.hbar_smooth_simply_connected is None:
        raise MissingAssumption("the Seifert bundle of H must be asserted smooth and simply connected")
    resolved = set(state.resolved)
    checks = []
    for i, d in enumerate(tower.euler_classes):
        rest = d - DivisorClass.generator("H")
        bad = [lab for lab in rest.support if tower.support.get(lab) not in resolved]
        checks.append(Check(f"D{i} off-resolved labels", Fraction(len(bad)), "=", Fraction(0)))
    checks.append(
        Check("H bundle smooth, simply connected",
              Fraction(int(bool(tower.hbar_smooth_simply_connected))), "=", Fraction(1))
    )
    return Verdict.of(checks)

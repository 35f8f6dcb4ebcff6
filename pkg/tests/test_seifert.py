from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from k3torus.divisors import build_a3_family, build_a4_family, simply_connected_witness
from k3torus.errors import (
    DegenerateEulerClass,
    InvalidBranchData,
    MissingAssumption,
    OutOfRange,
)
from k3torus.lattice import C1, H, DivisorClass
from k3torus.resolution import initial_state, resolve_labels
from k3torus.seifert import (
    BettiVector,
    BranchDatum,
    TowerSpec,
    base_betti,
    gysin_betti,
    gysin_les_betti,
    padded_lattice,
    closed_form_y3_betti,
    seifert_c1,
    smoothness_check,
    y2_diffeo_label,
)
from k3torus.strominger import select_target


def test_seifert_c1_examples():
    D0 = build_a3_family(1, 1, 1).D[0]
    assert seifert_c1(D0, []) == D0
    D = H - 3 * C1
    assert seifert_c1(DivisorClass(), [BranchDatum(D, 3, 2)]) == Fraction(2, 3) * D
    assert seifert_c1(H, [BranchDatum(C1, 2, 1)]) == H + Fraction(1, 2) * C1


def test_seifert_c1_rejects_bad_branch():
    with pytest.raises(InvalidBranchData):
        seifert_c1(H, [BranchDatum(C1, 1, 1)])


small = st.integers(-5, 5)


@given(small, small, small, st.integers(2, 9))
def test_seifert_c1_additive(a, b, c, m):
    B1, B2 = a * H, b * C1
    br1 = [BranchDatum(c * C1 + H, m, 1)]
    br2 = [BranchDatum(C1, m + 1, m)]
    assert seifert_c1(B1 + B2, br1) == seifert_c1(B1, br1) + seifert_c1(B2, [])
    assert seifert_c1(B1, br1 + br2) == seifert_c1(B1, br1) + seifert_c1(DivisorClass(), br2)


def a3_tower(witnesses=True, flag=True):
    state = resolve_labels(initial_state_x36(), ["A3"])
    fam = build_a3_family(1, 1, 1)
    wits = [simply_connected_witness(fam, i) for i in range(3)] if witnesses else []
    target = select_target(state, "A3")
    return TowerSpec.from_family(fam, target, wits, flag), state


def initial_state_x36():
    from k3torus.wps import default_catalog

    return initial_state(default_catalog()["X36"])


def test_smoothness_passes_for_certified_family():
    tower, state = a3_tower()
    assert tower.simply_connected
    assert smoothness_check(tower, state).passed


def test_smoothness_fails_on_remaining_point():
    tower, state = a3_tower()
    remaining = state.remaining[0]
    bad = TowerSpec(
        (tower.euler_classes[0] - DivisorClass.generator("F"),) + tower.euler_classes[1:],
        {**tower.support, "F": remaining},
        tower.witnesses,
        True,
    )
    v = smoothness_check(bad, state)
    assert not v.passed
    assert v["D0 off-resolved labels"].lhs == 1


def test_smoothness_needs_h_flag():
    tower, state = a3_tower(flag=None)
    with pytest.raises(MissingAssumption):
        smoothness_check(tower, state)


def test_diffeo_label():
    assert y2_diffeo_label(5) == "#5(S2×S4) # #6(S3×S3)"
    assert y2_diffeo_label(22) == "#22(S2×S4) # #23(S3×S3)"
    for r in (4, 23):
        with pytest.raises(OutOfRange):
            y2_diffeo_label(r)


def test_gysin_needs_enough_classes():
    with pytest.raises(DegenerateEulerClass):
        gysin_betti(base_betti(2))


# Independent oracle: cohomology of H*(X) (x) Lambda(theta_0..theta_{s-1})
# with d theta_t = D_t, built with its own elimination routine.
def _rank(rows):
    rows = [list(r) for r in rows if any(r)]
    rk, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rk < len(rows) and col < ncols:
        piv = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(rk + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col] / rows[rk][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
        col += 1
    return rk


def oracle_betti(gram, classes):
    n, s = len(gram), len(classes)
    atoms = [(0, -1)] + [(2, i) for i in range(n)] + [(4, -1)]
    basis = {}
    for deg, i in atoms:
        for r in range(s + 1):
            for I in combinations(range(s), r):
                basis.setdefault(deg + r, []).append(((deg, i), I))

    def times(atom, v):
        deg, i = atom
        if deg == 0:
            return [((2, j), Fraction(v[j])) for j in range(n) if v[j]]
        if deg == 2:
            q = sum(Fraction(gram[i][j]) * v[j] for j in range(n))
            return [((4, -1), q)] if q else []
        return []

    def d_matrix(k):
        src, dst = basis.get(k, []), basis.get(k + 1, [])
        pos = {x: j for j, x in enumerate(dst)}
        mat = []
        for atom, I in src:
            row = [Fraction(0)] * len(dst)
            for p, t in enumerate(I):
                rest = I[:p] + I[p + 1:]
                for a2, coef in times(atom, classes[t]):
                    row[pos[(a2, rest)]] += (-1) ** p * coef
            mat.append(row)
        return mat

    top = 4 + s
    ranks = {k: _rank(d_matrix(k)) for k in range(top + 1)}
    return tuple(len(basis.get(k, [])) - ranks[k] - ranks.get(k - 1, 0) for k in range(top + 1))


@pytest.mark.parametrize("b2", [7, 12])
def test_les_matches_independent_oracle(b2):
    fam = build_a4_family(1, 1, 1)
    L = padded_lattice(fam.lattice, b2)
    les = gysin_les_betti(L, fam.D)
    for s in range(1, 4):
        vectors = [L.vector(d) for d in fam.D[:s]]
        assert les[s - 1].b == oracle_betti(L.gram, vectors)


@pytest.mark.parametrize("b2", range(7, 23))
def test_closed_form_matches_les(b2):
    fam = build_a3_family(1, 1, 1)
    closed = gysin_betti(base_betti(b2))
    les = gysin_les_betti(padded_lattice(fam.lattice, b2), fam.D)
    assert [v.b for v in closed] == [v.b for v in les]


@pytest.mark.parametrize("b2", range(7, 23))
def test_tower_shape(b2):
    r = b2 - 2
    y1, y2, y3 = gysin_betti(base_betti(b2))
    assert y1.b == (1, 0, b2 - 1, b2 - 1, 0, 1)
    assert y2.b == (1, 0, r, 2 * (r + 1), r, 0, 1)
    # H^1(Y2) = 0 so H^3(Y2) injects into H^3(Y3)
    assert y3[3] >= y2[3]
    for v in (y1, y2, y3):
        assert v.poincare_dual()
        assert v.euler_characteristic() == 0


def test_y3_for_b2_seven():
    y3 = gysin_betti(base_betti(7))[2]
    assert y3.b == (1, 0, 4, 17, 17, 4, 0, 1)
    assert y3[2] == closed_form_y3_betti(5)[2]
    assert y3 != closed_form_y3_betti(5)


def test_betti_vector_helpers():
    v = BettiVector((1, 0, 2, 2, 0, 1))
    assert v.dim == 5 and v.poincare_dual() and v.euler_characteristic() == 0

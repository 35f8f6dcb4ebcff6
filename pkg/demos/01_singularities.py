"""Where the singular points of a weighted K3 hypersurface come from.

A vertex of P(a0, a1, a2, a3) lies on the generic surface exactly when no
pure power of that coordinate has the right degree. An edge with
gcd(a_i, a_j) = g > 1 meets the surface in finitely many points, each of
type A_{g-1}; the count comes from the binary form left after factoring
out common powers.
"""

from k3torus.wps import (
    default_catalog,
    edge_monomials,
    edge_reduced_degree,
    singularity_content,
    vertex_on_surface,
)
from math import gcd
from itertools import combinations


def walk(fam):
    print(f"{fam.name} in P{fam.weights}, degree {fam.degree}")
    for i, a in enumerate(fam.weights):
        where = "on the surface" if vertex_on_surface(fam, i) else "avoided"
        print(f"  vertex {i} (weight {a}): {where}")
    for i, j in combinations(range(4), 2):
        g = gcd(fam.weights[i], fam.weights[j])
        if g < 2:
            continue
        monos = edge_monomials(fam, i, j)
        bi, bj, d = edge_reduced_degree(fam, i, j)
        print(f"  edge ({i},{j}) gcd {g}: monomials {monos}")
        print(f"    residual form of degree {d} on P({bi},{bj}) -> {d // (bi * bj)} point(s) of type A{g - 1}")
    pts = singularity_content(fam)
    print("  content:", ", ".join(str(p) for p in pts))
    print("  total index:", sum(p.n for p in pts))
    print()


if __name__ == "__main__":
    for fam in default_catalog().values():
        walk(fam)

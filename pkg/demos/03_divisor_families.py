"""The ample class E and the three divisors over a resolved A3 or A4 point.

Every D_i is orthogonal to E for all parameters. Nakai-Moishezon
positivity and the gcd witnesses depend on (c, k, m), which the search
scans in lexicographic order of (m, k).
"""

from k3torus.divisors import (
    build_a3_family,
    check_primitivity,
    nakai_moishezon,
    search_parameters,
    simply_connected_witness,
)
from k3torus.errors import SearchExhausted

fam = build_a3_family(1, 1, 1)
print(f"A3, c = k = m = 1: q = {fam.q}")
print(f"  E  = {fam.E}")
for i, d in enumerate(fam.D):
    print(f"  D{i} = {d}   D{i}^2 = {fam.lattice.self_intersection(d)}")

print("\nprimitivity")
print(check_primitivity(fam).render(), end="")
print("\nNakai-Moishezon")
print(nakai_moishezon(fam).render(), end="")
print("\nwitnesses")
for i in range(3):
    w = simply_connected_witness(fam, i)
    print(f"  D{i}: {dict(zip(w.classes, w.values))}")

for case, c in (("A3", 7), ("A4", 12), ("A3", 5)):
    try:
        r = search_parameters(case, c, bounds=(50, 50))
        print(f"\nsearch {case}, c = {c}: m = {r.m}, k = {r.k} after {r.tried} candidates")
    except SearchExhausted as exc:
        print(f"\nsearch {case}, c = {c}: exhausted, {exc.stats}")

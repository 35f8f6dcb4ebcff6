"""Betti numbers of the circle-bundle tower Y1 -> Y2 -> Y3.

The numbers are computed twice: from ranks alone, and from an explicit
cochain model whose differential sends each new angular form to its Euler
class. Both agree, and the Y3 middle Betti numbers come out as 3r + 2.
"""

from k3torus.divisors import build_a3_family
from k3torus.seifert import (
    base_betti,
    gysin_betti,
    gysin_les_betti,
    padded_lattice,
    closed_form_y3_betti,
    y2_diffeo_label,
)

fam = build_a3_family(1, 1, 1)
for b2 in (7, 12, 22):
    r = b2 - 2
    closed = gysin_betti(base_betti(b2))
    model = gysin_les_betti(padded_lattice(fam.lattice, b2), fam.D)
    print(f"b2 = {b2}, r = {r}")
    for name, a, b in zip(("Y1", "Y2", "Y3"), closed, model):
        print(f"  {name}: {a.b}  (model {b.b})")
    print(f"  Y2 ~ {y2_diffeo_label(r)}")
    print(f"  closed form quoted for Y3: {closed_form_y3_betti(r).b}\n")

"""Euler numbers of partial resolutions.

Each remaining A_n point takes n away from the smooth value 24, so fully
resolving it adds n back. The orbifold Euler number additionally discounts
n/(n+1) per remaining point.
"""

from k3torus.resolution import (
    enumerate_table,
    initial_state,
    orbifold_euler,
    pinned_table,
    render_table,
    resolve_labels,
)
from k3torus.wps import default_catalog

catalog = default_catalog()

for name in ("X36", "X50"):
    s = initial_state(catalog[name])
    print(f"{name}: e = {s.e}, b2 = {s.b2}, remaining {','.join(s.remaining_labels)}")

s = resolve_labels(initial_state(catalog["X50"]), ["A4"])
print(f"\nX50 with A4 resolved: e = {s.e}, e_orb = {orbifold_euler(s)}")

rows = enumerate_table(catalog.values())
print(f"\n{len(rows)} reachable (e, surface, resolved) rows; the pinned one-per-e selection:\n")
print(render_table(pinned_table(catalog.values())))

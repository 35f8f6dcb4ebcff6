"""Exact verification of T^3-bundle data over K3 orbisurfaces.

Singularities of weighted K3 hypersurfaces, Euler-number bookkeeping of their
partial resolutions, E-primitive divisor families over a resolved A3/A4 point,
Betti numbers of the resulting circle-bundle tower, and the scalar anomaly
equation that fixes the torsion parameter t.
"""

__version__ = "0.1.0"

from .lattice import DivisorClass, IntersectionLattice, pair, self_intersection, preset_a3_lattice, preset_a4_lattice
from .wps import WeightedFamily, SingularPoint, singularity_content, load_catalog
from .resolution import initial_state, resolve, orbifold_euler, enumerate_table, pinned_table
from .divisors import build_a3_family, build_a4_family, search_parameters
from .seifert import gysin_betti, gysin_les_betti, seifert_c1, y2_diffeo_label
from .strominger import certify, solve_t, anomaly_budget, q_of

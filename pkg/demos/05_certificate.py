"""End to end: X50 with its A4 point resolved.

The certificate records every exact intermediate value and the facts that
are assumed rather than computed. Rerunning gives byte-identical JSON.
"""

from k3torus.errors import PipelineError
from k3torus.strominger import certify, recompute_t_squared
from k3torus.wps import default_catalog

x50 = default_catalog()["X50"]
cert = certify(x50, ["A4"], "a4", c=1, c2=8, alpha=2)
print(cert.render())
print("recomputed t^2 matches:", recompute_t_squared(cert) == cert.t_squared)
print("deterministic:", certify(x50, ["A4"], "a4", c=1, c2=8, alpha=2).dumps() == cert.dumps())

# c2(V) must exceed e_orb for t^2 to be positive
try:
    certify(x50, ["A4"], "a4", c=1, c2=5)
except PipelineError as exc:
    print(f"\nc2 = 5: stage {exc.stage}, {type(exc.cause).__name__}")

"""A walk through determinantal semi-invariants on the Kronecker quiver 1 => 2.

Run with ``python3 demos/kronecker_tour.py``.
"""

from qsi import invariants as inv
from qsi.fixtures import K2
from qsi.io import parse_path_expr, render_poly
from qsi.poly import RepPoint
from qsi.quiver import AddMap
from qsi.repthy import semistable_search
from qsi.spanning import enumerate_gamma, phi_gamma, span_check

alpha = {"1": 2, "2": 2}

# A map O(1) -> O(2) given by the path combination a + b.
phi = AddMap.single(K2, parse_path_expr("a + b", K2))
p = inv.det_semiinvariant(K2, alpha, phi)
print("P_{a+b} =", render_poly(p))
print("weight  =", inv.weight_of_map(phi))
print("infinitesimal check:", bool(inv.check_semiinvariance(p, inv.weight_of_map(phi))))

# The only admissible Gamma at (2,2) produces exactly this map.
(g,) = enumerate_gamma(K2, alpha)
print("\nGamma:", g.describe())
print("Phi_Gamma:", repr(phi_gamma(K2, alpha, g).phi))

# Determinantal semi-invariants span every weight space we try.
for chi in ({"a": 1, "b": 1}, {"a": 2, "b": 0}, {"a": 2, "b": 2}):
    report = span_check(K2, alpha, chi, "A", workers=1)
    print()
    print(report.render(), end="")

# Semistability: (1,0) is witnessed by phi = a, the origin is not.
beta = {"1": 1, "2": 1}
w = semistable_search(K2, beta, RepPoint(K2, beta, {"a": [[1]], "b": [[0]]}), workers=1)
print("\nwitness at (1,0):", repr(w.phi), "value", w.value)
res = semistable_search(K2, beta, RepPoint.origin(K2, beta), workers=1)
print("origin:", type(res).__name__, "after", res.examined, "maps")

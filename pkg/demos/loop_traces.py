"""Traces on the one-loop quiver are combinations of determinants.

Tr(X^k) is recovered from det(I + lambda X^k) at n+1 values of lambda, and
polarization splits a power of the loop into parallel copies.
"""

from fractions import Fraction

from qsi import invariants as inv
from qsi.fixtures import L1
from qsi.io import render_poly
from qsi.quiver import make_path
from qsi.spanning import build_q_chi, polarize, restitute, span_check

for n in (1, 2, 3):
    for word in (["l"], ["l", "l"]):
        cert = inv.trace_from_dets(L1, {"1": n}, make_path(L1, word))
        print(f"n={n} Tr({'.'.join(word)}): coefficients {[str(c) for c in cert.coefficients]}, "
              f"verified {cert.verify(L1, {'1': n})}")

tr = inv.trace_invariant(L1, {"1": 2}, make_path(L1, ["l"]))
chi = {"l": 2}
qc = build_q_chi(L1, chi)
square = tr * tr
pol = polarize(square, chi, qc)
print("\nTr(X)^2          =", render_poly(square))
print("polarized        =", render_poly(pol))
print("restituted / 2!  =", render_poly(restitute(pol, qc) * Fraction(1, 2)))

print()
print(span_check(L1, {"1": 2}, chi, "A", workers=1).render(), end="")

"""Presentations, P_{R,beta} and the determinant test for perpendicularity on A3: 1 -> 2 -> 3."""

from qsi.fixtures import A3, K2
from qsi.io import render_poly
from qsi.poly import RepPoint
from qsi.repthy import (canonical_presentation, ext_dim, hom_dim, minimize_presentation, p_R_beta,
                        perp_check, simple_rep)

s2 = simple_rep(A3, "2")
pres = canonical_presentation(A3, s2)
print("canonical presentation of S_2:", repr(pres.phi))
print("minimized:", repr(minimize_presentation(pres).phi))
print("P_{S_2,(0,1,1)} =", render_poly(p_R_beta(A3, s2, {"1": 0, "2": 1, "3": 1})))

# On the Kronecker quiver, S_1 is left perpendicular to R_p exactly when det[p(a) p(b)] != 0.
s1 = canonical_presentation(K2, simple_rep(K2, "1"))
beta = {"1": 2, "2": 1}
for label, mats in (("independent columns", {"a": [[1], [0]], "b": [[0], [1]]}),
                    ("parallel columns", {"a": [[1], [0]], "b": [[1], [0]]})):
    p = RepPoint(K2, beta, mats)
    res = perp_check(s1.phi, p, cross_validate=True, presentation=s1)
    print(f"{label}: det != 0 is {res.nonvanishing}; Hom = {res.hom}, Ext = {res.ext}")
    assert (hom_dim(K2, s1.cokernel, p), ext_dim(K2, s1.cokernel, p)) == (res.hom, res.ext)

import math
import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsi import invariants as inv
from qsi import linalg
from qsi.fixtures import A3, K2, L1, loop
from qsi.poly import Poly, RepPoint, a_degree_component, determinant, evaluate, ring_of, v_weight_of
from qsi.quiver import Arrow, PathComb, Quiver, make_path
from qsi.search import Bounds
from qsi.spanning import (build_q_chi, enumerate_gamma, f_gamma, phi_gamma, polarize, restitute,
                          span_check, theorem1_check, theorem1_sign, trace_monomials,
                          weight_space_basis)

K22 = {"1": 2, "2": 2}


# ---------------------------------------------------------------- oracle

def test_oracle_trivial_group():
    basis = weight_space_basis(K2, {"1": 1, "2": 1}, {"a": 1, "b": 1})
    r = ring_of(K2, {"1": 1, "2": 1})
    assert basis == [r.x("a", 1, 1) * r.x("b", 1, 1)]


def test_oracle_kronecker_mixed_degree():
    basis = weight_space_basis(K2, K22, {"a": 1, "b": 1})
    ring = ring_of(K2, K22)
    xa, xb = ring.matrix("a"), ring.matrix("b")
    mixed = determinant([[xa[i][j] + xb[i][j] for j in range(2)] for i in range(2)]) - determinant(xa) - determinant(xb)
    assert len(basis) == 1
    assert basis[0] * mixed.sorted_terms()[0][1] == mixed * basis[0].sorted_terms()[0][1]


def test_oracle_conjugation_invariants():
    basis = weight_space_basis(L1, {"1": 2}, {"l": 2})
    assert len(basis) == 2
    t1 = inv.trace_invariant(L1, {"1": 2}, make_path(L1, ["l"]))
    t2 = inv.trace_invariant(L1, {"1": 2}, make_path(L1, ["l", "l"]))
    ech = linalg.SparseEchelon()
    for f in basis:
        ech.add(dict(f.terms))
    assert ech.contains(dict((t1 * t1).terms)) and ech.contains(dict(t2.terms))


def test_oracle_empty_when_no_monomials():
    assert weight_space_basis(A3, {"1": 0, "2": 1, "3": 1}, {"a": 1}) == []
    assert weight_space_basis(K2, {"1": 1, "2": 2}, {"a": 1}) == []


def random_sl(n, rng):
    g = linalg.identity(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        e = linalg.identity(n)
        e[i][j] = rng.choice([-2, -1, 1, 2])
        g = linalg.matmul(g, e)
    return g


def group_oracle_dim(q, alpha, chi, seed=0):
    """dim of SL(alpha)-invariants of degree chi from f(g.p) = f(p) at random points."""
    ring = ring_of(q, alpha)
    monos = ring.monomials_of_degree(chi)
    rng = random.Random(seed)
    rows = []
    for _ in range(2 * len(monos) + 4):
        g = inv.GroupElement(q, alpha, {v: random_sl(ring.alpha[v], rng) for v in q.vertices})
        p = RepPoint.random(q, alpha, rng)
        gp = g.act(p)
        rows.append([evaluate(Poly(ring, {m: 1}), gp) - evaluate(Poly(ring, {m: 1}), p) for m in monos])
    return len(monos) - linalg.rank(rows, len(monos))


@pytest.mark.parametrize("q,alpha,chi", [
    (K2, K22, {"a": 1, "b": 1}), (K2, K22, {"a": 2, "b": 0}), (L1, {"1": 2}, {"l": 2}),
    (L1, {"1": 2}, {"l": 3}), (A3, {"1": 1, "2": 2, "3": 1}, {"a": 1, "b": 1}),
    (loop(2), {"1": 2}, {"l": 1, "m": 1}),
])
def test_oracle_matches_group_level_computation(q, alpha, chi):
    assert len(weight_space_basis(q, alpha, chi)) == group_oracle_dim(q, alpha, chi)


@pytest.mark.parametrize("q,alpha,chi", [
    (K2, K22, {"a": 2, "b": 2}), (L1, {"1": 2}, {"l": 3}), (A3, {"1": 1, "2": 1, "3": 1}, {"a": 1, "b": 1}),
])
def test_oracle_elements_are_semi_invariant(q, alpha, chi):
    for f in weight_space_basis(q, alpha, chi):
        assert inv.check_semiinvariance(f, v_weight_of(f))


# ---------------------------------------------------------------- Gamma

def canonical(g):
    mu, nu = g.mu_map, g.nu_map
    ib = frozenset(frozenset(a for a in mu if mu[a] == lab) for lab, _ in g.I)
    jb = frozenset(frozenset(a for a in nu if nu[a] == lab) for lab, _ in g.J)
    kp = frozenset((g.mu_fiber(lab)[0], g.nu_fiber(lab)[0]) for lab, _ in g.K)
    return ib, jb, kp


def brute_force_gammas(q, alpha):
    """All admissible (I-fibers, J-fibers, K-pairs), found by trying every labelling."""
    arrows = q.arrow_ids
    n = len(arrows)
    labels_mu = [("I", k) for k in range(n)] + [("K", k) for k in range(n)]
    labels_nu = [("J", k) for k in range(n)] + [("K", k) for k in range(n)]
    found = set()
    for mu in product(labels_mu, repeat=n):
        for nu in product(labels_nu, repeat=n):
            fib = {}
            for a, lab in zip(arrows, mu):
                fib.setdefault(lab, [[], []])[0].append(a)
            for a, lab in zip(arrows, nu):
                fib.setdefault(lab, [[], []])[1].append(a)
            ok = True
            for lab, (outs, ins) in fib.items():
                if lab[0] == "K":
                    if len(outs) != 1 or len(ins) != 1 or q.arrow(outs[0]).source != q.arrow(ins[0]).target:
                        ok = False
                elif lab[0] == "I":
                    vs = {q.arrow(a).source for a in outs}
                    if len(vs) != 1 or len(outs) != alpha[vs.pop()]:
                        ok = False
                else:
                    vs = {q.arrow(a).target for a in ins}
                    if len(vs) != 1 or len(ins) != alpha[vs.pop()]:
                        ok = False
                if not ok:
                    break
            if ok:
                found.add((frozenset(frozenset(o) for lab, (o, _) in fib.items() if lab[0] == "I"),
                           frozenset(frozenset(i) for lab, (_, i) in fib.items() if lab[0] == "J"),
                           frozenset((o[0], i[0]) for lab, (o, i) in fib.items() if lab[0] == "K")))
    return found


@pytest.mark.parametrize("q,alpha", [
    (K2, {"1": 1, "2": 1}), (K2, {"1": 2, "2": 2}), (L1, {"1": 1}), (L1, {"1": 2}),
    (A3, {"1": 1, "2": 1, "3": 1}), (loop(2), {"1": 1}), (loop(2), {"1": 2}), (loop(3), {"1": 1}),
    (build_q_chi(K2, {"a": 2, "b": 1}).quiver, {"1": 1, "2": 1}),
])
def test_gamma_enumeration_matches_brute_force(q, alpha):
    gammas = enumerate_gamma(q, alpha)
    forms = [canonical(g) for g in gammas]
    assert len(forms) == len(set(forms))
    assert set(forms) == brute_force_gammas(q, alpha)
    assert all(g.is_admissible(q, alpha) for g in gammas)


def test_gamma_examples():
    gs = enumerate_gamma(K2, K22)
    assert len(gs) == 1 and not gs[0].K
    assert gs[0].mu_map == {"a": "i1", "b": "i1"} and gs[0].nu_map == {"a": "j1", "b": "j1"}
    ls = enumerate_gamma(L1, {"1": 1})
    assert any(g.K and g.mu_map["l"] == g.nu_map["l"] for g in ls)
    ks = enumerate_gamma(K2, {"1": 1, "2": 1})
    assert len(ks) == 1 and len(ks[0].I) == 2 and len(ks[0].J) == 2
    skew = enumerate_gamma(K2, {"1": 1, "2": 2})
    assert len(skew) == 1 and len(skew[0].I) == 2 and len(skew[0].J) == 1
    assert enumerate_gamma(K2, {"1": 2, "2": 1}) != [] and enumerate_gamma(K2, {"1": 3, "2": 1}) == []


def test_f_gamma_examples():
    r1 = ring_of(L1, {"1": 1})
    g = [x for x in enumerate_gamma(L1, {"1": 1}) if x.K][0]
    assert f_gamma(L1, {"1": 1}, g) == r1.x("l", 1, 1)
    g2 = [x for x in enumerate_gamma(L1, {"1": 2}) if x.K][0]
    assert f_gamma(L1, {"1": 2}, g2) == inv.trace_invariant(L1, {"1": 2}, make_path(L1, ["l"]))
    ring = ring_of(K2, K22)
    xa, xb = ring.matrix("a"), ring.matrix("b")
    mixed = determinant([[xa[i][j] + xb[i][j] for j in range(2)] for i in range(2)]) - determinant(xa) - determinant(xb)
    f = f_gamma(K2, K22, enumerate_gamma(K2, K22)[0])
    assert f == mixed or f == -mixed


@pytest.mark.parametrize("q,alpha", [(K2, K22), (loop(2), {"1": 2}), (A3, {"1": 1, "2": 1, "3": 1})])
def test_f_gamma_is_multilinear(q, alpha):
    for g in enumerate_gamma(q, alpha):
        f = f_gamma(q, alpha, g)
        for mono in f.terms:
            assert f.a_degree(mono) == {a: 1 for a in q.arrow_ids}


def test_phi_gamma_examples():
    pg = phi_gamma(K2, K22, enumerate_gamma(K2, K22)[0])
    assert repr(pg.phi) == "AddMap([1] -> [2]: [a + b])" and pg.cycles == []
    g = [x for x in enumerate_gamma(L1, {"1": 3}) if x.K][0]
    pg = phi_gamma(L1, {"1": 3}, g)
    assert pg.phi.shape == (0, 0) and [str(c) for c in pg.cycles] == ["l"]
    g = [x for x in enumerate_gamma(A3, {"1": 1, "2": 1, "3": 1}) if x.K][0]
    pg = phi_gamma(A3, {"1": 1, "2": 1, "3": 1}, g)
    assert pg.phi.entries[0][0] == PathComb.of(make_path(A3, ["a", "b"]))
    assert pg.degree == {"a": 1, "b": 1}


@pytest.mark.parametrize("q,alpha", [
    (K2, K22), (L1, {"1": 1}), (L1, {"1": 2}), (A3, {"1": 1, "2": 1, "3": 1}), (loop(2), {"1": 2}),
    (loop(3), {"1": 1}), (build_q_chi(L1, {"l": 3}).quiver, {"1": 2}),
])
def test_theorem1_for_every_gamma(q, alpha):
    for g in enumerate_gamma(q, alpha):
        assert theorem1_check(q, alpha, g), g.describe()
        assert theorem1_sign(q, alpha, g) in (1, -1)


# ---------------------------------------------------------------- polarization

def test_build_q_chi_examples():
    qc = build_q_chi(K2, {"a": 2, "b": 1})
    assert qc.quiver.arrow_ids == ("a_1", "a_2", "b_1")
    assert str(qc.sigma.arrow_map["a"]) == "a_1 + a_2"
    assert str(qc.pi.arrow_map["a_2"]) == "a"
    qc = build_q_chi(L1, {"l": 1})
    assert len(qc.quiver.arrows) == 1 and qc.quiver.vertices == L1.vertices
    qc = build_q_chi(K2, {"a": 1, "b": 0})
    assert qc.quiver.arrow_ids == ("a_1",) and qc.sigma.arrow_map["b"].is_zero()


def test_q_chi_name_collisions_avoided():
    q = Quiver(("1",), (Arrow("a", "1", "1"), Arrow("a_1", "1", "1")))
    qc = build_q_chi(q, {"a": 1, "a_1": 1})
    assert len(set(qc.quiver.arrow_ids)) == 2


def test_polarize_examples():
    r = ring_of(K2, {"1": 1, "2": 1})
    f = r.x("a", 1, 1) ** 2 * r.x("b", 1, 1)
    qc = build_q_chi(K2, {"a": 2, "b": 1})
    g = polarize(f, {"a": 2, "b": 1}, qc)
    rq = ring_of(qc.quiver, {"1": 1, "2": 1})
    assert g == rq.x("a_1", 1, 1) * rq.x("a_2", 1, 1) * rq.x("b_1", 1, 1) * 2
    assert restitute(g, qc) == f * 2
    qa = build_q_chi(K2, {"a": 1})
    assert polarize(r.x("a", 1, 1), {"a": 1}, qa) == ring_of(qa.quiver, {"1": 1, "2": 1}).x("a_1", 1, 1)
    ring = ring_of(K2, K22)
    d = determinant(ring.matrix("a"))
    q2 = build_q_chi(K2, {"a": 2})
    assert restitute(polarize(d, {"a": 2}, q2), q2) == d * 2
    with pytest.raises(ValueError):
        polarize(d, {"a": 1})


@st.composite
def homogeneous(draw):
    q, alpha = draw(st.sampled_from([(K2, {"1": 1, "2": 2}), (L1, {"1": 2}), (A3, {"1": 1, "2": 1, "3": 2})]))
    ring = ring_of(q, alpha)
    chi = {a: 0 for a in q.arrow_ids}
    for _ in range(draw(st.integers(1, 4))):
        chi[draw(st.sampled_from(q.arrow_ids))] += 1
    monos = ring.monomials_of_degree(chi)
    picks = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=4))
    f = Poly(ring, {m: draw(st.integers(1, 5)) for m in picks})
    return q, chi, f


@given(homogeneous())
def test_restitution_identity(data):
    q, chi, f = data
    qc = build_q_chi(q, chi)
    factor = math.prod(math.factorial(m) for m in chi.values())
    assert restitute(polarize(f, chi, qc), qc) == f * factor


# ---------------------------------------------------------------- span reports

@pytest.mark.parametrize("q,alpha,chi,dim", [
    (K2, K22, {"a": 1, "b": 1}, 1), (L1, {"1": 2}, {"l": 1}, 1), (L1, {"1": 2}, {"l": 2}, 2),
])
def test_span_check_examples(q, alpha, chi, dim):
    r = span_check(q, alpha, chi, "A", workers=1)
    assert (r.oracle_dim, r.span_dim, r.verdict) == (dim, dim, "EQUAL")
    assert f"oracle={dim} span={dim} EQUAL" in r.render()


def test_span_check_strategy_b_and_containment():
    r = span_check(K2, K22, {"a": 2, "b": 2}, "B", Bounds(max_len=1, max_mult=2, limit=300), workers=1)
    assert r.contained and r.span_dim <= r.oracle_dim
    assert all(g.contained for g in r.generators)


def test_span_check_with_traces():
    # degree l^3 on L1 at (2): Tr^3, Tr*Tr(l^2), Tr(l^3) span a 2-dim space with det(l)*Tr
    r = span_check(L1, {"1": 2}, {"l": 3}, "B", Bounds(max_len=1, max_mult=2, trace_degree=2), workers=1)
    assert r.equal
    assert any("Tr(" in g.description for g in r.generators)


def test_trace_monomials_degrees():
    descs = [d for d, _ in trace_monomials(loop(2), {"1": 1}, {"l": 2, "m": 1})]
    assert descs == ["Tr(l)*Tr(l)*Tr(m)", "Tr(l)*Tr(l.m)", "Tr(m)*Tr(l.l)", "Tr(l.l.m)"]


def test_span_report_json_is_stable():
    a = span_check(L1, {"1": 2}, {"l": 2}, "A", workers=1).to_json()
    b = span_check(L1, {"1": 2}, {"l": 2}, "A", workers=1).to_json()
    assert a == b and '"equal": true' in a


def test_unknown_strategy():
    with pytest.raises(ValueError):
        span_check(L1, {"1": 1}, {"l": 1}, "C")


def test_a_degree_component_of_gamma_map():
    g = enumerate_gamma(K2, K22)[0]
    pg = phi_gamma(K2, K22, g)
    comp = a_degree_component(inv.det_semiinvariant(K2, K22, pg.phi), pg.degree)
    assert not comp.is_zero()

import random

import pytest
import sympy

from oracles import sym_matrix, to_sympy
from qsi import invariants as inv
from qsi.fixtures import A3, K2, L1, loop
from qsi.io import parse_path_expr
from qsi.poly import RepPoint, determinant, evaluate, ring_of
from qsi.quiver import (AddMap, FunctorData, PathComb, QuiverError, apply_functor_dim, enumerate_cycles,
                        make_path, path_combs)
from qsi.search import Bounds, enumerate_add_maps


def single(q, text):
    return AddMap.single(q, parse_path_expr(text, q))


def test_rep_matrix_examples():
    ring = ring_of(K2, {"1": 2, "2": 2})
    assert inv.rep_matrix(K2, {"1": 2, "2": 2}, single(K2, "a")) == ring.matrix("a")
    l1 = ring_of(L1, {"1": 1})
    m = inv.rep_matrix(L1, {"1": 1}, single(L1, "e_1 + l"))
    assert m == [[l1.x("l", 1, 1) + 1]]
    a3 = ring_of(A3, {"1": 1, "2": 1, "3": 1})
    m = inv.rep_matrix(A3, {"1": 1, "2": 1, "3": 1}, single(A3, "a.b"))
    assert m == [[a3.x("a", 1, 1) * a3.x("b", 1, 1)]]


def test_det_semiinvariant_examples():
    alpha = {"1": 2, "2": 2}
    ring = ring_of(K2, alpha)
    assert inv.det_semiinvariant(K2, alpha, single(K2, "a")) == determinant(ring.matrix("a"))
    with pytest.raises(ValueError, match="non-square: 1 != 2"):
        inv.det_semiinvariant(K2, {"1": 1, "2": 2}, single(K2, "a"))
    ab = AddMap(K2, ["1"], ["2", "2"], [[parse_path_expr("a", K2), parse_path_expr("b", K2)]])
    r = ring_of(K2, {"1": 2, "2": 1})
    expected = r.x("a", 1, 1) * r.x("b", 2, 1) - r.x("a", 2, 1) * r.x("b", 1, 1)
    assert inv.det_semiinvariant(K2, {"1": 2, "2": 1}, ab) == expected


def test_zero_determinant_is_legal():
    phi = AddMap(K2, ["1"], ["2"], [[PathComb.zero("1", "2")]])
    assert inv.det_semiinvariant(K2, {"1": 1, "2": 1}, phi).is_zero()


def test_trace_invariant_examples():
    r2 = ring_of(L1, {"1": 2})
    assert inv.trace_invariant(L1, {"1": 2}, make_path(L1, ["l"])) == r2.x("l", 1, 1) + r2.x("l", 2, 2)
    x = sym_matrix(r2, "l")
    t2 = inv.trace_invariant(L1, {"1": 2}, make_path(L1, ["l", "l"]))
    assert to_sympy(t2) == sympy.expand((x * x).trace())
    r1 = ring_of(L1, {"1": 1})
    assert inv.trace_invariant(L1, {"1": 1}, make_path(L1, ["l"])) == r1.x("l", 1, 1)
    with pytest.raises(QuiverError):
        inv.trace_invariant(A3, {"1": 1, "2": 1, "3": 1}, make_path(A3, ["a"]))


def test_trace_rotation_invariance():
    q = loop(2)
    c = make_path(q, ["l", "m", "m"])
    ts = {inv.trace_invariant(q, {"1": 2}, r) for r in inv.cycle_rotations(q, c)}
    assert len(ts) == 1


def test_weight_of_map_examples():
    assert inv.weight_of_map(single(K2, "a")) == {"1": -1, "2": 1}
    assert inv.weight_of_map(single(L1, "e_1 + l")) == {"1": 0}
    phi = single(K2, "a")
    assert inv.weight_of_map(inv.block_diag(phi, phi)) == {"1": -2, "2": 2}


def test_check_semiinvariance_examples():
    alpha = {"1": 2, "2": 2}
    ring = ring_of(K2, alpha)
    assert inv.check_semiinvariance(determinant(ring.matrix("a")), {"1": -1, "2": 1})
    bad = inv.check_semiinvariance(ring.x("a", 1, 1), {"1": 0, "2": 0})
    assert not bad and bad.vertex is not None
    r2 = ring_of(L1, {"1": 2})
    assert inv.check_semiinvariance(r2.x("l", 1, 1) + r2.x("l", 2, 2), {"1": 0})
    # off-diagonal entry: torus passes but sl fails
    f = r2.x("l", 1, 2)
    res = inv.check_semiinvariance(f, {"1": 0})
    assert not res and res.element != "torus"


def candidate_maps(q, alpha, n=25, seed=0, max_len=2):
    maps = list(enumerate_add_maps(q, alpha, Bounds(max_len=max_len, max_mult=2, limit=400, per_config=60)))
    rng = random.Random(seed)
    return rng.sample(maps, min(n, len(maps)))


CASES = [(K2, {"1": 2, "2": 2}), (K2, {"1": 2, "2": 1}), (L1, {"1": 2}), (A3, {"1": 1, "2": 2, "3": 1}),
         (loop(2), {"1": 2})]


@pytest.mark.parametrize("q,alpha", CASES)
def test_group_semi_invariance(q, alpha):
    rng = random.Random(7)
    for phi in candidate_maps(q, alpha, n=8):
        p = inv.det_semiinvariant(q, alpha, phi)
        w = inv.weight_of_map(phi)
        assert inv.check_semiinvariance(p, w)
        for _ in range(6):
            g = inv.GroupElement.random(q, alpha, rng)
            pt = RepPoint.random(q, alpha, rng)
            assert evaluate(p, g.act(pt)) == g.character(w) * evaluate(p, pt)


@pytest.mark.parametrize("q,alpha", [(L1, {"1": 2}), (loop(2), {"1": 2}), (L1, {"1": 3})])
def test_traces_are_invariant(q, alpha):
    rng = random.Random(2)
    for c in enumerate_cycles(q, 3):
        t = inv.trace_invariant(q, alpha, c)
        for _ in range(3):
            g = inv.GroupElement.random(q, alpha, rng)
            pt = RepPoint.random(q, alpha, rng)
            assert evaluate(t, g.act(pt)) == evaluate(t, pt)


@pytest.mark.parametrize("q,alpha", CASES[:4])
def test_block_multiplicativity(q, alpha):
    maps = candidate_maps(q, alpha, n=6, seed=1)
    for phi, mu in zip(maps, maps[1:]):
        lhs = inv.det_semiinvariant(q, alpha, inv.block_diag(phi, mu))
        assert lhs == inv.det_semiinvariant(q, alpha, phi) * inv.det_semiinvariant(q, alpha, mu)


def test_block_diag_examples():
    a, b = single(K2, "a"), single(K2, "b")
    r = ring_of(K2, {"1": 1, "2": 1})
    assert inv.det_semiinvariant(K2, {"1": 1, "2": 1}, inv.block_diag(a, b)) == r.x("a", 1, 1) * r.x("b", 1, 1)
    empty = AddMap(K2, [], [], [])
    assert inv.block_diag(a, empty) == a
    alpha = {"1": 2, "2": 2}
    da = inv.det_semiinvariant(K2, alpha, a)
    assert inv.det_semiinvariant(K2, alpha, inv.block_diag(a, a)) == da * da


def test_torus_on_maps_matches_rescaled_points():
    rng = random.Random(4)
    alpha = {"1": 2, "2": 2}
    for phi in candidate_maps(K2, alpha, n=5, seed=3):
        lam = {"a": rng.choice([2, -3]), "b": rng.choice([5, -1])}
        p = RepPoint.random(K2, alpha, rng)
        assert inv.det_at(inv.rescale_arrows(phi, lam), p) == inv.det_at(phi, inv.rescale_point(p, lam))


def random_functor(src, tgt, vmap, rng):
    amap = {}
    for arr in src.arrows:
        opts = path_combs(tgt, vmap[arr.source], vmap[arr.target], 2, (-1, 0, 1, 2))
        amap[arr.id] = opts[rng.randrange(min(len(opts), 40))]
    return FunctorData(src, tgt, vmap, amap)


FUNCTOR_CASES = [
    (K2, K2, {"1": "1", "2": "2"}, {"1": 2, "2": 2}),
    (K2, L1, {"1": "1", "2": "1"}, {"1": 2}),
    (A3, L1, {"1": "1", "2": "1", "3": "1"}, {"1": 1}),
    (L1, L1, {"1": "1"}, {"1": 2}),
    (A3, A3, {"1": "1", "2": "2", "3": "3"}, {"1": 1, "2": 1, "3": 1}),
]


@pytest.mark.parametrize("src,tgt,vmap,alpha", FUNCTOR_CASES)
def test_functoriality(src, tgt, vmap, alpha):
    rng = random.Random(11)
    for _ in range(4):
        s = random_functor(src, tgt, vmap, rng)
        alpha_src = apply_functor_dim(s, alpha)
        for phi in candidate_maps(src, alpha_src, n=3, seed=rng.randrange(1000)):
            lhs = inv.apply_functor_poly(s, inv.det_semiinvariant(src, alpha_src, phi), alpha)
            rhs = inv.det_semiinvariant(tgt, alpha, inv.apply_functor_map(s, phi))
            assert lhs == rhs


def test_identity_functor():
    s = FunctorData.identity(K2)
    phi = single(K2, "a - b")
    assert inv.apply_functor_map(s, phi) == phi
    f = inv.det_semiinvariant(K2, {"1": 2, "2": 2}, phi)
    assert inv.apply_functor_poly(s, f, {"1": 2, "2": 2}) == f


@pytest.mark.parametrize("n,word", [(1, ["l"]), (2, ["l"]), (2, ["l", "l"]), (3, ["l"]), (3, ["l", "l", "l"])])
def test_trace_certificates(n, word):
    c = make_path(L1, word)
    cert = inv.trace_from_dets(L1, {"1": n}, c)
    assert cert.lambdas == tuple(range(n + 1))
    assert cert.verify(L1, {"1": n})


def test_trace_certificate_small_case():
    cert = inv.trace_from_dets(L1, {"1": 1}, make_path(L1, ["l"]))
    assert cert.coefficients == (-1, 1)


def test_standard_pairs():
    assert inv.standard_pair_check(L1, {"1": 1})
    assert inv.standard_semiinvariant(L1, {"1": 1}) == ring_of(L1, {"1": 1}).x("l", 1, 1)
    assert inv.standard_pair_check(K2, {"1": 2, "2": 2})
    ring = ring_of(K2, {"1": 2, "2": 2})
    xa, xb = ring.matrix("a"), ring.matrix("b")
    s = [[xa[i][j] + xb[i][j] for j in range(2)] for i in range(2)]
    assert inv.standard_semiinvariant(K2, {"1": 2, "2": 2}) == determinant(s)
    assert not inv.standard_pair_check(K2, {"1": 1, "2": 1})
    with pytest.raises(ValueError):
        inv.standard_semiinvariant(K2, {"1": 1, "2": 1})


def test_paths_through_zero_dimensional_vertices():
    alpha = {"1": 2, "2": 0, "3": 2}
    ab = single(A3, "a.b")
    assert inv.rep_matrix(A3, alpha, ab) == [[ring_of(A3, alpha).zero()] * 2] * 2
    p = RepPoint.random(A3, alpha, random.Random(0))
    assert inv.rep_matrix_at(ab, p) == [[0, 0], [0, 0]]

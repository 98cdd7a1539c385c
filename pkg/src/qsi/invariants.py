"""Determinantal semi-invariants, trace invariants and the identities they obey.

Group action convention: ``(g.p)(a) = g_{ia}^{-1} p(a) g_{ta}``.  With it,
``P_{phi,alpha}`` has weight ``b(v) - a(v)`` at every vertex, where ``a`` and
``b`` are the source and target multiplicities of ``phi``.
"""

from __future__ import annotations

from random import Random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .poly import (AmbientError, CoordRing, Poly, RepPoint, apply_derivation, det_in, poly_matmul,
                   ring_of, substitute, torus_weight)
from .quiver import (AddMap, FunctorData, Path, PathComb, Quiver, QuiverError, apply_functor_dim,
                     arrow_path, canonical_rotation, dimvector, rotate, trivial_path)


@lru_cache(maxsize=256)
def _arrow_matrices(ring: CoordRing) -> dict:
    return {a.id: ring.matrix(a.id) for a in ring.quiver.arrows}


def realize_path(path: Path, ring: CoordRing) -> list[list[Poly]]:
    mats = _arrow_matrices(ring)
    if not path.arrows:
        return ring.identity(ring.alpha[path.source])
    out = mats[path.arrows[0]]
    for a in path.arrows[1:]:
        out = poly_matmul(out, mats[a], ring, cols=ring.alpha[ring.quiver.arrow(a).target])
    return out


def realize(comb: PathComb, ring: CoordRing) -> list[list[Poly]]:
    """The symbolic matrix R_p(comb), of shape alpha(source) x alpha(target)."""
    n, m = ring.alpha[comb.source], ring.alpha[comb.target]
    out = [[ring.zero() for _ in range(m)] for _ in range(n)]
    for p, c in comb.terms:
        mat = realize_path(p, ring)
        for i in range(n):
            for j in range(m):
                if mat[i][j]:
                    out[i][j] = out[i][j] + mat[i][j] * c
    return out


def realize_at(comb: PathComb, point: RepPoint) -> list[list]:
    n, m = point.alpha[comb.source], point.alpha[comb.target]
    out = linalg.zeros(n, m)
    for p, c in comb.terms:
        mat = linalg.identity(point.alpha[p.source])
        for a in p.arrows:
            arr = point.quiver.arrow(a)
            mat = linalg.matmul(mat, point[a], inner=point.alpha[arr.source], cols=point.alpha[arr.target])
        for i in range(n):
            for j in range(m):
                out[i][j] += c * mat[i][j]
    return out


def _block_layout(phi: AddMap, alpha):
    rows = [alpha[v] for v in phi.source]
    cols = [alpha[v] for v in phi.target]
    return rows, cols


def rep_matrix(quiver: Quiver, alpha, phi: AddMap) -> list[list[Poly]]:
    """Block matrix R_p(phi) with symbolic entries: block (s, t) realizes entry (s, t)."""
    ring = ring_of(quiver, alpha)
    rows, cols = _block_layout(phi, ring.alpha)
    n, m = sum(rows), sum(cols)
    out = [[ring.zero() for _ in range(m)] for _ in range(n)]
    r0 = 0
    for s, nr in enumerate(rows):
        c0 = 0
        for t, nc in enumerate(cols):
            e = phi.entries[s][t]
            if not e.is_zero() and nr and nc:
                block = realize(e, ring)
                for i in range(nr):
                    for j in range(nc):
                        out[r0 + i][c0 + j] = block[i][j]
            c0 += nc
        r0 += nr
    return out


def rep_matrix_at(phi: AddMap, point: RepPoint) -> list[list]:
    rows, cols = _block_layout(phi, point.alpha)
    out = linalg.zeros(sum(rows), sum(cols))
    r0 = 0
    for s, nr in enumerate(rows):
        c0 = 0
        for t, nc in enumerate(cols):
            e = phi.entries[s][t]
            if not e.is_zero() and nr and nc:
                block = realize_at(e, point)
                for i in range(nr):
                    for j in range(nc):
                        out[r0 + i][c0 + j] = block[i][j]
            c0 += nc
        r0 += nr
    return out


def is_square(phi: AddMap, alpha) -> bool:
    rows, cols = _block_layout(phi, alpha)
    return sum(rows) == sum(cols)


def det_semiinvariant(quiver: Quiver, alpha, phi: AddMap) -> Poly:
    """P_{phi,alpha} = det R_p(phi) as a polynomial (possibly zero)."""
    if phi.quiver != quiver:
        raise QuiverError("map lives over a different quiver")
    ring = ring_of(quiver, alpha)
    rows, cols = _block_layout(phi, ring.alpha)
    if sum(rows) != sum(cols):
        raise ValueError(f"non-square: {sum(rows)} != {sum(cols)}")
    return det_in(ring, rep_matrix(quiver, ring.alpha, phi))


def det_at(phi: AddMap, point: RepPoint):
    """P_{phi,alpha}(p) computed numerically."""
    m = rep_matrix_at(phi, point)
    if m and len(m) != len(m[0]):
        raise ValueError("non-square realization")
    return linalg.det(m)


def trace_invariant(quiver: Quiver, alpha, cycle: Path) -> Poly:
    if not cycle.is_cycle:
        raise QuiverError(f"{cycle} is not an oriented cycle")
    ring = ring_of(quiver, alpha)
    mat = realize_path(cycle, ring)
    acc = ring.zero()
    for i in range(len(mat)):
        acc = acc + mat[i][i]
    return acc


def weight_of_map(phi: AddMap) -> dict:
    a, b = phi.source_mult, phi.target_mult
    return {v: b[v] - a[v] for v in phi.quiver.vertices}


# ---------------------------------------------------------------- group action

class GroupElement:
    """An element of GL(alpha): an invertible matrix per vertex."""

    def __init__(self, quiver: Quiver, alpha, mats):
        self.quiver = quiver
        self.alpha = dimvector(quiver, alpha)
        self.mats = {}
        self.inverses = {}
        for v in quiver.vertices:
            g = linalg.matrix(mats.get(v, linalg.identity(self.alpha[v])))
            if len(g) != self.alpha[v] or any(len(r) != self.alpha[v] for r in g):
                raise AmbientError(f"group element at {v} must be {self.alpha[v]}x{self.alpha[v]}")
            if self.alpha[v] and linalg.det(g) == 0:
                raise ValueError(f"group element at {v} is singular")
            self.mats[v] = g
            self.inverses[v] = linalg.inverse(g) if self.alpha[v] else []

    def det(self, v):
        return linalg.det(self.mats[v]) if self.alpha[v] else 1

    def character(self, weight: dict):
        out = Fraction(1)
        for v, k in weight.items():
            if self.alpha[v]:
                out *= Fraction(self.det(v)) ** k
        return out

    def act(self, p: RepPoint) -> RepPoint:
        mats = {}
        for arr in self.quiver.arrows:
            n, m = self.alpha[arr.source], self.alpha[arr.target]
            x = linalg.matmul(self.inverses[arr.source], p[arr.id], inner=n) if n else []
            mats[arr.id] = linalg.matmul(x, self.mats[arr.target], inner=m) if n else []
        return RepPoint(self.quiver, self.alpha, mats)

    @classmethod
    def random(cls, quiver: Quiver, alpha, rng: Random, lo=-3, hi=3):
        alpha = dimvector(quiver, alpha)
        mats = {}
        for v in quiver.vertices:
            n = alpha[v]
            while True:
                g = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
                if n == 0 or linalg.det(g) != 0:
                    break
            mats[v] = g
        return cls(quiver, alpha, mats)


def traceless_basis(n: int):
    """Elementary traceless matrices: off-diagonal units and consecutive diagonal differences."""
    out = []
    for p in range(n):
        for q in range(n):
            if p != q:
                out.append((f"E{p + 1}{q + 1}", {(p, q): 1}))
    for p in range(n - 1):
        out.append((f"E{p + 1}{p + 1}-E{p + 2}{p + 2}", {(p, p): 1, (p + 1, p + 1): -1}))
    return out


def lie_derivations(ring: CoordRing):
    """[(vertex, label, images)] for the infinitesimal action of sl(alpha).

    ``images[i]`` is the image of coordinate ``i``: the block X_a goes to
    ``-E X_a`` when i(a) = v plus ``X_a E`` when t(a) = v.
    """
    q = ring.quiver
    out = []
    for v in q.vertices:
        for label, E in traceless_basis(ring.alpha[v]):
            images = {}
            for idx, coord in enumerate(ring.coords):
                arr = q.arrow(coord.arrow)
                r, c = coord.row - 1, coord.col - 1
                acc = {}
                if arr.source == v:
                    for (p, k), e in E.items():
                        if p == r:
                            j = ring.index[type(coord)(coord.arrow, k + 1, c + 1)]
                            acc[j] = acc.get(j, 0) - e
                if arr.target == v:
                    for (k, p), e in E.items():
                        if p == c:
                            j = ring.index[type(coord)(coord.arrow, r + 1, k + 1)]
                            acc[j] = acc.get(j, 0) + e
                acc = {((j, 1),): e for j, e in acc.items() if e}
                if acc:
                    images[idx] = Poly(ring, acc)
            out.append((v, label, images))
    return out


@dataclass
class SemiInvariance:
    ok: bool
    vertex: str | None = None
    element: str | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_semiinvariance(f: Poly, weight: dict) -> SemiInvariance:
    """Exact test that ``f`` is semi-invariant of the given weight.

    Torus part: every monomial has torus weight alpha(v) * weight[v].
    SL part: every derivation from :func:`lie_derivations` kills ``f``.
    """
    ring = f.ring
    for mono in f.terms:
        tw = torus_weight(ring, mono)
        for v in ring.quiver.vertices:
            if tw[v] != ring.alpha[v] * weight.get(v, 0):
                return SemiInvariance(False, v, "torus", f"monomial has torus weight {tw[v]} at {v}")
    for v, label, images in lie_derivations(ring):
        if apply_derivation(f, images):
            return SemiInvariance(False, v, label, "derivation does not vanish")
    return SemiInvariance(True)


# ---------------------------------------------------------------- constructions on maps

def block_diag(phi: AddMap, mu: AddMap) -> AddMap:
    return phi.direct_sum(mu)


def rescale_arrows(phi: AddMap, scalars: dict) -> AddMap:
    """The torus (k*)^A acting on add(Q): arrow a becomes scalars[a] * a."""
    rows = []
    for row in phi.entries:
        out = []
        for e in row:
            d = {}
            for p, c in e.terms:
                for a in p.arrows:
                    c = c * Fraction(scalars.get(a, 1))
                d[p] = c
            out.append(PathComb(e.source, e.target, d))
        rows.append(out)
    return AddMap(phi.quiver, phi.source, phi.target, rows)


def rescale_point(p: RepPoint, scalars: dict) -> RepPoint:
    return RepPoint(p.quiver, p.alpha, {a: [[x * Fraction(scalars.get(a, 1)) for x in row] for row in m]
                                        for a, m in p.mats.items()})


def apply_functor_map(s: FunctorData, phi: AddMap) -> AddMap:
    """Push a map over Q' through s: add(Q') -> add(Q)."""
    if phi.quiver != s.source:
        raise QuiverError("map does not live over the functor's source quiver")
    src = [s.vertex_map[v] for v in phi.source]
    tgt = [s.vertex_map[v] for v in phi.target]
    return AddMap(s.target, src, tgt, [[s.map_comb(e) for e in row] for row in phi.entries])


def apply_functor_poly(s: FunctorData, f: Poly, alpha) -> Poly:
    """The pullback f o s: S(Q', s(alpha)) -> S(Q, alpha)."""
    ring = ring_of(s.target, alpha)
    src_ring = ring_of(s.source, apply_functor_dim(s, ring.alpha))
    if f.ring != src_ring:
        raise AmbientError("polynomial does not live on R(Q', s(alpha))")
    blocks = {a: realize(c, ring) for a, c in s.arrow_map.items()}
    images = [blocks[c.arrow][c.row - 1][c.col - 1] for c in src_ring.coords]
    return substitute(f, images, ring)


# ---------------------------------------------------------------- traces as determinants

@dataclass(frozen=True)
class TraceCertificate:
    cycle: Path
    lambdas: tuple
    coefficients: tuple

    def maps(self, quiver: Quiver) -> list[AddMap]:
        v = self.cycle.source
        l = PathComb.of(self.cycle)
        return [AddMap.single(quiver, PathComb.identity(v) + l * lam) for lam in self.lambdas]

    def combination(self, quiver: Quiver, alpha) -> Poly:
        ring = ring_of(quiver, alpha)
        acc = ring.zero()
        for phi, c in zip(self.maps(quiver), self.coefficients):
            acc = acc + det_semiinvariant(quiver, alpha, phi) * c
        return acc

    def verify(self, quiver: Quiver, alpha) -> bool:
        return self.combination(quiver, alpha) == trace_invariant(quiver, alpha, self.cycle)


def trace_from_dets(quiver: Quiver, alpha, cycle: Path) -> TraceCertificate:
    """Write Tr_l as a combination of P_{e + lambda l} for lambda = 0..n, n = alpha(i(l))."""
    if not cycle.is_cycle:
        raise QuiverError(f"{cycle} is not an oriented cycle")
    n = dimvector(quiver, alpha)[cycle.source]
    lambdas = tuple(range(n + 1))
    coeffs = tuple(linalg.solve_vandermonde_row(lambdas, 1)) if n else (0,)
    return TraceCertificate(cycle, lambdas, coeffs)


# ---------------------------------------------------------------- standard pairs

def _bipartition(quiver: Quiver):
    sources = {a.source for a in quiver.arrows}
    targets = {a.target for a in quiver.arrows}
    if sources & targets:
        return None
    isolated = [v for v in quiver.vertices if v not in sources and v not in targets]
    return sorted(sources | set(isolated), key=quiver.vertices.index), sorted(targets, key=quiver.vertices.index)


def standard_pair_check(quiver: Quiver, alpha) -> bool:
    alpha = dimvector(quiver, alpha)
    if len(quiver.vertices) == 1 and len(quiver.arrows) == 1 and quiver.arrows[0].is_loop:
        return True
    parts = _bipartition(quiver)
    if parts is None:
        return False
    for v in quiver.vertices:
        degree = sum(1 for a in quiver.arrows if v in (a.source, a.target))
        if degree != alpha[v]:
            return False
    return True


def standard_map(quiver: Quiver) -> AddMap:
    """(+)_{i in I} O(i) -> (+)_{j in J} O(j), entry (i, j) the sum of arrows i -> j."""
    I, J = _bipartition(quiver)
    rows = []
    for i in I:
        row = []
        for j in J:
            comb = PathComb.zero(i, j)
            for a in quiver.arrows:
                if (a.source, a.target) == (i, j):
                    comb = comb + PathComb.of(arrow_path(quiver, a.id))
            row.append(comb)
        rows.append(row)
    return AddMap(quiver, I, J, rows)


def standard_semiinvariant(quiver: Quiver, alpha) -> Poly:
    if not standard_pair_check(quiver, alpha):
        raise ValueError("pair is not standard")
    if len(quiver.vertices) == 1 and len(quiver.arrows) == 1 and quiver.arrows[0].is_loop:
        return trace_invariant(quiver, alpha, arrow_path(quiver, quiver.arrows[0].id))
    return det_semiinvariant(quiver, alpha, standard_map(quiver))


def cycle_rotations(quiver: Quiver, cycle: Path) -> list[Path]:
    return [rotate(quiver, cycle, k) for k in range(len(cycle.arrows))]


__all__ = [
    "GroupElement", "SemiInvariance", "TraceCertificate", "apply_functor_map", "apply_functor_poly",
    "block_diag", "canonical_rotation", "check_semiinvariance", "cycle_rotations", "det_at",
    "det_semiinvariant", "is_square", "lie_derivations", "realize", "realize_at", "rep_matrix",
    "rep_matrix_at", "rescale_arrows", "rescale_point", "standard_map", "standard_pair_check",
    "standard_semiinvariant", "trace_from_dets", "trace_invariant", "trivial_path", "weight_of_map",
]

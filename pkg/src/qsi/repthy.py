"""Representations: intertwiners, Hom/Ext, projective presentations and perpendicularity.

Conventions: a representation is a :class:`RepPoint`; vectors are rows, so
``R(a)`` is a ``d(i(a)) x d(t(a))`` matrix and a path acts by the ordered
product of its arrow matrices.  A map ``phi`` in add(Q) induces
``phi_hat: (+) P_t -> (+) P_s`` between projectives ``P_v = e_v kQ``
(paths starting at v), sending the generator of target slot t to
``sum_s phi[s][t]``.  With an injective ``phi_hat``, Hom and Ext from
``cok phi_hat`` to R are the kernel and cokernel of ``x -> x R(phi)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .invariants import det_at, det_semiinvariant, rep_matrix_at
from .parallel import pmap
from .poly import Poly, RepPoint, evaluate
from .quiver import (AddMap, DimVector, Path, PathComb, Quiver, QuiverError, all_paths_from,
                     arrow_path, compose_paths, dimvector, euler_form)
from .search import Bounds, enumerate_add_maps


def direct_sum_rep(r: RepPoint, s: RepPoint) -> RepPoint:
    if r.quiver != s.quiver:
        raise QuiverError("direct sum of representations over different quivers")
    q = r.quiver
    mats = {}
    for arr in q.arrows:
        m1, m2 = r[arr.id], s[arr.id]
        c1, c2 = r.alpha[arr.target], s.alpha[arr.target]
        rows = [list(row) + [0] * c2 for row in m1] + [[0] * c1 + list(row) for row in m2]
        mats[arr.id] = rows
    return RepPoint(q, r.alpha + s.alpha, mats)


def simple_rep(quiver: Quiver, v: str) -> RepPoint:
    return RepPoint.origin(quiver, {w: int(w == v) for w in quiver.vertices})


# ---------------------------------------------------------------- Hom and Ext

@dataclass(frozen=True)
class RepMorphism:
    """phi(v): R(v) -> S(v) as ``d_R(v) x d_S(v)`` matrices, one per vertex."""
    maps: tuple  # ((vertex, matrix), ...)

    def __getitem__(self, v):
        return dict(self.maps)[v]

    def is_intertwiner(self, r: RepPoint, s: RepPoint) -> bool:
        m = dict(self.maps)
        for arr in r.quiver.arrows:
            u, w = arr.source, arr.target
            lhs = _mm(r[arr.id], m[w], r.alpha[u], r.alpha[w], s.alpha[w])
            rhs = _mm(m[u], s[arr.id], r.alpha[u], s.alpha[u], s.alpha[w])
            if lhs != rhs:
                return False
        return True


def _mm(a, b, n, k, m):
    return [[sum(a[i][j] * b[j][t] for j in range(k)) for t in range(m)] for i in range(n)]


def hom_basis(quiver: Quiver, r: RepPoint, s: RepPoint) -> list[RepMorphism]:
    """Basis of Hom(R, S): solutions of R(a) phi(t(a)) = phi(i(a)) S(a) for every arrow."""
    dr, ds = r.alpha, s.alpha
    var = {}
    for v in quiver.vertices:
        for i in range(dr[v]):
            for j in range(ds[v]):
                var[(v, i, j)] = len(var)
    n = len(var)
    rows = []
    for arr in quiver.arrows:
        u, w = arr.source, arr.target
        ra, sa = r[arr.id], s[arr.id]
        for i in range(dr[u]):
            for j in range(ds[w]):
                row = [0] * n
                for k in range(dr[w]):
                    if ra[i][k]:
                        row[var[(w, k, j)]] += ra[i][k]
                for k in range(ds[u]):
                    if sa[k][j]:
                        row[var[(u, i, k)]] -= sa[k][j]
                rows.append(row)
    basis = linalg.nullspace(rows, n) if rows else [[int(i == j) for j in range(n)] for i in range(n)]
    out = []
    for vec in basis:
        maps = []
        for v in quiver.vertices:
            maps.append((v, tuple(tuple(vec[var[(v, i, j)]] for j in range(ds[v])) for i in range(dr[v]))))
        out.append(RepMorphism(tuple(maps)))
    return out


def hom_dim(quiver: Quiver, r: RepPoint, s: RepPoint) -> int:
    return len(hom_basis(quiver, r, s))


def ext_dim(quiver: Quiver, r: RepPoint, s: RepPoint) -> int:
    """dim Ext(R, S) = dim Hom(R, S) - <dim R, dim S> (path algebras are hereditary)."""
    e = hom_dim(quiver, r, s) - euler_form(quiver, r.alpha, s.alpha)
    if e < 0:
        raise ArithmeticError(f"negative Ext dimension {e}: inconsistent conventions")
    return e


def hom_ext_via_map(phi: AddMap, s: RepPoint) -> tuple[int, int]:
    """(kernel, cokernel) dimensions of x -> x R_S(phi).

    These are dim Hom(cok phi_hat, S) and dim Ext(cok phi_hat, S) when phi_hat is injective.
    """
    m = rep_matrix_at(phi, s)
    nrows = sum(s.alpha[v] for v in phi.source)
    ncols = sum(s.alpha[v] for v in phi.target)
    rk = linalg.rank(m, ncols) if nrows and ncols else 0
    return nrows - rk, ncols - rk


# ---------------------------------------------------------------- presentations

@dataclass(frozen=True)
class InjectivityStatus:
    kind: str  # "Injective", "NotInjective" or "UnknownTruncated"
    c: tuple = ()  # ((vertex, multiplicity), ...) of the kernel summand
    bound: int | None = None
    restricted: AddMap | None = field(default=None, compare=False)

    def __bool__(self):
        return self.kind == "Injective"

    def __str__(self):
        if self.kind == "NotInjective":
            return "NotInjective(c=" + ",".join(f"{v}:{n}" for v, n in self.c) + ")"
        if self.kind == "UnknownTruncated":
            return f"UnknownTruncated(L={self.bound})"
        return self.kind


@dataclass
class PresentationData:
    phi: AddMap
    status: InjectivityStatus
    cokernel: RepPoint | None = None
    exact: bool = True  # False when the cokernel came from a stabilized truncation
    pivots: tuple = ()  # ((vertex, scalar), ...) cancelled by minimization

    @property
    def dims(self) -> DimVector | None:
        return self.cokernel.alpha if self.cokernel is not None else None


def _slot_labels_dims(rep: RepPoint):
    q = rep.quiver
    src = [(v, n) for v in q.vertices for n in range(1, rep.alpha[v] + 1)]
    tgt = [(a.id, m) for a in q.arrows for m in range(1, rep.alpha[a.source] + 1)]
    return src, tgt


def canonical_presentation(quiver: Quiver, rep: RepPoint, allow_cycles: bool = True) -> PresentationData:
    """The standard presentation ``(+)_a P_{t(a)}^{d(i(a))} -> (+)_v P_v^{d(v)} -> R``.

    Source slots are (v, n), target slots (a, m) at vertex t(a); the entry is
    ``a`` if v = i(a) and n = m, and ``-R(a)[m][n] e_{t(a)}`` if v = t(a).
    The standard resolution is exact for any quiver, so oriented cycles are
    accepted unless ``allow_cycles`` is False.
    """
    if not allow_cycles and not quiver.is_acyclic():
        raise QuiverError("quiver has an oriented cycle")
    src, tgt = _slot_labels_dims(rep)
    rows = []
    for v, n in src:
        row = []
        for a, m in tgt:
            arr = quiver.arrow(a)
            e = PathComb.zero(v, arr.target)
            if v == arr.source and n == m:
                e = e + PathComb.of(arrow_path(quiver, a))
            if v == arr.target:
                c = rep[a][m - 1][n - 1]
                if c:
                    e = e + PathComb.identity(v, -c)
            row.append(e)
        rows.append(row)
    phi = AddMap(quiver, [v for v, _ in src], [quiver.arrow(a).target for a, _ in tgt], rows)
    return PresentationData(phi, InjectivityStatus("Injective"), rep, exact=True)


def minimize_map(phi: AddMap) -> tuple[AddMap, list]:
    """Cancel pure-scalar entries by exact elimination; returns (map, [(vertex, pivot)])."""
    pivots = []
    m = [list(row) for row in phi.entries]
    src, tgt = list(phi.source), list(phi.target)
    while True:
        hit = None
        for s in range(len(src)):
            for t in range(len(tgt)):
                e = m[s][t]
                if not e.is_zero() and e.is_scalar():
                    hit = (s, t)
                    break
            if hit:
                break
        if hit is None:
            break
        s, t = hit
        c = Fraction(m[s][t].trivial_coefficient())
        pivots.append((src[s], c))
        new = []
        for s2 in range(len(src)):
            if s2 == s:
                continue
            row = []
            for t2 in range(len(tgt)):
                if t2 == t:
                    continue
                e = m[s2][t2]
                if not m[s2][t].is_zero() and not m[s][t2].is_zero():
                    e = e - (m[s2][t] * m[s][t2]) * (1 / c)
                row.append(e)
            new.append(row)
        m = new
        del src[s]
        del tgt[t]
    return AddMap(phi.quiver, src, tgt, m), pivots


def minimize_presentation(p: PresentationData) -> PresentationData:
    """Drop pairs of slots joined by an invertible scalar; the cokernel is unchanged.

    The determinant of any realization at beta changes by prod c^{beta(v)}.
    """
    phi, piv = minimize_map(p.phi)
    status = p.status
    if status.kind == "NotInjective":
        status = injectivity_check(phi)
    return PresentationData(phi, status, p.cokernel, p.exact, p.pivots + tuple(piv))


def _phi_hat_image(phi: AddMap, t: int, p: Path) -> dict:
    out = {}
    for s in range(len(phi.source)):
        e = phi.entries[s][t]
        for path, c in e.terms:
            key = (s, compose_paths(path, p))
            out[key] = out.get(key, 0) + c
    return {k: c for k, c in out.items() if c}


def _kernel(phi: AddMap, length: int):
    """Kernel vectors of phi_hat on target-slot paths of length <= ``length`` (exact elements)."""
    dom = [(t, p) for t, w in enumerate(phi.target) for p in all_paths_from(phi.quiver, w, length)]
    rows = {}
    for k, (t, p) in enumerate(dom):
        for key, c in _phi_hat_image(phi, t, p).items():
            rows.setdefault(key, {})[k] = c
    kernel = linalg.sparse_nullspace(list(rows.values()), list(range(len(dom))))
    return dom, kernel


def _top_multiplicities(phi: AddMap, dom, kernel):
    """Generators of the kernel module: (c per vertex, [(vertex, generator vector)])."""
    q = phi.quiver
    index = {d: k for k, d in enumerate(dom)}
    by_end = {}
    for vec in kernel:
        ends = {dom[k][1].target for k in vec}
        if len(ends) == 1:
            by_end.setdefault(ends.pop(), []).append(vec)
        else:  # split into vertex components (the kernel is graded by end vertex)
            for w in sorted(ends):
                part = {k: c for k, c in vec.items() if dom[k][1].target == w}
                by_end.setdefault(w, []).append(part)
    gens = []
    c = {}
    for w in q.vertices:
        ech = linalg.SparseEchelon()
        for arr in q.arrows:
            if arr.target != w:
                continue
            a = arrow_path(q, arr.id)
            for vec in by_end.get(arr.source, []):
                moved = {}
                ok = True
                for k, x in vec.items():
                    t, p = dom[k]
                    key = index.get((t, compose_paths(p, a)))
                    if key is None:
                        ok = False
                        break
                    moved[key] = x
                if ok:
                    ech.add(moved)
        space = linalg.SparseEchelon()
        for vec in by_end.get(w, []):
            space.add(vec)
        count = 0
        for vec in space.basis():
            if ech.add(vec):
                gens.append((w, vec))
                count += 1
        if count:
            c[w] = count
    return c, gens


def injectivity_check(phi: AddMap, truncation: int = 6) -> InjectivityStatus:
    """Decide whether phi_hat is injective.

    Acyclic quivers: exact.  Otherwise a nonzero kernel element found among
    paths of length <= ``truncation`` proves non-injectivity; a full-rank
    scalar part proves injectivity (look at lowest path-length terms); all
    other cases are reported as UnknownTruncated.
    """
    q = phi.quiver
    acyclic = q.is_acyclic()
    length = len(q.vertices) if acyclic else truncation
    dom, kernel = _kernel(phi, length)
    if kernel:
        if not acyclic:
            _, k2 = _kernel(phi, length + 1)
            if len(k2) < len(kernel):  # cannot happen: truncated kernels only grow
                raise ArithmeticError("truncated kernel shrank")
        c, gens = _top_multiplicities(phi, dom, kernel)
        restricted = _restrict(phi, dom, gens)
        return InjectivityStatus("NotInjective", tuple((v, c[v]) for v in q.vertices if v in c),
                                 length, restricted)
    if acyclic:
        return InjectivityStatus("Injective")
    scalar = [[phi.entries[s][t].trivial_coefficient() if phi.source[s] == phi.target[t] else 0
               for t in range(len(phi.target))] for s in range(len(phi.source))]
    if not phi.target or linalg.rank(scalar, len(phi.target)) == len(phi.target):
        return InjectivityStatus("Injective")
    return InjectivityStatus("UnknownTruncated", bound=truncation)


def _restrict(phi: AddMap, dom, gens):
    """phi restricted to a complement of the kernel summand, or None if no scalar pivots exist.

    A kernel generator whose coefficient on the trivial path of slot t is an
    invertible scalar (and which has no other term in the e_w e_w part)
    can replace the generator of slot t; that slot then maps to zero.
    """
    if not gens:
        return phi
    rows = []
    for w, vec in gens:
        row = [0] * len(phi.target)
        for k, x in vec.items():
            t, p = dom[k]
            if not p.arrows:
                row[t] = x
            elif p.source == p.target == w:
                return None
        rows.append(row)
    red, pivots = linalg.rref(rows, len(phi.target))
    if len(pivots) < len(gens):
        return None
    return phi.delete_slots(cols=pivots)


def cokernel_rep(phi: AddMap, truncation: int = 6) -> tuple[RepPoint | None, bool]:
    """The representation cok phi_hat as (RepPoint, exact).

    Acyclic quivers give the exact answer.  With oriented cycles the quotient
    is computed on paths of length <= L and L+1; it is returned (exact=False)
    only if both truncations agree and all representatives are short.
    """
    q = phi.quiver
    if q.is_acyclic():
        return _cokernel_at(phi, len(q.vertices)), True
    a = _cokernel_at(phi, truncation)
    b = _cokernel_at(phi, truncation + 1)
    if a is None or b is None or a != b:
        return None, False
    return a, False


def _cokernel_at(phi: AddMap, length: int):
    q = phi.quiver
    cod = [(s, p) for s, v in enumerate(phi.source) for p in all_paths_from(q, v, length)]
    # longest paths first so free columns (representatives) are the shortest paths
    cod.sort(key=lambda c: (-len(c[1].arrows), c[0], c[1].sort_key()))
    index = {c: i for i, c in enumerate(cod)}
    ech = linalg.SparseEchelon()
    for t, w in enumerate(phi.target):
        for p in all_paths_from(q, w, length):
            img = _phi_hat_image(phi, t, p)
            if all(k in index for k in img):
                ech.add({index[k]: c for k, c in img.items()})
    free = [i for i in range(len(cod)) if i not in ech.rows]
    by_vertex = {v: [i for i in free if cod[i][1].target == v] for v in q.vertices}
    if not q.is_acyclic() and any(len(cod[i][1].arrows) >= length for i in free):
        return None
    dims = {v: len(by_vertex[v]) for v in q.vertices}
    pos = {i: n for v in q.vertices for n, i in enumerate(by_vertex[v])}
    mats = {}
    for arr in q.arrows:
        u, w = arr.source, arr.target
        a = arrow_path(q, arr.id)
        m = [[0] * dims[w] for _ in range(dims[u])]
        for r, i in enumerate(by_vertex[u]):
            s, p = cod[i]
            key = (s, compose_paths(p, a))
            if key not in index:
                return None
            red = ech.reduce({index[key]: 1})
            for j, x in red.items():
                if j not in pos:
                    return None
                m[r][pos[j]] = x
        mats[arr.id] = m
    return RepPoint(q, dims, mats)


def presentation_of(phi: AddMap, truncation: int = 6) -> PresentationData:
    status = injectivity_check(phi, truncation)
    cok, exact = cokernel_rep(phi, truncation)
    return PresentationData(phi, status, cok, exact)


# ---------------------------------------------------------------- P_{R,beta} and perpendicularity

def p_R_beta(quiver: Quiver, rep: RepPoint, beta, minimize: bool = True) -> Poly:
    """det R(phi) at beta for the (minimized) canonical presentation of R."""
    beta = dimvector(quiver, beta)
    e = euler_form(quiver, rep.alpha, beta)
    if e:
        raise ValueError(f"Euler pairing <dim R, beta> = {e} is not zero")
    p = canonical_presentation(quiver, rep)
    if minimize:
        p = minimize_presentation(p)
    return det_semiinvariant(quiver, beta, p.phi)


@dataclass
class PerpResult:
    nonvanishing: bool
    hom: int | None = None
    ext: int | None = None

    def __bool__(self):
        return self.nonvanishing


def perp_check(phi: AddMap, point: RepPoint, cross_validate: bool = False,
               presentation: PresentationData | None = None) -> PerpResult:
    """Is det R_p(phi) nonzero?  With ``cross_validate`` also compute Hom and Ext
    from cok phi_hat to R_p directly and insist that both vanish exactly when
    the determinant does not."""
    nz = det_at(phi, point) != 0
    if not cross_validate:
        return PerpResult(nz)
    pres = presentation or presentation_of(phi)
    if not pres.status:
        raise ValueError(f"cross-validation needs an injective presentation, got {pres.status}")
    if pres.cokernel is None or not pres.exact:
        raise ValueError("cross-validation needs a finite-dimensional cokernel (acyclic quiver)")
    t = pres.cokernel
    h = hom_dim(phi.quiver, t, point)
    e = ext_dim(phi.quiver, t, point)
    if nz != (h == 0 and e == 0):
        raise AssertionError(f"determinant test says {nz} but Hom={h}, Ext={e}")
    hv, ev = hom_ext_via_map(phi, point)
    if (hv, ev) != (h, e):
        raise AssertionError(f"presentation route gives Hom={hv}, Ext={ev}; direct gives {h}, {e}")
    return PerpResult(nz, h, e)


# ---------------------------------------------------------------- semistability witnesses

@dataclass
class Witness:
    phi: AddMap
    presentation: PresentationData
    poly: Poly
    value: Fraction


@dataclass
class Undetermined:
    bounds: Bounds
    examined: int


def _screen(args):
    phi, point = args
    if det_at(phi, point) == 0:
        return False
    return not det_semiinvariant(phi.quiver, point.alpha, phi).is_constant()


def semistable_search(quiver: Quiver, beta, point: RepPoint, bounds: Bounds | None = None,
                      workers: int | None = None, truncation: int = 6, chunk: int = 64):
    """First enumerated phi (canonical order) with P_{phi,beta}(p) != 0, non-constant,
    and phi_hat provably injective.  A miss is inconclusive."""
    bounds = bounds or Bounds()
    beta = dimvector(quiver, beta)
    if point.alpha != beta:
        raise ValueError("point does not have dimension vector beta")
    examined = 0
    batch = []

    def flush(batch):
        hits = pmap(_screen, [(phi, point) for phi in batch], workers)
        for phi, ok in zip(batch, hits):
            if not ok:
                continue
            status = injectivity_check(phi, truncation)
            if status.kind != "Injective":
                continue
            cok, exact = cokernel_rep(phi, truncation)
            poly = det_semiinvariant(quiver, beta, phi)
            return Witness(phi, PresentationData(phi, status, cok, exact), poly, evaluate(poly, point))
        return None

    for phi in enumerate_add_maps(quiver, beta, bounds):
        examined += 1
        batch.append(phi)
        if len(batch) >= chunk:
            w = flush(batch)
            if w:
                return w
            batch = []
    if batch:
        w = flush(batch)
        if w:
            return w
    return Undetermined(bounds, examined)


def random_rep(quiver: Quiver, dims, rng: random.Random, lo=-2, hi=2) -> RepPoint:
    return RepPoint.random(quiver, dims, rng, lo, hi)


__all__ = [
    "InjectivityStatus", "PerpResult", "PresentationData", "RepMorphism", "Undetermined", "Witness",
    "canonical_presentation", "cokernel_rep", "direct_sum_rep", "ext_dim", "hom_basis", "hom_dim",
    "hom_ext_via_map", "injectivity_check", "minimize_map", "minimize_presentation", "p_R_beta",
    "perp_check", "presentation_of", "random_rep", "semistable_search", "simple_rep",
]

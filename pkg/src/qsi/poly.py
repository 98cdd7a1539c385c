"""Exact polynomials in the coordinates ``x[a,r,c]`` of the representation space.

A :class:`CoordRing` fixes the ambient ``(Q, alpha)``; a :class:`Poly` is a
sparse map from monomials to rationals.  Monomials are tuples of
``(coordinate index, exponent)`` sorted by index, where coordinates are
numbered in (arrow, row, column) order.
"""

from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product

from . import linalg
from .quiver import DimVector, Quiver, dimvector


class AmbientError(ValueError):
    pass


def _q(c):
    c = Fraction(c)
    return int(c) if c.denominator == 1 else c


@dataclass(frozen=True)
class Coord:
    arrow: str
    row: int
    col: int

    def __str__(self):
        return f"x[{self.arrow},{self.row},{self.col}]"


class CoordRing:
    """The coordinate ring S(Q, alpha).  Use :func:`coord_ring` to get the shared instance."""

    def __init__(self, quiver: Quiver, alpha: DimVector):
        self.quiver = quiver
        self.alpha = alpha
        coords = []
        for a in quiver.arrows:
            for r in range(1, alpha[a.source] + 1):
                for c in range(1, alpha[a.target] + 1):
                    coords.append(Coord(a.id, r, c))
        self.coords = tuple(coords)
        self.index = {c: i for i, c in enumerate(coords)}
        self.arrow_of = tuple(c.arrow for c in coords)

    def __reduce__(self):
        return (coord_ring, (self.quiver, self.alpha))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, CoordRing):
            return NotImplemented
        return self.quiver == other.quiver and self.alpha == other.alpha

    def __hash__(self):
        return hash((self.quiver, self.alpha))

    def __repr__(self):
        return f"CoordRing({len(self.quiver.vertices)} vertices, {self.alpha})"

    def shape(self, a: str) -> tuple[int, int]:
        arr = self.quiver.arrow(a)
        return self.alpha[arr.source], self.alpha[arr.target]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def const(self, c) -> "Poly":
        return Poly(self, {(): c})

    def x(self, a: str, r: int, c: int) -> "Poly":
        try:
            i = self.index[Coord(a, r, c)]
        except KeyError:
            raise AmbientError(f"no coordinate x[{a},{r},{c}] in this ring") from None
        return Poly(self, {((i, 1),): 1})

    def var(self, i: int) -> "Poly":
        return Poly(self, {((i, 1),): 1})

    def matrix(self, a: str) -> list[list["Poly"]]:
        """The symbolic matrix X_a."""
        n, m = self.shape(a)
        return [[self.x(a, r, c) for c in range(1, m + 1)] for r in range(1, n + 1)]

    def identity(self, n: int) -> list[list["Poly"]]:
        return [[self.const(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def monomials_of_degree(self, degree: Mapping) -> list[tuple]:
        """All monomials whose per-arrow degree is ``degree`` (arrows absent mean 0)."""
        per_arrow = []
        for a in self.quiver.arrows:
            m = int(degree.get(a.id, 0))
            idx = [i for i, ar in enumerate(self.arrow_of) if ar == a.id]
            if m and not idx:
                return []
            per_arrow.append(list(combinations_with_replacement(idx, m)))
        out = []
        for choice in product(*per_arrow):
            flat = sorted(i for part in choice for i in part)
            mono = {}
            for i in flat:
                mono[i] = mono.get(i, 0) + 1
            out.append(tuple(sorted(mono.items())))
        return sorted(out, key=monomial_key)


@lru_cache(maxsize=None)
def coord_ring(quiver: Quiver, alpha) -> CoordRing:
    return CoordRing(quiver, dimvector(quiver, alpha))


def ring_of(quiver: Quiver, alpha) -> CoordRing:
    return coord_ring(quiver, dimvector(quiver, alpha))


def monomial_key(mono):
    """Descending graded-lex order as an ascending sort key."""
    return (-sum(e for _, e in mono), tuple((i, -e) for i, e in mono))


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for i, e in m2:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoordRing, terms: Mapping):
        self.ring = ring
        self.terms = {m: _q(c) for m, c in terms.items() if c}

    def _same(self, other: "Poly"):
        if other.ring is not self.ring and other.ring != self.ring:
            raise AmbientError("polynomials live in different coordinate rings")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._same(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        d = dict(self.terms)
        for m, c in other.terms.items():
            d[m] = d.get(m, 0) + c
        return Poly(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = _q(other)
            return Poly(self.ring, {m: c * other for m, c in self.terms.items()})
        self._same(other)
        d = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return Poly(self.ring, d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): _q(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: monomial_key(mc[0]))

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=-1)

    def a_degree(self, mono) -> dict:
        deg = {}
        for i, e in mono:
            a = self.ring.arrow_of[i]
            deg[a] = deg.get(a, 0) + e
        return deg

    def a_degrees(self) -> set[tuple]:
        return {tuple(sorted(self.a_degree(m).items())) for m in self.terms}

    def coefficient(self, mono) -> Fraction | int:
        return self.terms.get(tuple(mono), 0)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        from .io import render_poly
        return render_poly(self)


def poly_arith(f: Poly, g, op: str) -> Poly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f * _q(g)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------- determinants

def determinant(m, check: bool = False, samples: int = 10, rng: random.Random | None = None) -> Poly:
    """Exact determinant of a square matrix of polynomials.

    Laplace expansion along rows with minors memoized by the set of columns
    still available.  With ``check=True`` the result is compared against
    numeric determinants at ``samples`` random rational points.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError(f"determinant of a non-square {n}x{len(m[0]) if m else 0} matrix")
    ring = _ring_of_matrix(m)
    if ring is None:
        raise ValueError("determinant needs at least one Poly entry or an explicit ring")
    result = _laplace(m, ring)
    if check:
        rng = rng or random.Random(0)
        for _ in range(samples):
            vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in ring.coords]
            numeric = linalg.det([[evaluate_at(e, vals) for e in row] for row in m])
            if evaluate_at(result, vals) != numeric:
                raise ArithmeticError("determinant failed the evaluation cross-check")
    return result


def det_in(ring: CoordRing, m) -> Poly:
    """Determinant when the matrix may be empty (returns 1 in ``ring``)."""
    if not m:
        return ring.const(1)
    return _laplace(m, ring)


def _ring_of_matrix(m):
    for row in m:
        for e in row:
            if isinstance(e, Poly):
                return e.ring
    return None


def _laplace(m, ring: CoordRing) -> Poly:
    n = len(m)
    if n == 0:
        return ring.const(1)
    memo = {}
    nonzero = [[j for j in range(n) if m[i][j]] for i in range(n)]

    def minor(row: int, cols: int) -> Poly:
        if row == n:
            return ring.const(1)
        hit = memo.get(cols)
        if hit is not None:
            return hit
        acc = {}
        for j in nonzero[row]:
            bit = 1 << j
            if not cols & bit:
                continue
            sub = minor(row + 1, cols & ~bit)
            if not sub.terms:
                continue
            # sign from the position of j among the remaining columns
            sign = -1 if bin(cols & (bit - 1)).count("1") % 2 else 1
            term = m[row][j] * sub
            for mono, c in term.terms.items():
                acc[mono] = acc.get(mono, 0) + sign * c
        out = Poly(ring, acc)
        memo[cols] = out
        return out

    return minor(0, (1 << n) - 1)


def block_diagonal(blocks, ring: CoordRing) -> list[list[Poly]]:
    n = sum(len(b) for b in blocks)
    out = [[ring.zero() for _ in range(n)] for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, e in enumerate(row):
                out[off + i][off + j] = e
        off += len(b)
    return out


def poly_matmul(a, b, ring: CoordRing, cols: int | None = None):
    n = len(a)
    k = len(b)
    m = cols if cols is not None else (len(b[0]) if b else 0)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero()
            for t in range(k):
                if a[i][t] and b[t][j]:
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------- gradings

def a_degree_component(f: Poly, chi: Mapping) -> Poly:
    """Sum of the terms of ``f`` whose per-arrow degree equals ``chi``."""
    want = {a: int(m) for a, m in chi.items() if int(m)}
    return Poly(f.ring, {m: c for m, c in f.terms.items() if f.a_degree(m) == want})


def torus_weight(ring: CoordRing, mono) -> dict:
    """Exponent of t_v when every g_v is the scalar t_v (action p(a) -> g_{ia}^{-1} p(a) g_{ta})."""
    w = {v: 0 for v in ring.quiver.vertices}
    for i, e in mono:
        arr = ring.quiver.arrow(ring.arrow_of[i])
        w[arr.target] += e
        w[arr.source] -= e
    return w


def v_weight_of(f: Poly) -> dict:
    """The character exponents sigma with g.f = prod_v det(g_v)^sigma_v f on scalars.

    Raises if ``f`` is zero, not V-homogeneous, or if its torus weight is not
    divisible by the dimension vector (then no character fits).
    """
    if f.is_zero():
        raise ValueError("zero polynomial has no weight")
    weights = {tuple(sorted(torus_weight(f.ring, m).items())) for m in f.terms}
    if len(weights) != 1:
        raise ValueError("polynomial is not V-homogeneous")
    raw = dict(weights.pop())
    sigma = {}
    for v, w in raw.items():
        n = f.ring.alpha[v]
        if n == 0:
            sigma[v] = 0
        elif w % n:
            raise ValueError(f"torus weight {w} at vertex {v} is not a multiple of alpha={n}")
        else:
            sigma[v] = w // n
    return sigma


# ---------------------------------------------------------------- evaluation

class RepPoint:
    """A point of R(Q, alpha): one rational alpha(ia) x alpha(ta) matrix per arrow."""

    __slots__ = ("quiver", "alpha", "mats")

    def __init__(self, quiver: Quiver, alpha, mats: Mapping | None = None):
        self.quiver = quiver
        self.alpha = dimvector(quiver, alpha)
        mats = dict(mats or {})
        unknown = set(mats) - set(quiver.arrow_ids)
        if unknown:
            raise AmbientError(f"point has unknown arrows {sorted(unknown)}")
        out = {}
        for a in quiver.arrows:
            n, m = self.alpha[a.source], self.alpha[a.target]
            mat = mats.get(a.id)
            if mat is None:
                mat = linalg.zeros(n, m)
            mat = linalg.matrix(mat)
            if len(mat) != n or any(len(r) != m for r in mat):
                raise AmbientError(f"matrix for {a.id} must be {n}x{m}")
            out[a.id] = tuple(tuple(r) for r in mat)
        self.mats = out

    @property
    def ring(self) -> CoordRing:
        return ring_of(self.quiver, self.alpha)

    def __getitem__(self, a):
        return [list(r) for r in self.mats[a]]

    def __eq__(self, other):
        return (isinstance(other, RepPoint) and self.quiver == other.quiver
                and self.alpha == other.alpha and self.mats == other.mats)

    def __hash__(self):
        return hash((self.alpha, tuple(sorted(self.mats.items()))))

    def __repr__(self):
        return f"RepPoint({self.alpha}, {self.mats})"

    def values(self) -> list:
        ring = self.ring
        return [self.mats[c.arrow][c.row - 1][c.col - 1] for c in ring.coords]

    @classmethod
    def origin(cls, quiver: Quiver, alpha) -> "RepPoint":
        return cls(quiver, alpha)

    @classmethod
    def random(cls, quiver: Quiver, alpha, rng: random.Random, lo=-3, hi=3, denominators=(1,)):
        alpha = dimvector(quiver, alpha)
        mats = {}
        for a in quiver.arrows:
            mats[a.id] = [[Fraction(rng.randint(lo, hi), rng.choice(denominators))
                           for _ in range(alpha[a.target])] for _ in range(alpha[a.source])]
        return cls(quiver, alpha, mats)


def evaluate_at(f, values) -> Fraction | int:
    if not isinstance(f, Poly):
        return _q(f)
    total = 0
    for mono, c in f.terms.items():
        t = c
        for i, e in mono:
            t *= values[i] ** e
            if not t:
                break
        total += t
    return _q(total)


def evaluate(f: Poly, p: RepPoint) -> Fraction | int:
    if p.ring != f.ring:
        raise AmbientError("point and polynomial have different shapes")
    return evaluate_at(f, p.values())


def substitute(f: Poly, images, target: CoordRing) -> Poly:
    """Replace coordinate i of ``f.ring`` by the polynomial ``images[i]`` in ``target``."""
    out = {}
    powers = {}
    for mono, c in f.terms.items():
        term = target.const(c)
        for i, e in mono:
            key = (i, e)
            pw = powers.get(key)
            if pw is None:
                pw = images[i] ** e
                powers[key] = pw
            term = term * pw
            if not term.terms:
                break
        for m, k in term.terms.items():
            out[m] = out.get(m, 0) + k
    return Poly(target, out)


def apply_derivation(f: Poly, images: Mapping) -> Poly:
    """Apply the derivation sending coordinate i to ``images[i]`` (missing means 0)."""
    out = {}
    for mono, c in f.terms.items():
        for pos, (i, e) in enumerate(mono):
            d = images.get(i)
            if d is None or not d.terms:
                continue
            rest = list(mono)
            if e == 1:
                rest.pop(pos)
            else:
                rest[pos] = (i, e - 1)
            rest = tuple(rest)
            for m, k in d.terms.items():
                mm = _mono_mul(rest, m)
                out[mm] = out.get(mm, 0) + c * e * k
    return Poly(f.ring, out)

"""Quivers, dimension vectors, paths and maps in the additive path category.

Paths compose left to right: ``a.b`` means "first ``a``, then ``b``" and
requires ``t(a) == i(b)``.  All identifiers are strings and every canonical
ordering in the package is derived from their lexicographic order.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product


class QuiverError(ValueError):
    """Raised for malformed quivers, paths, maps or functors."""


def _rational(c) -> Fraction | int:
    c = Fraction(c)
    return int(c) if c.denominator == 1 else c


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    _by_id: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        vs = tuple(sorted(str(v) for v in self.vertices))
        if len(set(vs)) != len(vs):
            raise QuiverError("duplicate vertex identifier")
        arrows = tuple(sorted((Arrow(str(a.id), str(a.source), str(a.target))
                               for a in self.arrows), key=lambda a: a.id))
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow identifier")
        if set(ids) & set(vs):
            raise QuiverError("arrow and vertex identifiers must be distinct")
        for a in arrows:
            for end in (a.source, a.target):
                if end not in vs:
                    raise QuiverError(f"dangling endpoint: arrow {a.id} references unknown vertex {end}")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "_by_id", {a.id: a for a in arrows})

    def arrow(self, a: str) -> Arrow:
        try:
            return self._by_id[a]
        except KeyError:
            raise QuiverError(f"unknown arrow {a!r}") from None

    def has_arrow(self, a: str) -> bool:
        return a in self._by_id

    @property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def out_arrows(self, v: str) -> list[str]:
        return [a.id for a in self.arrows if a.source == v]

    def in_arrows(self, v: str) -> list[str]:
        return [a.id for a in self.arrows if a.target == v]

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        ready = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        return seen == len(self.vertices)

    def restrict(self, arrows: Iterable[str]) -> "Quiver":
        """Same vertices, only the listed arrows."""
        keep = set(arrows)
        return Quiver(self.vertices, tuple(a for a in self.arrows if a.id in keep))

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices),
                "arrows": [{"id": a.id, "from": a.source, "to": a.target} for a in self.arrows]}


def validate_quiver(raw) -> Quiver:
    """Build a :class:`Quiver` from a JSON-style description.

    ``raw`` is ``{"vertices": [...], "arrows": [{"id", "from", "to"}, ...]}``;
    arrows may also be given as ``(id, from, to)`` triples.
    """
    if isinstance(raw, Quiver):
        return raw
    try:
        vertices = [str(v) for v in raw["vertices"]]
        arrows = []
        for a in raw.get("arrows", []):
            if isinstance(a, Mapping):
                arrows.append(Arrow(str(a["id"]), str(a["from"]), str(a["to"])))
            else:
                aid, s, t = a
                arrows.append(Arrow(str(aid), str(s), str(t)))
    except (KeyError, TypeError) as exc:
        raise QuiverError(f"malformed quiver description: {exc}") from None
    return Quiver(tuple(vertices), tuple(arrows))


class DimVector(Mapping):
    """Immutable map vertex -> non-negative integer."""

    __slots__ = ("_items", "_d")

    def __init__(self, quiver_or_vertices, entries: Mapping | None = None):
        vertices = (quiver_or_vertices.vertices if isinstance(quiver_or_vertices, Quiver)
                    else tuple(sorted(str(v) for v in quiver_or_vertices)))
        entries = {str(k): v for k, v in (entries or {}).items()}
        unknown = set(entries) - set(vertices)
        if unknown:
            raise QuiverError(f"dimension vector has unknown vertices {sorted(unknown)}")
        d = {}
        for v in vertices:
            n = int(entries.get(v, 0))
            if n < 0:
                raise QuiverError(f"negative dimension at vertex {v}")
            d[v] = n
        self._d = d
        self._items = tuple(d.items())

    def __getitem__(self, v):
        return self._d[v]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        return hash(self._items)

    def __eq__(self, other):
        if isinstance(other, DimVector):
            return self._items == other._items
        return NotImplemented

    def __add__(self, other: "DimVector") -> "DimVector":
        return DimVector(list(self), {v: self[v] + other[v] for v in self})

    def __repr__(self):
        return "DimVector(" + ",".join(f"{v}:{n}" for v, n in self._items) + ")"

    def total(self) -> int:
        return sum(self._d.values())


def dimvector(quiver: Quiver, entries) -> DimVector:
    if isinstance(entries, DimVector):
        if tuple(entries) != quiver.vertices:
            raise QuiverError("dimension vector lives on a different vertex set")
        return entries
    if not isinstance(entries, Mapping):
        entries = dict(zip(quiver.vertices, entries))
    return DimVector(quiver, entries)


@dataclass(frozen=True, order=False)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self):
        return len(self.arrows)

    @property
    def is_cycle(self) -> bool:
        return self.source == self.target and len(self.arrows) > 0

    def sort_key(self):
        return (len(self.arrows), self.arrows, self.source, self.target)

    def __str__(self):
        return ".".join(self.arrows) if self.arrows else f"e_{self.source}"


def trivial_path(v: str) -> Path:
    return Path(v, v, ())


def make_path(quiver: Quiver, arrows: Iterable[str], vertex: str | None = None) -> Path:
    arrows = tuple(arrows)
    if not arrows:
        if vertex is None or vertex not in quiver.vertices:
            raise QuiverError("trivial path needs a valid vertex")
        return trivial_path(vertex)
    objs = [quiver.arrow(a) for a in arrows]
    for x, y in zip(objs, objs[1:]):
        if x.target != y.source:
            raise QuiverError(f"endpoint mismatch: t({x.id})={x.target} != i({y.id})={y.source}")
    return Path(objs[0].source, objs[-1].target, arrows)


def compose_paths(p: Path, q: Path) -> Path:
    """``p`` followed by ``q``."""
    if p.target != q.source:
        raise QuiverError(f"endpoint mismatch: {p} ends at {p.target}, {q} starts at {q.source}")
    return Path(p.source, q.target, p.arrows + q.arrows)


def enumerate_paths(quiver: Quiver, v: str, w: str, max_len: int) -> list[Path]:
    if max_len < 0:
        raise QuiverError("max_len must be non-negative")
    found = []
    frontier = [trivial_path(v)]
    for _ in range(max_len + 1):
        found.extend(p for p in frontier if p.target == w)
        frontier = [compose_paths(p, Path(a.source, a.target, (a.id,)))
                    for p in frontier for a in quiver.arrows if a.source == p.target]
    return sorted(found, key=Path.sort_key)


def all_paths_from(quiver: Quiver, v: str, max_len: int) -> list[Path]:
    out = []
    frontier = [trivial_path(v)]
    for _ in range(max_len + 1):
        out.extend(frontier)
        frontier = [compose_paths(p, Path(a.source, a.target, (a.id,)))
                    for p in frontier for a in quiver.arrows if a.source == p.target]
    return sorted(out, key=Path.sort_key)


def rotate(quiver: Quiver, cycle: Path, k: int) -> Path:
    arrows = cycle.arrows[k:] + cycle.arrows[:k]
    return make_path(quiver, arrows)


def canonical_rotation(quiver: Quiver, cycle: Path) -> Path:
    if not cycle.is_cycle:
        raise QuiverError(f"{cycle} is not an oriented cycle")
    n = len(cycle.arrows)
    best = min(cycle.arrows[k:] + cycle.arrows[:k] for k in range(n))
    return make_path(quiver, best)


def enumerate_cycles(quiver: Quiver, max_len: int) -> list[Path]:
    """Oriented cycles of length 1..max_len, one per rotation class."""
    reps = set()
    for v in quiver.vertices:
        for p in enumerate_paths(quiver, v, v, max_len):
            if p.arrows:
                reps.add(canonical_rotation(quiver, p))
    return sorted(reps, key=Path.sort_key)


class PathComb:
    """A rational linear combination of paths sharing endpoints.

    Supports ``+``, ``-``, scalar ``*`` and composition ``p * q`` (first
    ``p`` then ``q``).  The zero combination keeps its endpoints.
    """

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: str, target: str, terms: Mapping[Path, object] | None = None):
        self.source = source
        self.target = target
        clean = {}
        for p, c in (terms or {}).items():
            if p.source != source or p.target != target:
                raise QuiverError(f"term {p} does not run {source} -> {target}")
            c = _rational(c)
            if c:
                clean[p] = clean.get(p, 0) + c
        self.terms = tuple(sorted(((p, c) for p, c in clean.items() if c),
                                  key=lambda pc: pc[0].sort_key()))

    @classmethod
    def of(cls, path: Path, coeff=1) -> "PathComb":
        return cls(path.source, path.target, {path: coeff})

    @classmethod
    def zero(cls, source: str, target: str) -> "PathComb":
        return cls(source, target)

    @classmethod
    def identity(cls, v: str, coeff=1) -> "PathComb":
        return cls.of(trivial_path(v), coeff)

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return dict(self.terms)

    def max_length(self) -> int:
        return max((len(p) for p, _ in self.terms), default=0)

    def trivial_coefficient(self):
        for p, c in self.terms:
            if not p.arrows:
                return c
        return 0

    def is_scalar(self) -> bool:
        return all(not p.arrows for p, _ in self.terms)

    def _check(self, other: "PathComb"):
        if (self.source, self.target) != (other.source, other.target):
            raise QuiverError("path combinations have different endpoints")

    def __add__(self, other: "PathComb") -> "PathComb":
        self._check(other)
        d = self.as_dict()
        for p, c in other.terms:
            d[p] = d.get(p, 0) + c
        return PathComb(self.source, self.target, d)

    def __neg__(self):
        return PathComb(self.source, self.target, {p: -c for p, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PathComb):
            if self.target != other.source:
                raise QuiverError(f"cannot compose: {self.target} != {other.source}")
            d = {}
            for p, c in self.terms:
                for q, e in other.terms:
                    pq = compose_paths(p, q)
                    d[pq] = d.get(pq, 0) + c * e
            return PathComb(self.source, other.target, d)
        return PathComb(self.source, self.target, {p: c * other for p, c in self.terms})

    def __rmul__(self, k):
        return self.__mul__(k)

    def __eq__(self, other):
        if not isinstance(other, PathComb):
            return NotImplemented
        return (self.source, self.target, self.terms) == (other.source, other.target, other.terms)

    def __hash__(self):
        return hash((self.source, self.target, self.terms))

    def __repr__(self):
        return f"PathComb({self.source}->{self.target}: {self})"

    def __str__(self):
        from .io import render_path_comb
        return render_path_comb(self)


class AddMap:
    """A map ``(+) O(v)^{a(v)} -> (+) O(v)^{b(v)}`` in add(Q).

    ``source`` and ``target`` list the vertex of every slot; ``entries[s][t]``
    is a :class:`PathComb` from ``source[s]`` to ``target[t]``.  Maps built
    with :meth:`from_mults` use the canonical slot order (vertex order, then
    copy index); direct sums concatenate slots so that block-diagonal maps
    stay literally block diagonal.
    """

    __slots__ = ("quiver", "source", "target", "entries")

    def __init__(self, quiver: Quiver, source, target, entries):
        self.quiver = quiver
        self.source = tuple(str(v) for v in source)
        self.target = tuple(str(v) for v in target)
        for v in self.source + self.target:
            if v not in quiver.vertices:
                raise QuiverError(f"slot at unknown vertex {v}")
        rows = []
        entries = list(entries)
        if len(entries) != len(self.source):
            raise QuiverError("entry matrix has wrong number of rows")
        for s, row in enumerate(entries):
            row = list(row)
            if len(row) != len(self.target):
                raise QuiverError("entry matrix has wrong number of columns")
            out = []
            for t, e in enumerate(row):
                if e is None or (not isinstance(e, PathComb) and e == 0):
                    e = PathComb.zero(self.source[s], self.target[t])
                if (e.source, e.target) != (self.source[s], self.target[t]):
                    raise QuiverError(f"entry ({s},{t}) must run {self.source[s]} -> {self.target[t]}")
                for p, _ in e.terms:
                    for a in p.arrows:
                        quiver.arrow(a)
                out.append(e)
            rows.append(tuple(out))
        self.entries = tuple(rows)

    @classmethod
    def from_mults(cls, quiver: Quiver, a, b, entries) -> "AddMap":
        a, b = dimvector(quiver, a), dimvector(quiver, b)
        src = [v for v in quiver.vertices for _ in range(a[v])]
        tgt = [v for v in quiver.vertices for _ in range(b[v])]
        return cls(quiver, src, tgt, entries)

    @classmethod
    def single(cls, quiver: Quiver, comb: PathComb) -> "AddMap":
        return cls(quiver, [comb.source], [comb.target], [[comb]])

    @property
    def source_mult(self) -> DimVector:
        return DimVector(self.quiver, {v: self.source.count(v) for v in self.quiver.vertices})

    @property
    def target_mult(self) -> DimVector:
        return DimVector(self.quiver, {v: self.target.count(v) for v in self.quiver.vertices})

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.source), len(self.target)

    def then(self, other: "AddMap") -> "AddMap":
        """Composite: first ``self`` then ``other`` (matrix product)."""
        if self.target != other.source:
            raise QuiverError("slot mismatch in composition")
        n, m, k = len(self.source), len(self.target), len(other.target)
        rows = []
        for s in range(n):
            row = []
            for t in range(k):
                acc = PathComb.zero(self.source[s], other.target[t])
                for j in range(m):
                    acc = acc + self.entries[s][j] * other.entries[j][t]
                row.append(acc)
            rows.append(row)
        return AddMap(self.quiver, self.source, other.target, rows)

    def direct_sum(self, other: "AddMap") -> "AddMap":
        if self.quiver != other.quiver:
            raise QuiverError("direct sum of maps over different quivers")
        n1, m1 = self.shape
        rows = []
        for s, v in enumerate(self.source + other.source):
            row = []
            for t, w in enumerate(self.target + other.target):
                if s < n1 and t < m1:
                    row.append(self.entries[s][t])
                elif s >= n1 and t >= m1:
                    row.append(other.entries[s - n1][t - m1])
                else:
                    row.append(PathComb.zero(v, w))
            rows.append(row)
        return AddMap(self.quiver, self.source + other.source, self.target + other.target, rows)

    def delete_slots(self, rows=(), cols=()) -> "AddMap":
        rows, cols = set(rows), set(cols)
        keep_r = [s for s in range(len(self.source)) if s not in rows]
        keep_c = [t for t in range(len(self.target)) if t not in cols]
        return AddMap(self.quiver, [self.source[s] for s in keep_r], [self.target[t] for t in keep_c],
                      [[self.entries[s][t] for t in keep_c] for s in keep_r])

    def max_length(self) -> int:
        return max((e.max_length() for row in self.entries for e in row), default=0)

    def arrows_used(self) -> set[str]:
        return {a for row in self.entries for e in row for p, _ in e.terms for a in p.arrows}

    def __eq__(self, other):
        if not isinstance(other, AddMap):
            return NotImplemented
        return (self.quiver, self.source, self.target, self.entries) == (
            other.quiver, other.source, other.target, other.entries)

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"AddMap([{','.join(self.source)}] -> [{','.join(self.target)}]: [{body}])"


class FunctorData:
    """An additive functor ``add(Q') -> add(Q)`` given on vertices and arrows."""

    def __init__(self, source: Quiver, target: Quiver, vertex_map: Mapping, arrow_map: Mapping):
        self.source = source
        self.target = target
        self.vertex_map = {str(k): str(v) for k, v in vertex_map.items()}
        if set(self.vertex_map) != set(source.vertices):
            raise QuiverError("vertex map must be defined on every vertex of the source quiver")
        for v in self.vertex_map.values():
            if v not in target.vertices:
                raise QuiverError(f"vertex map hits unknown vertex {v}")
        self.arrow_map = {}
        for a in source.arrows:
            comb = arrow_map.get(a.id)
            want = (self.vertex_map[a.source], self.vertex_map[a.target])
            if comb is None:
                comb = PathComb.zero(*want)
            if (comb.source, comb.target) != want:
                raise QuiverError(f"endpoint mismatch: image of {a.id} must run {want[0]} -> {want[1]}")
            self.arrow_map[a.id] = comb
        extra = set(arrow_map) - set(source.arrow_ids)
        if extra:
            raise QuiverError(f"arrow map has unknown arrows {sorted(extra)}")

    @classmethod
    def identity(cls, quiver: Quiver) -> "FunctorData":
        return cls(quiver, quiver, {v: v for v in quiver.vertices},
                   {a.id: PathComb.of(Path(a.source, a.target, (a.id,))) for a in quiver.arrows})

    def map_path(self, p: Path) -> PathComb:
        acc = PathComb.identity(self.vertex_map[p.source])
        for a in p.arrows:
            acc = acc * self.arrow_map[a]
        return acc

    def map_comb(self, comb: PathComb) -> PathComb:
        acc = PathComb.zero(self.vertex_map[comb.source], self.vertex_map[comb.target])
        for p, c in comb.terms:
            acc = acc + self.map_path(p) * c
        return acc

    def compose(self, inner: "FunctorData") -> "FunctorData":
        """``self o inner`` where ``inner: add(Q'') -> add(Q')``."""
        if inner.target != self.source:
            raise QuiverError("functors are not composable")
        return FunctorData(inner.source, self.target,
                           {v: self.vertex_map[w] for v, w in inner.vertex_map.items()},
                           {a: self.map_comb(c) for a, c in inner.arrow_map.items()})


def apply_functor_dim(s: FunctorData, alpha: Mapping) -> DimVector:
    """Pull a dimension vector on Q back to Q' along ``s``."""
    alpha = dimvector(s.target, alpha)
    return DimVector(s.source, {v: alpha[s.vertex_map[v]] for v in s.source.vertices})


def euler_form(quiver: Quiver, alpha, beta) -> int:
    alpha, beta = dimvector(quiver, alpha), dimvector(quiver, beta)
    return (sum(alpha[v] * beta[v] for v in quiver.vertices)
            - sum(alpha[a.source] * beta[a.target] for a in quiver.arrows))


def arrow_path(quiver: Quiver, a: str) -> Path:
    arr = quiver.arrow(a)
    return Path(arr.source, arr.target, (a,))


def path_combs(quiver: Quiver, v: str, w: str, max_len: int, coeffs=(-1, 0, 1)):
    """Every combination of paths v -> w (length <= max_len) with coefficients
    from ``coeffs``, simplest first."""
    paths = enumerate_paths(quiver, v, w, max_len)
    nonzero = sorted({_rational(c) for c in coeffs if c}, key=lambda c: (abs(c), c < 0, c))
    combos = []
    for pick in product([0] + nonzero, repeat=len(paths)):
        terms = {p: c for p, c in zip(paths, pick) if c}
        comb = PathComb(v, w, terms)
        key = (max((len(p) for p in terms), default=-1), len(terms),
               tuple((paths.index(p), nonzero.index(c)) for p, c in sorted(terms.items(), key=lambda pc: pc[0].sort_key())))
        combos.append((key, comb))
    combos.sort(key=lambda kc: kc[0])
    return [c for _, c in combos]

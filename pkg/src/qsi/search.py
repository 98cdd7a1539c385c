"""Bounded enumeration of maps in add(Q), simplest first."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .invariants import is_square
from .quiver import AddMap, Quiver, dimvector, path_combs


@dataclass(frozen=True)
class Bounds:
    max_len: int = 2
    max_mult: int = 3
    coeffs: tuple = (-1, 0, 1)
    limit: int = 2000
    per_config: int = 200
    trace_degree: int = 0

    def describe(self) -> str:
        return (f"max_len={self.max_len} max_mult={self.max_mult} coeffs={list(self.coeffs)} "
                f"limit={self.limit} per_config={self.per_config} trace_degree={self.trace_degree}")


def multiplicity_configs(quiver: Quiver, alpha, max_mult: int):
    """(a, b) multiplicity pairs satisfying squareness at alpha, by total size.

    Vertices with alpha(v) = 0 get no slots: they never change the determinant.
    """
    alpha = dimvector(quiver, alpha)
    live = [v for v in quiver.vertices if alpha[v]]
    out = []
    for a in product(range(max_mult + 1), repeat=len(live)):
        for b in product(range(max_mult + 1), repeat=len(live)):
            if not any(a) or sum(x * alpha[v] for x, v in zip(a, live)) != sum(
                    y * alpha[v] for y, v in zip(b, live)):
                continue
            out.append((sum(a) + sum(b), a, b))
    out.sort()
    return [(dict(zip(live, a)), dict(zip(live, b))) for _, a, b in out]


def _tuples_by_sum(sizes):
    """Index tuples (i_1..i_n), 0 <= i_k < sizes[k], ordered by (sum, lex)."""
    n = len(sizes)
    if n == 0:
        yield ()
        return
    top = sum(s - 1 for s in sizes)

    def rec(k, remaining):
        if k == n - 1:
            if remaining < sizes[k]:
                yield (remaining,)
            return
        rest_cap = sum(s - 1 for s in sizes[k + 1:])
        for i in range(max(0, remaining - rest_cap), min(sizes[k] - 1, remaining) + 1):
            for tail in rec(k + 1, remaining - i):
                yield (i,) + tail

    for total in range(top + 1):
        yield from rec(0, total)


def enumerate_add_maps(quiver: Quiver, alpha, bounds: Bounds):
    """Yield candidate maps satisfying squareness at ``alpha`` in canonical order."""
    cache = {}
    emitted = 0
    for a, b in multiplicity_configs(quiver, alpha, bounds.max_mult):
        src = [v for v in quiver.vertices for _ in range(a.get(v, 0))]
        tgt = [v for v in quiver.vertices for _ in range(b.get(v, 0))]
        cells = [(v, w) for v in src for w in tgt]
        options = []
        for cell in cells:
            if cell not in cache:
                cache[cell] = path_combs(quiver, cell[0], cell[1], bounds.max_len, bounds.coeffs)
            options.append(cache[cell])
        taken = 0
        for idx in _tuples_by_sum([len(o) for o in options]):
            if not any(idx):
                continue
            entries = [o[i] for o, i in zip(options, idx)]
            rows = [entries[s * len(tgt):(s + 1) * len(tgt)] for s in range(len(src))]
            phi = AddMap(quiver, src, tgt, rows)
            if not is_square(phi, dimvector(quiver, alpha)):
                continue
            yield phi
            taken += 1
            emitted += 1
            if emitted >= bounds.limit:
                return
            if taken >= bounds.per_config:
                break

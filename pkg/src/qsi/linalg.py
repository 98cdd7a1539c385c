"""Exact rational linear algebra on small dense matrices and sparse vectors."""

from __future__ import annotations

from fractions import Fraction


def _q(c):
    c = Fraction(c)
    return int(c) if c.denominator == 1 else c


def matrix(rows) -> list[list]:
    return [[_q(x) for x in row] for row in rows]


def zeros(n: int, m: int) -> list[list]:
    return [[0] * m for _ in range(n)]


def identity(n: int) -> list[list]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a, b, inner: int | None = None, cols: int | None = None) -> list[list]:
    # inner/cols pin the shape when a factor has a zero dimension
    n = len(a)
    k = len(b) if inner is None else inner
    m = cols if cols is not None else (len(b[0]) if b else 0)
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for j in range(k):
            x = ai[j]
            if x:
                bj = b[j]
                for t in range(m):
                    if bj[t]:
                        oi[t] += x * bj[t]
    return out


def transpose(a, ncols: int | None = None) -> list[list]:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def det(a) -> Fraction | int:
    """Determinant by Gaussian elimination over Q.  The empty matrix has det 1."""
    n = len(a)
    m = [list(map(Fraction, row)) for row in a]
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f /= p
                mr, mc = m[r], m[col]
                for c in range(col, n):
                    mr[c] -= f * mc[c]
    return _q(result)


def rref(a, ncols: int | None = None):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    m = [list(map(Fraction, row)) for row in a]
    ncols = ncols if ncols is not None else (len(m[0]) if m else 0)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [[_q(x) for x in row] for row in m[:r]], pivots


def rank(a, ncols: int | None = None) -> int:
    return len(rref(a, ncols)[1])


def nullspace(a, ncols: int) -> list[list]:
    """Basis of {x : a x = 0}, one vector per free column."""
    rows, pivots = rref(a, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def left_nullspace(a, nrows: int) -> list[list]:
    """Basis of {y : y a = 0} (row vectors)."""
    return nullspace(transpose(a), nrows) if a and a[0] else [
        [1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]


def inverse(a) -> list[list]:
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    rows, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in rows]


def solve_vandermonde_row(points, target_index: int) -> list:
    """Coefficients c with sum_m c_m * points[m]**k == [k == target_index] for k < len(points)."""
    n = len(points)
    a = [[Fraction(p) ** k for p in points] for k in range(n)]
    rhs = [1 if k == target_index else 0 for k in range(n)]
    aug = [row + [r] for row, r in zip(a, rhs)]
    rows, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise ZeroDivisionError("sample points are not distinct")
    return [row[n] for row in rows]


class SparseEchelon:
    """Incremental echelon basis of sparse vectors (dict key -> rational).

    Pivots are chosen as the least key under ``key`` so the reduced basis is
    canonical for a given span.
    """

    def __init__(self, key=None):
        self._key = key or (lambda k: k)
        self.rows: dict = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = {k: Fraction(c) for k, c in vec.items() if c}
        # rows are fully reduced: subtracting one never reintroduces another pivot
        for piv in [k for k in v if k in self.rows]:
            f = v.get(piv)
            if not f:
                continue
            for k, c in self.rows[piv].items():
                nv = v.get(k, 0) - f * c
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        piv = min(r, key=self._key)
        p = r[piv]
        r = {k: c / p for k, c in r.items()}
        for row in self.rows.values():
            f = row.get(piv)
            if f:
                for k, c in r.items():
                    nv = row.get(k, 0) - f * c
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[piv] = r
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        return [{k: _q(c) for k, c in self.rows[p].items()} for p in sorted(self.rows, key=self._key)]


def sparse_nullspace(rows: list[dict], columns: list, key=None) -> list[dict]:
    """Basis of the kernel of the sparse matrix with the given rows.

    ``columns`` lists every column key; the result is in reduced echelon form
    with respect to the column order given by ``key`` (default: list order).
    """
    order = {c: i for i, c in enumerate(columns)}
    ckey = key or order.__getitem__
    ech = SparseEchelon(ckey)
    for row in rows:
        ech.add(row)
    pivots = set(ech.rows)
    basis = []
    for f in sorted((c for c in columns if c not in pivots), key=ckey):
        v = {f: Fraction(1)}
        for p, row in ech.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    # echelonize the kernel basis itself for a canonical presentation
    kech = SparseEchelon(ckey)
    for v in basis:
        kech.add(v)
    return kech.basis()

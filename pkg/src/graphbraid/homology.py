"""Integral cellular homology of configuration complexes.

Boundary matrices are built from cell keys (no face tables are stored) and
reduced exactly with Python integers.  A Bareiss rank routine serves as an
independent check on the Smith normal form rank.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from scipy.sparse import csc_matrix, issparse

from .cube_complex import CubeComplex

__all__ = [
    "ChainComplex",
    "HomologySummary",
    "boundary_matrices",
    "smith_normal_form",
    "betti_numbers",
    "homology",
    "rational_rank_oracle",
]


@dataclass
class ChainComplex:
    """``boundary[k]`` maps ``k``-cells (columns) to ``(k-1)``-cells (rows),
    both in canonical cell order.  ``cell_counts[k]`` is the number of
    ``k``-cells."""

    cell_counts: list[int]
    boundary: dict[int, csc_matrix] = field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.cell_counts) - 1

    def matrix(self, k: int) -> csc_matrix:
        if k in self.boundary:
            return self.boundary[k]
        rows = self.cell_counts[k - 1] if 0 < k <= self.top + 1 and k - 1 <= self.top else 0
        cols = self.cell_counts[k] if 0 <= k <= self.top else 0
        return csc_matrix((rows, cols), dtype=np.int64)

    def square_is_zero(self) -> bool:
        for k in range(2, self.top + 1):
            prod = self.matrix(k - 1) @ self.matrix(k)
            if prod.count_nonzero():
                return False
        return True


@dataclass(frozen=True)
class HomologySummary:
    betti: tuple[int, ...]
    torsion: dict[int, tuple[int, ...]]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def boundary_matrices(c: CubeComplex) -> ChainComplex:
    """Cube boundary ``sum_i (-1)^i (head facet_i - tail facet_i)``.

    ``i`` runs over the moving edges in increasing index order, starting
    at 0.  Raises ``ValueError`` if a facet is missing or if the result
    does not square to zero.
    """
    counts = [c.count(k) for k in range(len(c.keys))]
    while counts and counts[-1] == 0:
        counts.pop()
    cc = ChainComplex(counts)
    for k in range(1, len(counts)):
        ncols = counts[k]
        rows, cols, vals = [], [], []
        col_idx = np.arange(ncols, dtype=np.int64)
        for pos in range(k):
            sign = 1 if pos % 2 == 0 else -1
            for side, s in ((1, sign), (0, -sign)):
                r = c.lookup(k - 1, c.facet_keys(k, pos, side))
                if (r < 0).any():
                    bad = c.cell_of(c.keys[k][int(np.argmax(r < 0))])
                    raise ValueError(f"facet of {bad} is not stored")
                rows.append(r)
                cols.append(col_idx)
                vals.append(np.full(ncols, s, dtype=np.int64))
        m = csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(counts[k - 1], ncols),
            dtype=np.int64,
        )
        m.sum_duplicates()
        m.eliminate_zeros()
        cc.boundary[k] = m
    if not cc.square_is_zero():
        raise ValueError("boundary does not square to zero")
    return cc


def _to_columns(m) -> tuple[int, int, dict[int, dict[int, int]]]:
    """Copy any matrix-like input into column dictionaries of Python ints."""
    if issparse(m):
        coo = m.tocoo()
        nrows, ncols = coo.shape
        cols: dict[int, dict[int, int]] = {}
        for r, c, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            v = int(v)
            if v:
                col = cols.setdefault(c, {})
                col[r] = col.get(r, 0) + v
                if col[r] == 0:
                    del col[r]
        return nrows, ncols, cols
    rows = [list(map(int, row)) for row in (m.tolist() if isinstance(m, np.ndarray) else m)]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    cols = {}
    for r, row in enumerate(rows):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        for c, v in enumerate(row):
            if v:
                cols.setdefault(c, {})[r] = v
    return nrows, ncols, cols


def smith_normal_form(m) -> tuple[list[int], int]:
    """Nonzero elementary divisors ``d1 | d2 | ...`` and the rank of ``m``.

    Accepts a dense nested list, a numpy array or a scipy sparse matrix; the
    input is not modified.  Unit pivots are eliminated sparsely first; any
    residual block is finished densely with gcd steps.
    """
    _, _, cols = _to_columns(m)
    cols = {c: col for c, col in cols.items() if col}
    row_index: dict[int, set[int]] = {}
    for c, col in cols.items():
        for r in col:
            row_index.setdefault(r, set()).add(c)

    units = 0
    # lazy heap of (size, column); stale entries are skipped on pop
    heap = [(len(col), c) for c, col in cols.items()]
    heapq.heapify(heap)
    while heap:
        size, c = heapq.heappop(heap)
        col = cols.get(c)
        if col is None or len(col) != size:
            continue
        rows = [r for r, v in col.items() if v in (1, -1)]
        if not rows:
            continue
        r = min(rows, key=lambda r: (len(row_index[r]), r))
        pcol = cols.pop(c)
        pv = pcol[r]
        for r2 in pcol:
            row_index[r2].discard(c)
        # column operations clear row r; the pivot column then drops out
        for c2 in list(row_index[r]):
            col2 = cols[c2]
            factor = col2[r] * pv  # pv = +-1, so this is col2[r] / pv
            for r2, v in pcol.items():
                nv = col2.get(r2, 0) - factor * v
                if nv:
                    if r2 not in col2:
                        row_index[r2].add(c2)
                    col2[r2] = nv
                elif r2 in col2:
                    del col2[r2]
                    row_index[r2].discard(c2)
            if col2:
                heapq.heappush(heap, (len(col2), c2))
            else:
                del cols[c2]
        del row_index[r]
        units += 1

    rest = _dense_diagonal(cols)
    divisors = [1] * units + _divisibility_chain(rest)
    return divisors, len(divisors)


def _dense_diagonal(cols: dict[int, dict[int, int]]) -> list[int]:
    """Nonzero diagonal of an equivalent diagonal matrix (not yet a chain)."""
    if not cols:
        return []
    row_ids = sorted({r for col in cols.values() for r in col})
    rpos = {r: i for i, r in enumerate(row_ids)}
    col_ids = sorted(cols)
    a = [[0] * len(col_ids) for _ in row_ids]
    for j, c in enumerate(col_ids):
        for r, v in cols[c].items():
            a[rpos[r]][j] = v
    nr, nc = len(a), len(col_ids)
    diag = []
    t = 0
    while t < min(nr, nc):
        # pivot: smallest nonzero magnitude in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = a[i][j]
                if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                break
            # a remainder is smaller than the pivot: move it into place
            best = None
            for i in range(t, nr):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                    best = i
            a[t], a[best] = a[best], a[t]
            bestc = None
            for j in range(t, nc):
                if a[t][j] and (bestc is None or abs(a[t][j]) < abs(a[t][bestc])):
                    bestc = j
            for row in a:
                row[t], row[bestc] = row[bestc], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _divisibility_chain(diag: list[int]) -> list[int]:
    d = [x for x in diag if x]
    # replacing (x, y) by (gcd, lcm) preserves the module; repeat until sorted chain
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return d


def betti_numbers(cc: ChainComplex) -> HomologySummary:
    ranks: dict[int, int] = {}
    divisors: dict[int, list[int]] = {}
    for k in range(1, cc.top + 1):
        divisors[k], ranks[k] = smith_normal_form(cc.matrix(k))
    betti = []
    torsion = {}
    for k in range(cc.top + 1):
        b = cc.cell_counts[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
        betti.append(b)
        tors = tuple(d for d in divisors.get(k + 1, []) if d > 1)
        if tors:
            torsion[k] = tors
    return HomologySummary(tuple(betti), torsion)


def homology(c: CubeComplex) -> HomologySummary:
    return betti_numbers(boundary_matrices(c))


def rational_rank_oracle(m) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    nrows, ncols, cols = _to_columns(m)
    a = [[0] * ncols for _ in range(nrows)]
    for c, col in cols.items():
        for r, v in col.items():
            a[r][c] = v
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        for i in range(row + 1, nrows):
            ai = a[i]
            f = ai[col]
            for j in range(col, ncols):
                ai[j] = (p * ai[j] - f * a[row][j]) // prev
        prev = p
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank

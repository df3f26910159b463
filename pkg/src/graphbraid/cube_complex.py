"""The discretized configuration space of ``n`` unlabeled tokens on a graph.

A ``k``-cube is ``k`` pairwise disjoint closed edges (the moving tokens)
plus ``n - k`` vertices avoiding them and each other (the parked tokens).

Cells are encoded as integers ``(edge_mask << V) | vertex_mask`` and kept in
one sorted array per dimension.  Integer order on these keys is the
colexicographic order on (moving edges, parked vertices), which is the
canonical order used everywhere (dumps, matrix rows/columns, reports).
Keys fit in ``uint64`` when ``V + E <= 64``; larger graphs fall back to
object arrays of Python ints.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .graph_core import Graph, is_sufficiently_subdivided

log = logging.getLogger(__name__)

__all__ = [
    "Cell",
    "CubeComplex",
    "Link",
    "NotSufficientlySubdivided",
    "build_config_complex",
    "independent_edge_sets",
    "f_vector",
    "euler_characteristic",
    "dimension",
    "components",
    "vertex_link",
    "npc_check",
    "format_complex",
]


class NotSufficientlySubdivided(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Cell:
    moving_edges: tuple[int, ...]
    parked_vertices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.moving_edges)

    def __str__(self):
        edges = ",".join(map(str, self.moving_edges))
        verts = ",".join(map(str, self.parked_vertices))
        return f"cell {self.dim} edges={edges} verts={verts}"


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class CubeComplex:
    """Graded cell container for the configuration complex of ``graph``.

    ``keys[k]`` is the sorted key array of the ``k``-cells.  Faces are not
    materialized; they are computed from keys on demand (see
    :meth:`facet_keys`), so closure and boundary queries are exact lookups.
    """

    def __init__(self, graph: Graph, n: int, keys: list[np.ndarray]):
        self.graph = graph
        self.n = n
        self.V = graph.vertex_count
        self.keys = keys
        self._dtype = keys[0].dtype if keys else np.dtype(np.uint64)
        self._tail = [graph.tail(e) for e in range(graph.edge_count)]
        self._head = [graph.head(e) for e in range(graph.edge_count)]

    # -- encoding -------------------------------------------------------
    def key_of(self, cell: Cell) -> int:
        emask = sum(1 << e for e in cell.moving_edges)
        vmask = sum(1 << v for v in cell.parked_vertices)
        return (emask << self.V) | vmask

    def cell_of(self, key: int) -> Cell:
        key = int(key)
        return Cell(_bits(key >> self.V), _bits(key & ((1 << self.V) - 1)))

    def vertex_cell(self, vertices) -> Cell:
        return Cell((), tuple(sorted(vertices)))

    # -- queries --------------------------------------------------------
    def cells(self, k: int) -> list[Cell]:
        if not 0 <= k < len(self.keys):
            return []
        return [self.cell_of(x) for x in self.keys[k]]

    def __iter__(self) -> Iterator[Cell]:
        for k in range(len(self.keys)):
            yield from self.cells(k)

    def count(self, k: int) -> int:
        return len(self.keys[k]) if 0 <= k < len(self.keys) else 0

    def index(self, cell: Cell) -> int:
        """Position of ``cell`` in the canonical order of its dimension."""
        arr = self.keys[cell.dim] if cell.dim < len(self.keys) else None
        if arr is None:
            raise KeyError(cell)
        key = self.key_of(cell)
        i = int(np.searchsorted(arr, self._scalar(key)))
        if i >= len(arr) or int(arr[i]) != key:
            raise KeyError(cell)
        return i

    def __contains__(self, cell: Cell) -> bool:
        try:
            self.index(cell)
        except KeyError:
            return False
        return True

    def lookup(self, k: int, keys: np.ndarray) -> np.ndarray:
        """Indices of ``keys`` among the ``k``-cells, ``-1`` where absent."""
        if not 0 <= k < len(self.keys) or len(self.keys[k]) == 0:
            return np.full(len(keys), -1, dtype=np.int64)
        arr = self.keys[k]
        pos = np.searchsorted(arr, keys)
        pos_c = np.minimum(pos, len(arr) - 1)
        found = arr[pos_c] == keys
        return np.where(found, pos_c, -1).astype(np.int64)

    def _scalar(self, key: int):
        return np.uint64(key) if self._dtype == np.uint64 else key

    def facet_keys(self, k: int, position: int, side: int) -> np.ndarray:
        """Keys of the facets of every ``k``-cell obtained by stopping the
        ``position``-th moving edge (in increasing edge order) at its tail
        (``side == 0``) or head (``side == 1``)."""
        arr = self.keys[k]
        ends = self._head if side else self._tail
        uniq, inverse = self._edge_groups(k)
        delta = []
        for emask in uniq:
            e = _bits(int(emask))[position]
            delta.append(((1 << ends[e]) - (1 << (self.V + e))))
        if self._dtype == np.uint64:
            # two's-complement wraparound gives the right answer mod 2**64
            d = np.array([x % (1 << 64) for x in delta], dtype=np.uint64)
            out = arr + d[inverse]
        else:
            d = np.array(delta, dtype=object)
            out = arr + d[inverse]
        return out

    def _edge_groups(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        # few distinct edge sets compared to cells: compute per group
        cache = self.__dict__.setdefault("_groups", {})
        if k not in cache:
            cache[k] = np.unique(self.edge_masks(k), return_inverse=True)
        return cache[k]

    def edge_masks(self, k: int) -> np.ndarray:
        return self.keys[k] >> self._scalar(self.V)

    def facets(self, cell: Cell) -> list[tuple[int, Cell, Cell]]:
        """``(edge, tail facet, head facet)`` for each moving edge of ``cell``."""
        out = []
        for e in cell.moving_edges:
            rest = tuple(x for x in cell.moving_edges if x != e)
            t = Cell(rest, tuple(sorted(cell.parked_vertices + (self._tail[e],))))
            h = Cell(rest, tuple(sorted(cell.parked_vertices + (self._head[e],))))
            out.append((e, t, h))
        return out

    def check_closure(self) -> list[Cell]:
        """Cells having a facet that is not stored (empty for a valid complex)."""
        bad = []
        for k in range(1, len(self.keys)):
            missing = np.zeros(len(self.keys[k]), dtype=bool)
            for pos in range(k):
                for side in (0, 1):
                    missing |= self.lookup(k - 1, self.facet_keys(k, pos, side)) < 0
            bad += [self.cell_of(x) for x in self.keys[k][missing]]
        return bad

    def without(self, *cells: Cell) -> "CubeComplex":
        """Copy of this complex with ``cells`` removed (faces untouched)."""
        keys = [a.copy() for a in self.keys]
        for c in cells:
            i = self.index(c)
            keys[c.dim] = np.delete(keys[c.dim], i)
        return CubeComplex(self.graph, self.n, keys)

    def edge_endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """For each 1-cell, indices of its tail corner and head corner."""
        if self.count(1) == 0:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        return (
            self.lookup(0, self.facet_keys(1, 0, 0)),
            self.lookup(0, self.facet_keys(1, 0, 1)),
        )

    def __repr__(self):
        return f"CubeComplex(n={self.n}, f={f_vector(self)})"


def independent_edge_sets(g: Graph, max_size: int) -> Iterator[tuple[int, ...]]:
    """Sets of pairwise disjoint closed edges, in lexicographic order."""

    def extend(prefix: tuple[int, ...], used: int, start: int):
        yield prefix
        if len(prefix) == max_size:
            return
        for e in range(start, g.edge_count):
            u, v = g.edges[e]
            bit = (1 << u) | (1 << v)
            if used & bit:
                continue
            yield from extend(prefix + (e,), used | bit, e + 1)

    yield from extend((), 0, 0)


@lru_cache(maxsize=None)
def _combinations(size: int, r: int) -> np.ndarray:
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if r > size:
        return np.zeros((0, r), dtype=np.int64)
    return np.array(list(itertools.combinations(range(size), r)), dtype=np.int64).reshape(-1, r)


def build_config_complex(g: Graph, n: int, *, allow_unsubdivided: bool = False) -> CubeComplex:
    """Enumerate every cell of the ``n``-token configuration complex of ``g``.

    Raises :class:`NotSufficientlySubdivided` unless ``g`` passes the
    subdivision criterion for ``n`` or ``allow_unsubdivided`` is set; the
    complex is defined either way, but only the subdivided one models the
    topological configuration space.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    V, E = g.vertex_count, g.edge_count
    wide = V + E > 64
    dtype = np.dtype(object) if wide else np.dtype(np.uint64)
    if n > V:
        log.warning("n=%d exceeds the %d vertices: configuration complex is empty", n, V)
        return CubeComplex(g, n, [np.zeros(0, dtype=dtype) for _ in range(n + 1)])
    if not allow_unsubdivided:
        ok, violations = is_sufficiently_subdivided(g, n)
        if not ok:
            raise NotSufficientlySubdivided(
                f"graph is not sufficiently subdivided for n={n}: "
                + "; ".join(map(str, violations[:3]))
            )
    per_dim: list[list[np.ndarray]] = [[] for _ in range(n + 1)]
    for edges in independent_edge_sets(g, n):
        k = len(edges)
        ends = set()
        for e in edges:
            ends.update(g.edges[e])
        allowed = [v for v in range(V) if v not in ends]
        r = n - k
        if r > len(allowed):
            continue
        emask = sum(1 << e for e in edges) << V
        combos = _combinations(len(allowed), r)
        if wide:
            bits = np.array([1 << v for v in allowed], dtype=object)
            vmask = bits[combos].sum(axis=1) if r else np.zeros(1, dtype=object)
            per_dim[k].append(vmask + emask)
        else:
            bits = np.array([1 << v for v in allowed], dtype=np.uint64)
            vmask = bits[combos].sum(axis=1, dtype=np.uint64) if r else np.zeros(1, dtype=np.uint64)
            per_dim[k].append(vmask + np.uint64(emask))
    keys = []
    for chunks in per_dim:
        arr = np.concatenate(chunks) if chunks else np.zeros(0, dtype=dtype)
        arr = np.sort(arr.astype(dtype), kind="stable")
        keys.append(arr)
    return CubeComplex(g, n, keys)


def f_vector(c: CubeComplex) -> list[int]:
    return [len(a) for a in c.keys]


def euler_characteristic(c: CubeComplex) -> int:
    return sum((-1) ** k * f for k, f in enumerate(f_vector(c)))


def dimension(c: CubeComplex) -> int:
    """Top nonempty grade, ``-1`` for the empty complex."""
    top = -1
    for k, f in enumerate(f_vector(c)):
        if f:
            top = k
    return top


def components(c: CubeComplex) -> int:
    """Connected components of the 1-skeleton."""
    nv = c.count(0)
    if nv == 0:
        return 0
    tails, heads = c.edge_endpoints()
    ok = (tails >= 0) & (heads >= 0)
    adj = coo_matrix(
        (np.ones(int(ok.sum()), dtype=np.int8), (tails[ok], heads[ok])), shape=(nv, nv)
    )
    count, _ = connected_components(adj, directed=False)
    return int(count)


# a germ is an incident 1-cell seen from a 0-cell: (edge, direction) with
# direction +1 when the token leaves the tail of the edge
Germ = tuple[int, int]


@dataclass
class Link:
    """Abstract simplicial complex: vertices are germs at a 0-cell."""

    vertex: Cell
    germs: list[Germ]
    simplices: set[frozenset[Germ]]

    def edges(self) -> set[frozenset[Germ]]:
        return {s for s in self.simplices if len(s) == 2}

    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def missing_cliques(self) -> list[frozenset[Germ]]:
        """Cliques of the 1-skeleton that are not simplices (empty iff flag)."""
        nbrs = {g: set() for g in self.germs}
        for s in self.edges():
            a, b = tuple(s)
            nbrs[a].add(b)
            nbrs[b].add(a)
        order = {g: i for i, g in enumerate(self.germs)}
        out = []

        def grow(clique: list[Germ], cand: set[Germ]):
            for g in sorted(cand, key=order.__getitem__):
                bigger = clique + [g]
                fs = frozenset(bigger)
                if len(bigger) >= 3 and fs not in self.simplices:
                    out.append(fs)
                    continue
                grow(bigger, {h for h in cand & nbrs[g] if order[h] > order[g]})

        grow([], set(self.germs))
        return out

    def is_flag(self) -> bool:
        return not self.missing_cliques()


def _cube_at(c: CubeComplex, vertex: Cell, germs: tuple[Germ, ...]) -> Cell:
    g = c.graph
    sources = {g.tail(e) if d > 0 else g.head(e) for e, d in germs}
    parked = tuple(v for v in vertex.parked_vertices if v not in sources)
    return Cell(tuple(sorted(e for e, _ in germs)), parked)


def vertex_link(c: CubeComplex, v: Cell) -> Link:
    """Link of the 0-cell ``v``: one (k-1)-simplex per stored k-cube at ``v``."""
    if v.dim != 0 or v not in c:
        raise ValueError(f"{v} is not a 0-cell of the complex")
    g = c.graph
    occupied = set(v.parked_vertices)
    germs: list[Germ] = []
    for p in v.parked_vertices:
        for e in g.incident_edges(p):
            if g.other_end(e, p) in occupied:
                continue
            germ = (e, 1 if g.tail(e) == p else -1)
            if _cube_at(c, v, (germ,)) in c:
                germs.append(germ)
    germs.sort()
    simplices: set[frozenset[Germ]] = set()

    def grow(chosen: tuple[Germ, ...], start: int):
        for i in range(start, len(germs)):
            cand = chosen + (germs[i],)
            if _cube_at(c, v, cand) in c:
                simplices.add(frozenset(cand))
                grow(cand, i + 1)

    grow((), 0)
    return Link(v, germs, simplices)


def npc_check(c: CubeComplex) -> tuple[bool, tuple[Cell, frozenset] | None]:
    """True iff every vertex link is flag; otherwise the first failing
    0-cell (canonical order) and a missing clique there."""
    for v in c.cells(0):
        missing = vertex_link(c, v).missing_cliques()
        if missing:
            return False, (v, missing[0])
    return True, None


def format_complex(c: CubeComplex) -> str:
    return "".join(f"{cell}\n" for cell in c)

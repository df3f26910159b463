"""The cubical map from the configuration complex to the Salvetti complex.

Every 0-cell goes to the single vertex of the Salvetti complex and every
1-cell to the generator named by its moving edge, with sign ``+1`` when the
token travels from the tail of the edge to its head.  The Salvetti complex
itself is never built; the local-isometry conditions are checked against the
commutation graph directly.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cube_complex import Cell, CubeComplex, build_config_complex, components
from .graph_core import Graph
from .raag import CommutationGraph, Word

__all__ = [
    "CubicalMap",
    "LoopWord",
    "IsometryViolation",
    "LiftError",
    "build_cw_map",
    "check_local_isometry",
    "pi1_generators",
    "basepoint_for",
    "lift_word",
    "word_from_moves",
]


@dataclass
class CubicalMap:
    complex: CubeComplex
    delta: CommutationGraph

    def label(self, one_cell: int) -> tuple[int, int]:
        """Letter read along the ``one_cell``-th 1-cell from tail corner to head corner."""
        key = int(self.complex.keys[1][one_cell])
        edge = (key >> self.complex.V).bit_length() - 1
        return edge, 1

    def edge_assignment(self) -> np.ndarray:
        """Generator of every 1-cell, in canonical order (sign is always +1 tail to head)."""
        masks = self.complex.edge_masks(1)
        return np.array([int(m).bit_length() - 1 for m in masks], dtype=np.int64)


@dataclass(frozen=True)
class IsometryViolation:
    kind: str  # "injectivity" | "missing_corner" | "foreign_cell" | "dangling"
    vertex: Cell | None
    germs: tuple[tuple[int, int], ...]
    cube: Cell | None = None

    def __str__(self):
        parts = [self.kind]
        if self.vertex is not None:
            parts.append(f"at {{{','.join(map(str, self.vertex.parked_vertices))}}}")
        if self.germs:
            parts.append("germs " + " ".join(f"{e}{'+' if d > 0 else '-'}" for e, d in self.germs))
        if self.cube is not None:
            parts.append(f"missing {self.cube}")
        return " ".join(parts)


@dataclass
class LoopWord:
    basepoint: Cell
    word: Word
    witness_path: tuple[tuple[int, int], ...]  # (1-cell index, +1 tail->head / -1)


class LiftError(ValueError):
    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"letter {position}: {message}")


def build_cw_map(c: CubeComplex, d: CommutationGraph) -> CubicalMap:
    """Label 1-cells by their moving edge and check every cube maps to a clique."""
    if d.origin != c.graph:
        raise ValueError("commutation graph was built from a different graph")
    for k in range(2, len(c.keys)):
        if c.count(k) == 0:
            continue
        uniq, _ = c._edge_groups(k)
        for mask in uniq.tolist():
            mask = int(mask)
            rest = mask
            while rest:
                e = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                others = mask & ~(1 << e)
                if d.adjacency[e] & others != others:
                    raise ValueError(f"cube with edges {mask:b} does not map to a clique")
    return CubicalMap(c, d)


def check_local_isometry(m: CubicalMap) -> tuple[bool, IsometryViolation | None]:
    """Injectivity and fullness of the map on every vertex link.

    Fullness is checked cube by cube: a would-be ``k``-cube (``k >= 2``) is
    forced at some corner exactly when, for each of its edges, one of the two
    facets across that edge is stored; induction on ``k`` shows this is the
    same as requiring every set of germs with pairwise commuting labels at a
    vertex to span a stored cube.
    """
    c = m.complex
    g = c.graph
    if c.count(1):
        tails, heads = c.edge_endpoints()
        if (tails < 0).any() or (heads < 0).any():
            i = int(np.argmax((tails < 0) | (heads < 0)))
            return False, IsometryViolation("dangling", None, (), c.cell_of(c.keys[1][i]))
        gens = m.edge_assignment()
        # germ label (corner, generator, sign) must be unique
        E = max(g.edge_count, 1)
        labels = np.concatenate([tails * 2 * E + 2 * gens, heads * 2 * E + 2 * gens + 1])
        uniq, counts = np.unique(labels, return_counts=True)
        if (counts > 1).any():
            lab = int(uniq[np.argmax(counts > 1)])
            corner = c.cell_of(c.keys[0][lab // (2 * E)])
            gen, neg = divmod(lab % (2 * E), 2)
            return False, IsometryViolation("injectivity", corner, ((gen, -1 if neg else 1),))

    full = build_config_complex(g, c.n, allow_unsubdivided=True)
    for k in range(1, len(c.keys)):
        stray = c.keys[k][full.lookup(k, c.keys[k]) < 0]
        if len(stray):
            return False, IsometryViolation("foreign_cell", None, (), c.cell_of(stray[0]))
    for k in range(2, len(full.keys)):
        if full.count(k) == 0:
            continue
        present_tail = []
        required = np.ones(full.count(k), dtype=bool)
        for pos in range(k):
            t = c.lookup(k - 1, full.facet_keys(k, pos, 0)) >= 0
            h = c.lookup(k - 1, full.facet_keys(k, pos, 1)) >= 0
            present_tail.append(t)
            required &= t | h
        stored = c.lookup(k, full.keys[k]) >= 0
        bad = np.flatnonzero(required & ~stored)
        if len(bad):
            i = int(bad[0])
            cube = full.cell_of(full.keys[k][i])
            corner = list(cube.parked_vertices)
            germs = []
            for pos, e in enumerate(cube.moving_edges):
                if present_tail[pos][i]:
                    corner.append(g.tail(e))
                    germs.append((e, 1))
                else:
                    corner.append(g.head(e))
                    germs.append((e, -1))
            vertex = Cell((), tuple(sorted(corner)))
            return False, IsometryViolation("missing_corner", vertex, tuple(germs), cube)
    return True, None


def _one_skeleton(c: CubeComplex) -> list[list[tuple[int, int, int]]]:
    """Per 0-cell: ``(1-cell index, other corner, +1 if leaving by the tail corner)``."""
    tails, heads = c.edge_endpoints()
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(c.count(0))]
    for i, (t, h) in enumerate(zip(tails.tolist(), heads.tolist())):
        adj[t].append((i, h, 1))
        adj[h].append((i, t, -1))
    return adj


def pi1_generators(m: CubicalMap, basepoint: Cell, tree: str = "bfs") -> list[LoopWord]:
    """One loop per 1-cell outside a spanning tree rooted at ``basepoint``.

    ``tree`` is ``"bfs"`` (default) or ``"dfs"``; neighbors are visited in
    canonical 1-cell order either way.
    """
    c = m.complex
    if basepoint.dim != 0 or basepoint not in c:
        raise ValueError(f"{basepoint} is not a 0-cell of the complex")
    if components(c) != 1:
        raise ValueError("complex is disconnected; fundamental group depends on the component")
    adj = _one_skeleton(c)
    root = c.index(basepoint)
    parent: dict[int, tuple[int, int, int] | None] = {root: None}  # v -> (parent, 1-cell, dir)
    if tree == "bfs":
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for i, w, d in adj[v]:
                if w not in parent:
                    parent[w] = (v, i, d)
                    queue.append(w)
    elif tree == "dfs":
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            for i, w, d in it:
                if w not in parent:
                    parent[w] = (v, i, d)
                    stack.append((w, iter(adj[w])))
                    break
            else:
                stack.pop()
    else:
        raise ValueError(f"unknown spanning tree kind {tree!r}")
    tree_cells = {p[1] for p in parent.values() if p is not None}
    gens = m.edge_assignment()

    def path_from_root(v: int) -> list[tuple[int, int]]:
        steps = []
        while parent[v] is not None:
            u, i, d = parent[v]
            steps.append((i, d))
            v = u
        return steps[::-1]

    tails, heads = c.edge_endpoints()
    loops = []
    for i in range(c.count(1)):
        if i in tree_cells:
            continue
        into = path_from_root(int(tails[i]))
        back = [(j, -d) for j, d in reversed(path_from_root(int(heads[i])))]
        path = tuple(into + [(i, 1)] + back)
        word = Word(tuple((int(gens[j]), d) for j, d in path), m.delta)
        loops.append(LoopWord(basepoint, word, path))
    return loops


def basepoint_for(c: CubeComplex, placement) -> Cell:
    """The 0-cell with tokens at ``placement`` (a TokenPlacement or vertices)."""
    vertices = getattr(placement, "parked", placement)
    vertices = tuple(sorted(vertices))
    if len(set(vertices)) != len(vertices):
        raise ValueError("placement puts two tokens on one vertex")
    cell = c.vertex_cell(vertices)
    if len(vertices) != c.n or cell not in c:
        raise ValueError(f"placement {vertices} is not a 0-cell of the complex")
    return cell


def lift_word(
    graph: Graph,
    basepoint: Iterable[int],
    word: Word | Sequence[tuple[int, int]],
    complex: CubeComplex | None = None,
) -> list[frozenset[int]]:
    """Follow ``word`` from the configuration ``basepoint``.

    Letter ``(e, +1)`` moves the token on the tail of ``e`` to its head and
    ``(e, -1)`` moves it back; the target vertex must be free.  Returns the
    visited configurations.  When ``complex`` is given every traversed 1-cell
    must also be stored in it.
    """
    letters = word.letters if isinstance(word, Word) else tuple(word)
    config = frozenset(basepoint)
    path = [config]
    for pos, (e, s) in enumerate(letters):
        src, dst = (graph.tail(e), graph.head(e)) if s > 0 else (graph.head(e), graph.tail(e))
        if src not in config:
            raise LiftError(pos, f"no token on vertex {src} to move along {graph.edge_label(e)}")
        if dst in config:
            raise LiftError(pos, f"vertex {dst} is occupied")
        if complex is not None:
            cell = Cell((e,), tuple(sorted(config - {src})))
            if cell not in complex:
                raise LiftError(pos, f"{cell} is not stored")
        config = (config - {src}) | {dst}
        path.append(config)
    return path


def word_from_moves(graph: Graph, delta: CommutationGraph, moves: Sequence[tuple[int, int]]) -> Word:
    """Word read along token moves ``(from_vertex, to_vertex)`` over graph edges."""
    letters = []
    for a, b in moves:
        e = graph.edge_between(a, b)
        if e is None:
            raise ValueError(f"no edge between {a} and {b}")
        letters.append((e, 1 if graph.tail(e) == a else -1))
    return Word(tuple(letters), delta)

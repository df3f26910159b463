"""Stallings folding for finitely generated subgroups of free groups.

Used on stars, where every pair of edges meets at the center and the
commutation graph has no edges, so the ambient group is free.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Letter = tuple[int, int]

__all__ = ["FoldedGraph", "fold", "subgroup_rank", "freely_generates"]


@dataclass
class FoldedGraph:
    """Folded core graph; ``out[v][(x, s)]`` is the end of the ``(x, s)`` edge at ``v``."""

    base: int
    vertices: set[int]
    out: dict[int, dict[Letter, int]]

    @property
    def edge_count(self) -> int:
        return sum(1 for v in self.out for (_, s) in self.out[v] if s > 0)

    @property
    def rank(self) -> int:
        return self.edge_count - len(self.vertices) + 1

    def accepts(self, letters: Sequence[Letter]) -> bool:
        """Membership: the freely reduced word reads a loop at the base."""
        v = self.base
        for letter in _free_reduce(letters):
            nxt = self.out.get(v, {}).get(letter)
            if nxt is None:
                return False
            v = nxt
        return v == self.base


def _free_reduce(letters: Sequence[Letter]) -> list[Letter]:
    out: list[Letter] = []
    for x, s in letters:
        if out and out[-1] == (x, -s):
            out.pop()
        else:
            out.append((x, s))
    return out


def fold(words: Sequence[Sequence[Letter]]) -> FoldedGraph:
    """Fold the bouquet of loops spelled by ``words`` at a common base point."""
    parent: dict[int, int] = {}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    edges: list[tuple[int, int, int]] = []  # (u, x, v): u --x--> v
    parent[0] = 0
    fresh = 1
    for w in words:
        w = _free_reduce(w)
        if not w:
            continue
        cur = 0
        for i, (x, s) in enumerate(w):
            if i == len(w) - 1:
                nxt = 0
            else:
                nxt = fresh
                parent[nxt] = nxt
                fresh += 1
            edges.append((cur, x, nxt) if s > 0 else (nxt, x, cur))
            cur = nxt

    changed = True
    while changed:
        changed = False
        seen: dict[tuple[int, int, int], int] = {}
        canon = set()
        for u, x, v in edges:
            u, v = find(u), find(v)
            canon.add((u, x, v))
            for key, other in (((u, x, 1), v), ((v, x, -1), u)):
                prev = seen.get(key)
                if prev is None:
                    seen[key] = other
                elif find(prev) != find(other):
                    parent[find(other)] = find(prev)
                    changed = True
        edges = sorted(canon)
    base = find(0)
    vertices = {find(v) for v in parent}
    out: dict[int, dict[Letter, int]] = {v: {} for v in vertices}
    for u, x, v in edges:
        out[u][(x, 1)] = v
        out[v][(x, -1)] = u
    return FoldedGraph(base, vertices, out)


def subgroup_rank(words: Sequence[Sequence[Letter]]) -> int:
    return fold(words).rank


def freely_generates(words: Sequence[Sequence[Letter]]) -> bool:
    """True iff the words are a free basis of the subgroup they generate."""
    nontrivial = [w for w in words if _free_reduce(w)]
    return len(nontrivial) == len(words) and subgroup_rank(words) == len(words)

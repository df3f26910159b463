"""Independent brute-force oracles used to cross-check the library.

None of these import the code under test beyond plain data types, so a bug
in the library cannot also hide in its oracle.  ``python3 tests/oracles.py``
regenerates ``tests/data/frozen.json``.
"""
from __future__ import annotations

import itertools
import json
import sys
from collections import deque
from math import gcd
from pathlib import Path

FROZEN = Path(__file__).with_name("data") / "frozen.json"


# -- configuration complexes -------------------------------------------------

def cells_by_ordered_tuples(vertex_count: int, edges, n: int) -> dict[int, set]:
    """All cells as sorted tuples of closed cells, grouped by dimension.

    Items are vertices ``('v', i)`` and edges ``('e', j)``; an ordered
    ``n``-tuple is kept when the closures are pairwise disjoint, and then
    quotiented by sorting.
    """
    items = [("v", i) for i in range(vertex_count)] + [("e", j) for j in range(len(edges))]

    def closure(item):
        return {item[1]} if item[0] == "v" else set(edges[item[1]])

    out: dict[int, set] = {k: set() for k in range(n + 1)}
    for tup in itertools.product(items, repeat=n):
        sets = [closure(x) for x in tup]
        if any(sets[i] & sets[j] for i in range(n) for j in range(i + 1, n)):
            continue
        dim = sum(1 for x in tup if x[0] == "e")
        out[dim].add(tuple(sorted(tup)))
    return out


def config_components(vertex_count: int, edges, n: int) -> int:
    """Components of the configuration graph (token sets, single moves)."""
    configs = [frozenset(c) for c in itertools.combinations(range(vertex_count), n)]
    seen: set = set()
    count = 0
    for start in configs:
        if start in seen:
            continue
        count += 1
        seen.add(start)
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for a, b in edges:
                for src, dst in ((a, b), (b, a)):
                    if src in c and dst not in c:
                        nxt = (c - {src}) | {dst}
                        if nxt not in seen:
                            seen.add(nxt)
                            queue.append(nxt)
    return count


# -- integer matrices ----------------------------------------------------------

def det(m: list[list[int]]) -> int:
    """Determinant by cofactor expansion (tiny matrices only)."""
    if not m:
        return 1
    if len(m) == 1:
        return m[0][0]
    total = 0
    for j, v in enumerate(m[0]):
        if v:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * v * det(minor)
    return total


def determinantal_divisors(m: list[list[int]]) -> list[int]:
    """Elementary divisors via gcds of k-by-k minors."""
    rows = len(m)
    cols = len(m[0]) if m else 0
    d_prev = 1
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = gcd(g, det([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g // d_prev)
        d_prev = g
    return out


def fraction_rank(m: list[list[int]]) -> int:
    from fractions import Fraction

    a = [[Fraction(x) for x in row] for row in m]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


# -- right-angled Artin group words ------------------------------------------

def rewriting_class_min(word: tuple, commute) -> tuple:
    """Canonical element of a word's class under adjacent commuting swaps
    and deletion of adjacent ``x x^-1`` pairs: the least (by letter key) word
    among the shortest words reachable."""
    key = lambda w: [(x, 0 if s > 0 else 1) for x, s in w]  # noqa: E731
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            (x, s), (y, t) = w[i], w[i + 1]
            if x == y and s == -t:
                nxt = w[:i] + w[i + 2:]
            elif x != y and commute(x, y):
                nxt = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    shortest = min(len(w) for w in seen)
    return min((w for w in seen if len(w) == shortest), key=key)


def conjugacy_by_search(u: tuple, w: tuple, letters, commute, radius: int) -> bool:
    """True if ``g u g^-1`` and ``w`` share a canonical form for some word
    ``g`` of length ``<= radius`` (a one-sided semi-decision)."""
    target = rewriting_class_min(w, commute)
    inv = lambda g: tuple((x, -s) for x, s in reversed(g))  # noqa: E731
    for r in range(radius + 1):
        for g in itertools.product(letters, repeat=r):
            if rewriting_class_min(g + u + inv(g), commute) == target:
                return True
    return False


def cyclic_closure(word: tuple, commute) -> set:
    """Every word reachable from ``word`` by rotation, swapping adjacent
    commuting letters and deleting adjacent inverse pairs.  Two words are
    conjugate exactly when their closures share a word."""
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        nxt = []
        if w:
            nxt.append(w[1:] + w[:1])
        for i in range(len(w) - 1):
            (x, s), (y, t) = w[i], w[i + 1]
            if x == y and s == -t:
                nxt.append(w[:i] + w[i + 2:])
            elif x != y and commute(x, y):
                nxt.append(w[:i] + (w[i + 1], w[i]) + w[i + 2:])
        for v in nxt:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


# -- frozen values -------------------------------------------------------------

def _star(k):
    return k + 1, [(0, i) for i in range(1, k + 1)]


def _tripod_subdivided():
    return 7, [(1, 4), (2, 5), (3, 6), (0, 1), (0, 2), (0, 3)]


def compute_frozen() -> dict:
    out = {}
    for name, (V, E), n in [
        ("star3_n2", _star(3), 2),
        ("tripod_sub_n3", _tripod_subdivided(), 3),
        ("star4_n2", _star(4), 2),
        ("star5_n2", _star(5), 2),
    ]:
        cells = cells_by_ordered_tuples(V, E, n)
        f = [len(cells[k]) for k in range(n + 1)]
        out[name] = {
            "f_vector": f,
            "euler": sum((-1) ** k * x for k, x in enumerate(f)),
            "components": config_components(V, E, n),
        }
    V, E = _tripod_subdivided()
    names = "abcdef"
    out["tripod_delta_edges"] = sorted(
        [names[i], names[j]]
        for i, j in itertools.combinations(range(len(E)), 2)
        if not set(E[i]) & set(E[j])
    )
    # two segments, one token on each side is one of the components
    out["two_segments_n2_components"] = config_components(4, [(0, 1), (2, 3)], 2)
    return out


if __name__ == "__main__":
    FROZEN.parent.mkdir(exist_ok=True)
    FROZEN.write_text(json.dumps(compute_frozen(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {FROZEN}", file=sys.stderr)

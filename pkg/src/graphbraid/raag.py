"""Right-angled Artin groups over the commutation graph of a graph's edges.

Generators are the edges of a graph; two generators commute exactly when
the edges share no endpoint.  Words are tuples of ``(generator, sign)``
letters.  Equality is decided by a canonical normal form (free reduction
through commuting letters, then the lexicographically least linearization
of the dependence order); conjugacy by closing cyclically reduced cores
under cyclic moves.
"""
from __future__ import annotations

import heapq
from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .graph_core import Graph

__all__ = [
    "CommutationGraph",
    "Word",
    "NormalForm",
    "MixedGraphError",
    "build_delta",
    "parse_word",
    "format_word",
    "normal_form",
    "is_trivial",
    "is_equal",
    "is_cyclically_reduced",
    "cyclically_reduce",
    "cyclic_normal_form",
    "is_conjugate",
    "primitive_root",
    "retract_to",
    "supports_commute",
    "commutator",
    "ball",
]

Letter = tuple[int, int]


class MixedGraphError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CommutationGraph:
    """Generators are edge indices of ``origin``; ``adjacency[x]`` is the
    bitmask of generators commuting with ``x``."""

    origin: Graph
    labels: tuple[str, ...]
    adjacency: tuple[int, ...]
    join_factors: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def adjacent(self, x: int, y: int) -> bool:
        return bool(self.adjacency[x] >> y & 1)

    def label(self, x: int) -> str:
        return self.labels[x]

    def generator(self, label: str) -> int:
        try:
            return self._index()[label]
        except KeyError:
            raise KeyError(f"unknown generator {label!r}") from None

    def _index(self) -> dict[str, int]:
        cached = self.__dict__.get("_idx")
        if cached is None:
            cached = {name: i for i, name in enumerate(self.labels)}
            object.__setattr__(self, "_idx", cached)
        return cached

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in range(x + 1, self.size)
                if self.adjacent(x, y)]

    def __eq__(self, other):
        return isinstance(other, CommutationGraph) and self.origin == other.origin

    def __hash__(self):
        return hash(self.origin)

    def word(self, letters: Iterable[Letter]) -> "Word":
        return Word(tuple(letters), self)

    def gen(self, label: str, sign: int = 1) -> "Word":
        return Word(((self.generator(label), sign),), self)

    def identity(self) -> "Word":
        return Word((), self)


def build_delta(g: Graph) -> CommutationGraph:
    """Commutation graph: one generator per edge, adjacent iff disjoint.

    ``join_factors`` lists the generators of each connected component of
    ``g`` that has edges; with two or more factors the group splits as their
    direct product.
    """
    adj = []
    for x, (a, b) in enumerate(g.edges):
        mask = 0
        for y, (c, d) in enumerate(g.edges):
            if x != y and not {a, b} & {c, d}:
                mask |= 1 << y
        adj.append(mask)
    comp = [-1] * g.vertex_count
    ncomp = 0
    for s in range(g.vertex_count):
        if comp[s] >= 0:
            continue
        comp[s] = ncomp
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if comp[y] < 0:
                    comp[y] = ncomp
                    queue.append(y)
        ncomp += 1
    factors: dict[int, list[int]] = {}
    for e, (a, _) in enumerate(g.edges):
        factors.setdefault(comp[a], []).append(e)
    joins = tuple(tuple(v) for _, v in sorted(factors.items()))
    labels = tuple(g.edge_label(i) for i in range(g.edge_count))
    return CommutationGraph(g, labels, tuple(adj), joins)


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...]
    delta: CommutationGraph

    def __post_init__(self):
        for x, s in self.letters:
            if not 0 <= x < self.delta.size or s not in (1, -1):
                raise ValueError(f"bad letter {(x, s)}")

    def _same(self, other: "Word"):
        if self.delta != other.delta:
            raise MixedGraphError("words over different commutation graphs")

    def __mul__(self, other: "Word") -> "Word":
        self._same(other)
        return Word(self.letters + other.letters, self.delta)

    def inverse(self) -> "Word":
        return Word(tuple((x, -s) for x, s in reversed(self.letters)), self.delta)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k), self.delta)

    def __len__(self):
        return len(self.letters)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(x for x, _ in self.letters)

    def __str__(self):
        return format_word(self)


@dataclass(frozen=True)
class NormalForm:
    letters: tuple[Letter, ...]

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(x for x, _ in self.letters)


def parse_word(text: str, delta: CommutationGraph) -> Word:
    """Whitespace separated ``label`` or ``label^-1`` tokens."""
    letters = []
    for tok in text.split():
        if tok.endswith("^-1"):
            letters.append((delta.generator(tok[:-3]), -1))
        elif tok.endswith("^1"):
            letters.append((delta.generator(tok[:-2]), 1))
        else:
            letters.append((delta.generator(tok), 1))
    return Word(tuple(letters), delta)


def format_word(w: Word | NormalForm, delta: CommutationGraph | None = None) -> str:
    delta = delta or w.delta
    return " ".join(
        delta.label(x) if s > 0 else f"{delta.label(x)}^-1" for x, s in w.letters
    )


def _key(letter: Letter) -> tuple[int, int]:
    return (letter[0], 0 if letter[1] > 0 else 1)


def _reduce(letters: Sequence[Letter], adj: tuple[int, ...]) -> list[Letter]:
    """Cancel pairs ``x^s ... x^-s`` separated only by letters commuting with ``x``."""
    out: list[Letter] = []
    for x, s in letters:
        cancelled = False
        j = len(out) - 1
        while j >= 0:
            y, t = out[j]
            if y == x:
                if t == -s:
                    del out[j]
                    cancelled = True
                break
            if not adj[x] >> y & 1:
                break
            j -= 1
        if not cancelled:
            out.append((x, s))
    return out


def _lex_least(letters: Sequence[Letter], adj: tuple[int, ...]) -> tuple[Letter, ...]:
    """Least linearization of the dependence order of ``letters``."""
    n = len(letters)
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for i in range(n):
        xi = letters[i][0]
        for j in range(i + 1, n):
            xj = letters[j][0]
            if xi == xj or not adj[xi] >> xj & 1:
                succ[i].append(j)
                indeg[j] += 1
    heap = [(_key(letters[i]), i) for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, i = heapq.heappop(heap)
        out.append(letters[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (_key(letters[j]), j))
    return tuple(out)


def _nf(letters: Sequence[Letter], adj: tuple[int, ...]) -> tuple[Letter, ...]:
    return _lex_least(_reduce(letters, adj), adj)


def normal_form(w: Word) -> NormalForm:
    return NormalForm(_nf(w.letters, w.delta.adjacency))


def _nf_word(w: Word) -> Word:
    return Word(_nf(w.letters, w.delta.adjacency), w.delta)


def is_trivial(w: Word) -> bool:
    return not _reduce(w.letters, w.delta.adjacency)


def is_equal(u: Word, w: Word) -> bool:
    u._same(w)
    return normal_form(u) == normal_form(w)


def commutator(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


def _minimal_positions(letters: Sequence[Letter], adj) -> list[int]:
    """Positions that can be commuted to the front (first of their generator)."""
    out = []
    for i, (x, _) in enumerate(letters):
        if all(y != x and adj[x] >> y & 1 for y, _ in letters[:i]):
            out.append(i)
    return out


def _maximal_positions(letters: Sequence[Letter], adj) -> list[int]:
    out = []
    for i, (x, _) in enumerate(letters):
        if all(y != x and adj[x] >> y & 1 for y, _ in letters[i + 1:]):
            out.append(i)
    return out


def is_cyclically_reduced(w: Word) -> bool:
    adj = w.delta.adjacency
    if len(_reduce(w.letters, adj)) != len(w.letters):
        return False
    letters = w.letters
    lasts = {letters[j] for j in _maximal_positions(letters, adj)}
    return not any((x, -s) in lasts for x, s in (letters[i] for i in _minimal_positions(letters, adj)))


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """``(core, conjugator)`` with ``w = conjugator * core * conjugator^-1``."""
    adj = w.delta.adjacency
    letters = list(_nf(w.letters, adj))
    conj: list[Letter] = []
    while True:
        firsts = _minimal_positions(letters, adj)
        lasts = {letters[j]: j for j in _maximal_positions(letters, adj)}
        hit = None
        for i in firsts:
            x, s = letters[i]
            j = lasts.get((x, -s))
            if j is not None and j != i:
                hit = (i, j)
                break
        if hit is None:
            break
        i, j = hit
        conj.append(letters[i])
        letters = [l for k, l in enumerate(letters) if k not in (i, j)]
    core = Word(_lex_least(letters, adj), w.delta)
    return core, Word(tuple(conj), w.delta)


def _rotations(letters: tuple[Letter, ...], adj) -> Iterable[tuple[Letter, ...]]:
    for i in _minimal_positions(letters, adj):
        rest = letters[:i] + letters[i + 1:] + (letters[i],)
        yield _lex_least(rest, adj)


@lru_cache(maxsize=4096)
def _cyclic_class(letters: tuple[Letter, ...], adj: tuple[int, ...]) -> frozenset:
    seen = {letters}
    queue = deque([letters])
    while queue:
        cur = queue.popleft()
        for nxt in _rotations(cur, adj):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(seen)


def cyclic_normal_form(w: Word) -> tuple[Letter, ...]:
    """Least cyclically reduced representative of the conjugacy class of ``w``."""
    core, _ = cyclically_reduce(w)
    return min(_cyclic_class(core.letters, w.delta.adjacency), key=lambda t: [_key(l) for l in t])


def is_conjugate(u: Word, w: Word) -> bool:
    u._same(w)
    adj = u.delta.adjacency
    cu, _ = cyclically_reduce(u)
    cw, _ = cyclically_reduce(w)
    if len(cu) != len(cw) or Counter(cu.letters) != Counter(cw.letters):
        return False
    return cw.letters in _cyclic_class(cu.letters, adj)


def _prefix_ideals(letters: tuple[Letter, ...], adj, size: int) -> Iterable[tuple[int, ...]]:
    """Down-closed position sets of the dependence order with ``size`` elements."""
    n = len(letters)
    preds = [0] * n
    for j in range(n):
        xj = letters[j][0]
        for i in range(j):
            xi = letters[i][0]
            if xi == xj or not adj[xi] >> xj & 1:
                preds[j] |= 1 << i
    seen = set()

    def grow(mask: int, count: int):
        if count == size:
            yield tuple(i for i in range(n) if mask >> i & 1)
            return
        for j in range(n):
            if not mask >> j & 1 and preds[j] & ~mask == 0:
                nxt = mask | 1 << j
                if nxt not in seen:
                    seen.add(nxt)
                    yield from grow(nxt, count + 1)

    yield from grow(0, 0)


def primitive_root(w: Word) -> tuple[Word, int]:
    """``(root, k)`` with ``w = root^k`` and ``k`` maximal.

    Works on the cyclically reduced core: a ``k``-th root of a cyclically
    reduced element is a prefix (down-set) of its dependence order, so the
    search runs over prefixes of length ``|core| / k``.
    """
    if is_trivial(w):
        raise ValueError("the trivial element has no primitive root")
    adj = w.delta.adjacency
    core, conj = cyclically_reduce(w)
    letters = core.letters
    n = len(letters)
    counts = Counter(letters)
    for k in range(n, 1, -1):
        if n % k or any(c % k for c in counts.values()):
            continue
        for ideal in _prefix_ideals(letters, adj, n // k):
            prefix = tuple(letters[i] for i in ideal)
            if _nf(prefix * k, adj) == letters:
                root = conj * Word(_lex_least(prefix, adj), w.delta) * conj.inverse()
                return _nf_word(root), k
    return _nf_word(w), 1


def retract_to(w: Word, keep: Iterable[int]) -> Word:
    """Image under the retraction killing every generator outside ``keep``."""
    keep = frozenset(keep)
    return _nf_word(Word(tuple(l for l in w.letters if l[0] in keep), w.delta))


def supports_commute(delta: CommutationGraph, s1: Iterable[int], s2: Iterable[int]) -> bool:
    s1, s2 = set(s1), set(s2)
    if s1 & s2:
        return False
    return all(delta.adjacent(x, y) for x in s1 for y in s2)


def ball(delta: CommutationGraph, radius: int, generators: Iterable[int] | None = None) -> list[Word]:
    """All elements of normal-form length ``<= radius`` over ``generators``."""
    gens = sorted(set(range(delta.size) if generators is None else generators))
    adj = delta.adjacency
    seen = {()}
    layer = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in gens:
                for s in (1, -1):
                    v = _nf(w + ((x, s),), adj)
                    if len(v) == len(w) + 1 and v not in seen:
                        seen.add(v)
                        nxt.append(v)
        layer = nxt
    return [Word(t, delta) for t in sorted(seen, key=lambda t: (len(t), [_key(l) for l in t]))]

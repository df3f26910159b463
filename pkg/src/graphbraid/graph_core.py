"""Finite simplicial graphs, degree profiles and subdivision.

Graphs are immutable.  Vertices are ``0..vertex_count-1``; edges are stored
as ``(u, v)`` with ``u < v`` and keep the order in which they were given,
which fixes edge indices (and therefore generator order downstream).
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Graph",
    "GraphFormatError",
    "DisconnectedError",
    "DegreeProfile",
    "SubdivisionPlan",
    "Violation",
    "parse_graph",
    "format_graph",
    "star_graph",
    "tripod_subdivided",
    "tripod_chain",
    "two_tripods",
    "path_graph",
    "cycle_graph",
    "degree_profile",
    "edge_distance",
    "is_sufficiently_subdivided",
    "shortest_cycle_through",
    "subdivide_for",
    "apply_plan",
]

_LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")


class GraphFormatError(ValueError):
    """Malformed graph document; ``lineno`` is 1-based (0 if not line-bound)."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class DisconnectedError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    vertex_labels: Mapping[int, str] = field(default_factory=dict, compare=False)
    edge_labels: Mapping[int, str] = field(default_factory=dict)
    orientation: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphFormatError(0, "negative vertex count")
        edges = tuple((min(u, v), max(u, v)) for u, v in self.edges)
        seen = set()
        for u, v in edges:
            if u == v:
                raise GraphFormatError(0, f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphFormatError(0, f"edge ({u}, {v}) out of range")
            if (u, v) in seen:
                raise GraphFormatError(0, f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        object.__setattr__(self, "edges", edges)
        orient = self.orientation
        if orient is None:
            orient = edges
        else:
            orient = tuple(tuple(o) for o in orient)
            if len(orient) != len(edges) or any(
                (min(o), max(o)) != e for o, e in zip(orient, edges)
            ):
                raise GraphFormatError(0, "orientation does not match edges")
        object.__setattr__(self, "orientation", orient)
        labels = {}
        for i, name in dict(self.edge_labels).items():
            if not 0 <= i < len(edges):
                raise GraphFormatError(0, f"edge label index {i} out of range")
            labels[i] = name
        object.__setattr__(self, "edge_labels", labels)
        object.__setattr__(self, "vertex_labels", dict(self.vertex_labels))
        names = [self.edge_label(i) for i in range(len(edges))]
        for name in names:
            if not _LABEL_RE.match(name):
                raise GraphFormatError(0, f"invalid edge label {name!r}")
        if len(set(names)) != len(names):
            raise GraphFormatError(0, "edge labels are not unique")

    def __hash__(self):
        return hash((self.vertex_count, self.edges, self.orientation,
                     tuple(sorted(self.edge_labels.items()))))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_label(self, i: int) -> str:
        return self.edge_labels.get(i, f"e{i}")

    def vertex_label(self, v: int) -> str:
        return self.vertex_labels.get(v, str(v))

    def tail(self, i: int) -> int:
        return self.orientation[i][0]

    def head(self, i: int) -> int:
        return self.orientation[i][1]

    def degree(self, v: int) -> int:
        return len(self.incident_edges(v))

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self._incidence()[v]

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.other_end(e, v) for e in self.incident_edges(v))

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"vertex {v} is not an endpoint of edge {e}")

    def edge_between(self, u: int, v: int) -> int | None:
        return self._edge_index().get((min(u, v), max(u, v)))

    def edge_index_of_label(self, name: str) -> int:
        for i in range(self.edge_count):
            if self.edge_label(i) == name:
                return i
        raise KeyError(name)

    def _incidence(self) -> tuple[tuple[int, ...], ...]:
        cached = self.__dict__.get("_inc")
        if cached is None:
            inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
            for i, (u, v) in enumerate(self.edges):
                inc[u].append(i)
                inc[v].append(i)
            cached = tuple(tuple(x) for x in inc)
            object.__setattr__(self, "_inc", cached)
        return cached

    def _edge_index(self) -> dict[tuple[int, int], int]:
        cached = self.__dict__.get("_eidx")
        if cached is None:
            cached = {e: i for i, e in enumerate(self.edges)}
            object.__setattr__(self, "_eidx", cached)
        return cached

    def distances_from(self, source: int) -> list[int | None]:
        dist: list[int | None] = [None] * self.vertex_count
        dist[source] = 0
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self.neighbors(x):
                if dist[y] is None:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist


@dataclass(frozen=True)
class DegreeProfile:
    degree_map: dict[int, int]
    essential_vertices: tuple[int, ...]
    m: int
    m3: int

    @property
    def threshold(self) -> int:
        """Token count ``2m + m3`` above which the product-of-free-groups construction applies."""
        return 2 * self.m + self.m3


@dataclass(frozen=True)
class SubdivisionPlan:
    per_edge_pieces: tuple[int, ...]
    n: int

    @property
    def is_identity(self) -> bool:
        return all(p == 1 for p in self.per_edge_pieces)


@dataclass(frozen=True)
class Violation:
    kind: str  # "vertex_count" | "distance" | "cycle"
    witness: tuple
    required: int
    actual: int

    def __str__(self):
        return f"{self.kind} {self.witness}: {self.actual} < {self.required}"


def parse_graph(text: str) -> Graph:
    """Parse the line-based graph format.

    ``n_vertices <int>`` comes first, then ``edge <u> <v>`` (``u < v``),
    ``vlabel <v> <name>`` and ``elabel <idx> <name>`` lines; ``#`` starts a
    comment.
    """
    n = None
    edges: list[tuple[int, int]] = []
    edge_lines: list[int] = []
    seen: dict[tuple[int, int], int] = {}
    vlabels: dict[int, str] = {}
    elabels: dict[int, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if n is None:
            if key != "n_vertices" or len(parts) != 2:
                raise GraphFormatError(lineno, "expected 'n_vertices <int>' first")
            n = _parse_int(parts[1], lineno)
            if n < 0:
                raise GraphFormatError(lineno, "negative vertex count")
            continue
        if key == "edge":
            if len(parts) != 3:
                raise GraphFormatError(lineno, "expected 'edge <u> <v>'")
            u, v = _parse_int(parts[1], lineno), _parse_int(parts[2], lineno)
            if u == v:
                raise GraphFormatError(lineno, f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(lineno, f"vertex index out of range in edge {u} {v}")
            if u > v:
                raise GraphFormatError(lineno, "edge endpoints must satisfy u < v")
            if (u, v) in seen:
                raise GraphFormatError(
                    lineno, f"duplicate edge {u} {v} (first on line {seen[(u, v)]})"
                )
            seen[(u, v)] = lineno
            edges.append((u, v))
            edge_lines.append(lineno)
        elif key == "vlabel":
            if len(parts) != 3:
                raise GraphFormatError(lineno, "expected 'vlabel <v> <name>'")
            v = _parse_int(parts[1], lineno)
            if not 0 <= v < n:
                raise GraphFormatError(lineno, f"vertex index {v} out of range")
            vlabels[v] = parts[2]
        elif key == "elabel":
            if len(parts) != 3:
                raise GraphFormatError(lineno, "expected 'elabel <idx> <name>'")
            elabels[_parse_int(parts[1], lineno)] = (parts[2], lineno)
        elif key == "n_vertices":
            raise GraphFormatError(lineno, "repeated n_vertices line")
        else:
            raise GraphFormatError(lineno, f"unknown directive {key!r}")
    if n is None:
        raise GraphFormatError(0, "missing n_vertices line")
    names = {}
    for idx, (name, lineno) in elabels.items():
        if not 0 <= idx < len(edges):
            raise GraphFormatError(lineno, f"edge index {idx} out of range")
        if not _LABEL_RE.match(name):
            raise GraphFormatError(lineno, f"invalid edge label {name!r}")
        names[idx] = name
    try:
        return Graph(n, tuple(edges), vlabels, names)
    except GraphFormatError as exc:
        # label collisions are the only errors left at this point
        raise GraphFormatError(max(edge_lines + [0]), str(exc)) from None


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(lineno, f"expected an integer, got {token!r}") from None


def format_graph(g: Graph) -> str:
    lines = [f"n_vertices {g.vertex_count}"]
    lines += [f"edge {u} {v}" for u, v in g.edges]
    lines += [f"vlabel {v} {name}" for v, name in sorted(g.vertex_labels.items())]
    lines += [f"elabel {i} {name}" for i, name in sorted(g.edge_labels.items())]
    return "\n".join(lines) + "\n"


def star_graph(k: int) -> Graph:
    """Cone on ``k`` points: center 0, leaves ``1..k``.

    Edges are labelled ``a, b, c`` for ``k == 3`` and ``a1 .. ak`` otherwise.
    """
    if k < 3:
        raise ValueError("star_graph needs k >= 3")
    edges = tuple((0, i) for i in range(1, k + 1))
    if k == 3:
        names = {0: "a", 1: "b", 2: "c"}
    else:
        names = {i: f"a{i + 1}" for i in range(k)}
    vlabels = {0: "o", **{i: f"l{i}" for i in range(1, k + 1)}}
    return Graph(k + 1, edges, vlabels, names)


def tripod_subdivided() -> Graph:
    """Once-subdivided tripod: center 0, midpoints 1-3, leaves 4-6.

    Outer edges ``a, b, c`` and inner edges ``d, e, f`` (``d`` on the arm of
    ``a`` and so on), all oriented away from the center.
    """
    edges = ((1, 4), (2, 5), (3, 6), (0, 1), (0, 2), (0, 3))
    names = dict(enumerate("abcdef"))
    vlabels = {0: "o", 1: "m1", 2: "m2", 3: "m3", 4: "l1", 5: "l2", 6: "l3"}
    return Graph(7, edges, vlabels, names)


def tripod_chain(m: int) -> Graph:
    """``m`` tripods, consecutive ones joined by an edge between leaves.

    Tripod ``t`` has center ``4t`` and leaves ``4t+1 .. 4t+3``; leaf ``4t+3``
    is joined to leaf ``4(t+1)+1``.  Every center has degree 3, so
    ``m(G) = m3(G) = m``.
    """
    if m < 1:
        raise ValueError("tripod_chain needs m >= 1")
    edges = []
    for t in range(m):
        c = 4 * t
        edges += [(c, c + 1), (c, c + 2), (c, c + 3)]
    for t in range(m - 1):
        # right leaf of t joined to left leaf of t+1
        edges.append((4 * t + 3, 4 * (t + 1) + 1))
    return Graph(4 * m, tuple(edges))


def two_tripods() -> Graph:
    return tripod_chain(2)


def path_graph(length: int) -> Graph:
    return Graph(length + 1, tuple((i, i + 1) for i in range(length)))


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError("a simplicial cycle needs at least 3 vertices")
    return Graph(k, tuple((i, i + 1) for i in range(k - 1)) + ((0, k - 1),))


def degree_profile(g: Graph) -> DegreeProfile:
    degrees = {v: g.degree(v) for v in range(g.vertex_count)}
    essential = tuple(v for v in range(g.vertex_count) if degrees[v] >= 3)
    m3 = sum(1 for v in essential if degrees[v] == 3)
    return DegreeProfile(degrees, essential, len(essential), m3)


def edge_distance(g: Graph, u: int, v: int) -> int:
    for x in (u, v):
        if not 0 <= x < g.vertex_count:
            raise ValueError(f"vertex {x} not in graph")
    d = g.distances_from(u)[v]
    if d is None:
        raise DisconnectedError(f"vertices {u} and {v} lie in different components")
    return d


def shortest_cycle_through(g: Graph, v: int) -> tuple[int, ...] | None:
    """Edge indices of a shortest cycle through ``v``, or None if there is none."""
    best: tuple[int, ...] | None = None
    for e in g.incident_edges(v):
        start = g.other_end(e, v)
        path = _shortest_path_edges(g, start, v, banned_edge=e)
        if path is not None and (best is None or len(path) + 1 < len(best)):
            best = (e,) + path
    return best


def _shortest_path_edges(
    g: Graph, source: int, target: int, banned_edge: int | None = None
) -> tuple[int, ...] | None:
    prev: dict[int, tuple[int, int] | None] = {source: None}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for e in g.incident_edges(x):
            if e == banned_edge:
                continue
            y = g.other_end(e, x)
            if y not in prev:
                prev[y] = (x, e)
                queue.append(y)
    if target not in prev:
        return None
    out = []
    x = target
    while prev[x] is not None:
        x, e = prev[x]
        out.append(e)
    return tuple(reversed(out))


def is_sufficiently_subdivided(g: Graph, n: int) -> tuple[bool, list[Violation]]:
    """Check the subdivision criterion for ``n`` tokens.

    Requires at least ``n`` vertices, pairwise distance ``>= n-1`` between
    distinct vertices of valency other than 2, and every cycle through an
    essential vertex of length ``>= n+1``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    violations: list[Violation] = []
    if g.vertex_count < n:
        violations.append(Violation("vertex_count", (), n, g.vertex_count))
    special = [v for v in range(g.vertex_count) if g.degree(v) != 2]
    for i, u in enumerate(special):
        dist = g.distances_from(u)
        for v in special[i + 1:]:
            d = dist[v]
            if d is not None and d < n - 1:
                violations.append(Violation("distance", (u, v), n - 1, d))
    for v in degree_profile(g).essential_vertices:
        cyc = shortest_cycle_through(g, v)
        if cyc is not None and len(cyc) < n + 1:
            violations.append(Violation("cycle", (v,), n + 1, len(cyc)))
    return not violations, violations


def apply_plan(g: Graph, plan: SubdivisionPlan) -> Graph:
    """Subdivide each edge into ``plan.per_edge_pieces[i]`` pieces.

    Original vertices keep their indices; new vertices are appended edge by
    edge, walking from the tail of the original edge.  Pieces of edge ``x``
    are labelled ``x.1, x.2, ...`` (unsplit edges keep their label).
    """
    if len(plan.per_edge_pieces) != g.edge_count:
        raise ValueError("plan does not match graph")
    nv = g.vertex_count
    edges: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    vlabels = dict(g.vertex_labels)
    for i, pieces in enumerate(plan.per_edge_pieces):
        if pieces < 1:
            raise ValueError("pieces must be positive")
        name = g.edge_label(i)
        if pieces == 1:
            if i in g.edge_labels:
                labels[len(edges)] = name
            edges.append(g.edges[i])
            continue
        chain = [g.tail(i)] + list(range(nv, nv + pieces - 1)) + [g.head(i)]
        nv += pieces - 1
        for j in range(pieces):
            labels[len(edges)] = f"{name}.{j + 1}"
            edges.append((chain[j], chain[j + 1]))
    return Graph(nv, tuple(edges), vlabels, labels)


def subdivide_for(g: Graph, n: int) -> tuple[Graph, SubdivisionPlan]:
    """Subdivide ``g`` until it passes :func:`is_sufficiently_subdivided`.

    Greedy repair: start with one piece per edge and, for the first violation
    found, add pieces round-robin along the offending shortest path or cycle.
    No edge is split into more than ``n`` pieces (uniform factor ``n`` always
    suffices for simplicial graphs).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if g.edge_count == 0:
        if g.vertex_count < n:
            raise ValueError("graph without edges cannot hold n tokens")
        return g, SubdivisionPlan((), n)
    pieces = [1] * g.edge_count
    while True:
        plan = SubdivisionPlan(tuple(pieces), n)
        h = apply_plan(g, plan)
        ok, violations = is_sufficiently_subdivided(h, n)
        if ok:
            return h, plan
        before = sum(pieces)
        for viol in violations:
            route = _original_edges(g, h, plan, viol)
            deficit = viol.required - viol.actual
            raisable = [e for e in route if pieces[e] < n]
            k = 0
            while deficit > 0 and raisable:
                e = raisable[k % len(raisable)]
                pieces[e] += 1
                deficit -= 1
                if pieces[e] >= n:
                    raisable.remove(e)
                else:
                    k += 1
            if sum(pieces) > before:
                break
        if sum(pieces) == before:
            # nothing raisable left: fall back to the uniform factor
            pieces = [n] * g.edge_count


def _original_edges(g: Graph, h: Graph, plan: SubdivisionPlan, viol: Violation) -> list[int]:
    owner = []
    for i, p in enumerate(plan.per_edge_pieces):
        owner += [i] * p
    if viol.kind == "vertex_count":
        return list(range(g.edge_count))
    if viol.kind == "distance":
        u, v = viol.witness
        path = _shortest_path_edges(h, u, v) or ()
    else:
        path = shortest_cycle_through(h, viol.witness[0]) or ()
    out: list[int] = []
    for e in path:
        if owner[e] not in out:
            out.append(owner[e])
    return out


def graph_from_edges(vertex_count: int, edges: Iterable[Sequence[int]]) -> Graph:
    return Graph(vertex_count, tuple((min(e), max(e)) for e in edges))

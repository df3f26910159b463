"""Executable versions of the product-of-free-groups and disjoint-conjugates
constructions for graph braid groups.

Pipeline: place the basepoint tokens, read off the local free factors at each
essential vertex as explicit loop words, pick two words per factor, choose a
cyclic pair per factor whose roots are not conjugate, and assemble a
certificate whose every node is re-checkable from its serialized form.
"""
from __future__ import annotations

import itertools
import shlex
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .crisp_wiest import LiftError, build_cw_map, check_local_isometry, lift_word, word_from_moves
from .cube_complex import build_config_complex
from .graph_core import (
    Graph,
    apply_plan,
    degree_profile,
    format_graph,
    is_sufficiently_subdivided,
    parse_graph,
    subdivide_for,
)
from .raag import (
    CommutationGraph,
    Word,
    ball,
    build_delta,
    commutator,
    format_word,
    is_conjugate,
    is_trivial,
    normal_form,
    parse_word,
    primitive_root,
    retract_to,
    supports_commute,
)
from .raag import _nf
from .stallings import subgroup_rank

__all__ = [
    "PlacementError",
    "FactorError",
    "SearchExhausted",
    "CertificateRefused",
    "TokenPlacement",
    "LocalFactor",
    "ProductWitness",
    "Leaf",
    "CyclicPair",
    "RuleNode",
    "Certificate",
    "place_basepoint",
    "local_generators",
    "local_factors",
    "prepare",
    "product_witness",
    "decide_leaf",
    "choose_disjoint_cyclics",
    "assemble_H0_H1",
    "certify_disjoint_conjugates",
    "certify_graph",
    "parse_certificate",
    "verify_certificate",
    "check_homomorphism_rule",
    "soundness_search",
]


class PlacementError(ValueError):
    pass


class FactorError(ValueError):
    pass


class SearchExhausted(RuntimeError):
    pass


class CertificateRefused(ValueError):
    def __init__(self, node: str, reason: str):
        self.node = node
        self.reason = reason
        super().__init__(f"{node}: {reason}")


@dataclass(frozen=True)
class TokenPlacement:
    parked: tuple[int, ...]
    roles: tuple[tuple[int, str], ...]  # (vertex, "near:<v>" | "filler")

    def serving(self, v: int) -> tuple[int, ...]:
        tag = f"near:{v}"
        return tuple(x for x, r in self.roles if r == tag)

    @property
    def fillers(self) -> tuple[int, ...]:
        return tuple(x for x, r in self.roles if r == "filler")


def _bfs(g: Graph, sources: Sequence[int]) -> list[int | None]:
    dist: list[int | None] = [None] * g.vertex_count
    queue = deque()
    for s in sources:
        dist[s] = 0
        queue.append(s)
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if dist[y] is None:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _arms(g: Graph, v: int) -> list[tuple[int, int]]:
    """``(midpoint, far vertex)`` per neighbor of a degree-3 vertex ``v``,
    the far vertex being the least-index vertex two steps out on that arm;
    arms are sorted by far vertex."""
    arms = []
    for u in g.neighbors(v):
        far = [w for w in g.neighbors(u) if w != v and w not in g.neighbors(v)]
        if not far:
            raise PlacementError(f"arm {v}-{u} has no vertex two steps from {v}")
        arms.append((u, min(far)))
    return sorted(arms, key=lambda a: a[1])


def place_basepoint(g: Graph, n: int) -> TokenPlacement:
    """Two tokens next to each vertex of degree >= 4 (its two least-index
    neighbors), three tokens two steps from each degree-3 vertex (one per
    arm), and the rest greedily as far as possible from essential vertices
    and from tokens already placed."""
    prof = degree_profile(g)
    if n < prof.threshold:
        raise PlacementError(f"n={n} is below 2m+m3={prof.threshold}")
    ok, violations = is_sufficiently_subdivided(g, n)
    if not ok:
        raise PlacementError(f"graph is not sufficiently subdivided for n={n}: {violations[0]}")
    roles: dict[int, str] = {}
    for v in prof.essential_vertices:
        if prof.degree_map[v] >= 4:
            spots = g.neighbors(v)[:2]
        else:
            spots = [far for _, far in _arms(g, v)]
        for x in spots:
            if x in roles:
                raise PlacementError(f"vertex {x} is wanted by two essential vertices")
            roles[x] = f"near:{v}"
    taken = list(prof.essential_vertices) + list(roles)
    while len(roles) < n:
        dist = _bfs(g, taken) if taken else [None] * g.vertex_count
        free = [x for x in range(g.vertex_count) if x not in roles]
        if not free:
            raise PlacementError("no room for filler tokens")
        # unreachable vertices count as infinitely far
        x = min(free, key=lambda x: (-(dist[x] if dist[x] is not None else g.vertex_count + 1), x))
        roles[x] = "filler"
        taken.append(x)
    parked = tuple(sorted(roles))
    return TokenPlacement(parked, tuple(sorted(roles.items())))


@dataclass
class LocalFactor:
    vertex: int
    degree: int
    generators: tuple[int, ...]  # E_v, as edge indices
    free_words: list[Word]
    rank: int
    moves: list[list[tuple[int, int]]] = field(default_factory=list, repr=False)


def local_generators(g: Graph, v: int) -> tuple[int, ...]:
    """Edges at ``v`` for degree >= 4; edges within two steps for degree 3."""
    if g.degree(v) >= 4:
        return tuple(sorted(g.incident_edges(v)))
    edges = set(g.incident_edges(v))
    for u in g.neighbors(v):
        edges.update(g.incident_edges(u))
    return tuple(sorted(edges))


def _star_moves(v: int, u1: int, u2: int, x: int) -> list[tuple[int, int]]:
    return [(u1, v), (v, x), (u2, v), (v, u1), (x, v), (v, u2)]


def _tripod_moves(v: int, arms: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    (mx, lx), (my, ly), (mz, _) = arms
    return [
        (lx, mx), (mx, v), (v, mz),
        (ly, my), (my, v), (v, mx), (mx, lx),
        (mz, v), (v, my), (my, ly),
    ]


def local_factors(
    g: Graph, n: int, placement: TokenPlacement, delta: CommutationGraph | None = None
) -> list[LocalFactor]:
    """Free words at every essential vertex, each checked to be the label of
    a loop at the basepoint."""
    delta = delta or build_delta(g)
    prof = degree_profile(g)
    out = []
    for v in prof.essential_vertices:
        k = prof.degree_map[v]
        serving = placement.serving(v)
        if k >= 4:
            if len(serving) != 2:
                raise FactorError(f"placement does not serve vertex {v}")
            u1, u2 = sorted(serving)
            others = [x for x in g.neighbors(v) if x not in serving]
            moves = [_star_moves(v, u1, u2, x) for x in others]
            rank = k - 2
        else:
            if len(serving) != 3:
                raise FactorError(f"placement does not serve vertex {v}")
            arms = _arms(g, v)
            if sorted(far for _, far in arms) != sorted(serving):
                raise FactorError(f"tokens at {serving} are not on the arms of {v}")
            a, b, c = arms
            moves = [_tripod_moves(v, order) for order in ((a, b, c), (b, c, a), (c, a, b))]
            rank = 3
        words = [word_from_moves(g, delta, mv) for mv in moves]
        for i, w in enumerate(words):
            try:
                path = lift_word(g, placement.parked, w)
            except LiftError as exc:
                raise FactorError(f"word {i} at vertex {v} does not lift: {exc}") from None
            if path[-1] != path[0]:
                raise FactorError(f"word {i} at vertex {v} does not close up")
        out.append(LocalFactor(v, k, local_generators(g, v), words, rank, moves))
    return out


def prepare(g: Graph, n: int) -> tuple[Graph, TokenPlacement, list[LocalFactor]]:
    """Subdivide, place tokens and build local factors; on failure subdivide
    every edge once more and retry a single time."""
    h, plan = subdivide_for(g, n)
    try:
        placement = place_basepoint(h, n)
        return h, placement, local_factors(h, n, placement)
    except (PlacementError, FactorError):
        finer = type(plan)(tuple(2 * p for p in plan.per_edge_pieces), n)
        h = apply_plan(g, finer)
        placement = place_basepoint(h, n)
        return h, placement, local_factors(h, n, placement)


@dataclass
class ProductWitness:
    words: list[tuple[int, Word]]  # (essential vertex, word)
    transcript: list[str]

    @property
    def ok(self) -> bool:
        return all(line.endswith("ok") for line in self.transcript)


def _is_free_factor(delta: CommutationGraph, gens: Sequence[int]) -> bool:
    return not any(delta.adjacent(x, y) for x, y in itertools.combinations(gens, 2))


def product_witness(factors: Sequence[LocalFactor], delta: CommutationGraph) -> ProductWitness:
    """Two words per factor; supports of distinct factors must commute."""
    if not factors:
        raise ValueError("no local factors: the graph has no essential vertex")
    transcript = []
    for f, h in itertools.combinations(factors, 2):
        if not supports_commute(delta, f.generators, h.generators):
            raise FactorError(
                f"supports of vertices {f.vertex} and {h.vertex} overlap or do not commute;"
                " subdivide the graph further"
            )
        transcript.append(f"supports_commute {f.vertex} {h.vertex} ok")
    words = []
    for f in factors:
        if len(f.free_words) < 2:
            raise FactorError(f"vertex {f.vertex} has fewer than two free words")
        x, y = f.free_words[:2]
        words += [(f.vertex, x), (f.vertex, y)]
        noncomm = not is_trivial(commutator(x, y))
        line = f"rank2 {f.vertex} noncommuting={'yes' if noncomm else 'no'}"
        if _is_free_factor(delta, f.generators):
            r = subgroup_rank([x.letters, y.letters])
            line += f" fold_rank={r}"
            noncomm = noncomm and r == 2
        transcript.append(line + (" ok" if noncomm else " FAIL"))
    for (u, x), (v, y) in itertools.combinations(words, 2):
        if u != v:
            triv = is_trivial(commutator(x, y))
            transcript.append(f"commutator {u} {v} {'ok' if triv else 'FAIL'}")
    return ProductWitness(words, transcript)


@dataclass(frozen=True)
class Leaf:
    vertex: int
    generators: tuple[int, ...]
    u: Word
    w: Word
    root_u: Word
    exp_u: int
    root_w: Word
    exp_w: int
    verdict: str  # "disjoint" | "entangled"


def decide_leaf(vertex: int, generators: Sequence[int], u: Word, w: Word) -> Leaf:
    """``<u>`` and ``<w>`` have disjoint conjugates iff neither is trivial and
    the primitive root of ``u`` is conjugate to neither the root of ``w`` nor
    its inverse."""
    if is_trivial(u) or is_trivial(w):
        raise ValueError("leaf words must be nontrivial")
    ru, eu = primitive_root(u)
    rw, ew = primitive_root(w)
    tangled = is_conjugate(ru, rw) or is_conjugate(ru, rw.inverse())
    return Leaf(vertex, tuple(generators), u, w, ru, eu, rw, ew, "entangled" if tangled else "disjoint")


@dataclass(frozen=True)
class CyclicPair:
    factor: LocalFactor
    c0: Word
    c1: Word
    leaf: Leaf
    tried: int


def _words_in(x: Word, y: Word, length: int):
    """Freely reduced words of the given length in ``x, y`` and inverses."""
    alphabet = [(0, 1), (0, -1), (1, 1), (1, -1)]
    for seq in itertools.product(alphabet, repeat=length):
        if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(seq, seq[1:])):
            continue
        w = x.delta.identity()
        for i, s in seq:
            w = w * ((x, y)[i] ** s)
        yield w


def choose_disjoint_cyclics(f: LocalFactor, budget: int = 4) -> CyclicPair:
    """``C0`` is the first free word ``x``; ``C1`` is the first candidate in
    ``<x, y>`` whose cyclic subgroup has disjoint conjugates with ``<x>``.

    Candidates: ``g2 g3`` for degree-3 factors (``y`` for stars), then
    ``[x, y]``, ``[x, [x, y]]``, then all words in ``x, y`` up to ``budget``
    letters."""
    if len(f.free_words) < 2:
        raise FactorError(f"vertex {f.vertex} has fewer than two free words")
    x, y = f.free_words[:2]
    preferred = f.free_words[1] * f.free_words[2] if f.degree == 3 and len(f.free_words) >= 3 else y
    xy = commutator(x, y)
    candidates = itertools.chain(
        [preferred, xy, commutator(x, xy)],
        *(_words_in(x, y, k) for k in range(1, budget + 1)),
    )
    seen = set()
    tried = 0
    for w in candidates:
        nf = normal_form(w)
        if not nf.letters or nf in seen:
            continue
        seen.add(nf)
        tried += 1
        leaf = decide_leaf(f.vertex, f.generators, x, w)
        if leaf.verdict == "disjoint":
            return CyclicPair(f, x, w, leaf, tried)
    raise SearchExhausted(f"no disjoint cyclic pair at vertex {f.vertex} within {budget} letters")


def assemble_H0_H1(pairs: Sequence[CyclicPair], delta: CommutationGraph) -> tuple[list[Word], list[Word]]:
    """``H_i`` is generated by the ``C_i`` of every factor; the generators of
    each ``H_i`` must commute pairwise (free abelian of rank ``m``)."""
    for p, q in itertools.combinations(pairs, 2):
        if not supports_commute(delta, p.factor.generators, q.factor.generators):
            raise FactorError(f"factors {p.factor.vertex} and {q.factor.vertex} do not commute")
        for a, b in ((p.c0, q.c0), (p.c1, q.c1)):
            if not is_trivial(commutator(a, b)):
                raise FactorError(f"H words at {p.factor.vertex} and {q.factor.vertex} do not commute")
    return [p.c0 for p in pairs], [p.c1 for p in pairs]


@dataclass
class RuleNode:
    name: str  # "subgroup" | "retraction" | "product"
    checks: dict[str, bool]
    detail: dict[str, str] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(self.checks.values())


@dataclass
class Certificate:
    graph: Graph
    n: int
    basepoint: tuple[int, ...]
    H0: list[Word]
    H1: list[Word]
    rules: list[RuleNode]
    leaves: list[Leaf]

    @property
    def valid(self) -> bool:
        return all(r.valid for r in self.rules) and all(l.verdict == "disjoint" for l in self.leaves)

    def serialize(self) -> str:
        d = self.H0[0].delta if self.H0 else build_delta(self.graph)
        q = lambda w: shlex.quote(format_word(w))  # noqa: E731
        names = lambda gens: ",".join(d.label(x) for x in gens)  # noqa: E731
        lines = ["certificate disjoint_conjugates"]
        lines += [f"graph {line}" for line in _graph_lines(self.graph)]
        lines.append(f"n {self.n}")
        lines.append("basepoint " + " ".join(map(str, self.basepoint)))
        lines.append("H0 " + " ".join(q(w) for w in self.H0))
        lines.append("H1 " + " ".join(q(w) for w in self.H1))
        for r in self.rules:
            status = "checked" if r.valid else "failed"
            extra = "".join(f" {k}={v}" for k, v in r.detail.items())
            lines.append(f"rule {r.name} side_conditions={status} checks={','.join(r.checks)}{extra}")
        for leaf in self.leaves:
            lines.append(
                f"leaf root_conj vertex={leaf.vertex} gens={names(leaf.generators)}"
                f" u={q(leaf.u)} w={q(leaf.w)}"
                f" root_u={q(leaf.root_u)} exp_u={leaf.exp_u}"
                f" root_w={q(leaf.root_w)} exp_w={leaf.exp_w} verdict={leaf.verdict}"
            )
        return "\n".join(lines) + "\n"


def _graph_lines(g: Graph) -> list[str]:
    return format_graph(g).splitlines()


def certify_disjoint_conjugates(
    graph: Graph,
    n: int,
    placement: TokenPlacement,
    pairs: Sequence[CyclicPair],
    *,
    check_isometry: bool = True,
) -> Certificate:
    """Assemble and check the rule tree; raise :class:`CertificateRefused`
    at the first node that does not validate."""
    delta = build_delta(graph)
    H0, H1 = assemble_H0_H1(pairs, delta)
    leaves = [p.leaf for p in pairs]
    cert = Certificate(graph, n, placement.parked, H0, H1, [], leaves)
    cert.rules = _rule_nodes(cert, delta, check_isometry)
    _refuse_if_invalid(cert)
    return cert


def _rule_nodes(cert: Certificate, delta: CommutationGraph, check_isometry: bool) -> list[RuleNode]:
    g = cert.graph
    words = cert.H0 + cert.H1

    def lifts(w: Word) -> bool:
        try:
            path = lift_word(g, cert.basepoint, w)
        except LiftError:
            return False
        return path[-1] == path[0]

    sub = RuleNode("subgroup", {"lift": all(lifts(w) for w in words)})
    if check_isometry:
        sub.checks["local_isometry"] = _isometry_holds(g, cert.n)

    keep = sorted({x for leaf in cert.leaves for x in leaf.generators})
    # any generator subset spans a full subgraph of the commutation graph;
    # check that keep really is a generator subset and that it fixes H
    full = all(0 <= x < delta.size for x in keep)
    fixes = all(normal_form(retract_to(w, keep)) == normal_form(w) for w in words)
    ret = RuleNode(
        "retraction",
        {"full_subgraph": full, "fixes_H": fixes},
        {"keep": ",".join(delta.label(x) for x in keep)},
    )

    gens = [leaf.generators for leaf in cert.leaves]
    commute = all(supports_commute(delta, a, b) for a, b in itertools.combinations(gens, 2))
    support = all(
        leaf.u.support <= set(leaf.generators) and leaf.w.support <= set(leaf.generators)
        for leaf in cert.leaves
    )
    h_commute = all(
        is_trivial(commutator(a, b))
        for H in (cert.H0, cert.H1)
        for a, b in itertools.combinations(H, 2)
    )
    prod = RuleNode(
        "product",
        {"supports_commute": commute, "factor_support": support, "H_commute": h_commute},
        {"factors": str(len(cert.leaves))},
    )
    return [sub, ret, prod]


@lru_cache(maxsize=8)
def _isometry_holds(g: Graph, n: int) -> bool:
    # cached: the large complexes take seconds to build and scan
    try:
        c = build_config_complex(g, n)
    except ValueError:
        return False
    return check_local_isometry(build_cw_map(c, build_delta(g)))[0]


def _refuse_if_invalid(cert: Certificate) -> None:
    for r in cert.rules:
        for name, ok in r.checks.items():
            if not ok:
                raise CertificateRefused(f"rule {r.name}", f"side condition {name} fails")
    for leaf in cert.leaves:
        if leaf.verdict != "disjoint":
            raise CertificateRefused(
                f"leaf vertex={leaf.vertex}",
                f"roots of {format_word(leaf.u)} and {format_word(leaf.w)} are conjugate",
            )


def certify_graph(g: Graph, n: int, *, check_isometry: bool = True) -> tuple[Certificate, Graph]:
    """Run the whole pipeline on ``g`` (subdividing as needed)."""
    h, placement, factors = prepare(g, n)
    pairs = [choose_disjoint_cyclics(f) for f in factors]
    return certify_disjoint_conjugates(h, n, placement, pairs, check_isometry=check_isometry), h


def _fields(tokens: Sequence[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {tok!r}")
        out[key] = val
    return out


def parse_certificate(text: str) -> Certificate:
    """Inverse of :meth:`Certificate.serialize` (verdicts are taken as written)."""
    graph_lines, n, base, h0, h1, rules, raw_leaves = [], None, None, [], [], [], []
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or lines[0].strip() != "certificate disjoint_conjugates":
        raise ValueError("not a disjoint-conjugates certificate")
    for line in lines[1:]:
        head, _, rest = line.partition(" ")
        if head == "graph":
            graph_lines.append(rest)
        elif head == "n":
            n = int(rest)
        elif head == "basepoint":
            base = tuple(int(x) for x in rest.split())
        elif head in ("H0", "H1"):
            (h0 if head == "H0" else h1).extend(shlex.split(rest))
        elif head == "rule":
            toks = shlex.split(rest)
            f = _fields(toks[1:])
            checks = {k: f.get("side_conditions") == "checked" for k in f.get("checks", "").split(",") if k}
            detail = {k: v for k, v in f.items() if k not in ("side_conditions", "checks")}
            rules.append(RuleNode(toks[0], checks, detail))
        elif head == "leaf":
            toks = shlex.split(rest)
            if toks[0] != "root_conj":
                raise ValueError(f"unknown leaf kind {toks[0]!r}")
            raw_leaves.append(_fields(toks[1:]))
        else:
            raise ValueError(f"unknown certificate line {head!r}")
    if n is None or base is None:
        raise ValueError("certificate lacks n or basepoint")
    g = parse_graph("\n".join(graph_lines))
    d = build_delta(g)
    leaves = []
    for f in raw_leaves:
        gens = tuple(d.generator(x) for x in f["gens"].split(",") if x)
        leaves.append(Leaf(
            int(f["vertex"]), gens,
            parse_word(f["u"], d), parse_word(f["w"], d),
            parse_word(f["root_u"], d), int(f["exp_u"]),
            parse_word(f["root_w"], d), int(f["exp_w"]),
            f["verdict"],
        ))
    return Certificate(
        g, n, base,
        [parse_word(w, d) for w in h0], [parse_word(w, d) for w in h1],
        rules, leaves,
    )


def verify_certificate(text: str, *, check_isometry: bool = True) -> tuple[bool, list[str]]:
    """Recompute every node of a serialized certificate from scratch."""
    try:
        cert = parse_certificate(text)
    except (ValueError, KeyError) as exc:
        return False, [f"unreadable certificate: {exc}"]
    g, d = cert.graph, build_delta(cert.graph)
    problems = []
    prof = degree_profile(g)
    vertices = sorted(leaf.vertex for leaf in cert.leaves)
    if vertices != list(prof.essential_vertices):
        problems.append(f"leaves cover {vertices}, essential vertices are {list(prof.essential_vertices)}")
    if len(cert.H0) != len(cert.leaves) or len(cert.H1) != len(cert.leaves):
        problems.append("H0/H1 sizes do not match the number of leaves")
    for i, leaf in enumerate(cert.leaves):
        tag = f"leaf vertex={leaf.vertex}"
        if leaf.vertex in prof.essential_vertices and leaf.generators != local_generators(g, leaf.vertex):
            problems.append(f"{tag}: generators are not the local edge set")
        if i < len(cert.H0) and (cert.H0[i].letters != leaf.u.letters or cert.H1[i].letters != leaf.w.letters):
            problems.append(f"{tag}: words differ from H0/H1 entry {i}")
        try:
            fresh = decide_leaf(leaf.vertex, leaf.generators, leaf.u, leaf.w)
        except ValueError as exc:
            problems.append(f"{tag}: {exc}")
            continue
        if not (_nf(fresh.root_u.letters, d.adjacency) == _nf(leaf.root_u.letters, d.adjacency)
                and fresh.exp_u == leaf.exp_u
                and _nf(fresh.root_w.letters, d.adjacency) == _nf(leaf.root_w.letters, d.adjacency)
                and fresh.exp_w == leaf.exp_w):
            problems.append(f"{tag}: recorded roots do not match")
        if fresh.verdict != leaf.verdict:
            problems.append(f"{tag}: verdict {leaf.verdict} but recomputed {fresh.verdict}")
        if fresh.verdict != "disjoint":
            problems.append(f"{tag}: roots are conjugate")
    fresh_rules = _rule_nodes(cert, d, check_isometry)
    recorded = {r.name: r for r in cert.rules}
    for r in fresh_rules:
        if r.name not in recorded:
            problems.append(f"rule {r.name} missing")
            continue
        for name, ok in r.checks.items():
            if not ok:
                problems.append(f"rule {r.name}: side condition {name} fails")
            elif not recorded[r.name].checks.get(name, False):
                problems.append(f"rule {r.name}: side condition {name} not recorded as checked")
    return not problems, problems


def check_homomorphism_rule(
    images: dict[int, Word], source: CommutationGraph, H0: Sequence[Word], h1: Word
) -> bool:
    """Kernel rule for a cyclic ``H1 = <h1>``: ``f`` defined on generators
    by ``images`` must respect commutation, kill ``H0`` and not kill ``h1``
    (targets are right-angled Artin groups, hence torsion-free, so a
    nontrivial image means ``f`` is injective on ``<h1>``)."""
    if set(images) != set(range(source.size)):
        raise ValueError("images must cover every generator")
    for x, y in source.edges():
        if not is_trivial(commutator(images[x], images[y])):
            return False

    def apply(w: Word) -> Word:
        target = next(iter(images.values())).delta
        out = target.identity()
        for x, s in w.letters:
            out = out * images[x] ** s
        return out

    return all(is_trivial(apply(h)) for h in H0) and not is_trivial(apply(h1))


def soundness_search(
    u: Word,
    w: Word,
    generators: Sequence[int] | None = None,
    max_conjugator: int = 6,
    max_exponent: int = 4,
) -> list[tuple[int, int]]:
    """Exponent pairs ``(i, j)`` with ``g u^i g^-1 = w^j`` for some ``g`` of
    normal-form length ``<= max_conjugator`` (over ``generators``).

    Meet in the middle: such a ``g`` factors as ``g1 g2`` with both halves
    of length ``<= ceil(max_conjugator / 2)``, and then
    ``g2 u^i g2^-1 = g1^-1 w^j g1``.
    """
    d = u.delta
    half = (max_conjugator + 1) // 2
    conj = ball(d, half, generators)
    adj = d.adjacency

    def orbit(x: Word) -> set:
        letters = x.letters
        return {_nf(h.letters + letters + h.inverse().letters, adj) for h in conj}

    left = {i: orbit(u ** i) for i in range(1, max_exponent + 1)}
    hits = []
    for j in [k for e in range(1, max_exponent + 1) for k in (e, -e)]:
        right = orbit(w ** j)
        hits += [(i, j) for i, s in left.items() if s & right]
    return hits

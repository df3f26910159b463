"""Numerical invariants of graph braid groups, gated on machine-checked evidence."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import networkx as nx

from .graph_core import Graph, degree_profile, subdivide_for
from .subgroup_lab import (
    Certificate,
    CertificateRefused,
    FactorError,
    PlacementError,
    SearchExhausted,
    certify_graph,
    verify_certificate,
)

__all__ = [
    "InvariantReport",
    "complex_dimension",
    "compute_report",
    "render_report",
    "parse_report",
    "REPORT_KEYS",
]

REPORT_KEYS = (
    "m",
    "m3",
    "threshold",
    "n",
    "dim_complex",
    "dim_bound_swiatkowski",
    "abelian_rank_swiatkowski",
    "tc",
    "tc_lower_certificate",
    "actdim",
    "l2_degree",
)

CITED = "cited, not certified"


@dataclass
class InvariantReport:
    m: int
    m3: int
    threshold: int
    n: int
    complex_dimension: int
    swiatkowski_dim_bound: int
    swiatkowski_abelian_rank: int
    tc_value: int | None = None
    tc_lower_source: str = "none"
    action_dimension: int | None = None
    l2_nonvanishing_degree: int | None = None
    caveats: list[str] = field(default_factory=list)

    @property
    def tc_upper_source(self) -> str:
        cd = min(self.m, self.n)
        return f"TC <= 2 cd <= 2 min(m, n) = {2 * cd}"


def complex_dimension(g: Graph, n: int) -> int:
    """Top cell dimension of the ``n``-token complex: ``k`` moving tokens
    need ``k`` disjoint edges and leave ``n - k`` tokens on the other
    ``V - 2k`` vertices.  ``-1`` when the complex is empty."""
    if n > g.vertex_count:
        return -1
    G = nx.Graph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_edges_from(g.edges)
    nu = len(nx.max_weight_matching(G, maxcardinality=True))
    return min(nu, n, g.vertex_count - n)


def compute_report(
    g: Graph,
    n: int,
    *,
    certificate: Certificate | str | None = None,
    certify: bool = False,
    trust_paper: bool = False,
) -> InvariantReport:
    """Invariants of the ``n``-strand braid group of ``g``.

    ``tc`` is filled only from a certificate that re-verifies (passed in, or
    produced here when ``certify`` is set) or, with ``trust_paper``, from the
    theorem with a caveat.  Action dimension and the L2 degree are theorem
    values and carry a caveat saying so.
    """
    prof = degree_profile(g)
    m, m3 = prof.m, prof.m3
    try:
        h, _ = subdivide_for(g, n)
    except ValueError:
        h = g  # edgeless and too small: the complex is empty either way
    r = InvariantReport(
        m=m,
        m3=m3,
        threshold=prof.threshold,
        n=n,
        complex_dimension=complex_dimension(h, n),
        swiatkowski_dim_bound=min(m, n),
        swiatkowski_abelian_rank=min(m, n // 2),
    )
    above = n >= prof.threshold
    if m == 0:
        r.caveats.append("m = 0: the theorem values need a vertex of degree >= 3")
    elif not above:
        r.caveats.append(f"n below 2m+m3 = {prof.threshold}")
    if m == 0 or not above:
        return r

    text = None
    if isinstance(certificate, Certificate):
        text = certificate.serialize()
    elif isinstance(certificate, str):
        text = certificate
    elif certify:
        try:
            cert, _ = certify_graph(g, n)
            text = cert.serialize()
        except (CertificateRefused, FactorError, PlacementError, SearchExhausted) as exc:
            r.tc_lower_source = "refused"
            r.caveats.append(f"certificate refused: {exc}")
    if text is not None:
        ok, problems = verify_certificate(text)
        digest = hashlib.sha256(text.encode()).hexdigest()[:16]
        if ok:
            r.tc_value = 2 * m
            r.tc_lower_source = f"valid sha256:{digest}"
        else:
            r.tc_lower_source = f"invalid sha256:{digest}"
            r.caveats.append(f"certificate failed verification: {problems[0]}")
    if r.tc_value is None and trust_paper:
        r.tc_value = 2 * m
        r.caveats.append(f"tc {CITED}")
    if r.tc_value is None:
        r.caveats.append("tc unknown: no verified disjoint-conjugates certificate")
    r.action_dimension = 2 * m
    r.l2_nonvanishing_degree = m
    r.caveats.append(f"actdim and l2_degree {CITED}")
    if m < 2:
        r.caveats.append("tc follows the m > 0 hypothesis; the cited upper-bound source assumes m >= 2")
    return r


_ATTR = {
    "dim_complex": "complex_dimension",
    "dim_bound_swiatkowski": "swiatkowski_dim_bound",
    "abelian_rank_swiatkowski": "swiatkowski_abelian_rank",
    "tc": "tc_value",
    "tc_lower_certificate": "tc_lower_source",
    "actdim": "action_dimension",
    "l2_degree": "l2_nonvanishing_degree",
}


def _values(r: InvariantReport) -> dict:
    return {k: getattr(r, _ATTR.get(k, k)) for k in REPORT_KEYS}


def render_report(r: InvariantReport, fmt: str = "text") -> str:
    if fmt == "json":
        doc = _values(r)
        doc["caveats"] = list(r.caveats)
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"{k}: {'unknown' if v is None else v}" for k, v in _values(r).items()]
    lines += [f"caveats[]: {c}" for c in r.caveats]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> InvariantReport:
    """Inverse of :func:`render_report` for either format."""
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        caveats = doc.pop("caveats", [])
    else:
        doc, caveats = {}, []
        for line in text.splitlines():
            if not line.strip():
                continue
            key, sep, val = line.partition(": ")
            if not sep:
                raise ValueError(f"bad report line {line!r}")
            if key == "caveats[]":
                caveats.append(val)
            elif key == "tc_lower_certificate":
                doc[key] = val
            else:
                doc[key] = None if val == "unknown" else int(val)
    missing = [k for k in REPORT_KEYS if k not in doc]
    if missing:
        raise ValueError(f"report lacks {missing}")
    kwargs = {_ATTR.get(k, k): doc[k] for k in REPORT_KEYS}
    return InvariantReport(**kwargs, caveats=list(caveats))

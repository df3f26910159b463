"""Command-line entry point: ``graphbraid <command> ...``.

Graph arguments are paths to graph files, ``-`` for stdin, or a built-in
name: ``@tripod`` (once-subdivided), ``@star:K``, ``@chain:M``,
``@two-tripods``, ``@path:L``, ``@cycle:K``.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import graph_core as gc
from .crisp_wiest import basepoint_for, build_cw_map, check_local_isometry, pi1_generators
from .cube_complex import build_config_complex, f_vector, format_complex
from .homology import homology
from .raag import build_delta, format_word, is_conjugate, normal_form, parse_word, primitive_root
from .report import compute_report, render_report
from .subgroup_lab import (
    CertificateRefused,
    certify_graph,
    prepare,
    product_witness,
    verify_certificate,
)


class UsageError(Exception):
    pass


_BUILTIN = {
    "tripod": lambda: gc.tripod_subdivided(),
    "two-tripods": lambda: gc.two_tripods(),
    "star": lambda k: gc.star_graph(k),
    "chain": lambda m: gc.tripod_chain(m),
    "path": lambda k: gc.path_graph(k),
    "cycle": lambda k: gc.cycle_graph(k),
}


def load_graph(spec: str) -> gc.Graph:
    if spec.startswith("@"):
        name, _, arg = spec[1:].partition(":")
        if name not in _BUILTIN:
            raise UsageError(f"unknown built-in graph {spec!r}")
        try:
            return _BUILTIN[name](int(arg)) if arg else _BUILTIN[name]()
        except TypeError:
            raise UsageError(f"built-in graph {name!r} takes {'no' if not arg else 'an'} argument") from None
    text = sys.stdin.read() if spec == "-" else open(spec, encoding="utf-8").read()
    return gc.parse_graph(text)


def _build(args):
    g = load_graph(args.graph)
    return g, build_config_complex(g, args.n, allow_unsubdivided=args.allow_unsubdivided)


def cmd_info(args, out):
    g = load_graph(args.graph)
    p = gc.degree_profile(g)
    out.write(f"vertices: {g.vertex_count}\nedges: {g.edge_count}\n")
    out.write(f"m: {p.m}\nm3: {p.m3}\nthreshold: {p.threshold}\n")
    out.write(f"essential: {list(p.essential_vertices)}\n")
    if args.n is not None:
        ok, viol = gc.is_sufficiently_subdivided(g, args.n)
        out.write(f"sufficiently_subdivided: {str(ok).lower()}\n")
        for v in viol:
            out.write(f"violation: {v}\n")


def cmd_subdivide(args, out):
    h, plan = gc.subdivide_for(load_graph(args.graph), args.n)
    out.write(gc.format_graph(h))
    out.write(f"# pieces {' '.join(map(str, plan.per_edge_pieces))}\n")


def cmd_build(args, out):
    _, c = _build(args)
    if args.summary:
        out.write(f"f_vector: {f_vector(c)}\n")
    else:
        out.write(format_complex(c))


def cmd_homology(args, out):
    _, c = _build(args)
    h = homology(c)
    out.write(f"betti: {list(h.betti)}\n")
    out.write(f"torsion: {json.dumps({str(k): list(v) for k, v in h.torsion.items()})}\n")


def cmd_raag(args, out):
    d = build_delta(load_graph(args.graph))
    out.write(f"generators: {' '.join(d.labels)}\n")
    for x, y in d.edges():
        out.write(f"commute: {d.label(x)} {d.label(y)}\n")
    if len(d.join_factors) > 1:
        parts = " | ".join(",".join(d.label(x) for x in f) for f in d.join_factors)
        out.write(f"direct_product: {parts}\n")


def cmd_embed(args, out):
    g, c = _build(args)
    d = build_delta(g)
    m = build_cw_map(c, d)
    ok, viol = check_local_isometry(m)
    if args.basepoint:
        base = basepoint_for(c, [int(x) for x in args.basepoint.split(",")])
    else:
        base = c.cells(0)[0]
    loops = pi1_generators(m, base)
    out.write(f"basepoint: {','.join(map(str, base.parked_vertices))}\n")
    out.write(f"generators: {len(loops)}\n")
    for lw in loops:
        out.write(f"loop: {format_word(lw.word)}\n")
    out.write(f"local_isometry: {str(ok).lower()}\n")
    if viol is not None:
        out.write(f"violation: {viol}\n")


def cmd_witness(args, out):
    h, placement, factors = prepare(load_graph(args.graph), args.n)
    pw = product_witness(factors, build_delta(h))
    out.write(f"basepoint: {','.join(map(str, placement.parked))}\n")
    for v, w in pw.words:
        out.write(f"word {v}: {format_word(w)}\n")
    for line in pw.transcript:
        out.write(f"check: {line}\n")
    if not pw.ok:
        raise ValueError("product witness failed a check")


def cmd_certify(args, out):
    cert, _ = certify_graph(load_graph(args.graph), args.n)
    text = cert.serialize()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_verify(args, out):
    with open(args.certificate, encoding="utf-8") as fh:
        ok, problems = verify_certificate(fh.read())
    out.write(f"valid: {str(ok).lower()}\n")
    for p in problems:
        out.write(f"problem: {p}\n")
    return 0 if ok else 1


def cmd_nf(args, out):
    d = build_delta(load_graph(args.graph))
    out.write(format_word(normal_form(parse_word(args.word, d)), d) + "\n")


def cmd_conj(args, out):
    d = build_delta(load_graph(args.graph))
    u, w = parse_word(args.u, d), parse_word(args.w, d)
    out.write(f"conjugate: {str(is_conjugate(u, w)).lower()}\n")


def cmd_root(args, out):
    d = build_delta(load_graph(args.graph))
    root, k = primitive_root(parse_word(args.word, d))
    out.write(f"root: {format_word(root)}\nexponent: {k}\n")


def cmd_report(args, out):
    r = compute_report(
        load_graph(args.graph), args.n,
        certify=not args.no_certify, trust_paper=args.trust_paper,
    )
    out.write(render_report(r, args.format))


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphbraid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, n=False, n_optional=False, build=False):
        s = sub.add_parser(name, help=help)
        s.set_defaults(fn=fn)
        s.add_argument("graph", help="graph file, '-' or @builtin")
        if n:
            s.add_argument("--n", type=int, required=not n_optional, default=None, help="token count")
        if build:
            s.add_argument("--allow-unsubdivided", action="store_true",
                           help="build even if the graph is not subdivided enough")
        return s

    add("info", cmd_info, "degree profile and subdivision check", n=True, n_optional=True)
    add("subdivide", cmd_subdivide, "subdivide for n tokens", n=True)
    add("build", cmd_build, "dump the configuration complex", n=True, build=True).add_argument(
        "--summary", action="store_true", help="print only the f-vector")
    add("homology", cmd_homology, "integral homology", n=True, build=True)
    add("raag", cmd_raag, "commutation graph of the edges")
    add("embed", cmd_embed, "loop words and local-isometry verdict", n=True, build=True).add_argument(
        "--basepoint", help="comma separated vertices")
    add("witness", cmd_witness, "product of free groups witness", n=True)
    add("certify-tc", cmd_certify, "disjoint-conjugates certificate", n=True).add_argument(
        "-o", "--output", help="write certificate here")
    v = sub.add_parser("verify-cert", help="re-check a certificate")
    v.add_argument("certificate")
    v.set_defaults(fn=cmd_verify)
    add("nf", cmd_nf, "normal form of a word").add_argument("word")
    s = add("conj", cmd_conj, "conjugacy test")
    s.add_argument("u")
    s.add_argument("w")
    add("root", cmd_root, "primitive root of a word").add_argument("word")
    s = add("report", cmd_report, "invariant report", n=True)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--trust-paper", action="store_true", help="fill tc from the theorem if uncertified")
    s.add_argument("--no-certify", action="store_true", help="skip the certificate pipeline")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status = args.fn(args, out)
    except UsageError as exc:
        print(f"graphbraid: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, RuntimeError, CertificateRefused) as exc:
        print(f"graphbraid: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

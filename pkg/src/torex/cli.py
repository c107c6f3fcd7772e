"""Command line front end.

Exit codes: 0 success, 1 parse/validation failure (including property
counterexamples), 2 unmet precondition (the message names it).  All output
is deterministic: JSON is pretty-printed with sorted keys and no run ever
depends on wall time or hash order.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import fixtures, gridminor, homology, planarizer, stretchfinder, verify
from .embedding import EmbCycle, EmbeddingError, FormatError, RotationSystem, parse
from .homology import ExactStretchTooLarge, GenusZeroError
from .surgery import cut_along, cut_through, good_planarizing_sequence
from .verify import PreconditionError

log = logging.getLogger("torex")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PRECONDITION = 2


def _setup_logging() -> None:
    level = os.environ.get("TOREX_LOG", "error").lower()
    lvl = {"error": logging.ERROR, "info": logging.INFO,
           "debug": logging.DEBUG}.get(level, logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=lvl,
                        format="torex: %(levelname)s: %(message)s")


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> RotationSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _cycle_literal(text: str, rs: RotationSystem) -> EmbCycle:
    head, _, tail = text.partition(":")
    head = head.strip()
    if head not in ("C", "DC"):
        raise FormatError("cycle literal must start with 'C:' or 'DC:'")
    try:
        edges = [int(tok) for tok in tail.split()]
    except ValueError:
        raise FormatError(f"bad edge id in cycle literal {text!r}")
    if not edges:
        raise FormatError("empty cycle literal")
    return EmbCycle.from_edges(rs, edges, dual=(head == "DC"))


def _format_cycle(c: EmbCycle, as_dual: bool = False) -> str:
    prefix = "DC" if (c.dual or as_dual) else "C"
    return f"{prefix}: " + " ".join(str(e) for e in c.edge_walk())


def _stretch_doc(rs: RotationSystem, cap: int, as_dual: bool = False) -> dict:
    try:
        res = homology.stretch(rs, "exact", cycle_cap=cap)
        doc = {"mode": "exact", "value": res.value}
        if res.witness:
            doc["witness"] = [_format_cycle(c, as_dual) for c in res.witness]
        return doc
    except ExactStretchTooLarge:
        res = homology.stretch(rs, "bounds")
        return {"mode": "bounds", "interval": list(res.interval)}


def cmd_stats(args) -> int:
    rs = _load(args.file)
    doc = {
        "V": rs.num_vertices,
        "E": rs.num_edges,
        "F": rs.num_faces,
        "genus": rs.genus,
        "max_degree": rs.max_degree,
    }
    if rs.genus == 0:
        doc.update({"ewn": None, "ewn_dual": None, "ew": None,
                    "stretch": None, "cr_window": [0, 0]})
        _emit(doc, args.output)
        return EXIT_OK
    doc["ewn"] = homology.ewn(rs)
    doc["ewn_dual"] = homology.ewn_dual(rs)
    doc["ew"] = homology.ew(rs)
    doc["fw"] = homology.fw(rs)
    doc["fwn"] = homology.fwn(rs)
    doc["stretch"] = _stretch_doc(rs, args.exact_cap)
    doc["stretch_dual"] = _stretch_doc(rs.dual(), args.exact_cap, as_dual=True)
    seq = good_planarizing_sequence(rs)
    doc["planarizing"] = {"k": list(seq.ks), "l": list(seq.ls)}
    g = rs.genus
    kl = max(k * l for k, l in zip(seq.ks, seq.ls))
    doc["uppercr_bound"] = 3 * (2 ** (g + 1) - 2 - g) * kl
    tex = gridminor.tex_lower_bound(rs)
    doc["tex"] = tex.to_json()
    drawing = planarizer.draw(rs)
    hi = drawing.total_crossings
    lows = [0]
    if tex.grid_applicable and tex.grid and min(tex.grid) >= 3:
        p2, q2 = tex.grid
        lows.append(-(-homology.crossing_lb_from_tex(p2, q2).value // 4))
        lows.append(p2 * q2 // 12)
    if tex.tex_from_stretch is not None:
        lows.append(int(tex.tex_from_stretch / 12))
    doc["cr_window"] = [max(lows), hi]
    _emit(doc, args.output)
    return EXIT_OK


def cmd_planarize(args) -> int:
    rs = _load(args.file)
    drawing = planarizer.draw(rs)
    rep = planarizer.validate_drawing(drawing)
    if not rep.ok:
        sys.stderr.write("torex: drawing failed validation: "
                         + "; ".join(rep.problems) + "\n")
        return EXIT_INVALID
    base_ref = None
    if args.output:
        stem = args.output[:-5] if args.output.endswith(".json") else args.output
        base_ref = stem + ".base.rot"
        with open(base_ref, "w", encoding="utf-8") as fh:
            fh.write(drawing.base.serialize())
    doc = drawing.to_json(base_ref=base_ref)
    doc["validated"] = True
    if base_ref is None:
        doc["base_rot"] = drawing.base.serialize().splitlines()
    if args.emit_planarization:
        prs = _planarization_embedding(drawing)
        with open(args.emit_planarization, "w", encoding="utf-8") as fh:
            fh.write(prs.serialize())
    _emit(doc, args.output)
    return EXIT_OK


def _planarization_embedding(drawing) -> RotationSystem:
    """Plane rotation system of the drawing with crossings as degree-4
    vertices (via a planarity-test embedding of the planarization)."""
    import networkx as nx

    base_orig = set(drawing.base_edge_orig)
    G = nx.Graph()
    base_points: dict[int, int] = {}
    for ins in drawing.insertions:
        for c in ins.crossings:
            if c.edge in base_orig:
                base_points[c.edge] = max(base_points.get(c.edge, 0),
                                          c.pos_other + 1)
    for e_local in range(drawing.base.num_edges):
        e = drawing.base_edge_orig[e_local]
        u = drawing.base.vertex_of[2 * e_local]
        w = drawing.base.vertex_of[2 * e_local + 1]
        chain = ([("v", u)] + [("x", e, i) for i in range(base_points.get(e, 0))]
                 + [("v", w)])
        for a, b in zip(chain, chain[1:]):
            if a != b:
                G.add_edge(a, b)
    for ins in drawing.insertions:
        u, w = ins.endpoints
        chain = [("v", u)]
        for c in ins.crossings:
            if c.edge in base_orig:
                chain.append(("x", c.edge, c.pos_other))
            else:
                chain.append(("xx",) + tuple(sorted(
                    [(ins.edge, c.pos_self), (c.edge, c.pos_other)])))
        chain.append(("v", w))
        for a, b in zip(chain, chain[1:]):
            if a != b:
                G.add_edge(a, b)
    planar, emb = nx.check_planarity(G)
    if not planar:
        raise EmbeddingError("planarization is not planar")
    nodes = sorted(G.nodes(), key=str)
    vid = {n: i for i, n in enumerate(nodes)}
    eid = {}
    for a, b in sorted(G.edges(), key=str):
        eid[frozenset((a, b))] = len(eid)
    rotations = []
    for n in nodes:
        rot = []
        for nbr in emb.neighbors_cw_order(n):
            e = eid[frozenset((n, nbr))]
            d = 2 * e if vid[n] < vid[nbr] else 2 * e + 1
            rot.append(d)
        rotations.append(tuple(reversed(rot)))  # cw -> ccw
    return RotationSystem(rotations)


def cmd_grid_minor(args) -> int:
    rs = _load(args.file)
    doc: dict = {}
    if rs.genus == 0:
        sys.stderr.write("torex: grid extraction needs positive genus\n")
        return EXIT_PRECONDITION
    target = rs
    if rs.genus >= 2:
        res = stretchfinder.find_high_stretch_subgraph(rs, cycle_cap=args.exact_cap)
        if res.genus_prime != 1:
            sys.stderr.write("torex: high-stretch reduction stopped at genus "
                             f"{res.genus_prime}; torus extraction not reached\n")
            return EXIT_PRECONDITION
        target = res.subgraph
        doc["reduced_from_genus"] = rs.genus
    cert = gridminor.toroidal_grid_minor(target)
    rep = gridminor.verify_certificate(target, cert)
    doc.update(cert.to_json())
    doc["verified"] = bool(rep)
    out = args.certificate or args.output
    _emit(doc, out)
    return EXIT_OK if rep else EXIT_INVALID


def cmd_high_stretch(args) -> int:
    rs = _load(args.file)
    res = stretchfinder.find_high_stretch_subgraph(rs, cycle_cap=args.exact_cap)
    _emit(res.to_json(), args.output)
    return EXIT_OK


def cmd_stretch(args) -> int:
    rs = _load(args.file)
    doc = {"stretch": _stretch_doc(rs, args.exact_cap),
           "stretch_dual": _stretch_doc(rs.dual(), args.exact_cap, as_dual=True)}
    _emit(doc, args.output)
    return EXIT_OK


def cmd_cut(args) -> int:
    rs = _load(args.file)
    if bool(args.through) == bool(args.along):
        sys.stderr.write("torex: cut needs exactly one of --through/--along\n")
        return EXIT_INVALID
    if args.through:
        cyc = _cycle_literal(args.through, rs)
        if cyc.dual:
            sys.stderr.write("torex: --through takes a primal cycle literal\n")
            return EXIT_INVALID
        res = cut_through(rs, cyc)
        doc = {"operation": "cut-through",
               "c1": res.c1, "c2": res.c2,
               "severed": sorted(res.severed),
               "genus": res.cut.genus,
               "V": res.cut.num_vertices, "E": res.cut.num_edges}
        cut = res.cut
    else:
        cyc = _cycle_literal(args.along, rs)
        if not cyc.dual:
            sys.stderr.write("torex: --along takes a dual cycle literal\n")
            return EXIT_INVALID
        res = cut_along(rs, cyc)
        doc = {"operation": "cut-along",
               "a1": res.a1, "a2": res.a2,
               "severed": sorted(res.severed),
               "genus": res.cut.genus,
               "V": res.cut.num_vertices, "E": res.cut.num_edges}
        cut = res.cut
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(cut.serialize())
        doc["embedding"] = args.output
    else:
        doc["embedding_rot"] = cut.serialize().splitlines()
    _emit(doc, None)
    return EXIT_OK


def cmd_verify(args) -> int:
    rs = _load(args.file)
    check = verify.CHECKS.get(args.lemma)
    if check is None:
        sys.stderr.write(f"torex: unknown lemma {args.lemma!r}; choose from "
                         + ", ".join(sorted(verify.CHECKS)) + "\n")
        return EXIT_INVALID
    counterexample = check(rs)
    if counterexample:
        _emit({"lemma": args.lemma, "status": "counterexample",
               "detail": counterexample}, args.output)
        return EXIT_INVALID
    _emit({"lemma": args.lemma, "status": "ok"}, args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "tg":
        if len(args.params) != 2:
            sys.stderr.write("torex: gen tg needs P Q\n")
            return EXIT_INVALID
        p, q = (int(x) for x in args.params)
        rs = fixtures.toroidal_grid(p, q)
    elif args.kind == "join":
        if len(args.params) != 2:
            sys.stderr.write("torex: gen join needs A.rot B.rot\n")
            return EXIT_INVALID
        rs = fixtures.join(_load(args.params[0]), _load(args.params[1]))
    else:
        sys.stderr.write(f"torex: unknown generator {args.kind!r}\n")
        return EXIT_INVALID
    text = rs.serialize()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="torex",
        description="rotation-system embeddings: density parameters, surface "
                    "surgery, certified planarization, toroidal grid minors")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="embedding file (torex-embedding v1)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed accepted for scripting; all computations "
                            "are deterministic")
        p.add_argument("--exact-cap", type=int,
                       default=homology.DEFAULT_CYCLE_CAP,
                       help="cycle enumeration cap for exact stretch")
        p.add_argument("-o", "--output", default=None, help="output file")

    p = sub.add_parser("stats", help="embedding density report")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("planarize", help="certified plane drawing")
    common(p)
    p.add_argument("--emit-planarization", default=None, metavar="OUT.rot",
                   help="write the crossings-as-vertices plane embedding")
    p.set_defaults(func=cmd_planarize)

    p = sub.add_parser("grid-minor", help="toroidal grid minor certificate")
    common(p)
    p.add_argument("--certificate", default=None, metavar="OUT.json")
    p.set_defaults(func=cmd_grid_minor)

    p = sub.add_parser("high-stretch", help="subgraph with certified stretch")
    common(p)
    p.set_defaults(func=cmd_high_stretch)

    p = sub.add_parser("stretch", help="stretch of the embedding and its dual")
    common(p)
    p.set_defaults(func=cmd_stretch)

    p = sub.add_parser("cut", help="surface surgery along/through a cycle")
    common(p)
    p.add_argument("--through", default=None, metavar='"C: e1 e2 ..."')
    p.add_argument("--along", default=None, metavar='"DC: e1 e2 ..."')
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("verify", help="run a named property suite")
    common(p)
    p.add_argument("--lemma", required=True,
                   choices=sorted(verify.CHECKS), metavar="NAME",
                   help="one of " + ", ".join(sorted(verify.CHECKS)))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="fixture generators")
    p.add_argument("kind", choices=["tg", "join"])
    p.add_argument("params", nargs="*")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        sys.stderr.write(f"torex: precondition unmet: {exc}\n")
        return EXIT_PRECONDITION
    except (GenusZeroError, stretchfinder.CutStepError,
            gridminor.GridMinorError) as exc:
        sys.stderr.write(f"torex: precondition unmet: {exc}\n")
        return EXIT_PRECONDITION
    except ExactStretchTooLarge as exc:
        sys.stderr.write(f"torex: {exc}\n")
        return EXIT_PRECONDITION
    except (FormatError, EmbeddingError) as exc:
        sys.stderr.write(f"torex: invalid input: {exc}\n")
        return EXIT_INVALID
    except FileNotFoundError as exc:
        sys.stderr.write(f"torex: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

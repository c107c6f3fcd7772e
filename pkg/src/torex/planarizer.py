"""Planarize an embedded graph and reinsert the severed edges.

The embedding is cut along a dual good planarizing sequence down to the
plane.  Each severed half-edge leaves a corner; corners persist verbatim at
untouched vertices and slide to the next surviving dart otherwise, which
tracks the two heir faces of every severed edge into the plane embedding.
Missing edges are then routed along shortest dual paths between their heir
faces (one search per distinct source face) and drawn as chords through the
face discs; crossings among inserted edges are exactly the interleaving
chord pairs, realized on rational convex positions so the certificate is a
genuine plane drawing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .embedding import EmbCycle, EmbeddingError, RotationSystem
from .surgery import (CutAlongResult, PlanarizingSequence,
                      good_planarizing_sequence)


class HeirTrackingError(EmbeddingError):
    pass


# -- corner references through a cutting step ---------------------------------


def _resolve_initial_ref(res: CutAlongResult, dart: int) -> int | None:
    """Corner (as a cut-graph dart) inheriting a severed half-edge.

    If the vertex kept no darts the reference parks at the far end of one of
    its severed edges, chasing until a live corner appears.
    """
    seen: set[int] = set()
    frontier = [dart]
    while frontier:
        d = frontier.pop(0)
        if d in seen:
            continue
        seen.add(d)
        ref = res.corner_map.get(d)
        if ref is not None:
            return ref
        # dead vertex: hop across the severed edge, then across any other
        # severed edge of the far vertex
        far = d ^ 1
        if far not in seen:
            frontier.append(far)
        v = res.original.vertex_of[far]
        for dd in res.original.rotations[v]:
            if dd not in seen:
                frontier.append(dd)
    return None


def _advance_ref(res: CutAlongResult, ref: int) -> int | None:
    """Map a corner reference of the previous embedding through one cut."""
    if (ref >> 1) in res.severed:
        return _resolve_initial_ref(res, ref)
    return res.push_dart(ref)


# -- heir faces ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EdgeHeirs:
    edge: int                       # original edge id
    step: int                       # 1-based index of the severing step
    a_dart: int                     # original dart on the a side
    b_dart: int
    a_refs: tuple[int | None, ...]  # corner ref in G_step .. G_g
    b_refs: tuple[int | None, ...]
    a_faces: tuple[int | None, ...]
    b_faces: tuple[int | None, ...]

    @property
    def a_final(self) -> int | None:
        return self.a_faces[-1]

    @property
    def b_final(self) -> int | None:
        return self.b_faces[-1]


@dataclass(frozen=True, eq=False)
class HeirFaces:
    sequence: PlanarizingSequence
    per_edge: dict  # original edge id -> EdgeHeirs

    def group_sizes(self, side: str = "a") -> dict[int, int]:
        """Number of distinct final heir faces per severing step."""
        groups: dict[int, set] = {}
        for h in self.per_edge.values():
            face = h.a_final if side == "a" else h.b_final
            groups.setdefault(h.step, set()).add(face)
        return {i: len(s) for i, s in groups.items()}


def heir_faces(seq: PlanarizingSequence) -> HeirFaces:
    """Track both heir faces of every severed edge into the plane embedding."""
    per_edge: dict[int, EdgeHeirs] = {}
    steps = seq.steps
    for idx, step in enumerate(steps):
        res = step.cut_result
        prev = res.original
        severed_local = sorted(res.severed)
        for e_local, e_orig in zip(severed_local, step.severed_orig):
            refs = []
            for d in (2 * e_local, 2 * e_local + 1):
                refs.append(_resolve_initial_ref(res, d))
            face_pair = []
            for r in refs:
                face_pair.append(res.cut.face_of[r] if r is not None else None)
            # label: the half-edge whose corner lies on rim a1 is the a side
            if res.a1 is not None and face_pair[0] == res.a1:
                a_i, b_i = 0, 1
            elif res.a1 is not None and face_pair[1] == res.a1:
                a_i, b_i = 1, 0
            else:
                a_i, b_i = 0, 1
            side_refs: dict[str, list] = {"a": [refs[a_i]], "b": [refs[b_i]]}
            side_faces = {"a": [face_pair[a_i]], "b": [face_pair[b_i]]}
            # advance through the later cuts
            for later in steps[idx + 1:]:
                for key in ("a", "b"):
                    r = side_refs[key][-1]
                    r2 = _advance_ref(later.cut_result, r) if r is not None else None
                    side_refs[key].append(r2)
                    side_faces[key].append(
                        later.cut_result.cut.face_of[r2] if r2 is not None else None)
            per_edge[e_orig] = EdgeHeirs(
                edge=e_orig, step=idx + 1,
                a_dart=2 * e_local, b_dart=2 * e_local + 1,
                a_refs=tuple(side_refs["a"]), b_refs=tuple(side_refs["b"]),
                a_faces=tuple(side_faces["a"]), b_faces=tuple(side_faces["b"]))
    return HeirFaces(sequence=seq, per_edge=per_edge)


# -- insertion routes ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Route:
    faces: tuple[int, ...]         # G_g face ids, source .. target
    crossed: tuple[int, ...]       # G_g local edge ids crossed, len = len(faces)-1


def _dual_bfs(base: RotationSystem, source: int) -> tuple[list, list]:
    """Deterministic BFS over faces; steps cross the least-id usable edge."""
    nf = base.num_faces
    parent_face = [-1] * nf
    parent_edge = [-1] * nf
    parent_face[source] = source
    frontier = [source]
    while frontier:
        nxt = []
        for f in frontier:
            for d in sorted(base.faces[f]):
                g = base.face_of[d ^ 1]
                if parent_face[g] == -1:
                    parent_face[g] = f
                    parent_edge[g] = d >> 1
                    nxt.append(g)
        frontier = sorted(set(nxt))
    return parent_face, parent_edge


def insertion_routes(seq: PlanarizingSequence, heirs: HeirFaces) -> dict[int, Route]:
    """Shortest dual route per severed edge, one BFS per distinct source face."""
    base = seq.final
    sources = sorted({h.a_final for h in heirs.per_edge.values()
                      if h.a_final is not None})
    trees = {s: _dual_bfs(base, s) for s in sources}
    routes: dict[int, Route] = {}
    for e, h in sorted(heirs.per_edge.items()):
        if h.a_final is None or h.b_final is None:
            raise HeirTrackingError(f"no heir face for severed edge {e}")
        parent_face, parent_edge = trees[h.a_final]
        if parent_face[h.b_final] == -1:
            raise HeirTrackingError("heir faces in different components")
        faces = [h.b_final]
        crossed = []
        f = h.b_final
        while f != h.a_final:
            crossed.append(parent_edge[f])
            f = parent_face[f]
            faces.append(f)
        faces.reverse()
        crossed.reverse()
        routes[e] = Route(tuple(faces), tuple(crossed))
    return routes


# -- the drawing certificate -----------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    edge: int        # original id of the other edge (base or inserted)
    pos_self: int    # index along this insertion's crossing list
    pos_other: int   # index along the other edge's crossing list


@dataclass(frozen=True, eq=False)
class Insertion:
    edge: int
    endpoints: tuple[int, int]
    route_faces: tuple[int, ...]
    crossings: tuple[Crossing, ...]


@dataclass(frozen=True, eq=False)
class Drawing:
    """Planar drawing certificate: a plane base embedding plus, for every
    reinserted edge, the ordered list of crossings along it."""

    original: RotationSystem
    base: RotationSystem
    base_edge_orig: tuple[int, ...]      # base local edge -> original edge id
    insertions: tuple[Insertion, ...]
    total_crossings: int
    bound: int
    ks: tuple[int, ...]
    ls: tuple[int, ...]

    def to_json(self, base_ref: str | None = None) -> dict:
        doc = {
            "genus": self.original.genus,
            "bound": self.bound,
            "total_crossings": self.total_crossings,
            "base": base_ref,
            "base_edges": list(self.base_edge_orig),
            "planarizing": {"k": list(self.ks), "l": list(self.ls)},
            "insertions": [
                {
                    "edge": ins.edge,
                    "endpoints": list(ins.endpoints),
                    "route_faces": list(ins.route_faces),
                    "crossings": [
                        {"edge": c.edge, "pos_self": c.pos_self,
                         "pos_other": c.pos_other}
                        for c in ins.crossings
                    ],
                }
                for ins in self.insertions
            ],
        }
        return doc


def _segment_params(ports: dict, chords: list) -> dict:
    """Crossing order along every chord of one face.

    Ports sit at rational convex positions (i, i*i); two chords cross iff
    their port pairs interleave, and the intersection parameter along each
    chord orders its crossings.  Returns {chord_index: [(param, partner,
    other_index), ...] sorted}.
    """
    pts = {p: (Fraction(i), Fraction(i) * i) for p, i in ports.items()}
    out: dict[int, list] = {i: [] for i in range(len(chords))}

    def interleave(a, b, c, d):
        lo, hi = min(a, b), max(a, b)
        return (lo < c < hi) != (lo < d < hi)

    for i in range(len(chords)):
        pi, qi, _ = chords[i]
        for j in range(i + 1, len(chords)):
            pj, qj, _ = chords[j]
            if len({pi, qi, pj, qj}) < 4:
                continue
            a, b = ports[pi], ports[qi]
            c, d = ports[pj], ports[qj]
            if not interleave(a, b, c, d):
                continue
            p1, p2 = pts[pi], pts[qi]
            p3, p4 = pts[pj], pts[qj]
            r = (p2[0] - p1[0], p2[1] - p1[1])
            s = (p4[0] - p3[0], p4[1] - p3[1])
            denom = r[0] * s[1] - r[1] * s[0]
            assert denom != 0
            qp = (p3[0] - p1[0], p3[1] - p1[1])
            t = (qp[0] * s[1] - qp[1] * s[0]) / denom
            u = (qp[0] * r[1] - qp[1] * r[0]) / denom
            out[i].append((t, j))
            out[j].append((u, i))
    for i in out:
        out[i].sort()
    return out


def draw(rs: RotationSystem) -> Drawing:
    """Planarize and reinsert all severed edges with a certified crossing
    count at most 3 * (2^(g+1) - 2 - g) * max(k_i * l_i)."""
    g = rs.genus
    if g == 0:
        return Drawing(
            original=rs, base=rs,
            base_edge_orig=tuple(range(rs.num_edges)),
            insertions=(), total_crossings=0, bound=0, ks=(), ls=())

    seq = good_planarizing_sequence(rs)
    heirs = heir_faces(seq)
    routes = insertion_routes(seq, heirs)
    base = seq.final

    # edge-id maps between the plane base and the original
    base_edge_orig = []
    for e in range(base.num_edges):
        base_edge_orig.append(seq.edge_to_orig(len(seq.steps), e))
    orig_to_base = {o: e for e, o in enumerate(base_edge_orig)}

    # insertion order: last bunch first; within a step, classes by heir pair;
    # within a class, attachment order along the severed dual cycle
    ordered: list[int] = []
    for idx in range(len(seq.steps) - 1, -1, -1):
        step = seq.steps[idx]
        walk_order = {e: t for t, e in enumerate(
            seq.edge_to_orig(idx, el) for el in step.gamma.edge_walk())}
        edges_i = sorted(step.severed_orig,
                         key=lambda e: (heirs.per_edge[e].a_final,
                                        heirs.per_edge[e].b_final,
                                        walk_order[e]))
        ordered.extend(edges_i)

    # group the insertion order into bunch classes (same step + heir pair)
    classes: list[list[int]] = []
    key_of = {e: (heirs.per_edge[e].step, heirs.per_edge[e].a_final,
                  heirs.per_edge[e].b_final) for e in ordered}
    for e in ordered:
        if classes and key_of[classes[-1][-1]] == key_of[e]:
            classes[-1].append(e)
        else:
            classes.append([e])

    # crossing points on base edges.  Within a bunch the whole class runs as
    # parallel strands: on every crossed edge the block of new points is
    # ordered so that consecutive faces see nested (non-crossing) chords.
    points: dict[int, list] = {}          # base local edge -> [point ids]
    point_of: dict[tuple, int] = {}
    npoints = 0
    for cls in classes:
        route = routes[cls[0]]
        f0 = route.faces[0]
        walk0 = list(base.faces[f0])

        def entry_pos(e: int) -> tuple:
            ref = heirs.per_edge[e].a_refs[-1]
            return (walk0.index(ref) if ref in walk0 else len(walk0),
                    ordered.index(e))

        order = sorted(cls, key=entry_pos)
        for t, x in enumerate(route.crossed):
            d_in = 2 * x if base.face_of[2 * x] == route.faces[t] else 2 * x + 1
            block = list(reversed(order)) if d_in == 2 * x else list(order)
            for e in block:
                pid = npoints
                npoints += 1
                points.setdefault(x, []).append(pid)
                point_of[(e, t)] = pid

    # face port circles
    port_pos: dict[int, dict] = {}        # face -> port key -> position
    for f in range(base.num_faces):
        tokens: list = []
        for d in base.faces[f]:
            tokens.append(("corner", d))
            side = points.get(d >> 1, [])
            if d & 1:
                side = list(reversed(side))
            tokens.extend(("pt", pid) for pid in side)
        # expand corners into endpoint ports in insertion order
        expanded: list = []
        corner_hosts: dict[int, list] = {}
        for e in ordered:
            h = heirs.per_edge[e]
            for side_key, ref in (("a", h.a_refs[-1]), ("b", h.b_refs[-1])):
                face = h.a_final if side_key == "a" else h.b_final
                if face == f and ref is not None:
                    corner_hosts.setdefault(ref, []).append(("end", e, side_key))
        for tok in tokens:
            if tok[0] == "corner":
                expanded.extend(corner_hosts.get(tok[1], []))
            else:
                expanded.append(tok)
        port_pos[f] = {p: i for i, p in enumerate(expanded)}

    # chords per face: (port_in, port_out, (edge, segment_index))
    chords_at: dict[int, list] = {f: [] for f in range(base.num_faces)}
    for e in ordered:
        r = routes[e]
        h = heirs.per_edge[e]
        for t, f in enumerate(r.faces):
            pin = (("end", e, "a") if t == 0 else ("pt", point_of[(e, t - 1)]))
            pout = (("end", e, "b") if t == len(r.faces) - 1
                    else ("pt", point_of[(e, t)]))
            chords_at[f].append((pin, pout, (e, t)))

    # per-face chord crossings with exact parameters
    seg_cross: dict[tuple, list] = {}
    for f, chords in chords_at.items():
        if not chords:
            continue
        params = _segment_params(port_pos[f], chords)
        for i, lst in params.items():
            seg_cross[chords[i][2]] = [(p, chords[j][2]) for p, j in lst]

    # positions along each insertion's full crossing list
    full_pos: dict[tuple, int] = {}    # (seg, other_seg) -> pos_self
    list_len: dict[int, int] = {}
    for e in ordered:
        r = routes[e]
        pos = 0
        for t in range(len(r.faces)):
            for param, other in seg_cross.get((e, t), []):
                full_pos[((e, t), other)] = pos
                pos += 1
            if t < len(r.crossed):
                pos += 1
        list_len[e] = pos

    insertions = []
    n_base = 0
    n_ins_records = 0
    for e in ordered:
        h = heirs.per_edge[e]
        r = routes[e]
        crossings: list[Crossing] = []
        for t in range(len(r.faces)):
            for param, other in seg_cross.get((e, t), []):
                crossings.append(Crossing(
                    edge=other[0],
                    pos_self=len(crossings),
                    pos_other=full_pos[(other, (e, t))]))
                n_ins_records += 1
            if t < len(r.crossed):
                x = r.crossed[t]
                pos_other = points[x].index(point_of[(e, t)])
                crossings.append(Crossing(
                    edge=base_edge_orig[x],
                    pos_self=len(crossings),
                    pos_other=pos_other))
                n_base += 1
        assert len(crossings) == list_len[e]
        endpoints = (rs.vertex_of[2 * e + (h.a_dart & 1)],
                     rs.vertex_of[2 * e + (h.b_dart & 1)])
        insertions.append(Insertion(
            edge=e, endpoints=endpoints,
            route_faces=r.faces, crossings=tuple(crossings)))

    assert n_ins_records % 2 == 0
    total = n_base + n_ins_records // 2
    kl = max((k * l for k, l in zip(seq.ks, seq.ls)), default=0)
    bound = 3 * (2 ** (g + 1) - 2 - g) * kl
    if total > bound:
        raise EmbeddingError(
            f"drawing exceeded its certified bound ({total} > {bound})")
    return Drawing(
        original=rs, base=base, base_edge_orig=tuple(base_edge_orig),
        insertions=tuple(sorted(insertions, key=lambda i: i.edge)),
        total_crossings=total, bound=bound, ks=seq.ks, ls=seq.ls)


# -- independent validation ------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_drawing(drawing: Drawing) -> ValidationReport:
    """Check the certificate independently of how it was built.

    The base must be plane, every original edge must appear exactly once (in
    the base or as an insertion), the two per-edge crossing orders of every
    crossing must point at each other, and the planarization (crossings
    replaced by degree-4 vertices) must pass a planarity test.
    """
    import networkx as nx

    problems: list[str] = []
    d = drawing
    if d.base.genus != 0:
        problems.append(f"base embedding has genus {d.base.genus}, not plane")

    base_orig = set(d.base_edge_orig)
    inserted = [ins.edge for ins in d.insertions]
    accounted = sorted(list(base_orig) + inserted)
    if accounted != list(range(d.original.num_edges)):
        problems.append("edge accounting is not exact")

    by_edge = {ins.edge: ins for ins in d.insertions}
    base_points: dict[int, dict[int, tuple]] = {}
    for ins in d.insertions:
        for c in ins.crossings:
            if c.pos_self >= len(ins.crossings) or \
                    ins.crossings[c.pos_self] is not c:
                problems.append(f"inconsistent pos_self on edge {ins.edge}")
                continue
            if c.edge in by_edge:
                other = by_edge[c.edge]
                if c.pos_other >= len(other.crossings):
                    problems.append(
                        f"crossing ({ins.edge},{c.edge}): pos_other out of range")
                    continue
                back = other.crossings[c.pos_other]
                if back.edge != ins.edge or back.pos_other != c.pos_self:
                    problems.append(
                        f"mismatched mutual crossing order on edges "
                        f"({ins.edge},{c.edge})")
            elif c.edge in base_orig:
                slots = base_points.setdefault(c.edge, {})
                if c.pos_other in slots:
                    problems.append(
                        f"two crossings claim slot {c.pos_other} of base edge "
                        f"{c.edge}")
                slots[c.pos_other] = (ins.edge, c.pos_self)
            else:
                problems.append(
                    f"crossing with unknown edge {c.edge} on edge {ins.edge}")
    for e, slots in base_points.items():
        if sorted(slots) != list(range(len(slots))):
            problems.append(f"gaps in crossing slots of base edge {e}")

    if problems:
        return ValidationReport(False, tuple(problems))

    # build the planarization and test planarity
    G = nx.Graph()
    orig_to_base = {o: i for i, o in enumerate(d.base_edge_orig)}
    for v in range(d.base.num_vertices):
        G.add_node(("v", v))
    for e_local in range(d.base.num_edges):
        e = d.base_edge_orig[e_local]
        u = d.base.vertex_of[2 * e_local]
        w = d.base.vertex_of[2 * e_local + 1]
        pts = base_points.get(e, {})
        chain = [("v", u)] + [("x", e, i) for i in range(len(pts))] + [("v", w)]
        for a, b in zip(chain, chain[1:]):
            if a != b:
                G.add_edge(a, b)
    for ins in d.insertions:
        u, w = ins.endpoints
        chain: list = [("v", u)]
        for c in ins.crossings:
            if c.edge in base_orig:
                chain.append(("x", c.edge, c.pos_other))
            else:
                key = tuple(sorted([(ins.edge, c.pos_self),
                                    (c.edge, c.pos_other)]))
                chain.append(("xx",) + key)
        chain.append(("v", w))
        for a, b in zip(chain, chain[1:]):
            if a != b:
                G.add_edge(a, b)
    planar, _ = nx.check_planarity(G)
    if not planar:
        problems.append("planarization is not planar")

    recount = 0
    for ins in d.insertions:
        for c in ins.crossings:
            recount += 2 if c.edge in base_orig else 1
    if recount % 2 == 0 and recount // 2 != d.total_crossings:
        problems.append(
            f"total_crossings is {d.total_crossings}, certificate lists "
            f"{recount // 2}")
    return ValidationReport(not problems, tuple(problems))

"""Bipolar dual subgraphs and the iterated cut step.

A dual subgraph is bipolar when its induced embedding (host rotations
restricted to the subgraph) is face-2-colorable; the colors classify the
corners where other edges attach, generalizing the two sides of a cycle.
Cutting through the short cycle of a stretch witness keeps a bipolar
remnant with inherited colors, keeps an odd-leaping closed walk, and costs
the switching distance at most half the cut length, which pins down a
subgraph on a smaller surface whose dual stretch is still large.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedding import DartPath, EmbCycle, EmbeddingError, RotationSystem
from . import homology
from .surgery import cut_along, cut_through


class NotBipolarError(EmbeddingError):
    pass


class CutStepError(EmbeddingError):
    pass


@dataclass(frozen=True, eq=False)
class BipolarSubgraph:
    """A face-bicolored dual subgraph.

    ``dual_graph`` is the rotation system the colors live in (isomorphic to
    the dual of the embedding being described); ``edge_orig`` maps its edge
    ids back to the original primal edge ids.
    """

    dual_graph: RotationSystem
    delta: frozenset                 # edge ids in dual_graph
    dart_color: dict                 # delta dart -> +1 / -1 (its face color)
    edge_orig: dict                  # dual_graph edge id -> original edge id

    @property
    def delta_orig(self) -> frozenset:
        return frozenset(self.edge_orig[e] for e in self.delta)

    def check(self) -> None:
        """Colors must 2-color the induced faces: opposite across every
        delta edge and constant along every induced face walk."""
        g = self.dual_graph
        for e in self.delta:
            if self.dart_color[2 * e] == self.dart_color[2 * e + 1]:
                raise NotBipolarError(f"edge {e} has equal colors on both sides")
        srot = _restricted_rotation(g, self.delta)
        for d in list(self.dart_color):
            nxt = srot[d ^ 1]
            if self.dart_color[nxt] != self.dart_color[d]:
                raise NotBipolarError("colors change along an induced face")


def _restricted_rotation(g: RotationSystem, delta) -> dict:
    """sigma of the induced embedding: next delta dart ccw at each vertex."""
    srot: dict[int, int] = {}
    for v in range(g.num_vertices):
        ds = [d for d in g.rotations[v] if (d >> 1) in delta]
        for i, d in enumerate(ds):
            srot[d] = ds[(i + 1) % len(ds)]
    return srot


def _induced_faces(g: RotationSystem, delta) -> list[tuple[int, ...]]:
    srot = _restricted_rotation(g, delta)
    seen = set()
    faces = []
    for start in sorted(srot):
        if start in seen:
            continue
        walk = []
        d = start
        while d not in seen:
            seen.add(d)
            walk.append(d)
            d = srot[d ^ 1]
        faces.append(tuple(walk))
    return faces


def bipolar_coloring(rs: RotationSystem, delta_edges) -> BipolarSubgraph | None:
    """Face-bicolor the induced embedding of a dual edge set, or None.

    One coloring is fixed per connected component (the face holding the
    least dart goes positive); an odd cycle in the face adjacency means the
    subgraph is not bipolar.
    """
    delta = frozenset(delta_edges)
    if not delta:
        raise EmbeddingError("empty dual subgraph")
    g = rs.dual()
    return _color_in(g, delta, {e: e for e in range(g.num_edges)})


def _color_in(g: RotationSystem, delta, edge_orig) -> BipolarSubgraph | None:
    faces = _induced_faces(g, delta)
    face_of = {}
    for i, walk in enumerate(faces):
        for d in walk:
            face_of[d] = i
    # adjacency via shared edges; 2-color deterministically
    color = [0] * len(faces)
    order = sorted(range(len(faces)), key=lambda i: faces[i][0])
    for root in order:
        if color[root]:
            continue
        color[root] = 1
        stack = [root]
        while stack:
            f = stack.pop()
            for d in faces[f]:
                other = face_of[d ^ 1]
                if color[other] == 0:
                    color[other] = -color[f]
                    stack.append(other)
                elif color[other] != -color[f]:
                    return None
    dart_color = {d: color[face_of[d]] for d in face_of}
    return BipolarSubgraph(dual_graph=g, delta=delta, dart_color=dart_color,
                           edge_orig=dict(edge_orig))


def _dart_polarity(bp: BipolarSubgraph, d: int) -> int:
    """Polarity of the half-edge of a non-delta dart at a delta vertex: the
    color of the induced-face corner it sits in."""
    g = bp.dual_graph
    v = g.vertex_of[d]
    rot = g.rotations[v]
    i = rot.index(d)
    for step in range(1, len(rot) + 1):
        nxt = rot[(i + step) % len(rot)]
        if (nxt >> 1) in bp.delta:
            return bp.dart_color[nxt]
    raise EmbeddingError(f"dart {d} is not at a vertex of the subgraph")


def halfedge_polarity(bp: BipolarSubgraph, edge: int, vertex: int) -> int:
    """Polarity (+1/-1) of half-edge <edge, vertex> in the dual graph."""
    g = bp.dual_graph
    if (edge >> 0) in bp.delta:
        raise EmbeddingError("polarity is defined for non-subgraph edges")
    for d in (2 * edge, 2 * edge + 1):
        if g.vertex_of[d] == vertex:
            return _dart_polarity(bp, d)
    raise EmbeddingError(f"edge {edge} is not incident with vertex {vertex}")


def _delta_vertices(bp: BipolarSubgraph) -> set[int]:
    g = bp.dual_graph
    out = set()
    for e in bp.delta:
        out.add(g.vertex_of[2 * e])
        out.add(g.vertex_of[2 * e + 1])
    return out


def shortest_polarity_switching_ear(rs_or_bp, bp: BipolarSubgraph | None = None
                                    ) -> DartPath | None:
    """Shortest dual ear whose end half-edges have distinct polarities.

    BFS over the dual vertices off the subgraph, seeded by the positive
    half-edges and drained by the negative ones; a single edge with ends of
    opposite polarity is a length-one ear.
    """
    bp = bp if bp is not None else rs_or_bp
    g = bp.dual_graph
    on = _delta_vertices(bp)
    best: tuple[int, tuple] | None = None

    dist: dict[int, tuple[int, tuple]] = {}
    frontier: list[tuple[int, tuple]] = []
    for e in sorted(set(range(g.num_edges)) - set(bp.delta)):
        u, w = g.edge_endpoints(e)
        du, dw = 2 * e, 2 * e + 1
        if u in on and w in on:
            if _dart_polarity(bp, du) != _dart_polarity(bp, dw):
                cand = (1, (du,))
                if best is None or cand < best:
                    best = cand
        elif u in on and w not in on:
            if _dart_polarity(bp, du) > 0:
                if w not in dist or dist[w][0] > 1:
                    dist[w] = (1, (du,))
                    frontier.append((w, 1))
        elif w in on and u not in on:
            if _dart_polarity(bp, dw) > 0:
                if u not in dist or dist[u][0] > 1:
                    dist[u] = (1, (dw,))
                    frontier.append((u, 1))

    qi = 0
    while qi < len(frontier):
        v, dv = frontier[qi]
        qi += 1
        if dist[v][0] != dv:
            continue
        for d in g.rotations[v]:
            e = d >> 1
            if e in bp.delta:
                continue
            w = g.vertex_of[d ^ 1]
            if w in on:
                if _dart_polarity(bp, d ^ 1) < 0:
                    cand = (dv + 1, dist[v][1] + (d,))
                    if best is None or cand < best:
                        best = cand
            elif w not in dist:
                dist[w] = (dv + 1, dist[v][1] + (d,))
                frontier.append((w, dv + 1))
    if best is None:
        return None
    return DartPath(g, best[1])


def odd_leaping_walk_exists(rs_or_bp, bp: BipolarSubgraph | None = None) -> bool:
    """Is some closed dual walk odd-leaping the bipolar subgraph?

    Leap parity is additive over GF(2) on the cycle space, so it suffices to
    test the fundamental cycles of one spanning tree.
    """
    bp = bp if bp is not None else rs_or_bp
    g = bp.dual_graph
    n = g.num_vertices
    parent = [-1] * n
    depth = [-1] * n
    for root in range(n):
        if depth[root] != -1 or not g.rotations[root]:
            continue
        depth[root] = 0
        queue = [root]
        qi = 0
        tree = set()
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for d in g.rotations[v]:
                w = g.vertex_of[d ^ 1]
                if depth[w] == -1:
                    depth[w] = depth[v] + 1
                    parent[w] = d ^ 1
                    tree.add(d >> 1)
                    queue.append(w)
        for e in range(g.num_edges):
            if e in tree or depth[g.vertex_of[2 * e]] == -1:
                continue
            walk = homology._fundamental_cycle(g, parent, depth, 2 * e)
            if walk and _walk_leap_parity(bp, walk) == 1:
                return True
    return False


def _walk_leap_parity(bp: BipolarSubgraph, walk) -> int:
    """Parity of polarity leaps of a closed dual dart walk."""
    g = bp.dual_graph
    on = _delta_vertices(bp)
    n = len(walk)
    in_delta = [(d >> 1) in bp.delta for d in walk]
    if all(in_delta):
        return 0
    parity = 0
    # rotate so position 0 starts a non-delta dart
    s = next(i for i in range(n) if not in_delta[i])
    seq = [walk[(s + i) % n] for i in range(n)]
    flags = [in_delta[(s + i) % n] for i in range(n)]
    i = 0
    while i < n:
        if flags[i]:
            i += 1
            continue
        # d = seq[i] is off the subgraph; look at the junction after it
        j = (i + 1) % n
        run = []
        while flags[j % n] and j < i + n:
            run.append(seq[j % n])
            j += 1
        nxt = seq[j % n]
        v_in = g.vertex_of[seq[i] ^ 1]
        v_out = g.vertex_of[nxt]
        if run:
            pol_in = _dart_polarity(bp, seq[i] ^ 1)
            pol_out = _dart_polarity(bp, nxt)
            if pol_in != pol_out:
                parity ^= 1
        else:
            if v_in in on:
                pol_in = _dart_polarity(bp, seq[i] ^ 1)
                pol_out = _dart_polarity(bp, nxt)
                if pol_in != pol_out:
                    parity ^= 1
        i = j if run else i + 1
    return parity


# -- the cut step ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CutStepOutcome:
    terminal: bool
    witness: tuple[EmbCycle, EmbCycle]        # (alpha, beta) in the dual graph
    h: int                                    # switching distance before
    dual_graph: RotationSystem | None = None  # after the cut (non-terminal)
    bp: BipolarSubgraph | None = None
    h_after: int | None = None
    alpha_edges_orig: tuple[int, ...] | None = None


def _stretch_witness(g: RotationSystem, cycle_cap: int):
    res = homology.stretch(g, "exact", cycle_cap=cycle_cap)
    a, b = res.witness
    if a.length > b.length:
        a, b = b, a
    return a, b, res.value


def cut_step(bp: BipolarSubgraph, h: int,
             cycle_cap: int = homology.DEFAULT_CYCLE_CAP) -> CutStepOutcome:
    """One iteration: cut through the short cycle of a dual stretch witness
    unless the long one already reaches the switching distance.

    Non-terminal outcomes carry the cut dual graph, the inherited bipolar
    coloring, and the recomputed switching distance (at least
    h - floor(len(alpha)/2)).
    """
    g = bp.dual_graph
    alpha, beta, _ = _stretch_witness(g, cycle_cap)
    if beta.length >= h:
        return CutStepOutcome(terminal=True, witness=(alpha, beta), h=h)
    if alpha.edges() == bp.delta:
        return CutStepOutcome(terminal=True, witness=(alpha, beta), h=h)

    res = cut_through(g, alpha)
    cut = res.cut
    new_delta = frozenset(res.edge_map_inv[e] for e in bp.delta - alpha.edges())
    if not new_delta:
        return CutStepOutcome(terminal=True, witness=(alpha, beta), h=h)
    # inherited colors: every surviving induced face keeps the color its
    # darts carried (consistent because alpha carries no switching ear when
    # len(beta) < h)
    old_color = {}
    for d, c in bp.dart_color.items():
        e = d >> 1
        if e in alpha.edges():
            continue
        old_color[2 * res.edge_map_inv[e] + (d & 1)] = c
    faces = _induced_faces(cut, new_delta)
    dart_color = {}
    for walk in faces:
        colors = {old_color[d] for d in walk if d in old_color}
        if len(colors) != 1:
            raise CutStepError("inherited coloring is inconsistent")
        c = colors.pop()
        for d in walk:
            dart_color[d] = c
    new_orig = {res.edge_map_inv[e]: o for e, o in bp.edge_orig.items()
                if e in res.edge_map_inv}
    bp1 = BipolarSubgraph(dual_graph=cut, delta=new_delta,
                          dart_color=dart_color, edge_orig=new_orig)
    bp1.check()
    if not odd_leaping_walk_exists(bp1):
        raise CutStepError("odd-leaping walk vanished after the cut")
    ear = shortest_polarity_switching_ear(bp1)
    if ear is None:
        raise CutStepError("no switching ear after the cut")
    h1 = ear.length
    if h1 < h - alpha.length // 2:
        raise CutStepError(
            f"switching distance fell too far: {h1} < {h} - {alpha.length // 2}")
    alpha_orig = tuple(bp.edge_orig[e] for e in alpha.edge_walk())
    return CutStepOutcome(terminal=False, witness=(alpha, beta), h=h,
                          dual_graph=cut, bp=bp1, h_after=h1,
                          alpha_edges_orig=alpha_orig)


@dataclass(frozen=True, eq=False)
class HighStretchResult:
    subgraph: RotationSystem          # the primal embedding of the subgraph
    genus_prime: int
    edges_orig: tuple[int, ...]       # its edges in original ids
    k: int                            # ewn* of the input
    l: int                            # its best switching-ear length
    ewn_star: int                     # recomputed on the subgraph
    ewn_bound: int                    # 2^(g'-g) * k, rounded up
    stretch_value: int                # exact dual stretch of the subgraph
    stretch_bound: int                # 2^(2g'-2g) * k * l, rounded up
    steps: tuple[CutStepOutcome, ...]

    def to_json(self) -> dict:
        return {
            "g_prime": self.genus_prime,
            "k": self.k,
            "l": self.l,
            "ewn_star": self.ewn_star,
            "ewn_bound": self.ewn_bound,
            "stretch": self.stretch_value,
            "stretch_bound": self.stretch_bound,
            "steps": [
                {
                    "terminal": s.terminal,
                    "alpha_len": s.witness[0].length,
                    "beta_len": s.witness[1].length,
                    "h": s.h,
                }
                for s in self.steps
            ],
        }


def find_high_stretch_subgraph(rs: RotationSystem,
                               cycle_cap: int = homology.DEFAULT_CYCLE_CAP
                               ) -> HighStretchResult:
    """Iterate the cut step from the densest short dual cycle until the
    stretch witness is long, certifying ewn* >= 2^(g'-g) k and dual stretch
    >= 2^(2g'-2g) k l on the remaining subgraph."""
    g0 = rs.genus
    if g0 < 1:
        raise CutStepError("positive genus required")
    dual = rs.dual()
    k = homology.ewn(dual)
    if k < 2 ** g0:
        raise CutStepError(
            f"density too low: dual width {k} below 2^genus = {2 ** g0}")
    best = None
    for c in homology.shortest_nonseparating_cycles(dual):
        ear = homology.shortest_switching_ear(dual, c)
        key = (-ear.length, c.canonical_key())
        if best is None or key < best[0]:
            best = (key, c, ear)
    _, delta0, ear0 = best
    l = ear0.length

    bp = _color_in(dual, delta0.edges(), {e: e for e in range(dual.num_edges)})
    assert bp is not None, "a cycle is always bipolar"
    pol_ear = shortest_polarity_switching_ear(bp)
    assert pol_ear is not None and pol_ear.length == l, \
        "polarity ear of a cycle must match its switching ear"
    h = l

    steps: list[CutStepOutcome] = []
    severed: list[tuple[int, ...]] = []
    for _ in range(g0):
        out = cut_step(bp, h, cycle_cap=cycle_cap)
        steps.append(out)
        if out.terminal:
            break
        bp = out.bp
        h = out.h_after
        severed.append(out.alpha_edges_orig)
    else:
        raise CutStepError("cut step failed to reach a terminal state")
    if not steps[-1].terminal:
        raise CutStepError("iteration exceeded the genus budget")

    i = len(steps) - 1
    g_prime = g0 - i

    # materialize the primal subgraph by cutting along the severed loops
    current = rs
    to_local = {e: e for e in range(rs.num_edges)}
    for edge_walk in severed:
        gamma = EmbCycle.from_edges(current, [to_local[e] for e in edge_walk],
                                    dual=True)
        res = cut_along(current, gamma)
        current = res.cut
        to_local = {o: res.edge_map_inv[loc] for o, loc in to_local.items()
                    if loc in res.edge_map_inv}
    sub = current
    if sub.genus != g_prime:
        raise CutStepError("subgraph genus mismatch after the cuts")

    ewn_star = homology.ewn(sub.dual())
    ewn_bound = -(-k // (2 ** i))
    if ewn_star < ewn_bound:
        raise CutStepError(f"dual width bound violated: {ewn_star} < {ewn_bound}")
    sres = homology.stretch(sub.dual(), "exact", cycle_cap=cycle_cap)
    stretch_bound = -(-(k * l) // (4 ** i))
    if sres.value < stretch_bound:
        raise CutStepError(
            f"stretch bound violated: {sres.value} < {stretch_bound}")
    edges_orig = tuple(sorted(to_local))
    return HighStretchResult(
        subgraph=sub, genus_prime=g_prime, edges_orig=edges_orig,
        k=k, l=l, ewn_star=ewn_star, ewn_bound=ewn_bound,
        stretch_value=sres.value, stretch_bound=stretch_bound,
        steps=tuple(steps))

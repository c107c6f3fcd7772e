"""Toroidal grid minors with self-verifying certificates.

Two families of pairwise disjoint, pairwise homotopic cycles that cross each
other essentially are merged into a grid minor: first the row family is
rerouted so no column excursion returns to the row it left (ear reroute),
then zigzags are shortcut through the neighboring row (rank drops by two per
step), and finally multiply-winding cycles are unwound to single windings.
Branch sets are the row/column intersections fattened along the connecting
arcs, so adjacent branch sets share an edge and the certificate can be
checked by itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .embedding import DartPath, EmbCycle, EmbeddingError, RotationSystem
from . import homology
from .surgery import cut_along, cut_through


class GridMinorError(EmbeddingError):
    pass


class MergeGuardError(GridMinorError):
    """An improvement phase failed to make progress; carries a dump."""


# -- cycle families -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CycleFamily:
    cycles: tuple[EmbCycle, ...]
    homotopy_witness: EmbCycle          # the dual cycle the family follows
    pairwise_disjoint: bool

    def __len__(self) -> int:
        return len(self.cycles)


def _pairwise_disjoint(cycles) -> bool:
    seen: set[int] = set()
    for c in cycles:
        vs = set(c.vertices())
        if vs & seen:
            return False
        seen |= vs
    return True


def _min_vertex_curve(h: RotationSystem, a1: int, a2: int):
    """Fewest-vertex curve between two faces: BFS over faces where a step
    slips through a vertex from one of its corners to another."""
    corners_at: dict[int, list[int]] = {v: [] for v in range(h.num_vertices)}
    for d in range(2 * h.num_edges):
        corners_at[h.vertex_of[d]].append(d)
    parent: dict[int, tuple] = {a1: None}
    frontier = [a1]
    while frontier and a2 not in parent:
        nxt = []
        for f in sorted(frontier):
            for v in sorted({h.vertex_of[d] for d in h.faces[f]}):
                ins = sorted(d for d in corners_at[v] if h.face_of[d] == f)
                outs = sorted(corners_at[v])
                for c_in in ins[:1]:
                    for c_out in outs:
                        g = h.face_of[c_out]
                        if g not in parent:
                            parent[g] = (f, v, c_in, c_out)
                            nxt.append(g)
        frontier = nxt
    if a2 not in parent:
        raise GridMinorError("rims are not connected through the cylinder")
    hops = []
    f = a2
    while parent[f] is not None:
        fprev, v, c_in, c_out = parent[f]
        hops.append((v, c_in, c_out))
        f = fprev
    hops.reverse()
    return hops


def _vertex_disjoint_paths(h: RotationSystem, hops):
    """Unit-vertex-capacity max flow between the two copies of each curve
    vertex after cutting the cylinder open along the curve.  Returns one dart
    walk per hop, each closing into a cycle at its curve vertex."""
    split_arc: dict[int, tuple[int, set, set]] = {}
    for i, (v, c_in, c_out) in enumerate(hops):
        rot = list(h.rotations[v])
        gi, go = rot.index(c_in), rot.index(c_out)
        if gi == go:
            raise GridMinorError("degenerate curve passage")
        seq = rot[gi:] + rot[:gi]
        cut = seq.index(c_out)
        arc1, arc2 = set(seq[:cut]), set(seq[cut:])
        split_arc[v] = (i, arc1, arc2)

    def node(d: int):
        v = h.vertex_of[d]
        if v in split_arc:
            i, arc1, _ = split_arc[v]
            return ("s", i, 1 if d in arc1 else 2)
        return ("n", v)

    nodes = {("n", v) for v in range(h.num_vertices) if v not in split_arc}
    for i in range(len(hops)):
        nodes.add(("s", i, 1))
        nodes.add(("s", i, 2))
    # arcs between vertex-split in/out nodes
    adj: dict[tuple, list] = {}

    def add_arc(u, w, cap, dart):
        arc = [u, w, cap, dart, None]
        back = [w, u, 0, None, arc]
        arc[4] = back
        adj.setdefault(u, []).append(arc)
        adj.setdefault(w, []).append(back)
        return arc

    for n in sorted(nodes):
        add_arc(("i",) + n, ("o",) + n, 1, None)
    for e in range(h.num_edges):
        d, md = 2 * e, 2 * e + 1
        u, w = node(d), node(md)
        add_arc(("o",) + u, ("i",) + w, 1, d)
        add_arc(("o",) + w, ("i",) + u, 1, md)
    S, T = ("src",), ("snk",)
    for i in range(len(hops)):
        add_arc(S, ("i", "s", i, 1), 1, None)
        add_arc(("o", "s", i, 2), T, 1, None)

    def bfs():
        pred = {S: None}
        queue = [S]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            if u == T:
                break
            for arc in adj.get(u, []):
                if arc[2] > 0 and arc[1] not in pred:
                    pred[arc[1]] = arc
                    queue.append(arc[1])
        if T not in pred:
            return False
        u = T
        while u != S:
            arc = pred[u]
            arc[2] -= 1
            arc[4][2] += 1
            u = arc[0]
        return True

    flow = 0
    while bfs():
        flow += 1
    if flow != len(hops):
        raise GridMinorError(
            f"flow {flow} does not match curve crossings {len(hops)}")

    # path decomposition: follow saturated arcs
    walks = []
    for i in range(len(hops)):
        darts: list[int] = []
        u = ("i", "s", i, 1)
        ends_at = None
        while True:
            u = ("o",) + u[1:]
            out = None
            for arc in adj.get(u, []):
                if arc[3] is not None and arc[4][2] > 0 and arc[2] == 0:
                    out = arc
                    break
                if arc[1] == T and arc[4][2] > 0 and arc[2] == 0:
                    out = arc
                    break
            assert out is not None, "flow decomposition failed"
            out[4][2] -= 1
            out[2] += 1
            if out[1] == T:
                ends_at = u
                break
            darts.append(out[3])
            u = out[1]
        assert ends_at[1:] == ("s", i, 2), \
            "path did not return to its own curve vertex"
        walks.append(darts)
    return walks


def disjoint_cycles_along(rs: RotationSystem, alpha: EmbCycle) -> CycleFamily:
    """Largest family of pairwise disjoint cycles homotopic to a dual loop.

    The torus is cut along the loop, a fewest-vertex curve joins the two rims,
    and unit-capacity max flow across the cut-open cylinder yields the
    cycles (Menger).  The family size is at least the switching-ear length
    over floor(max_degree / 2).
    """
    if rs.genus != 1:
        raise GridMinorError("cycle families along a loop need a torus embedding")
    if not alpha.dual:
        alpha = alpha.as_dual_of(rs)
    ca = cut_along(rs, alpha)
    if ca.a1 is None or ca.a2 is None:
        raise GridMinorError("cut along the loop left no usable rims")
    h = ca.cut
    hops = _min_vertex_curve(h, ca.a1, ca.a2)
    walks = _vertex_disjoint_paths(h, hops)
    cycles = []
    for darts in walks:
        lifted = tuple(ca.lift_dart(d) for d in darts)
        cycles.append(EmbCycle(rs, lifted))
    cycles.sort(key=lambda c: c.canonical_key())
    fam = CycleFamily(tuple(cycles), alpha, _pairwise_disjoint(cycles))
    assert fam.pairwise_disjoint
    return fam


def is_basis_pair(rs: RotationSystem, c: EmbCycle, d: EmbCycle) -> bool:
    """Odd leap parity certifies that no powers of the two cycles are
    homotopic (sufficient on the torus)."""
    if rs.genus != 1:
        raise GridMinorError("basis test is for torus embeddings")
    return homology.leap_report(rs, c, d).leap_count % 2 == 1


# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridMinorCertificate:
    p: int
    q: int
    branch_sets: dict            # (i, j) -> frozenset of vertex ids
    connector_edges: dict        # ((i, j), (i', j')) -> edge id

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "branch_sets": [sorted(self.branch_sets[(i, j)])
                            for i in range(self.p) for j in range(self.q)],
            "connectors": sorted(self.connector_edges.values()),
        }


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    problems: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(rs: RotationSystem, cert: GridMinorCertificate) -> VerificationReport:
    """Branch sets must be disjoint, connected, and adjacent exactly as the
    toroidal grid requires (an edge of the host between the two sets)."""
    problems = []
    p, q = cert.p, cert.q
    if p < 3 or q < 3:
        problems.append(f"grid dimensions ({p},{q}) below 3")
    sets = cert.branch_sets
    if sorted(sets) != [(i, j) for i in range(p) for j in range(q)]:
        problems.append("branch set index grid is incomplete")
        return VerificationReport(False, tuple(problems))
    seen: dict[int, tuple] = {}
    adjacency: dict[int, set] = {v: set() for v in range(rs.num_vertices)}
    for e in range(rs.num_edges):
        u, w = rs.edge_endpoints(e)
        adjacency[u].add(w)
        adjacency[w].add(u)
    for key, vs in sets.items():
        if not vs:
            problems.append(f"branch set {key} is empty")
            continue
        for v in vs:
            if not (0 <= v < rs.num_vertices):
                problems.append(f"branch set {key} has bad vertex {v}")
            elif v in seen:
                problems.append(f"branch sets {seen[v]} and {key} overlap at {v}")
            seen[v] = key
        # connectivity
        vs = set(vs)
        stack = [min(vs)]
        reached = {min(vs)}
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w in vs and w not in reached:
                    reached.add(w)
                    stack.append(w)
        if reached != vs:
            problems.append(f"branch set {key} is disconnected")
    if problems:
        return VerificationReport(False, tuple(problems))

    edge_between = {}
    for e in range(rs.num_edges):
        u, w = rs.edge_endpoints(e)
        ku, kw = seen.get(u), seen.get(w)
        if ku is not None and kw is not None and ku != kw:
            edge_between[frozenset((ku, kw))] = e
    for i in range(p):
        for j in range(q):
            for other in (((i + 1) % p, j), (i, (j + 1) % q)):
                if frozenset(((i, j), other)) not in edge_between:
                    problems.append(
                        f"no edge between branch sets {(i, j)} and {other}")
    return VerificationReport(not problems, tuple(problems))


# -- merging two families into a grid --------------------------------------------


def _order_c_family(rs: RotationSystem, cfam) -> list[EmbCycle]:
    """Cyclic order of the disjoint homotopic cycles around the torus."""
    base = cfam[0]
    res = cut_through(rs, base)
    cut = res.cut
    order = [(0, 0)]
    for idx, c in enumerate(cfam[1:], start=1):
        darts = tuple(res.push_dart(d) for d in c.darts)
        cc = EmbCycle(cut, darts)
        sides = homology._side_faces(cut, cc)
        c1_faces = {cut.face_of[d] for d in cut.rotations[res.c1]}
        side0 = sides[0] if (c1_faces & sides[0]) else sides[1]
        # count other cycles on the c1 side
        inside = 0
        for jdx, other in enumerate(cfam[1:], start=1):
            if jdx == idx:
                continue
            f = cut.face_of[res.push_dart(other.darts[0])]
            if f in side0:
                inside += 1
        order.append((inside + 1, idx))
    order.sort()
    return [cfam[i] for _, i in order]


def _walk_levels(rs: RotationSystem, walk, level_of) -> list:
    """Runs of consecutive walk vertices on the same family cycle.

    Returns [(level, start, stop)] with positions cyclic; ``stop`` is the
    position whose dart leaves the run.
    """
    n = len(walk)
    levels = [level_of.get(rs.vertex_of[d]) for d in walk]
    if all(l is None for l in levels):
        return []
    runs = []
    s = 0
    while levels[s] is not None and levels[(s - 1) % n] == levels[s]:
        s = (s - 1) % n
        if s == 0:
            break
    start = s
    pos = start
    for _ in range(n):
        l = levels[pos]
        if l is not None:
            end = pos
            while levels[(end + 1) % n] == l and ((end + 1) % n) != start:
                end = (end + 1) % n
                if end == pos:
                    break
            runs.append((l, pos, end))
            pos = (end + 1) % n
        else:
            pos = (pos + 1) % n
        if pos == start:
            break
    # deduplicate wrap artifacts
    out = []
    seen = set()
    for r in runs:
        if r[1] not in seen:
            out.append(r)
            seen.add(r[1])
    return out


def _runs_of(rs, walk, level_of):
    """Component sequence of a closed dart walk against the family levels."""
    n = len(walk)
    levels = [level_of.get(rs.vertex_of[d]) for d in walk]
    if all(l is not None and l == levels[0] for l in levels):
        raise MergeGuardError("walk collapsed into a family cycle")
    # rotate to start right after a None->level boundary
    s = 0
    for i in range(n):
        if levels[i] is not None and levels[i - 1] != levels[i]:
            s = i
            break
    runs = []
    i = 0
    while i < n:
        pos = (s + i) % n
        l = levels[pos]
        if l is None:
            i += 1
            continue
        j = i
        while j + 1 < n and levels[(s + j + 1) % n] == l:
            j += 1
        runs.append((l, (s + i) % n, (s + j) % n))
        i = j + 1
    return runs


def _subwalk(walk, start, stop):
    """Darts of the cyclic walk from position start to stop inclusive."""
    n = len(walk)
    out = []
    i = start
    while True:
        out.append(walk[i])
        if i == stop:
            break
        i = (i + 1) % n
    return out


def _cycle_arcs(cycle: EmbCycle, u: int, w: int):
    """The two dart arcs of a cycle from vertex u to vertex w."""
    rs = cycle.graph()
    darts = cycle.darts
    n = len(darts)
    pos = {rs.vertex_of[d]: i for i, d in enumerate(darts)}
    iu, iw = pos[u], pos[w]
    if u == w:
        return ((), ())
    fwd = []
    i = iu
    while i != iw:
        fwd.append(darts[i])
        i = (i + 1) % n
    bwd = []
    i = iw
    while i != iu:
        bwd.append(darts[i])
        i = (i + 1) % n
    bwd = [d ^ 1 for d in reversed(bwd)]   # reoriented u -> w
    return (tuple(fwd), tuple(bwd))


def _c_free_region(rs, x_cycle: EmbCycle, cfam_edges) -> int | None:
    """Face count of the side of a separating cycle containing no family
    edges, or None if no such side exists."""
    if not homology.is_separating(rs, x_cycle):
        return None
    own = x_cycle.edges()
    best = None
    for side in homology._side_faces(rs, x_cycle):
        clean = True
        for e in cfam_edges:
            if e in own:
                continue
            if rs.face_of[2 * e] in side and rs.face_of[2 * e + 1] in side:
                clean = False
                break
        if clean:
            sz = len(side)
            if best is None or sz < best:
                best = sz
    return best


def merge_families(rs: RotationSystem, cfam: CycleFamily,
                   dfam: CycleFamily, max_rounds: int = 10_000) -> GridMinorCertificate:
    """Merge two disjoint homotopic families into a toroidal grid minor.

    The leading pair must cross (odd leap parity is the clean certificate;
    an even positive crossing number still works because the final
    certificate is verified independently).
    """
    if rs.genus != 1:
        raise GridMinorError("family merge runs on torus embeddings")
    p, q = len(cfam), len(dfam)
    if p < 3 or q < 3:
        raise GridMinorError("families must both have at least 3 cycles")
    if not (_pairwise_disjoint(cfam.cycles) and _pairwise_disjoint(dfam.cycles)):
        raise GridMinorError("families must be internally disjoint")
    if homology.leap_report(rs, cfam.cycles[0], dfam.cycles[0]).leap_count == 0:
        raise GridMinorError("leading pair does not cross; not a basis pair")

    cs = _order_c_family(rs, list(cfam.cycles))
    dwalks = [list(c.darts) for c in dfam.cycles]

    def level_map():
        lm = {}
        for i, c in enumerate(cs):
            for v in c.vertices():
                lm[v] = i
        return lm

    def c_edges():
        es = set()
        for c in cs:
            es |= c.edges()
        return es

    def d_edges():
        es = set()
        for w in dwalks:
            es |= {d >> 1 for d in w}
        return es

    # phase 1: no excursion of the d-union may return to the row it left
    for _ in range(max_rounds):
        lm = level_map()
        de = d_edges()
        potential = len(c_edges() - de)
        fired = False
        for w in dwalks:
            runs = _runs_of(rs, w, lm)
            m = len(runs)
            for t in range(m):
                l0, _, e0 = runs[t]
                l1, s1, _ = runs[(t + 1) % m]
                if l0 != l1:
                    continue
                ear = _subwalk(w, e0, (s1 - 1) % len(w))
                u = rs.vertex_of[ear[0]]
                v = rs.vertex_of[ear[-1] ^ 1]
                if u == v:
                    continue
                path = DartPath(rs, tuple(ear))
                if len(set(path.edges())) != len(path.edges()):
                    continue
                for arc in _cycle_arcs(cs[l0], v, u):
                    if not arc:
                        continue
                    try:
                        newc = EmbCycle(rs, tuple(ear) + arc)
                    except EmbeddingError:
                        continue
                    if homology.is_contractible(rs, newc):
                        continue
                    others = {vv for ii, cc in enumerate(cs) if ii != l0
                              for vv in cc.vertices()}
                    if set(newc.vertices()) & others:
                        continue
                    new_pot = len((c_edges() - cs[l0].edges() | newc.edges()) - de)
                    if new_pot >= potential:
                        continue
                    cs[l0] = newc
                    fired = True
                    break
                if fired:
                    break
            if fired:
                break
        if not fired:
            break
    else:
        raise MergeGuardError("ear-reroute phase failed to terminate")

    # phase 2: shortcut zigzags (level pattern a, b, a) through the shared row
    for _ in range(max_rounds):
        lm = level_map()
        ce = c_edges()
        candidates = []
        for widx, w in enumerate(dwalks):
            runs = _runs_of(rs, w, lm)
            m = len(runs)
            if m < 2:
                raise MergeGuardError("a crossing cycle lost all its levels")
            for t in range(m):
                l_prev, _, e_prev = runs[(t - 1) % m]
                l_mid = runs[t][0]
                l_next, s_next, _ = runs[(t + 1) % m]
                if l_prev != l_next or l_mid == l_prev or m == 2:
                    continue
                exc = _subwalk(w, e_prev, (s_next - 1) % len(w))
                u = rs.vertex_of[exc[0]]
                v = rs.vertex_of[exc[-1] ^ 1]
                if u == v or len({d >> 1 for d in exc}) != len(exc):
                    continue
                if len({rs.vertex_of[d] for d in exc}) != len(exc):
                    continue
                for arc in _cycle_arcs(cs[l_prev], u, v):
                    if not arc:
                        continue
                    try:
                        x = EmbCycle(rs, tuple(exc) + tuple(d ^ 1 for d in reversed(arc)))
                    except EmbeddingError:
                        continue
                    size = _c_free_region(rs, x, ce)
                    if size is None:
                        continue
                    candidates.append((size, widx, t, e_prev, s_next, arc))
        if not candidates:
            break
        size, widx, t, e_prev, s_next, arc = min(
            candidates, key=lambda c: (c[0], c[1], c[2]))
        w = dwalks[widx]
        # replace the excursion by the row arc
        n = len(w)
        keep = []
        i = s_next % n
        while i != e_prev:
            keep.append(w[i])
            i = (i + 1) % n
        dwalks[widx] = list(arc) + keep
    else:
        raise MergeGuardError("zigzag phase failed to terminate")

    # after the shortcuts every crossing cycle must be simple again
    dcycles = []
    for w in dwalks:
        dcycles.append(EmbCycle(rs, tuple(w)))
    if not _pairwise_disjoint(dcycles):
        raise MergeGuardError("crossing cycles overlap after the zigzag phase")

    lm = level_map()
    seqs = [[r[0] for r in _runs_of(rs, list(c.darts), lm)] for c in dcycles]
    for s in seqs:
        if len(s) % p != 0:
            raise MergeGuardError(f"intersection sequence {s} is not a "
                                  f"repetition of all {p} levels")
    t_wind = len(seqs[0]) // p
    if any(len(s) != t_wind * p for s in seqs):
        raise MergeGuardError("crossing cycles wind differently")

    if t_wind > 1:
        dcycles = _unwind(rs, cs, dcycles, lm)

    return _certificate_from_families(rs, cs, dcycles)


def _ears_of(rs, cycle: EmbCycle, level: int, lm) -> list[tuple[int, tuple]]:
    """Full-winding ears of a crossing cycle with both ends on one row:
    (start position, darts)."""
    w = list(cycle.darts)
    runs = _runs_of(rs, w, lm)
    m = len(runs)
    out = []
    for t in range(m):
        if runs[t][0] != level:
            continue
        e0 = runs[t][2]
        nxt = (t + 1) % m
        while runs[nxt][0] != level:
            nxt = (nxt + 1) % m
        s1 = runs[nxt][1]
        out.append((e0, tuple(_subwalk(w, e0, (s1 - 1) % len(w)))))
    return out


def _unwind(rs, cs, dcycles, lm):
    """Replace multiply-winding crossing cycles by once-winding ones built
    from one full-winding ear plus a row arc (bounded backtracking over the
    choice of ear and arc, verified by disjointness)."""
    p = len(cs)
    q = len(dcycles)

    options: list[list[EmbCycle]] = []
    for j, dc in enumerate(dcycles):
        cand = []
        for level in range(p):
            for _, ear in _ears_of(rs, dc, level, lm):
                u = rs.vertex_of[ear[0]]
                v = rs.vertex_of[ear[-1] ^ 1]
                arcs = _cycle_arcs(cs[level], v, u) if u != v else ((),)
                for arc in arcs:
                    try:
                        cand.append(EmbCycle(rs, tuple(ear) + tuple(arc)))
                    except EmbeddingError:
                        continue
        if not cand:
            raise MergeGuardError(f"no unwound candidate for crossing cycle {j}")
        options.append(cand)

    chosen: list[EmbCycle] = []

    def bt(j: int) -> bool:
        if j == q:
            return True
        used = set()
        for c in chosen:
            used |= set(c.vertices())
        for cand in options[j]:
            if set(cand.vertices()) & used:
                continue
            if len(_runs_of(rs, list(cand.darts), lm)) != p:
                continue
            chosen.append(cand)
            if bt(j + 1):
                return True
            chosen.pop()
        return False

    if not bt(0):
        raise MergeGuardError("unwinding search exhausted without a family")
    return chosen


def _certificate_from_families(rs, cs, dcycles) -> GridMinorCertificate:
    """Branch sets from the row/column intersections, fattened along the
    connecting arcs so adjacent sets share an edge."""
    p, q = len(cs), len(dcycles)
    lm = {}
    for i, c in enumerate(cs):
        for v in c.vertices():
            lm[v] = i

    # order the crossing cycles around row 0 and relabel
    comp_of: dict[tuple, list] = {}
    row0 = cs[0]
    pos0 = {v: i for i, v in enumerate(row0.vertices())}
    first_pos = []
    for j, dc in enumerate(dcycles):
        ps = [pos0[v] for v in dc.vertices() if v in pos0]
        if not ps:
            raise MergeGuardError(f"crossing cycle {j} misses row 0")
        first_pos.append((min(ps), j))
    first_pos.sort()
    dcycles = [dcycles[j] for _, j in first_pos]

    # intersection components per (row, crossing cycle), plus the crossing
    # arc from each component to the next row the cycle visits
    comps: dict[tuple, list[int]] = {}
    darc: dict[tuple, tuple] = {}        # (i, j) -> (darts, next_level)
    for j, dc in enumerate(dcycles):
        w = list(dc.darts)
        runs = _runs_of(rs, w, lm)
        if len(runs) != p:
            raise MergeGuardError("crossing cycle does not meet every row once")
        for t, (level, s, e) in enumerate(runs):
            verts = [rs.vertex_of[d] for d in _subwalk(w, s, e)]
            comps[(level, j)] = verts
            nxt = runs[(t + 1) % p]
            darc[(level, j)] = (_subwalk(w, e, (nxt[1] - 1) % len(w)), nxt[0])

    branch: dict[tuple, set] = {(i, j): set(comps[(i, j)])
                                for i in range(p) for j in range(q)}
    connectors: dict[tuple, int] = {}

    # fattening along the crossing arcs (row i to the row the cycle visits next)
    for (i, j), (arc, nxt_level) in darc.items():
        inner = [rs.vertex_of[d] for d in arc[1:]]
        half = len(inner) // 2
        for v in inner[:half]:
            branch[(i, j)].add(v)
        for v in inner[half:]:
            branch[(nxt_level, j)].add(v)
        connectors[((i, j), (nxt_level, j))] = arc[half] >> 1

    # fattening along each row between cyclically consecutive components
    for i in range(p):
        darts = cs[i].darts
        n = len(darts)
        vpos = {rs.vertex_of[d]: t for t, d in enumerate(darts)}
        spans = []
        for j in range(q):
            ps = {vpos[v] for v in comps[(i, j)]}
            start = next(t for t in ps if (t - 1) % n not in ps)
            end = next(t for t in ps if (t + 1) % n not in ps)
            spans.append((start, end, j))
        spans.sort()
        for a in range(q):
            _, ea, ja = spans[a]
            sb, _, jb = spans[(a + 1) % q]
            arc = []
            t = ea
            while t != sb:
                arc.append(darts[t])
                t = (t + 1) % n
            assert arc, "row components overlap"
            inner = [rs.vertex_of[d] for d in arc[1:]]
            half = len(inner) // 2
            for v in inner[:half]:
                branch[(i, ja)].add(v)
            for v in inner[half:]:
                branch[(i, jb)].add(v)
            connectors[((i, ja), (i, jb))] = arc[half] >> 1

    sets = {k: frozenset(v) for k, v in branch.items()}
    return GridMinorCertificate(p=p, q=q, branch_sets=sets,
                                connector_edges=connectors)


# -- the toroidal expanse pipeline and reports ------------------------------------


def _best_short_dual_cycle(rs: RotationSystem):
    """Among the shortest nonseparating dual cycles found, the one whose
    switching ear is longest (best-effort maximization)."""
    dual = rs.dual()
    cands = homology.shortest_nonseparating_cycles(dual)
    best = None
    for c in cands:
        ear = homology.shortest_switching_ear(dual, c)
        key = (-ear.length, c.canonical_key())
        if best is None or key < best[0]:
            best = (key, c, ear)
    _, c, ear = best
    return c, ear


def _loop_from_ear(rs: RotationSystem, alpha: EmbCycle, ear: DartPath) -> EmbCycle:
    """Dual loop made of a switching ear plus the shorter arc of the cycle."""
    dual = rs.dual()
    u, w = ear.endpoints()
    if u == w:
        return EmbCycle(rs, ear.darts, dual=True)
    arcs = sorted(_cycle_arcs(EmbCycle(dual, alpha.darts), w, u), key=len)
    for arc in arcs:
        try:
            return EmbCycle(rs, tuple(ear.darts) + tuple(arc), dual=True)
        except EmbeddingError:
            continue
    raise GridMinorError("switching ear does not close into a loop")


def toroidal_grid_minor(rs: RotationSystem) -> GridMinorCertificate:
    """Full torus pipeline: families along the best short dual loop and along
    its ear loop, merged and certified."""
    if rs.genus != 1:
        raise GridMinorError("grid extraction runs on torus embeddings; "
                             "reduce higher genus via the high-stretch subgraph")
    alpha, ear = _best_short_dual_cycle(rs)
    alpha = alpha.as_dual_of(rs)
    fam_c = disjoint_cycles_along(rs, alpha)
    beta = _loop_from_ear(rs, alpha, ear)
    fam_d = disjoint_cycles_along(rs, beta)
    cert = merge_families(rs, fam_c, fam_d)
    rep = verify_certificate(rs, cert)
    if not rep:
        raise GridMinorError(f"certificate failed verification: {rep.problems}")
    return cert


@dataclass(frozen=True)
class TexReport:
    k: int
    l: int
    delta: int
    grid: tuple[int, int] | None     # guaranteed grid size, if applicable
    grid_applicable: bool
    stretch_lower: int
    tex_from_stretch: Fraction | None
    tex_from_stretch_rule: str | None
    cr_floor: Fraction | None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "max_degree": self.delta,
            "grid": list(self.grid) if self.grid else None,
            "grid_applicable": self.grid_applicable,
            "stretch_lower": self.stretch_lower,
            "tex_from_stretch": (str(self.tex_from_stretch)
                                 if self.tex_from_stretch is not None else None),
            "tex_rule": self.tex_from_stretch_rule,
            "cr_floor": str(self.cr_floor) if self.cr_floor is not None else None,
        }


def tex_lower_bound(rs: RotationSystem) -> TexReport:
    """Toroidal-expanse floor from the dual widths.

    Reports the guaranteed grid dimensions
    ceil(l/floor(D/2)) x floor(2/3 * ceil(k/floor(D/2))) when the dual width
    k is at least 5*floor(D/2) (on the torus), the stretch-based floor
    (2/7) * floor(D/2)^-2 * Str* (times 4^(1-g) for genus g), and the chained
    crossing-number floor Tex/12.
    """
    g = rs.genus
    if g < 1:
        raise GridMinorError("expanse bounds need positive genus")
    alpha, ear = _best_short_dual_cycle(rs)
    k = alpha.length
    l = ear.length
    delta = rs.max_degree
    half = delta // 2
    applicable = g == 1 and k >= 5 * half
    grid = None
    if applicable:
        grid = (-(-l // half), (2 * -(-k // half)) // 3)
    lower = homology.stretch(rs.dual(), "bounds").interval[0]
    tex = None
    rule = None
    if g == 1 and k >= 5 * half:
        tex = Fraction(2, 7) * Fraction(1, half * half) * lower
        rule = "torus stretch floor"
    elif g >= 2 and k >= 5 * (2 ** (g - 1)) * half:
        tex = (Fraction(2, 7) * Fraction(4) ** (1 - g)
               * Fraction(1, half * half) * lower)
        rule = "iterated-cut stretch floor"
    cr = tex / 12 if tex is not None else None
    return TexReport(k=k, l=l, delta=delta, grid=grid, grid_applicable=applicable,
                     stretch_lower=lower, tex_from_stretch=tex,
                     tex_from_stretch_rule=rule, cr_floor=cr)

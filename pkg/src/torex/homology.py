"""Cycle search and embedding density parameters.

Separating/contractible tests work over GF(2): a simple cycle separates the
surface exactly when its edge vector lies in the span of the face boundary
vectors.  Shortest nonseparating (and noncontractible) cycles come from the
fundamental-cycle search over BFS trees rooted at every vertex, which is
correct for any cycle family closed under the 3-path condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .embedding import (DartPath, EmbCycle, EmbeddingError, RotationSystem,
                        vertex_face_incidence)


class GenusZeroError(EmbeddingError):
    """Raised when an operation needs a positive-genus embedding."""


class ExactStretchTooLarge(EmbeddingError):
    """Raised when exact stretch would enumerate more cycles than the cap."""


DEFAULT_CYCLE_CAP = 200_000


# -- GF(2) face space ---------------------------------------------------------


class _Gf2Span:
    """Row-echelon span of edge-subset vectors packed into Python ints."""

    def __init__(self):
        self.rows: dict[int, int] = {}  # pivot bit -> row

    def reduce(self, vec: int) -> int:
        while vec:
            piv = vec.bit_length() - 1
            row = self.rows.get(piv)
            if row is None:
                return vec
            vec ^= row
        return 0

    def add(self, vec: int) -> bool:
        vec = self.reduce(vec)
        if vec == 0:
            return False
        self.rows[vec.bit_length() - 1] = vec
        return True

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0


def _edge_vec(edges) -> int:
    v = 0
    for e in edges:
        v ^= 1 << e
    return v


_face_space_cache: dict[int, tuple[RotationSystem, _Gf2Span]] = {}


def _face_space(rs: RotationSystem) -> _Gf2Span:
    hit = _face_space_cache.get(id(rs))
    if hit is not None and hit[0] is rs:
        return hit[1]
    span = _Gf2Span()
    for walk in rs.faces:
        span.add(_edge_vec(d >> 1 for d in walk))
    _face_space_cache[id(rs)] = (rs, span)
    if len(_face_space_cache) > 4096:
        _face_space_cache.clear()
        _face_space_cache[id(rs)] = (rs, span)
    return span


def is_separating(rs: RotationSystem, cycle: EmbCycle) -> bool:
    """True iff the cycle separates the surface.

    Over GF(2) this is membership of the cycle's edge vector in the span of
    the face boundary vectors (a face vector omits edges that bound the face
    on both sides).
    """
    g = cycle.graph()
    return _face_space(g).contains(_edge_vec(cycle.edges()))


def _side_faces(rs: RotationSystem, cycle: EmbCycle) -> tuple[set[int], set[int]]:
    """Faces on the two sides of a separating cycle (dual components after
    deleting the dual edges crossing the cycle)."""
    g = cycle.graph()
    cut_edges = cycle.edges()
    parent = list(range(g.num_faces))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(g.num_edges):
        if e in cut_edges:
            continue
        a, b = find(g.face_of[2 * e]), find(g.face_of[2 * e + 1])
        if a != b:
            parent[a] = b
    comps: dict[int, set[int]] = {}
    for f in range(g.num_faces):
        comps.setdefault(find(f), set()).add(f)
    sides = list(comps.values())
    if len(sides) != 2:
        raise EmbeddingError(f"expected 2 sides, found {len(sides)}")
    return sides[0], sides[1]


def is_contractible(rs: RotationSystem, cycle: EmbCycle) -> bool:
    """True iff the cycle bounds a disc (one side has genus zero when capped)."""
    if not is_separating(rs, cycle):
        return False
    g = cycle.graph()
    cyc_vertices = set(cycle.vertices())
    cyc_edges = cycle.edges()
    for side in _side_faces(rs, cycle):
        verts = set(cyc_vertices)
        edges = set(cyc_edges)
        for e in range(g.num_edges):
            if e in cyc_edges:
                continue
            if g.face_of[2 * e] in side:
                edges.add(e)
                verts.add(g.vertex_of[2 * e])
                verts.add(g.vertex_of[2 * e + 1])
        euler = 2 - len(verts) + len(edges) - (len(side) + 1)
        if euler == 0:
            return True
    return False


# -- shortest nonseparating / noncontractible cycles --------------------------


def _fundamental_cycle(rs: RotationSystem, parent_dart: list[int],
                       depth: list[int], cdart: int) -> tuple[int, ...] | None:
    """Simple cycle through non-tree dart ``cdart``: tree paths to the lowest
    common ancestor of its two endpoints glued with the dart itself."""
    x = rs.vertex_of[cdart]
    y = rs.vertex_of[cdart ^ 1]
    if x == y:
        return (cdart,)
    up_x: list[int] = []   # darts walked upward from x (towards root)
    up_y: list[int] = []
    while x != y:
        if depth[x] >= depth[y]:
            d = parent_dart[x]
            up_x.append(d)
            x = rs.vertex_of[d ^ 1]
        else:
            d = parent_dart[y]
            up_y.append(d)
            y = rs.vertex_of[d ^ 1]
    walk = [d ^ 1 for d in reversed(up_x)]  # lca -> x
    walk.append(cdart)                       # x -> y
    walk.extend(up_y)                        # y -> lca
    return tuple(walk)


def _candidate_cycles(rs: RotationSystem):
    """Fundamental cycles of BFS trees rooted at every vertex (deterministic
    order).  Guaranteed to contain a shortest member of every cycle family
    satisfying the 3-path condition."""
    n = rs.num_vertices
    for root in range(n):
        if not rs.rotations[root]:
            continue
        parent_dart = [-1] * n
        depth = [-1] * n
        depth[root] = 0
        queue = [root]
        qi = 0
        tree_edges = set()
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for d in rs.rotations[v]:
                w = rs.vertex_of[d ^ 1]
                if depth[w] == -1:
                    depth[w] = depth[v] + 1
                    parent_dart[w] = d ^ 1  # dart from w back to v
                    tree_edges.add(d >> 1)
                    queue.append(w)
        for e in range(rs.num_edges):
            if e in tree_edges:
                continue
            if depth[rs.vertex_of[2 * e]] == -1:
                continue
            walk = _fundamental_cycle(rs, parent_dart, depth, 2 * e)
            if walk is not None:
                yield walk


def _walk_is_simple(rs: RotationSystem, walk: tuple[int, ...]) -> bool:
    verts = [rs.vertex_of[d] for d in walk]
    if len(set(verts)) != len(verts):
        return False
    edges = [d >> 1 for d in walk]
    return len(set(edges)) == len(edges)


def _shortest_in_family(rs: RotationSystem, keep) -> list[EmbCycle]:
    """All minimum-length cycles of a 3-path-condition family among the
    fundamental-cycle candidates, sorted by canonical key."""
    best_len: int | None = None
    found: dict[tuple[int, ...], EmbCycle] = {}
    for walk in _candidate_cycles(rs):
        k = len(walk)
        if best_len is not None and k > best_len:
            continue
        if not _walk_is_simple(rs, walk):
            continue
        cyc = EmbCycle(rs, walk)
        if not keep(cyc):
            continue
        if best_len is None or k < best_len:
            best_len = k
            found = {cyc.canonical_key(): cyc}
        else:
            found.setdefault(cyc.canonical_key(), cyc)
    return [found[k] for k in sorted(found)]


def shortest_nonseparating_cycles(rs: RotationSystem) -> list[EmbCycle]:
    if rs.genus == 0:
        raise GenusZeroError("no nonseparating cycle")
    out = _shortest_in_family(rs, lambda c: not is_separating(rs, c))
    assert out, "positive genus embedding must have a nonseparating cycle"
    return out


def shortest_nonseparating_cycle(rs: RotationSystem) -> EmbCycle:
    """Deterministic shortest nonseparating cycle (lexicographic tie-break)."""
    return shortest_nonseparating_cycles(rs)[0]


def shortest_noncontractible_cycle(rs: RotationSystem) -> EmbCycle:
    if rs.genus == 0:
        raise GenusZeroError("no noncontractible cycle")
    out = _shortest_in_family(rs, lambda c: not is_contractible(rs, c))
    assert out
    return out[0]


def ewn(rs: RotationSystem) -> int:
    """Nonseparating edge-width."""
    return shortest_nonseparating_cycle(rs).length


def ewn_dual(rs: RotationSystem) -> int:
    return ewn(rs.dual())


def ew(rs: RotationSystem) -> int:
    """Edge-width (shortest noncontractible cycle)."""
    return shortest_noncontractible_cycle(rs).length


def fw(rs: RotationSystem) -> int:
    """Face-width: half the edge-width of the vertex-face incidence graph."""
    w = ew(vertex_face_incidence(rs))
    assert w % 2 == 0
    return w // 2


def fwn(rs: RotationSystem) -> int:
    w = ewn(vertex_face_incidence(rs))
    assert w % 2 == 0
    return w // 2


# -- switching ears -----------------------------------------------------------


def shortest_switching_ear(rs: RotationSystem, cycle: EmbCycle) -> DartPath:
    """Shortest ear of a nonseparating cycle attaching on opposite sides.

    Computed in the graph cut through the cycle, where switching ears become
    exactly the paths between the two new vertices.
    """
    from .surgery import cut_through  # local import to avoid a module cycle

    res = cut_through(rs if not cycle.dual else rs.dual(),
                      EmbCycle(cycle.graph(), cycle.darts))
    cut = res.cut
    # BFS from c1 to c2 in the cut graph
    n = cut.num_vertices
    parent = [-1] * n
    parent[res.c1] = -2
    queue = [res.c1]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        if v == res.c2:
            break
        for d in cut.rotations[v]:
            w = cut.vertex_of[d ^ 1]
            if parent[w] == -1:
                parent[w] = d
                queue.append(w)
    if parent[res.c2] == -1:
        raise EmbeddingError("no switching ear: cycle sides are not connected")
    path_darts: list[int] = []
    v = res.c2
    while v != res.c1:
        d = parent[v]
        path_darts.append(d)
        v = cut.vertex_of[d]
    path_darts.reverse()
    lifted = tuple(res.lift_dart(d) for d in path_darts)
    return DartPath(cycle.host, lifted, cycle.dual)


# -- leaps ---------------------------------------------------------------------


@dataclass(frozen=True)
class LeapComponent:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    is_leap: bool


@dataclass(frozen=True)
class LeapReport:
    components: tuple[LeapComponent, ...]
    leap_count: int

    @property
    def leap_flags(self) -> tuple[bool, ...]:
        return tuple(c.is_leap for c in self.components)


def _neighborhood_rotation(rs: RotationSystem, comp_vertices: list[int],
                           comp_edges: set[int]) -> list[int]:
    """Cyclic order of the non-component darts around a path component,
    obtained by contracting the component's edges in a scratch rotation."""
    rot: dict[int, list[int]] = {v: list(rs.rotations[v]) for v in comp_vertices}
    vat: dict[int, int] = {}
    for v in comp_vertices:
        for d in rs.rotations[v]:
            vat[d] = v
    for e in sorted(comp_edges):
        d, md = 2 * e, 2 * e + 1
        u, w = vat[d], vat[md]
        assert u != w, "component contraction hit a loop"
        ru, rw = rot[u], rot[w]
        i = ru.index(d)
        j = rw.index(md)
        spliced = ru[:i] + rw[j + 1:] + rw[:j] + ru[i + 1:]
        rot[u] = spliced
        for dd in rw:
            vat[dd] = u
        del rot[w]
        for dd in spliced:
            vat[dd] = u
    (merged,) = rot.values()
    return merged


def leap_report(rs: RotationSystem, a: EmbCycle, b: EmbCycle) -> LeapReport:
    """Connected components of the intersection of two cycles, with a
    transversality flag for each (the four outgoing arcs must alternate
    around a small neighborhood of the component)."""
    g = a.graph()
    if b.graph() is not g:
        raise EmbeddingError("cycles live in different embeddings")
    if a.canonical_key() == b.canonical_key():
        raise EmbeddingError("leap report needs two distinct cycles")

    av = set(a.vertices())
    bv = set(b.vertices())
    shared_v = av & bv
    shared_e = set(a.edges()) & set(b.edges())
    if not shared_v:
        return LeapReport((), 0)

    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in shared_v}
    for e in shared_e:
        u, w = g.edge_endpoints(e)
        adj[u].append((w, e))
        adj[w].append((u, e))

    comps: list[tuple[list[int], set[int]]] = []
    seen: set[int] = set()
    for v0 in sorted(shared_v):
        if v0 in seen:
            continue
        cv, ce = [v0], set()
        seen.add(v0)
        stack = [v0]
        while stack:
            v = stack.pop()
            for w, e in adj[v]:
                ce.add(e)
                if w not in seen:
                    seen.add(w)
                    cv.append(w)
                    stack.append(w)
        comps.append((cv, ce))

    def exit_darts(cycle: EmbCycle, cverts: set[int], cedges: set[int]) -> list[int]:
        out = []
        for i, d in enumerate(cycle.darts):
            e = d >> 1
            if e in cedges:
                continue
            if cycle.graph().vertex_of[d] in cverts:
                out.append(d)
            if cycle.graph().vertex_of[d ^ 1] in cverts:
                out.append(d ^ 1)
        return out

    components = []
    count = 0
    for cv, ce in comps:
        ax = exit_darts(a, set(cv), ce)
        bx = exit_darts(b, set(cv), ce)
        assert len(ax) == 2 and len(bx) == 2, "component is not a path of both cycles"
        if ce:
            ring = _neighborhood_rotation(g, cv, ce)
        else:
            ring = list(g.rotations[cv[0]])
        pos = {d: i for i, d in enumerate(ring)}
        ia, ib = sorted(pos[d] for d in ax), sorted(pos[d] for d in bx)
        inside = sum(1 for i in ib if ia[0] < i < ia[1])
        is_leap = inside == 1
        count += is_leap
        components.append(LeapComponent(tuple(cv), tuple(sorted(ce)), is_leap))
    return LeapReport(tuple(components), count)


# -- stretch -------------------------------------------------------------------


@dataclass(frozen=True)
class StretchResult:
    mode: str                                   # "exact" | "bounds"
    value: int | None = None                    # exact product
    interval: tuple[int, int] | None = None     # [lower, upper]
    witness: tuple[EmbCycle, EmbCycle] | None = None


def _enumerate_simple_cycles(rs: RotationSystem, max_len: int,
                             cap: int) -> list[EmbCycle]:
    """All simple cycles of length <= max_len, each exactly once.

    Loops count as length-1 cycles and parallel edge pairs as length-2
    cycles.  Aborts with ExactStretchTooLarge beyond ``cap`` cycles.
    """
    out: list[EmbCycle] = []

    def emit(walk: tuple[int, ...]):
        out.append(EmbCycle(rs, walk))
        if len(out) > cap:
            raise ExactStretchTooLarge(
                f"instance too large for exact stretch (> {cap} cycles)")

    n = rs.num_vertices
    for e in range(rs.num_edges):
        if rs.vertex_of[2 * e] == rs.vertex_of[2 * e + 1]:
            emit((2 * e,))

    # DFS from each root; the root is the least vertex of the cycle and the
    # first edge id is smaller than the closing edge id (kills the reversal).
    for root in range(n):
        stack_darts: list[int] = []
        on_path = {root}

        def dfs(v: int):
            for d in rs.rotations[v]:
                e = d >> 1
                w = rs.vertex_of[d ^ 1]
                if w == root:
                    first = stack_darts[0] >> 1
                    if (e > first and len(stack_darts) + 1 <= max_len
                            and all((x >> 1) != e for x in stack_darts)):
                        emit(tuple(stack_darts) + (d,))
                    continue
                if w <= root or w in on_path:
                    continue
                if len(stack_darts) + 2 > max_len:
                    continue
                if any((x >> 1) == e for x in stack_darts):
                    continue
                stack_darts.append(d)
                on_path.add(w)
                dfs(w)
                on_path.remove(w)
                stack_darts.pop()

        if rs.rotations[root]:
            # length >= 2 cycles through root
            for d0 in rs.rotations[root]:
                w0 = rs.vertex_of[d0 ^ 1]
                if w0 <= root:
                    continue
                if 2 > max_len:
                    break
                stack_darts.append(d0)
                on_path.add(w0)
                dfs(w0)
                on_path.remove(w0)
                stack_darts.pop()
    return out


def _stretch_upper_bound(rs: RotationSystem) -> tuple[int, EmbCycle, DartPath]:
    """Certified upper bound len(C) * (ear + floor(len(C)/2)) minimized over
    the shortest nonseparating cycles found."""
    best = None
    for c in shortest_nonseparating_cycles(rs):
        ear = shortest_switching_ear(rs, c)
        ub = c.length * (ear.length + c.length // 2)
        if best is None or ub < best[0]:
            best = (ub, c, ear)
    assert best is not None
    return best


def stretch(rs: RotationSystem, mode: str = "exact",
            cycle_cap: int = DEFAULT_CYCLE_CAP) -> StretchResult:
    """Minimum of len(A)*len(B) over odd-leaping cycle pairs.

    Exact mode enumerates simple cycles up to a sound length cap (no
    odd-leaping pair with a smaller product can involve a longer cycle) and
    scans pairs in increasing product order.  Bounds mode returns
    [ewn^2, min len(C)*(ear + floor(len(C)/2))].
    """
    if rs.genus == 0:
        raise GenusZeroError("stretch needs positive genus")
    w = ewn(rs)
    ub, _, _ = _stretch_upper_bound(rs)
    if mode == "bounds":
        return StretchResult("bounds", interval=(w * w, ub))
    if mode != "exact":
        raise ValueError(f"unknown stretch mode: {mode!r}")

    max_len = ub // w
    cycles = _enumerate_simple_cycles(rs, max_len, cycle_cap)
    cycles.sort(key=lambda c: (c.length, c.canonical_key()))
    nonsep = [c for c in cycles if not is_separating(rs, c)]

    best: int | None = None
    best_pair: tuple[EmbCycle, EmbCycle] | None = None
    best_one_leap: tuple[EmbCycle, EmbCycle] | None = None
    for i, a in enumerate(nonsep):
        if best is not None and (a.length * a.length > best or
                                 (a.length * a.length == best
                                  and best_one_leap is not None)):
            break
        for b in nonsep[i + 1:]:
            prod = a.length * b.length
            if best is not None and prod >= best and best_one_leap is not None:
                break
            if best is not None and prod > best:
                break
            rep = leap_report(rs, a, b)
            if rep.leap_count % 2 == 1:
                if best is None or prod < best:
                    best = prod
                    best_pair = (a, b)
                    best_one_leap = (a, b) if rep.leap_count == 1 else None
                elif prod == best and best_one_leap is None and rep.leap_count == 1:
                    best_one_leap = (a, b)
    if best is None:
        raise EmbeddingError("no odd-leaping pair found (exact stretch)")
    assert best <= ub and best >= w * w
    witness = best_one_leap if best_one_leap is not None else best_pair
    return StretchResult("exact", value=best, witness=witness)


# -- toroidal grid crossing-number floor --------------------------------------


@dataclass(frozen=True)
class TexCrossingBound:
    value: int
    exact: bool


def crossing_lb_from_tex(p: int, q: int) -> TexCrossingBound:
    """Crossing-number floor for the p x q toroidal grid.

    Exact value (p-2)q when min(p,q) is 3, 4 or 5; otherwise the general
    lower bound ceil((p-2)q/2) with p the smaller dimension.
    """
    if p < 3 or q < 3:
        raise ValueError("toroidal grids need p, q >= 3")
    p, q = min(p, q), max(p, q)
    if p in (3, 4, 5):
        return TexCrossingBound((p - 2) * q, True)
    return TexCrossingBound(((p - 2) * q + 1) // 2, False)

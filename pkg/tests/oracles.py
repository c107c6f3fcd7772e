"""Independent brute-force reference implementations for the tests.

These deliberately avoid the code paths of the library: cycles come from a
plain adjacency DFS, the separating test splits the dual with union-find,
and transversality walks around the component neighborhood with an explicit
jump rule instead of contracting it.
"""

from __future__ import annotations

from torex.embedding import EmbCycle, RotationSystem


def all_simple_cycles(rs: RotationSystem, max_len: int | None = None):
    """Every simple cycle as a dart walk, exactly once (loops included)."""
    out = []
    m = rs.num_edges
    for e in range(m):
        if rs.vertex_of[2 * e] == rs.vertex_of[2 * e + 1]:
            out.append((2 * e,))
    adj: dict[int, list[int]] = {v: [] for v in range(rs.num_vertices)}
    for d in range(2 * m):
        adj[rs.vertex_of[d]].append(d)

    def extend(walk, visited):
        if max_len is not None and len(walk) >= max_len:
            close_only = True
        else:
            close_only = False
        v = rs.vertex_of[walk[-1] ^ 1]
        root = rs.vertex_of[walk[0]]
        used = {d >> 1 for d in walk}
        for d in adj[v]:
            e = d >> 1
            if e in used:
                continue
            w = rs.vertex_of[d ^ 1]
            if w == root:
                if len(walk) + 1 >= 2 and e > (walk[0] >> 1):
                    out.append(tuple(walk) + (d,))
                continue
            if close_only or w in visited or w < root:
                continue
            extend(walk + [d], visited | {w})

    for root in range(rs.num_vertices):
        for d in adj[root]:
            w = rs.vertex_of[d ^ 1]
            if w > root:
                extend([d], {root, w})
    return [EmbCycle(rs, walk) for walk in out]


def is_separating(rs: RotationSystem, cycle: EmbCycle) -> bool:
    """Union-find on faces, merging across every edge off the cycle: the
    cycle separates iff two face classes remain."""
    g = cycle.graph()
    cut = cycle.edges()
    parent = list(range(g.num_faces))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(g.num_edges):
        if e in cut:
            continue
        a, b = find(g.face_of[2 * e]), find(g.face_of[2 * e + 1])
        if a != b:
            parent[a] = b
    classes = {find(f) for f in range(g.num_faces)}
    return len(classes) == 2


def leap_count(rs: RotationSystem, a: EmbCycle, b: EmbCycle) -> int:
    """Transversal components of the intersection via a neighborhood walk."""
    g = a.graph()
    av, bv = set(a.vertices()), set(b.vertices())
    shared_v = av & bv
    shared_e = a.edges() & b.edges()
    if not shared_v:
        return 0
    # components over shared vertices joined by shared edges
    comp: dict[int, int] = {}
    cid = 0
    for v0 in sorted(shared_v):
        if v0 in comp:
            continue
        stack = [v0]
        comp[v0] = cid
        while stack:
            v = stack.pop()
            for e in shared_e:
                x, y = g.edge_endpoints(e)
                for s, t in ((x, y), (y, x)):
                    if s == v and t not in comp:
                        comp[t] = cid
                        stack.append(t)
        cid += 1

    comp_edges: dict[int, set] = {i: set() for i in range(cid)}
    for e in shared_e:
        comp_edges[comp[g.vertex_of[2 * e]]].add(e)

    def ring(c: int) -> list[int]:
        """Cyclic order of non-component darts around component c, walking
        sigma with a jump across component edges."""
        verts = [v for v in comp if comp[v] == c]
        edges = comp_edges[c]
        start = None
        for v in verts:
            for d in g.rotations[v]:
                if (d >> 1) not in edges:
                    start = d
                    break
            if start is not None:
                break
        assert start is not None
        order = []
        d = start
        while True:
            order.append(d)
            nxt = g.sigma[d]
            while (nxt >> 1) in edges:
                nxt = g.sigma[nxt ^ 1]
            d = nxt
            if d == start:
                break
        return order

    def exits(cycle: EmbCycle, c: int) -> list[int]:
        verts = {v for v in comp if comp[v] == c}
        edges = comp_edges[c]
        out = []
        for d in cycle.darts:
            if (d >> 1) in edges:
                continue
            if cycle.graph().vertex_of[d] in verts:
                out.append(d)
            if cycle.graph().vertex_of[d ^ 1] in verts:
                out.append(d ^ 1)
        return out

    leaps = 0
    for c in range(cid):
        r = ring(c)
        pos = {d: i for i, d in enumerate(r)}
        ia = sorted(pos[d] for d in exits(a, c))
        ib = sorted(pos[d] for d in exits(b, c))
        inside = sum(1 for i in ib if ia[0] < i < ia[1])
        leaps += inside == 1
    return leaps


def stretch_by_enumeration(rs: RotationSystem):
    """(min product over one-leap pairs, min over odd-leap pairs)."""
    cycles = [c for c in all_simple_cycles(rs) if not is_separating(rs, c)]
    best_one = best_odd = None
    for i, a in enumerate(cycles):
        for b in cycles[i + 1:]:
            k = leap_count(rs, a, b)
            if k % 2 == 0:
                continue
            prod = a.length * b.length
            if best_odd is None or prod < best_odd:
                best_odd = prod
            if k == 1 and (best_one is None or prod < best_one):
                best_one = prod
    return best_one, best_odd


def shortest_nonseparating_length(rs: RotationSystem) -> int | None:
    best = None
    for c in all_simple_cycles(rs, max_len=best):
        if best is not None and c.length >= best:
            continue
        if not is_separating(rs, c):
            best = c.length
    return best

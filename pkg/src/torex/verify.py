"""Property suites behind `torex verify --lemma NAME`.

Each check returns None when the property holds on the given embedding, or a
human-readable counterexample description.  Checks that need hypotheses the
input does not meet raise PreconditionError (the CLI turns that into exit
code 2).
"""

from __future__ import annotations

from itertools import combinations

from .embedding import EmbCycle, RotationSystem
from . import homology
from .planarizer import draw, heir_faces, insertion_routes
from .surgery import cut_through, good_planarizing_sequence


class PreconditionError(Exception):
    """The embedding does not satisfy the hypothesis of the property."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise PreconditionError(message)


def check_kl2(rs: RotationSystem) -> str | None:
    """Switching ears of width-attaining nonseparating cycles are at least
    half the nonseparating edge-width."""
    _require(rs.genus >= 1, "genus >= 1 required")
    w = None
    for c in homology.shortest_nonseparating_cycles(rs):
        w = c.length
        ear = homology.shortest_switching_ear(rs, c)
        if 2 * ear.length < w:
            return (f"cycle {sorted(c.edges())} of length {w} has a switching "
                    f"ear of length {ear.length} < {w}/2")
    return None


def check_dew2(rs: RotationSystem) -> str | None:
    """Cutting through a shortest nonseparating cycle at genus >= 2 at most
    halves the nonseparating edge-width."""
    _require(rs.genus >= 2, "genus >= 2 required")
    w = homology.ewn(rs)
    c = homology.shortest_nonseparating_cycle(rs)
    cut = cut_through(rs, c).cut
    w2 = homology.ewn(cut)
    if 2 * w2 < w:
        return f"width dropped from {w} to {w2} after cutting {sorted(c.edges())}"
    return None


def check_str4(rs: RotationSystem, cycle_cap: int = homology.DEFAULT_CYCLE_CAP
               ) -> str | None:
    """Cutting through a shortest nonseparating cycle at genus >= 2 at most
    quarters the stretch."""
    _require(rs.genus >= 2, "genus >= 2 required")
    s = homology.stretch(rs, "exact", cycle_cap=cycle_cap).value
    c = homology.shortest_nonseparating_cycle(rs)
    cut = cut_through(rs, c).cut
    s2 = homology.stretch(cut, "exact", cycle_cap=cycle_cap).value
    if 4 * s2 < s:
        return f"stretch dropped from {s} to {s2} after cutting {sorted(c.edges())}"
    return None


def check_cutdew(rs: RotationSystem, cycle_cap: int = homology.DEFAULT_CYCLE_CAP
                 ) -> str | None:
    """Cutting through the short cycle of a stretch witness at genus >= 2 at
    most halves the nonseparating edge-width."""
    _require(rs.genus >= 2, "genus >= 2 required")
    res = homology.stretch(rs, "exact", cycle_cap=cycle_cap)
    a, b = res.witness
    if a.length > b.length:
        a, b = b, a
    w = homology.ewn(rs)
    cut = cut_through(rs, a).cut
    w2 = homology.ewn(cut)
    if 2 * w2 < w:
        return (f"width dropped from {w} to {w2} after cutting the witness "
                f"cycle {sorted(a.edges())}")
    return None


def check_odd_stretch(rs: RotationSystem,
                      cycle_cap: int = homology.DEFAULT_CYCLE_CAP) -> str | None:
    """The minimum length product over one-leaping pairs equals the minimum
    over odd-leaping pairs (full enumeration)."""
    _require(rs.genus >= 1, "genus >= 1 required")
    ub, _, _ = homology._stretch_upper_bound(rs)
    w = homology.ewn(rs)
    cycles = homology._enumerate_simple_cycles(rs, ub // w, cycle_cap)
    cycles = [c for c in cycles if not homology.is_separating(rs, c)]
    cycles.sort(key=lambda c: (c.length, c.canonical_key()))
    best_odd = best_one = None
    for i, a in enumerate(cycles):
        for b in cycles[i + 1:]:
            prod = a.length * b.length
            k = homology.leap_report(rs, a, b).leap_count
            if k % 2 == 1:
                if best_odd is None or prod < best_odd:
                    best_odd = prod
                if k == 1 and (best_one is None or prod < best_one):
                    best_one = prod
    if best_odd != best_one:
        return f"odd-pair minimum {best_odd} != one-leap minimum {best_one}"
    if best_odd is not None:
        exact = homology.stretch(rs, "exact", cycle_cap=cycle_cap).value
        if exact != best_odd:
            return f"stretch {exact} != brute-force odd minimum {best_odd}"
    return None


def check_thstr(rs: RotationSystem, cycle_cap: int = homology.DEFAULT_CYCLE_CAP
                ) -> str | None:
    """Exact stretch is at most len(C) * (ear + floor(len(C)/2)) and at most
    2 * len(C) * ear for the width-attaining cycles."""
    _require(rs.genus >= 1, "genus >= 1 required")
    s = homology.stretch(rs, "exact", cycle_cap=cycle_cap).value
    for c in homology.shortest_nonseparating_cycles(rs):
        ear = homology.shortest_switching_ear(rs, c)
        ub = c.length * (ear.length + c.length // 2)
        if s > ub:
            return (f"stretch {s} exceeds {c.length}*({ear.length}+"
                    f"{c.length // 2}) = {ub}")
        if ub > 2 * c.length * ear.length:
            return "intermediate bound exceeds twice the cycle-ear product"
    return None


def _theta_subgraphs(rs: RotationSystem, cap: int = 200):
    """Some theta subgraphs: triples of internally disjoint paths between two
    vertices, enumerated with caps (plus parallel-edge triples)."""
    found = 0
    n = rs.num_vertices
    for s in range(n):
        for t in range(s + 1, n):
            paths: list[tuple[int, ...]] = []
            budget = [400]

            def dfs(v, walk, visited):
                if budget[0] <= 0 or len(paths) > 40:
                    return
                budget[0] -= 1
                for d in rs.rotations[v]:
                    w = rs.vertex_of[d ^ 1]
                    e = d >> 1
                    if any((x >> 1) == e for x in walk):
                        continue
                    if w == t:
                        paths.append(tuple(walk) + (d,))
                        continue
                    if w in visited or w == s:
                        continue
                    dfs(w, walk + [d], visited | {w})

            dfs(s, [], set())
            for trio in combinations(paths, 3):
                inner = []
                ok = True
                used_edges: set[int] = set()
                for p in trio:
                    es = {d >> 1 for d in p}
                    if es & used_edges:
                        ok = False
                        break
                    used_edges |= es
                    iv = {rs.vertex_of[d] for d in p[1:]}
                    inner.append(iv)
                if not ok:
                    continue
                for a, b in combinations(inner, 2):
                    if a & b:
                        ok = False
                        break
                if ok:
                    yield s, t, trio
                    found += 1
                    if found >= cap:
                        return


def check_3pp(rs: RotationSystem, theta_cap: int = 60) -> str | None:
    """In any theta subgraph, the number of its three cycles odd-leaping a
    fixed cycle is 0 or 2."""
    _require(rs.genus >= 1, "genus >= 1 required")
    fixed = homology.shortest_nonseparating_cycle(rs)
    checked = 0
    for s, t, trio in _theta_subgraphs(rs, cap=theta_cap):
        cycles = []
        try:
            for i, j in ((0, 1), (0, 2), (1, 2)):
                darts = trio[i] + tuple(d ^ 1 for d in reversed(trio[j]))
                cycles.append(EmbCycle(rs, darts))
        except Exception:
            continue
        odd = 0
        skip = False
        for c in cycles:
            if c.canonical_key() == fixed.canonical_key():
                skip = True
                break
            if homology.leap_report(rs, fixed, c).leap_count % 2 == 1:
                odd += 1
        if skip:
            continue
        checked += 1
        if odd not in (0, 2):
            return (f"theta between {s} and {t} has {odd} cycles odd-leaping "
                    f"{sorted(fixed.edges())}")
    return None


def check_cl_sumell(rs: RotationSystem) -> str | None:
    """Every reinserted edge severed at step i crosses at most
    l_i + ... + l_g base edges, and the heir-face groups have at most
    2^(g-i) members."""
    _require(rs.genus >= 1, "genus >= 1 required")
    seq = good_planarizing_sequence(rs)
    heirs = heir_faces(seq)
    routes = insertion_routes(seq, heirs)
    g = rs.genus
    ls = seq.ls
    for e, h in heirs.per_edge.items():
        budget = sum(ls[h.step - 1:])
        if len(routes[e].crossed) > budget:
            return (f"edge {e} (severed at step {h.step}) routed across "
                    f"{len(routes[e].crossed)} > {budget} base edges")
    for side in ("a", "b"):
        for step, size in heirs.group_sizes(side).items():
            if size > 2 ** (g - step):
                return (f"{side}-side heir group of step {step} has {size} "
                        f"faces > 2^{g - step}")
    return None


def check_uppercr(rs: RotationSystem) -> str | None:
    """The emitted drawing respects its certified crossing bound."""
    _require(rs.genus >= 1, "genus >= 1 required")
    d = draw(rs)
    if d.total_crossings > d.bound:
        return f"{d.total_crossings} crossings exceed the bound {d.bound}"
    return None


CHECKS = {
    "kl2": check_kl2,
    "dew2": check_dew2,
    "str4": check_str4,
    "cutdew": check_cutdew,
    "odd-stretch": check_odd_stretch,
    "thstr": check_thstr,
    "3pp": check_3pp,
    "cl-sumell": check_cl_sumell,
    "uppercr": check_uppercr,
}

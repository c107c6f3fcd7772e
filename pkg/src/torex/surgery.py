"""Surface surgery on rotation systems.

Cutting through a primal cycle contracts the cycle to a pinch point and
splits it into two vertices (left darts / right darts); cutting along a dual
cycle removes the crossed edges and caps the two holes.  Both drop the genus
by one for nonseparating cycles.  Results carry edge-id maps and corner
provenance so subgraphs can be lifted back and faces can be tracked through a
whole planarizing sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedding import (DartPath, EmbCycle, EmbeddingError, RotationSystem,
                        mate)
from . import homology


class _Rotations:
    """Mutable scratch rotations for surgery (dart ids stay the original)."""

    def __init__(self, rs: RotationSystem):
        self.rot: dict[int, list[int]] = {
            v: list(rs.rotations[v]) for v in range(rs.num_vertices)}
        self.vat: dict[int, int] = {d: rs.vertex_of[d]
                                    for d in range(2 * rs.num_edges)}
        self.next_vertex = rs.num_vertices

    def contract(self, d: int) -> int:
        """Contract the (non-loop) edge of dart ``d``; the head's rotation is
        spliced into the tail's at the dart position.  Returns the surviving
        vertex."""
        u = self.vat[d]
        w = self.vat[d ^ 1]
        assert u != w, "cannot contract a loop"
        ru, rw = self.rot[u], self.rot[w]
        i = ru.index(d)
        j = rw.index(d ^ 1)
        merged = ru[:i] + rw[j + 1:] + rw[:j] + ru[i + 1:]
        self.rot[u] = merged
        del self.rot[w]
        for dd in merged:
            self.vat[dd] = u
        del self.vat[d]
        del self.vat[d ^ 1]
        return u

    def split_at_loop(self, d: int) -> tuple[int, int]:
        """Remove the loop of dart ``d`` and split its vertex into two: one
        keeping the darts ccw-between ``d`` and ``mate(d)``, the other the
        rest.  Returns (left_vertex, right_vertex)."""
        v = self.vat[d]
        rot = self.rot[v]
        i = rot.index(d)
        seq = rot[i + 1:] + rot[:i]          # everything after d, cyclically
        cut = seq.index(d ^ 1)
        left = seq[:cut]
        right = seq[cut + 1:]
        del self.rot[v]
        del self.vat[d]
        del self.vat[d ^ 1]
        c1 = v
        c2 = self.next_vertex
        self.next_vertex += 1
        self.rot[c1] = left
        self.rot[c2] = right
        for dd in left:
            self.vat[dd] = c1
        for dd in right:
            self.vat[dd] = c2
        return c1, c2

    def delete_edge(self, e: int) -> None:
        for d in (2 * e, 2 * e + 1):
            v = self.vat.pop(d)
            self.rot[v].remove(d)

    def build(self) -> tuple[RotationSystem, dict[int, int], dict[int, int],
                             dict[int, int]]:
        """Freeze into a RotationSystem with contiguous vertex/edge ids.

        Returns (rs, vertex_map old->new, edge_map new->old,
        edge_map_inv old->new).
        """
        old_vertices = sorted(self.rot)
        vmap = {v: i for i, v in enumerate(old_vertices)}
        old_edges = sorted({d >> 1 for d in self.vat})
        emap_inv = {e: i for i, e in enumerate(old_edges)}
        emap = {i: e for e, i in emap_inv.items()}

        def new_dart(d: int) -> int:
            return 2 * emap_inv[d >> 1] + (d & 1)

        rotations = [[new_dart(d) for d in self.rot[v]] for v in old_vertices]
        rs = RotationSystem(rotations, check=False)
        return rs, vmap, emap, emap_inv


@dataclass(frozen=True, eq=False)
class CutThroughResult:
    """Outcome of cutting through a primal nonseparating cycle."""

    original: RotationSystem
    cycle: EmbCycle
    cut: RotationSystem
    c1: int
    c2: int
    vertex_map: dict          # old vertex -> new vertex (cycle vertices absent)
    edge_map: dict            # new edge id -> old edge id
    edge_map_inv: dict        # old edge id -> new edge id
    severed: frozenset

    def lift_edges(self, edges) -> frozenset:
        return frozenset(self.edge_map[e] for e in edges)

    def lift_dart(self, d: int) -> int:
        return 2 * self.edge_map[d >> 1] + (d & 1)

    def push_dart(self, d: int) -> int:
        return 2 * self.edge_map_inv[d >> 1] + (d & 1)


def cut_through(rs: RotationSystem, cycle: EmbCycle) -> CutThroughResult:
    """Cut the embedding through a simple nonseparating primal cycle.

    The cycle's vertices collapse and split into two new vertices ``c1``
    (darts on the left of the oriented cycle) and ``c2`` (right).  Degree-0
    new vertices are kept so vertex accounting stays exact.
    """
    if cycle.dual or cycle.graph() is not rs:
        raise EmbeddingError("cut_through needs a primal cycle of this embedding")
    if homology.is_separating(rs, cycle):
        raise EmbeddingError("cannot cut through a separating cycle")

    scratch = _Rotations(rs)
    darts = cycle.darts
    for d in darts[:-1]:
        scratch.contract(d)
    c1_old, c2_old = scratch.split_at_loop(darts[-1])
    cut, vmap, emap, emap_inv = scratch.build()
    vertex_map = {v: vmap[v] for v in vmap if v < rs.num_vertices
                  and v not in (c1_old, c2_old)}
    res = CutThroughResult(
        original=rs, cycle=cycle, cut=cut,
        c1=vmap[c1_old], c2=vmap[c2_old],
        vertex_map=vertex_map, edge_map=emap, edge_map_inv=emap_inv,
        severed=cycle.edges())
    return res


@dataclass(frozen=True, eq=False)
class CutAlongResult:
    """Outcome of cutting along a dual nonseparating cycle.

    Vertices survive unchanged; the crossed edges are severed and the two
    holes are capped, giving faces ``a1``/``a2`` of the cut.  ``corner_map``
    records, per severed half-edge (old dart), the surviving dart of the cut
    whose corner the half-edge occupied; None means the whole vertex lost its
    darts and ``parked`` gives the chain by which its containing face can be
    resolved.
    """

    original: RotationSystem
    gamma: EmbCycle
    cut: RotationSystem
    a1: int | None
    a2: int | None
    severed: frozenset
    edge_map: dict
    edge_map_inv: dict
    corner_map: dict          # old severed dart -> new dart (corner ref) | None
    parked: dict              # old severed dart -> old dart whose corner holds it

    def lift_edges(self, edges) -> frozenset:
        return frozenset(self.edge_map[e] for e in edges)

    def lift_dart(self, d: int) -> int:
        return 2 * self.edge_map[d >> 1] + (d & 1)

    def push_dart(self, d: int) -> int:
        return 2 * self.edge_map_inv[d >> 1] + (d & 1)


def _next_surviving(rs: RotationSystem, d: int, severed: frozenset) -> int | None:
    """First non-severed dart at the same vertex strictly after ``d`` in ccw
    order (cyclically); None if the vertex keeps no darts."""
    rot = rs.rotations[rs.vertex_of[d]]
    i = rot.index(d)
    k = len(rot)
    for step in range(1, k + 1):
        cand = rot[(i + step) % k]
        if (cand >> 1) not in severed:
            return cand
    return None


def cut_along(rs: RotationSystem, gamma: EmbCycle) -> CutAlongResult:
    """Cut the embedding along a simple nonseparating dual cycle.

    Implemented natively on the primal: the crossed edges are removed from the
    rotations, which merges the faces the dual cycle visits and splits them
    into the two rim faces.
    """
    if gamma.dual:
        if gamma.host is not rs:
            raise EmbeddingError("dual cycle belongs to a different embedding")
        gdual = EmbCycle(rs.dual(), gamma.darts)
    else:
        if gamma.graph() is not rs.dual():
            raise EmbeddingError("cut_along needs a dual cycle of this embedding")
        gdual = gamma
    if homology.is_separating(rs.dual(), gdual):
        raise EmbeddingError("cannot cut along a separating dual cycle")

    severed = gdual.edges()
    scratch = _Rotations(rs)
    for e in sorted(severed):
        scratch.delete_edge(e)
    cut, vmap, emap, emap_inv = scratch.build()
    assert all(vmap[v] == v for v in vmap), "cut_along must keep vertex ids"

    # identify the two new faces: every face not visited by gamma survives
    # with the same dart set
    visited = set()
    for d in gdual.darts:
        visited.add(rs.dual().vertex_of[d])
        visited.add(rs.dual().vertex_of[d ^ 1])
    surviving_sets = {frozenset(rs.faces[f]) - {2 * e + b for e in severed
                                                for b in (0, 1)}
                      for f in range(rs.num_faces) if f not in visited}
    new_faces = []
    for f, walk in enumerate(cut.faces):
        old_set = frozenset(2 * emap[d >> 1] + (d & 1) for d in walk)
        if old_set not in surviving_sets:
            new_faces.append(f)
    if len(new_faces) > 2:
        raise EmbeddingError("cut along dual cycle produced too many new faces")
    a1 = new_faces[0] if new_faces else None
    a2 = new_faces[1] if len(new_faces) > 1 else None

    corner_map: dict[int, int | None] = {}
    parked: dict[int, int] = {}
    for e in sorted(severed):
        for d in (2 * e, 2 * e + 1):
            nxt = _next_surviving(rs, d, severed)
            if nxt is None:
                corner_map[d] = None
                parked[d] = d ^ 1
            else:
                corner_map[d] = 2 * emap_inv[nxt >> 1] + (nxt & 1)
    return CutAlongResult(
        original=rs, gamma=gamma if gamma.dual else EmbCycle(rs, gamma.darts, True),
        cut=cut, a1=a1, a2=a2, severed=severed,
        edge_map=emap, edge_map_inv=emap_inv,
        corner_map=corner_map, parked=parked)


def lift(result, edges) -> frozenset:
    """Reinterpret a set of cut-graph edges in the original embedding."""
    return result.lift_edges(edges)


# -- good planarizing sequences ----------------------------------------------


@dataclass(frozen=True, eq=False)
class PlanarizingStep:
    gamma: EmbCycle               # dual cycle of the previous embedding
    k: int                        # its length
    l: int                        # shortest switching-ear length in the dual
    cut_result: CutAlongResult
    severed_orig: tuple[int, ...]  # severed edges in original edge ids

    @property
    def embedding(self) -> RotationSystem:
        return self.cut_result.cut


@dataclass(frozen=True, eq=False)
class PlanarizingSequence:
    """Dual good planarizing sequence: iterated cuts along deterministic
    shortest nonseparating dual cycles, down to the plane."""

    original: RotationSystem
    steps: tuple[PlanarizingStep, ...]

    @property
    def final(self) -> RotationSystem:
        return self.steps[-1].embedding if self.steps else self.original

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(s.k for s in self.steps)

    @property
    def ls(self) -> tuple[int, ...]:
        return tuple(s.l for s in self.steps)

    def edge_to_orig(self, level: int, e: int) -> int:
        """Edge id of level-``level`` embedding back in the original."""
        for i in range(level - 1, -1, -1):
            e = self.steps[i].cut_result.edge_map[e]
        return e

    def to_json(self, rot_prefix: str | None = None) -> dict:
        """JSON document; with ``rot_prefix`` the intermediate embeddings are
        referenced as '<prefix>.<i>.rot' files (written by the caller)."""
        doc = {"steps": []}
        for i, s in enumerate(self.steps, start=1):
            entry = {
                "k": s.k,
                "l": s.l,
                "gamma": [self.edge_to_orig(i - 1, e) for e in s.gamma.edge_walk()],
                "severed": sorted(s.severed_orig),
            }
            if rot_prefix is not None:
                entry["embedding"] = f"{rot_prefix}.{i}.rot"
            doc["steps"].append(entry)
        return doc


def good_planarizing_sequence(rs: RotationSystem) -> PlanarizingSequence:
    """Cut along a deterministic shortest nonseparating dual cycle, genus
    many times; records cycle lengths and dual switching-ear lengths."""
    steps: list[PlanarizingStep] = []
    current = rs
    g = rs.genus
    # running map: current edge id -> original edge id
    to_orig = {e: e for e in range(rs.num_edges)}
    for i in range(g):
        dual = current.dual()
        gamma_in_dual = homology.shortest_nonseparating_cycle(dual)
        ear = homology.shortest_switching_ear(dual, gamma_in_dual)
        gamma = gamma_in_dual.as_dual_of(current)
        res = cut_along(current, gamma)
        severed_orig = tuple(sorted(to_orig[e] for e in res.severed))
        steps.append(PlanarizingStep(
            gamma=gamma, k=gamma.length, l=ear.length,
            cut_result=res, severed_orig=severed_orig))
        to_orig = {new: to_orig[old] for new, old in res.edge_map.items()}
        current = res.cut
        assert current.genus == g - i - 1
    return PlanarizingSequence(original=rs, steps=tuple(steps))

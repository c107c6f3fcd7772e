"""Rotation systems: cellular embeddings of multigraphs on orientable surfaces.

A rotation system stores, for every vertex, the counterclockwise cyclic order
of the darts (half-edges) leaving it.  Edge ``e`` owns darts ``2e`` and
``2e + 1``; the mate involution is ``d ^ 1``.  Faces are the orbits of the
permutation ``phi(d) = sigma(mate(d))`` and the genus comes out of Euler's
formula.  Everything here is immutable after construction, so instances can be
shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class EmbeddingError(ValueError):
    """Invalid rotation-system data (bad darts, disconnected, ...)."""


class FormatError(EmbeddingError):
    """Malformed embedding file; carries the offending line/column."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.col = col


def mate(dart: int) -> int:
    """The opposite dart of the same edge."""
    return dart ^ 1


def edge_of(dart: int) -> int:
    return dart >> 1


class RotationSystem:
    """A connected multigraph cellularly embedded on an orientable surface.

    ``rotations[v]`` is the ccw cyclic dart order around vertex ``v``.  Loops
    and multiple edges are fine; vertices with no darts are tolerated (they
    arise from surgery and simply float inside a face; they do not count
    toward the Euler characteristic).
    """

    __slots__ = ("rotations", "num_vertices", "num_edges", "sigma", "vertex_of",
                 "__dict__")

    def __init__(self, rotations: Sequence[Sequence[int]], *, check: bool = True):
        self.rotations: tuple[tuple[int, ...], ...] = tuple(
            tuple(r) for r in rotations)
        self.num_vertices = len(self.rotations)
        total = sum(len(r) for r in self.rotations)
        if total % 2 != 0:
            raise EmbeddingError(f"odd number of darts ({total})")
        self.num_edges = total // 2

        sigma = [-1] * total
        vertex_of = [-1] * total
        for v, rot in enumerate(self.rotations):
            for i, d in enumerate(rot):
                if not (0 <= d < total):
                    raise EmbeddingError(f"dart {d} out of range 0..{total - 1}")
                if vertex_of[d] != -1:
                    raise EmbeddingError(f"duplicate dart {d}")
                vertex_of[d] = v
                sigma[d] = rot[(i + 1) % len(rot)]
        if check:
            missing = [d for d in range(total) if vertex_of[d] == -1]
            if missing:
                raise EmbeddingError(f"dart missing: {missing[0]}")
        self.sigma: tuple[int, ...] = tuple(sigma)
        self.vertex_of: tuple[int, ...] = tuple(vertex_of)
        if check:
            self._check_connected()

    # -- basic structure ---------------------------------------------------

    def _check_connected(self) -> None:
        total = 2 * self.num_edges
        if total == 0:
            if self.num_vertices > 1:
                raise EmbeddingError("disconnected embedding (isolated vertices only)")
            return
        seen = [False] * total
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            d = stack.pop()
            for nxt in (self.sigma[d], d ^ 1):
                if not seen[nxt]:
                    seen[nxt] = True
                    count += 1
                    stack.append(nxt)
        if count != total:
            raise EmbeddingError("disconnected embedding")

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        return self.vertex_of[2 * e], self.vertex_of[2 * e + 1]

    def darts_at(self, v: int) -> tuple[int, ...]:
        return self.rotations[v]

    def phi(self, d: int) -> int:
        """Next dart along the face walk."""
        return self.sigma[d ^ 1]

    # -- derived embedding data (cached; instances are immutable) ----------

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Face boundary walks: orbits of phi, each starting at its least dart."""
        total = 2 * self.num_edges
        seen = [False] * total
        out = []
        for start in range(total):
            if seen[start]:
                continue
            walk = []
            d = start
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = self.sigma[d ^ 1]
            out.append(tuple(walk))
        return tuple(out)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        fo = [-1] * (2 * self.num_edges)
        for i, walk in enumerate(self.faces):
            for d in walk:
                fo[d] = i
        return tuple(fo)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @cached_property
    def genus(self) -> int:
        if self.num_edges == 0:
            return 0
        cellular_vertices = sum(1 for r in self.rotations if r)
        euler = 2 - cellular_vertices + self.num_edges - self.num_faces
        if euler % 2 != 0 or euler < 0:
            raise EmbeddingError(f"inconsistent Euler count {euler}")
        return euler // 2

    @cached_property
    def max_degree(self) -> int:
        return max((len(r) for r in self.rotations), default=0)

    def dual(self) -> "RotationSystem":
        """Topological dual: vertices are the faces, edge ids are shared.

        The dual rotation at a face is its boundary walk, so taking the dual
        twice gives back the same rotation system up to renaming vertices.
        """
        return self._dual_cached

    @cached_property
    def _dual_cached(self) -> "RotationSystem":
        return RotationSystem(self.faces, check=False)

    # -- corners ------------------------------------------------------------

    def face_at_corner(self, d: int) -> int:
        """Face touching the corner just before dart ``d`` around its vertex.

        The corner between consecutive darts ``(a, d)`` with ``sigma(a) = d``
        belongs to exactly one face walk, the one containing ``d`` right after
        traversing ``mate(a)``; that face is ``face_of[d]``.
        """
        return self.face_of[d]

    # -- serialization ------------------------------------------------------

    def serialize(self) -> str:
        lines = ["torex-embedding v1",
                 f"V {self.num_vertices}",
                 f"E {self.num_edges}"]
        for v in range(self.num_vertices):
            darts = " ".join(str(d) for d in self.rotations[v])
            lines.append(f"R {v}:" + (" " + darts if darts else ""))
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (f"RotationSystem(V={self.num_vertices}, E={self.num_edges}, "
                f"F={self.num_faces}, genus={self.genus})")


def parse(text: str) -> RotationSystem:
    """Parse the ``torex-embedding v1`` text format.

    Rejects duplicate or missing darts and disconnected embeddings; errors
    carry the offending line number.
    """
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((lineno, stripped))
    if not rows:
        raise FormatError("empty embedding file")
    lineno, header = rows[0]
    if header != "torex-embedding v1":
        raise FormatError("expected header 'torex-embedding v1'", lineno, 1)
    if len(rows) < 3:
        raise FormatError("missing V/E declarations", lineno)

    def parse_count(row: tuple[int, str], key: str) -> int:
        ln, s = row
        parts = s.split()
        if len(parts) != 2 or parts[0] != key:
            raise FormatError(f"expected '{key} <n>'", ln, 1)
        try:
            n = int(parts[1])
        except ValueError:
            raise FormatError(f"bad integer in '{key}' line", ln, len(key) + 2)
        if n < 0:
            raise FormatError(f"negative count in '{key}' line", ln, len(key) + 2)
        return n

    n = parse_count(rows[1], "V")
    m = parse_count(rows[2], "E")
    if n == 0:
        raise FormatError("need at least one vertex", rows[1][0])

    rot_rows = rows[3:]
    if len(rot_rows) != n:
        raise FormatError(f"expected {n} rotation lines, found {len(rot_rows)}",
                          rot_rows[-1][0] if rot_rows else rows[2][0])
    rotations: list[list[int] | None] = [None] * n
    for ln, s in rot_rows:
        if not s.startswith("R "):
            raise FormatError("expected 'R <vertex>: <darts>'", ln, 1)
        head, _, tail = s[2:].partition(":")
        try:
            v = int(head.strip())
        except ValueError:
            raise FormatError("bad vertex id in rotation line", ln, 3)
        if not (0 <= v < n):
            raise FormatError(f"vertex id {v} out of range", ln, 3)
        if rotations[v] is not None:
            raise FormatError(f"duplicate rotation line for vertex {v}", ln, 1)
        darts = []
        for tok in tail.split():
            try:
                d = int(tok)
            except ValueError:
                raise FormatError(f"bad dart '{tok}'", ln)
            if not (0 <= d < 2 * m):
                raise FormatError(f"dart {d} out of range 0..{2 * m - 1}", ln)
            darts.append(d)
        rotations[v] = darts

    seen: dict[int, int] = {}
    for v, rot in enumerate(rotations):
        assert rot is not None
        for d in rot:
            if d in seen:
                raise FormatError(f"duplicate dart {d}")
            seen[d] = v
    for d in range(2 * m):
        if d not in seen:
            raise FormatError(f"dart missing: {d}")
    try:
        return RotationSystem(rotations)  # type: ignore[arg-type]
    except EmbeddingError as exc:
        raise FormatError(str(exc)) from exc


def serialize(rs: RotationSystem) -> str:
    return rs.serialize()


# -- embedded cycles and paths ----------------------------------------------


@dataclass(frozen=True, eq=False)
class EmbCycle:
    """A simple closed dart walk in an embedding (or in its dual).

    ``darts`` is cyclic; dart ``d`` runs from ``vertex_of[d]`` to
    ``vertex_of[mate(d)]``.  With ``dual=True`` the darts live in
    ``host.dual()`` and the cycle is to be read as a dual cycle of ``host``
    (edge ids are shared between a graph and its dual).
    """

    host: RotationSystem
    darts: tuple[int, ...]
    dual: bool = False

    def __post_init__(self):
        object.__setattr__(self, "darts", tuple(self.darts))
        if not self.darts:
            raise EmbeddingError("empty cycle")
        rs = self.graph()
        k = len(self.darts)
        verts = []
        edges = set()
        for i, d in enumerate(self.darts):
            nxt = self.darts[(i + 1) % k]
            if rs.vertex_of[d ^ 1] != rs.vertex_of[nxt]:
                raise EmbeddingError("dart walk is not closed")
            verts.append(rs.vertex_of[d])
            e = d >> 1
            if e in edges:
                raise EmbeddingError("cycle repeats an edge")
            edges.add(e)
        if len(set(verts)) != len(verts):
            raise EmbeddingError("cycle repeats a vertex")

    def graph(self) -> RotationSystem:
        """The rotation system the darts actually live in."""
        return self.host.dual() if self.dual else self.host

    def __len__(self) -> int:
        return len(self.darts)

    @property
    def length(self) -> int:
        return len(self.darts)

    def edges(self) -> frozenset[int]:
        return frozenset(d >> 1 for d in self.darts)

    def edge_walk(self) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.darts)

    def vertices(self) -> tuple[int, ...]:
        rs = self.graph()
        return tuple(rs.vertex_of[d] for d in self.darts)

    def reversed(self) -> "EmbCycle":
        rev = tuple((d ^ 1) for d in reversed(self.darts))
        return EmbCycle(self.host, rev, self.dual)

    def canonical_key(self) -> tuple[int, ...]:
        """Lexicographically least edge-id sequence over rotations and both
        directions, used as the deterministic tie-break between cycles."""
        best = None
        for walk in (self.edge_walk(), tuple(reversed(self.edge_walk()))):
            k = len(walk)
            lo = min(walk)
            for s in range(k):
                if walk[s] != lo:
                    continue
                cand = walk[s:] + walk[:s]
                if best is None or cand < best:
                    best = cand
        assert best is not None
        return best

    def as_dual_of(self, primal: RotationSystem) -> "EmbCycle":
        """Reinterpret a cycle found in ``primal.dual()`` as a dual cycle."""
        if self.dual:
            return self
        if self.host is not primal.dual():
            raise EmbeddingError("cycle does not live in the dual of this embedding")
        return EmbCycle(primal, self.darts, dual=True)

    @staticmethod
    def from_edges(rs: RotationSystem, edge_ids: Sequence[int],
                   dual: bool = False) -> "EmbCycle":
        """Rebuild a cycle from an (unordered or ordered) edge-id list.

        The edges must induce a single closed walk with every vertex used by
        exactly two half-edge slots.
        """
        g = rs.dual() if dual else rs
        slots: dict[int, list[int]] = {}
        for e in edge_ids:
            for d in (2 * e, 2 * e + 1):
                slots.setdefault(g.vertex_of[d], []).append(d)
        if any(len(ds) != 2 for ds in slots.values()):
            raise EmbeddingError("edge set is not a single simple cycle")
        e0 = min(edge_ids)
        walk = [2 * e0]
        used = {e0}
        while True:
            tail = g.vertex_of[walk[-1] ^ 1]
            a, b = slots[tail]
            nxt = a if (a >> 1) != (walk[-1] >> 1) else b
            if (nxt >> 1) == e0 or (nxt >> 1) in used and (nxt >> 1) != e0:
                break
            walk.append(nxt)
            used.add(nxt >> 1)
        if used != set(edge_ids):
            raise EmbeddingError("edge set is not a single simple cycle")
        return EmbCycle(rs, tuple(walk), dual)


@dataclass(frozen=True, eq=False)
class DartPath:
    """An open dart walk (an ear, an insertion route, ...)."""

    host: RotationSystem
    darts: tuple[int, ...]
    dual: bool = False

    def graph(self) -> RotationSystem:
        return self.host.dual() if self.dual else self.host

    @property
    def length(self) -> int:
        return len(self.darts)

    def edges(self) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.darts)

    def endpoints(self) -> tuple[int, int]:
        rs = self.graph()
        return rs.vertex_of[self.darts[0]], rs.vertex_of[self.darts[-1] ^ 1]


# -- the vertex-face incidence (radial) graph --------------------------------


def vertex_face_incidence(rs: RotationSystem) -> RotationSystem:
    """Bipartite radial graph on vertices + faces, one edge per corner.

    It embeds on the same surface: V + F vertices, 2E edges (the sum of the
    face lengths), and the genus is preserved.
    """
    if rs.num_edges == 0:
        raise EmbeddingError("radial graph needs at least one edge")
    n = rs.num_vertices
    # incidence edge ids follow dart ids: corner of dart d -> edge d
    vert_rot: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for d in rs.rotations[v]:
            vert_rot[v].append(2 * d)
    face_rot: list[list[int]] = []
    for walk in rs.faces:
        # visit the corners of the face in reverse walk order so that the
        # radial faces are quadrilaterals (one per primal edge)
        face_rot.append([2 * d + 1 for d in reversed(walk)])
    return RotationSystem(vert_rot + face_rot)


def max_degree(rs: RotationSystem) -> int:
    return rs.max_degree


# -- canonical forms / isomorphism -------------------------------------------


def canonical_form(rs: RotationSystem) -> tuple:
    """A label-invariant encoding; equal forms mean isomorphic embeddings.

    Breadth-first relabeling of darts started from every dart, keeping the
    lexicographically least transition table.  Quadratic in the dart count,
    meant for tests and fixtures.
    """
    total = 2 * rs.num_edges
    if total == 0:
        return (rs.num_vertices,)
    best = None
    for start in range(total):
        label = {start: 0}
        order = [start]
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            for nxt in (rs.sigma[d], d ^ 1):
                if nxt not in label:
                    label[nxt] = len(order)
                    order.append(nxt)
        code = tuple((label[rs.sigma[d]], label[d ^ 1]) for d in order)
        if best is None or code < best:
            best = code
    return (rs.num_vertices, best)


def isomorphic(a: RotationSystem, b: RotationSystem) -> bool:
    return canonical_form(a) == canonical_form(b)

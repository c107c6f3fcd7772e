"""Reproducible embeddings used by the tests, the demos, and `torex gen`."""

from __future__ import annotations

import random

from .embedding import EmbCycle, RotationSystem


def toroidal_grid(p: int, q: int) -> RotationSystem:
    """The p x q toroidal grid: vertex (i, j) = i*q + j, right edge of (i, j)
    is i*q + j and down edge is p*q + i*q + j, rotations E, N, W, S (ccw)."""
    if p < 3 or q < 3:
        raise ValueError("toroidal grids need p, q >= 3")

    def vid(i, j):
        return (i % p) * q + (j % q)

    def right(i, j):
        return vid(i, j)

    def down(i, j):
        return p * q + vid(i, j)

    rotations = []
    for i in range(p):
        for j in range(q):
            east = 2 * right(i, j)
            west = 2 * right(i, j - 1) + 1
            south = 2 * down(i, j)
            north = 2 * down(i - 1, j) + 1
            rotations.append((east, north, west, south))
    return RotationSystem(rotations)


def grid_row_cycle(rs: RotationSystem, p: int, q: int, i: int) -> EmbCycle:
    """The horizontal cycle through row i of toroidal_grid(p, q)."""
    darts = tuple(2 * ((i % p) * q + j) for j in range(q))
    return EmbCycle(rs, darts)


def grid_column_cycle(rs: RotationSystem, p: int, q: int, j: int) -> EmbCycle:
    """The vertical cycle through column j of toroidal_grid(p, q)."""
    darts = tuple(2 * (p * q + (i % p) * q + (j % q)) for i in range(p))
    return EmbCycle(rs, darts)


def sheared_grid(p: int, n: int) -> RotationSystem:
    """Torus graph on Z_p x Z_n with row edges and diagonal edges
    (i, m) -> (i+1, m+1); its diagonal cycles wind n/gcd(n, p) times around
    the row direction, so they trigger the unwinding phase of the grid-minor
    merge."""
    if p < 3 or n < 3:
        raise ValueError("sheared grids need p, n >= 3")

    def vid(i, m):
        return (i % p) * n + (m % n)

    def east(i, m):
        return vid(i, m)

    def diag(i, m):          # edge (i, m) - (i+1, m+1)
        return p * n + vid(i, m)

    rotations = []
    for i in range(p):
        for m in range(n):
            e = 2 * east(i, m)
            w = 2 * east(i, m - 1) + 1
            up = 2 * diag(i, m)
            dn = 2 * diag(i - 1, m - 1) + 1
            rotations.append((e, up, w, dn))
    return RotationSystem(rotations)


def sheared_row_cycle(rs: RotationSystem, p: int, n: int, i: int) -> EmbCycle:
    darts = tuple(2 * ((i % p) * n + m) for m in range(n))
    return EmbCycle(rs, darts)


def sheared_diagonal_cycle(rs: RotationSystem, p: int, n: int, m0: int) -> EmbCycle:
    """Diagonal cycle through (0, m0); length p * (n / gcd(n, p))."""
    from math import gcd
    steps = p * (n // gcd(n, p))
    darts = []
    i, m = 0, m0
    for _ in range(steps):
        darts.append(2 * (p * n + (i % p) * n + (m % n)))
        i, m = i + 1, m + 1
    return EmbCycle(rs, tuple(darts))


def hexagonal_torus(a: int, b: int) -> RotationSystem:
    """Cubic honeycomb on the torus: 2ab vertices, 3ab edges, ab faces.

    Vertex (i, j, 0) joins (i, j, 1) by a 'link' edge; (i, j, 1) joins
    (i, j+1, 0) and (i+1, j, 0) by 'east'/'south' edges.
    """
    if a < 2 or b < 2:
        raise ValueError("hexagonal torus needs a, b >= 2")

    def v0(i, j):
        return 2 * ((i % a) * b + (j % b))

    def v1(i, j):
        return v0(i, j) + 1

    def link(i, j):
        return (i % a) * b + (j % b)

    def east(i, j):
        return a * b + (i % a) * b + (j % b)

    def south(i, j):
        return 2 * a * b + (i % a) * b + (j % b)

    rotations: list[tuple[int, ...]] = [()] * (2 * a * b)
    for i in range(a):
        for j in range(b):
            rotations[v0(i, j)] = (2 * link(i, j),
                                   2 * east(i, j - 1) + 1,
                                   2 * south(i - 1, j) + 1)
            rotations[v1(i, j)] = (2 * link(i, j) + 1,
                                   2 * east(i, j),
                                   2 * south(i, j))
    return RotationSystem(rotations)


def one_vertex_torus() -> RotationSystem:
    """One vertex, two interleaved loops: the smallest genus-1 embedding."""
    return RotationSystem([(0, 2, 1, 3)])


def double_handle_one_vertex() -> RotationSystem:
    """One vertex, four loops interleaved pairwise: genus 2."""
    return RotationSystem([(0, 2, 1, 3, 4, 6, 5, 7)])


def plane_triangle() -> RotationSystem:
    return RotationSystem([(0, 5), (2, 1), (4, 3)])


def plane_loop() -> RotationSystem:
    """Single vertex with one loop on the sphere."""
    return RotationSystem([(0, 1)])


def join(a: RotationSystem, b: RotationSystem, va: int = 0,
         vb: int = 0) -> RotationSystem:
    """One-point join: identify vertex ``vb`` of b with vertex ``va`` of a by
    splicing the rotations.  Genus adds up."""
    shift = 2 * a.num_edges
    rotations = [list(r) for r in a.rotations]
    rotations[va] = list(a.rotations[va]) + [d + shift for d in b.rotations[vb]]
    for v in range(b.num_vertices):
        if v == vb:
            continue
        rotations.append([d + shift for d in b.rotations[v]])
    return RotationSystem(rotations)


def zigzag_grid_fixture() -> tuple[RotationSystem, list[EmbCycle], list[EmbCycle]]:
    """TG(4, 12) with a C-family of 4 rows and a D-family of 4 column-like
    cycles whose first member detours away from its column and back,
    producing the zigzag pattern that the merge's shortcut phase removes."""
    p, q = 4, 12
    rs = toroidal_grid(p, q)
    cfam = [grid_row_cycle(rs, p, q, i) for i in range(p)]

    def vid(i, j):
        return (i % p) * q + (j % q)

    def right_d(i, j, forward=True):
        e = vid(i, j % q)
        return 2 * e if forward else 2 * e + 1

    def down_d(i, j, forward=True):
        e = p * q + vid(i % p, j)
        return 2 * e if forward else 2 * e + 1

    zig = (down_d(0, 0),            # (0,0) -> (1,0)
           right_d(1, 0),           # (1,0) -> (1,1)
           down_d(0, 1, False),     # (1,1) -> (0,1)
           right_d(0, 1),           # (0,1) -> (0,2)
           down_d(0, 2),            # (0,2) -> (1,2)
           down_d(1, 2),            # (1,2) -> (2,2)
           right_d(2, 1, False),    # (2,2) -> (2,1)
           right_d(2, 0, False),    # (2,1) -> (2,0)
           down_d(2, 0),            # (2,0) -> (3,0)
           down_d(3, 0))            # (3,0) -> (0,0)
    dfam = [EmbCycle(rs, zig)]
    for j in (3, 6, 9):
        dfam.append(grid_column_cycle(rs, p, q, j))
    return rs, cfam, dfam


def random_embedding(rng: random.Random, max_edges: int = 10,
                     min_genus: int = 1) -> RotationSystem:
    """Random connected rotation system with at most ``max_edges`` edges and
    genus at least ``min_genus`` (rejection sampling)."""
    while True:
        n = rng.randint(1, max(1, max_edges // 2))
        m = rng.randint(max(n - 1, min_genus, 1), max_edges)
        ends = []
        # spanning tree first, then random ends
        for v in range(1, n):
            ends.append((rng.randrange(v), v))
        while len(ends) < m:
            ends.append((rng.randrange(n), rng.randrange(n)))
        darts_at: list[list[int]] = [[] for _ in range(n)]
        for e, (u, v) in enumerate(ends):
            darts_at[u].append(2 * e)
            darts_at[v].append(2 * e + 1)
        for lst in darts_at:
            rng.shuffle(lst)
        try:
            rs = RotationSystem(darts_at)
        except Exception:
            continue
        if rs.genus >= min_genus:
            return rs

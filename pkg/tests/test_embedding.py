from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torex import fixtures as fx
from torex.embedding import (EmbCycle, EmbeddingError, FormatError,
                             RotationSystem, canonical_form, isomorphic,
                             parse, serialize, vertex_face_incidence)

DATA = Path(__file__).parent / "data"


def test_parse_tg33_fixture():
    rs = parse((DATA / "tg3x3.rot").read_text())
    assert rs.num_vertices == 9
    assert rs.num_edges == 18
    assert rs.genus == 1


def test_parse_rejects_duplicate_dart():
    text = "torex-embedding v1\nV 2\nE 1\nR 0: 0 1\nR 1: 0\n"
    with pytest.raises(FormatError, match="duplicate dart"):
        parse(text)


def test_parse_rejects_missing_dart():
    text = "torex-embedding v1\nV 2\nE 2\nR 0: 0 1\nR 1: 2\n"
    with pytest.raises(FormatError, match="dart missing"):
        parse(text)


def test_parse_rejects_disconnected():
    # two disjoint loops on two vertices
    text = "torex-embedding v1\nV 2\nE 2\nR 0: 0 1\nR 1: 2 3\n"
    with pytest.raises(FormatError, match="disconnected"):
        parse(text)


def test_parse_rejects_bad_header():
    with pytest.raises(FormatError, match="header"):
        parse("something else\nV 1\nE 0\nR 0:\n")


def test_parse_comments_and_roundtrip():
    text = ("# a comment\ntorex-embedding v1\nV 1\n# another\nE 1\nR 0: 0 1\n")
    rs = parse(text)
    assert rs.num_edges == 1
    assert parse(serialize(rs)).rotations == rs.rotations


def test_single_loop_sphere():
    rs = fx.plane_loop()
    assert (rs.num_vertices, rs.num_edges, rs.num_faces, rs.genus) == (1, 1, 2, 0)


def test_faces_tg33(tg33):
    assert tg33.num_faces == 9
    assert all(len(w) == 4 for w in tg33.faces)


def test_faces_plane_triangle():
    tri = fx.plane_triangle()
    assert tri.num_faces == 2
    assert sorted(len(w) for w in tri.faces) == [3, 3]


def test_faces_one_vertex_torus(one_vertex_torus):
    assert [len(w) for w in one_vertex_torus.faces] == [4]
    assert one_vertex_torus.genus == 1


def test_genus_examples():
    assert fx.toroidal_grid(4, 7).genus == 1
    assert fx.plane_triangle().genus == 0
    assert fx.double_handle_one_vertex().genus == 2


def test_dual_of_grid_is_grid(tg33, tg35):
    assert isomorphic(tg33.dual(), tg33)
    assert isomorphic(tg35.dual(), tg35)


def test_dual_of_triangle():
    dual = fx.plane_triangle().dual()
    assert dual.num_vertices == 2
    assert dual.num_edges == 3
    assert dual.genus == 0


def test_dual_involution_and_genus(tg35, genus2_join):
    for rs in (tg35, genus2_join, fx.one_vertex_torus()):
        dd = rs.dual().dual()
        assert dd.sigma == rs.sigma
        assert isomorphic(dd, rs)
        assert rs.dual().genus == rs.genus


def test_edge_ids_shared_with_dual(tg35):
    assert tg35.dual().num_edges == tg35.num_edges


def test_max_degree(tg35):
    assert tg35.max_degree == 4
    assert fx.hexagonal_torus(4, 4).max_degree == 3


def test_vertex_face_incidence_tg33(tg33):
    vfi = vertex_face_incidence(tg33)
    assert vfi.num_vertices == 18
    assert vfi.num_edges == 36
    assert vfi.genus == 1


def test_vertex_face_incidence_triangle():
    vfi = vertex_face_incidence(fx.plane_triangle())
    assert vfi.num_vertices == 5
    assert vfi.num_edges == 6
    assert vfi.genus == 0


def test_vfi_bipartite(tg35):
    vfi = vertex_face_incidence(tg35)
    n = tg35.num_vertices
    for e in range(vfi.num_edges):
        u, w = vfi.edge_endpoints(e)
        assert (u < n) != (w < n)


def test_embcycle_validation(tg33):
    with pytest.raises(EmbeddingError):
        EmbCycle(tg33, (0, 0))          # repeats an edge
    with pytest.raises(EmbeddingError):
        EmbCycle(tg33, (0,))            # not closed
    col = fx.grid_column_cycle(tg33, 3, 3, 0)
    assert col.length == 3
    assert col.reversed().canonical_key() == col.canonical_key()


def test_embcycle_from_edges(tg33):
    col = fx.grid_column_cycle(tg33, 3, 3, 1)
    rebuilt = EmbCycle.from_edges(tg33, sorted(col.edges()))
    assert rebuilt.edges() == col.edges()
    with pytest.raises(EmbeddingError):
        EmbCycle.from_edges(tg33, [0, 1])     # not a cycle


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_random_embedding_invariants(seed):
    import random
    rs = fx.random_embedding(random.Random(seed), max_edges=10)
    cellular = sum(1 for r in rs.rotations if r)
    assert cellular - rs.num_edges + rs.num_faces == 2 - 2 * rs.genus
    # every dart in exactly one face walk
    darts = sorted(d for w in rs.faces for d in w)
    assert darts == list(range(2 * rs.num_edges))
    # round trip
    assert parse(serialize(rs)).rotations == rs.rotations
    # dual involution, genus preserved
    assert rs.dual().dual().sigma == rs.sigma
    assert rs.dual().genus == rs.genus


def test_canonical_form_distinguishes():
    assert canonical_form(fx.toroidal_grid(3, 4)) != canonical_form(
        fx.toroidal_grid(3, 5))
    a = fx.toroidal_grid(3, 4)
    assert canonical_form(a) == canonical_form(a.dual().dual())

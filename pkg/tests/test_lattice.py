import numpy as np
import pytest

from phylotope.errors import (BlockWidthMismatchError,
                              ProjectionNotInSimplexError,
                              ScaleExceededError)
from phylotope.groups import abelian_model, preset_model
from phylotope.lattice import (AffineLattice, _dilate_points_py,
                               _dilate_setup, decompose, facet_description,
                               fiber_product, glued_polytope,
                               hermite_normal_form, idp_check,
                               lattice_points_in_dilate, spanned_lattice)
from phylotope.polytope import (ModelPolytope, build_polytope,
                                project_orbits)
from phylotope.trees import glue, parse_newick

CLAW = parse_newick("(a,b,c);")
QUARTET = parse_newick("((a,b),(c,d));")


def test_hermite_normal_form_examples():
    assert hermite_normal_form([(2, 4), (6, 8)]) == [(2, 0), (0, 4)]
    assert hermite_normal_form([(0, 0), (0, 0)]) == []
    assert hermite_normal_form([(-3,)]) == [(3,)]
    # pivots positive, entries above reduced
    h = hermite_normal_form([(1, 7), (0, 3)])
    assert h == [(1, 1), (0, 3)]


def test_lattice_membership_and_coordinates():
    lat = AffineLattice(anchor=(1, 0), basis=((2, 0), (0, 3)))
    assert lat.rank == 2
    assert lat.contains((3, 3))
    assert not lat.contains((2, 3))
    assert lat.coordinates((5, 6)) == (2, 2)
    assert lat.coordinates((5, 5)) is None
    # dilate membership: point of 2P relative to doubled anchor
    assert lat.contains((4, 3), scale=2)
    assert not lat.contains((3, 3), scale=2)


def test_spanned_lattice_anchor_is_min_point():
    pts = [(0, 2), (2, 0), (4, 4)]
    lat = spanned_lattice(pts)
    assert lat.anchor == (0, 2)
    for p in pts:
        assert lat.contains(p)
        assert lat.coordinates(p) is not None


def test_facets_of_a_square():
    pts = [(0, 0), (0, 1), (1, 0), (1, 1)]
    hrep = facet_description(pts)
    assert hrep.equalities == ()
    assert len(hrep.inequalities) == 4
    assert all(hrep.contains(p) for p in pts)
    assert not hrep.contains((2, 0))
    assert hrep.contains((2, 0), scale=2)
    assert not hrep.contains((3, 0), scale=2)


def test_facets_of_an_embedded_segment():
    pts = [(0, 0, 1), (2, 2, 1)]
    hrep = facet_description(pts)
    assert len(hrep.equalities) == 2
    assert len(hrep.inequalities) == 2
    assert hrep.contains((1, 1, 1))
    assert not hrep.contains((1, 0, 1))
    assert not hrep.contains((3, 3, 1))


def test_dilate_enumeration_matches_reference():
    z3 = abelian_model([3])
    poly = build_polytope(CLAW, z3)
    lat = spanned_lattice(poly.vertices)
    hrep = facet_description(poly.vertices)
    for n in (1, 2, 3):
        fast = lattice_points_in_dilate(poly.vertices, n, lat, hrep)
        W, offs, lo, hi, _ = _dilate_setup(sorted(poly.vertices), lat,
                                           hrep, n)
        slow = _dilate_points_py(W, offs, n, lo, hi)
        anchor = np.asarray(lat.anchor, dtype=np.int64)
        basis = np.asarray(lat.basis, dtype=np.int64)
        xs = {tuple(int(v) for v in n * anchor + np.asarray(y) @ basis)
              for y in slow}
        assert set(fast) == xs
    assert set(lattice_points_in_dilate(poly.vertices, 1)) \
        == set(poly.vertices)


def test_row_cap_raises():
    z3 = abelian_model([3])
    poly = build_polytope(CLAW, z3)
    with pytest.raises(ScaleExceededError):
        lattice_points_in_dilate(poly.vertices, 3, row_cap=10)


def test_claw_polytopes_are_normal():
    for orders in ([2], [3], [2, 2]):
        poly = build_polytope(CLAW, abelian_model(orders))
        report = idp_check(poly)
        assert report.normal
        assert report.witness is None
        rank = spanned_lattice(poly.vertices).rank
        assert report.degrees_checked == tuple(range(2, max(3, rank)))


def test_projected_claw_is_not_normal_with_certificate():
    k2p = preset_model("K2P")
    poly = project_orbits(build_polytope(CLAW, k2p), k2p)
    report = idp_check(poly)
    assert not report.normal
    assert report.verdict == "NotNormal"
    assert report.witness_degree == 2
    w = report.witness
    lat = spanned_lattice(poly.vertices)
    hrep = facet_description(poly.vertices)
    assert lat.contains(w, scale=2)
    assert hrep.contains(w, scale=2)
    assert decompose(w, 2, poly.vertices, lat, hrep).found is None
    text = report.to_text()
    assert "verdict: NotNormal" in text
    assert "witness degree: 2" in text


def test_decompose_finds_a_certificate():
    z2 = abelian_model([2])
    poly = build_polytope(CLAW, z2)
    target = tuple(a + b for a, b in zip(poly.vertices[0],
                                         poly.vertices[2]))
    res = decompose(target, 2, poly.vertices)
    assert res.found is not None
    assert len(res.found) == 2
    assert tuple(sum(c) for c in zip(*res.found)) == target


def test_idp_report_text_normal():
    z2 = abelian_model([2])
    poly = build_polytope(CLAW, z2)
    text = idp_check(poly).to_text()
    assert "verdict: Normal" in text
    assert "witness" not in text


def test_fiber_product_width_mismatch():
    z2 = abelian_model([2])
    z3 = abelian_model([3])
    p2 = build_polytope(CLAW, z2)
    p3 = build_polytope(CLAW, z3)
    with pytest.raises(BlockWidthMismatchError):
        fiber_product(p2, 0, p3, 0)


def test_fiber_product_needs_simplex_projection():
    bad = ModelPolytope(vertices=((2, 0, 1, 0),), n_blocks=2,
                        block_width=2, flavor="abelian")
    with pytest.raises(ProjectionNotInSimplexError):
        fiber_product(bad, 0, bad, 0)
    # mixing flavors is a block mismatch even at equal width
    k2p = preset_model("K2P")
    proj = project_orbits(build_polytope(CLAW, k2p), k2p)
    z3 = abelian_model([3])
    cube = build_polytope(CLAW, z3)
    with pytest.raises(BlockWidthMismatchError):
        fiber_product(proj, 0, cube, 0)


@pytest.mark.parametrize("orders", [[2], [3], [2, 2]])
def test_glued_polytope_matches_direct_build(orders):
    model = abelian_model(orders)
    res, poly = glued_polytope(model, CLAW, "c", CLAW, "a")
    glued = glue(CLAW, "c", CLAW, "a").tree
    direct = build_polytope(glued, model)
    assert poly.vertices == direct.vertices
    assert poly.n_blocks == direct.n_blocks
    assert poly.n_blocks == len(res.tree.edges)


def test_fiber_product_of_quartet_factors():
    z2 = abelian_model([2])
    p = build_polytope(CLAW, z2)
    q = fiber_product(p, 2, p, 0)
    assert q.n_blocks == 5
    assert len(q.vertices) == 8
    assert idp_check(q).normal

import random

import pytest

from quiverdet import (CellSet, GuardExceeded, ValidationError,
                       check_vertex_decomposition_samples, codim1_membership, corners,
                       enumerate_facets, f_vector, initial_cvm, interior_faces, verify_shelling)
from quiverdet.cvm import SE
from quiverdet.series import _h_from_f, _h_from_interior
from quiverdet.verify import random_instance

from golden import (DOUBLE_F_TOTAL, DOUBLE_F_VECTOR, DOUBLE_INTERIOR, DOUBLE_INTERIOR_TOTAL,
                    STAR_F_TOTAL, STAR_F_VECTOR, STAR_INTERIOR, STAR_INTERIOR_TOTAL)


def test_f_vector_reference(double_instance, star_instance, single_cell):
    table = f_vector(double_instance)
    assert table.f_vector == DOUBLE_F_VECTOR and table.total == DOUBLE_F_TOTAL
    table = f_vector(star_instance)
    assert table.f_vector == STAR_F_VECTOR and table.total == STAR_F_TOTAL
    assert f_vector(single_cell).f_vector == (1, 1)


def test_f_vector_guard(star_instance):
    with pytest.raises(GuardExceeded):
        f_vector(star_instance, max_cells_guard=10)


def test_top_count_is_multiplicity():
    rng = random.Random(29)
    for _ in range(15):
        inst = random_instance(rng)
        table = f_vector(inst)
        assert len(table.counts_by_size) == inst.n_cells + 1
        assert table.counts_by_size[-1] == len(enumerate_facets(inst))


def test_interior_reference(double_instance, star_instance):
    for inst, ref, total in ((double_instance, DOUBLE_INTERIOR, DOUBLE_INTERIOR_TOTAL),
                             (star_instance, STAR_INTERIOR, STAR_INTERIOR_TOTAL)):
        table = f_vector(inst, store_faces=True)
        table = interior_faces(inst, table, enumerate_facets(inst))
        assert table.interior_by_size == ref
        assert table.interior_total == total


def test_interior_single_cell(single_cell):
    # the empty face is the boundary; only the facet itself is interior, which
    # forces the alternating interior expression to reproduce 1/(1-t)
    table = f_vector(single_cell, store_faces=True)
    table = interior_faces(single_cell, table, enumerate_facets(single_cell))
    assert table.interior_by_size == (0, 1)
    assert _h_from_interior(table, 1) == (1,)


def test_interior_requires_stored_faces(double_instance):
    with pytest.raises(ValidationError):
        interior_faces(double_instance, f_vector(double_instance), enumerate_facets(double_instance))


def test_codim1_membership_cases(double_instance, single_cell):
    inst = double_instance
    facets = enumerate_facets(inst)
    facet_masks = [f.mask for f in facets]
    top = facets[-1]
    rep = corners(top)
    se_cells = {r.cell for r in rep.corners if r.kind == SE and r.essential}
    assert se_cells
    for cell in se_cells:
        sub = top.remove(cell)
        members = codim1_membership(sub)
        assert len(members) == 2
        # cross-check against a direct scan of the facet list
        direct = [m for m in facet_masks if m & sub.mask == sub.mask]
        assert sorted(f.mask for f in members) == direct
    plain = next(c for c in top.cells if c not in se_cells)
    assert len(codim1_membership(top.remove(plain))) == 1
    only = enumerate_facets(single_cell)[0]
    assert codim1_membership(CellSet(single_cell)) == [only]


def test_codim1_membership_validation(double_instance):
    with pytest.raises(ValidationError):
        codim1_membership(CellSet(double_instance, [(1, 1, 1)]))
    bad = CellSet(double_instance, [(1, 1, 1), (2, 2, 1), (3, 1, 1), (1, 2, 1)])
    with pytest.raises(ValidationError):
        codim1_membership(bad)


def test_every_codim1_in_one_or_two_facets():
    rng = random.Random(41)
    for _ in range(10):
        inst = random_instance(rng)
        facets = enumerate_facets(inst)
        masks = [f.mask for f in facets]
        subs = {f.mask & ~(1 << inst.rank[c]) for f in facets for c in f.cells}
        boundary = 0
        for sub in subs:
            direct = [m for m in masks if m & sub == sub]
            assert 1 <= len(direct) <= 2
            members = codim1_membership(CellSet.from_mask(inst, sub))
            assert sorted(f.mask for f in members) == direct
            boundary += len(direct) == 1
        assert boundary > 0  # the boundary is never empty


def test_shelling_reference(double_instance):
    facets = enumerate_facets(double_instance)
    report = verify_shelling(facets)
    assert report.ok
    assert report.restriction_counts[0] == 0
    assert report.restriction_counts == tuple(corners(f).essential_se for f in facets)


def test_shelling_star(star_instance):
    assert verify_shelling(enumerate_facets(star_instance)).ok


def test_shelling_single_facet(single_cell):
    report = verify_shelling(enumerate_facets(single_cell))
    assert report.ok and report.restriction_counts == (0,)


def test_shelling_detects_bad_order(double_instance):
    facets = enumerate_facets(double_instance)
    # smallest facet first (fine), then the largest: their intersection is
    # empty, so no shared codim-1 face can cover it
    bad = [facets[0], facets[-1]] + facets[1:-1]
    report = verify_shelling(bad)
    assert not report.ok
    assert "facet 2" in report.failure
    # an out-of-place first facet trips the corner-count convention instead
    report = verify_shelling([facets[-1]] + facets[:-1])
    assert not report.ok and "facet 1" in report.failure


def test_shelling_decreasing_order_also_valid(double_instance, star_instance):
    # both scan directions shell; descending restriction counts pair with NW corners
    for inst in (double_instance, star_instance):
        facets = list(reversed(enumerate_facets(inst)))
        report = verify_shelling(facets, corner_kind="NW")
        assert report.ok
        assert report.restriction_counts == tuple(corners(f).essential_nw for f in facets)


def test_descending_order_is_also_decreasing_lex(double_instance):
    # the two descending-flavored orders (set order from the largest cell down,
    # lex from the smallest position up with the larger cell first) coincide
    # on this example, so the reference facet numbering matches both
    facets = enumerate_facets(double_instance)
    descending = list(reversed(facets))
    rank = double_instance.rank

    def declex_key(facet):
        return tuple(-rank[c] for c in facet.cells)

    assert sorted(descending, key=declex_key) == descending


def test_hilbert_identity_coefficientwise(double_instance, star_instance):
    rng = random.Random(59)
    instances = [double_instance, star_instance] + [random_instance(rng) for _ in range(8)]
    for inst in instances:
        table = f_vector(inst, store_faces=True)
        table = interior_faces(inst, table, enumerate_facets(inst))
        assert _h_from_f(table, inst.n_cells) == _h_from_interior(table, inst.n_cells)


def test_vdc_samples(double_instance):
    report = check_vertex_decomposition_samples(double_instance, sample_budget=25, seed=8)
    assert report.ok and len(report.samples) == 25
    # the two degenerate prefixes are always pure
    whole = check_vertex_decomposition_samples(double_instance, sample_budget=1, seed=0)
    assert whole.ok


def test_vdc_extremes(double_instance):
    from quiverdet.complex import _FaceSearch

    inst = double_instance
    # empty prefix: purity of the whole complex (all facets share one size)
    sizes = []
    _FaceSearch(inst).run(lambda mask, addable: sizes.append(mask.bit_count()) if addable == 0 else None)
    assert set(sizes) == {inst.n_cells}
    # full prefix with a facet as seed: only the empty completion remains
    facet = initial_cvm(inst)
    search = _FaceSearch(inst, base=facet.cells)
    out = []
    search.run(lambda mask, addable: out.append(mask), universe_mask=0)
    assert out == [0]


def test_vdc_guard(star_instance):
    with pytest.raises(GuardExceeded):
        check_vertex_decomposition_samples(star_instance, size_guard=14)


def test_vdc_random_instances():
    rng = random.Random(67)
    for _ in range(6):
        inst = random_instance(rng, max_cells=12)
        assert check_vertex_decomposition_samples(inst, sample_budget=12,
                                                  seed=rng.randrange(2 ** 30)).ok

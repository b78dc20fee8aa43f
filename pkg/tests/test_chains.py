import random

import pytest

from quiverdet import (CellSet, ValidationError, can_extend, corner_stats, is_u_compatible,
                       max_diagonal_chain)
from quiverdet.cvm import c_max
from quiverdet.verify import random_instance

from golden import DOUBLE_INITIAL


def exhaustive_max_chain(points):
    """O(2^n) oracle: scan every subset and keep the largest actual chain."""
    pts = list(points)
    best = 0
    for bits in range(1 << len(pts)):
        sub = sorted(pts[i] for i in range(len(pts)) if bits >> i & 1)
        if all(a[0] < b[0] and a[1] < b[1] for a, b in zip(sub, sub[1:])):
            best = max(best, len(sub))
    return best


def padded_stats_oracle(cs, cell):
    """Recompute the padded statistics from the boundary-augmented point sets."""
    inst = cs.instance
    tgt, ti, tj = inst.phi_target(cell)
    d = inst.vertex[tgt]
    pts = cs.block_points(tgt)
    ts = range(1, d.u + 1)
    aug = pts + [(d.a - d.u + t, -d.u + t) for t in ts] + [(t, d.b - d.u + t) for t in ts]
    nw_pad = max_diagonal_chain([p for p in aug if p[0] <= ti - 1 and p[1] <= tj - 1])
    aug = pts + [(d.a - d.u + t, t) for t in ts] + [(t, d.b + t) for t in ts]
    se_pad = max_diagonal_chain([p for p in aug if p[0] >= ti + 1 and p[1] >= tj + 1])

    src, si, sj = inst.phi_source(cell)
    d = inst.vertex[src]
    pts = cs.block_points(src)
    ts = range(1, d.u + 1)
    aug = pts + [(-d.u + t, d.b - d.u + t) for t in ts] + [(d.a - d.u + t, t) for t in ts]
    nw_src_pad = max_diagonal_chain([p for p in aug if p[0] <= si - 1 and p[1] <= sj - 1])
    aug = pts + [(t, d.b - d.u + t) for t in ts] + [(d.a + t, t) for t in ts]
    se_src_pad = max_diagonal_chain([p for p in aug if p[0] >= si + 1 and p[1] >= sj + 1])
    return nw_pad, se_pad, nw_src_pad, se_src_pad


def test_max_chain_basics():
    assert max_diagonal_chain([]) == 0
    assert max_diagonal_chain([(1, 1), (2, 2), (3, 3)]) == 3
    assert max_diagonal_chain([(1, 2), (2, 1)]) == 1


def test_max_chain_vs_exhaustive():
    rng = random.Random(11)
    for n in (4, 7, 10, 12, 15):
        pts = {(rng.randint(1, 6), rng.randint(1, 6)) for _ in range(n)}
        assert max_diagonal_chain(pts) == exhaustive_max_chain(pts)


def test_u_compatible_examples(double_instance):
    inst = double_instance
    assert is_u_compatible(CellSet(inst))
    assert not is_u_compatible(CellSet(inst, [(1, 1, 1), (2, 2, 1)]))
    assert is_u_compatible(CellSet(inst, DOUBLE_INITIAL))


def test_hereditary(double_instance):
    rng = random.Random(5)
    facet = c_max(CellSet(double_instance))
    for _ in range(30):
        sub = [c for c in facet.cells if rng.random() < 0.6]
        assert is_u_compatible(CellSet(double_instance, sub))


def test_can_extend_examples(double_instance):
    inst = double_instance
    empty = CellSet(inst)
    assert all(can_extend(empty, c) for c in inst.cells)
    base = CellSet(inst, [(1, 1, 1)])
    assert not can_extend(base, (2, 2, 1))
    assert can_extend(base, (1, 2, 1))
    # definition-level recomputation of the last answer
    bigger = CellSet(inst, [(1, 1, 1), (1, 2, 1)])
    assert max_diagonal_chain(bigger.block_points("1")) <= 1
    assert max_diagonal_chain(bigger.block_points("2")) <= 1
    with pytest.raises(ValidationError):
        can_extend(base, (1, 1, 1))


def test_can_extend_vs_definition_random():
    rng = random.Random(23)
    for _ in range(40):
        inst = random_instance(rng, max_cells=12)
        density = rng.random()
        cells = [c for c in inst.cells if rng.random() < density]
        cs = CellSet(inst, cells)
        if not is_u_compatible(cs):
            continue
        for cell in inst.cells:
            if cell in cs:
                continue
            assert can_extend(cs, cell) == is_u_compatible(cs.add(cell))


def test_corner_stats_empty_set(double_instance):
    inst = double_instance
    empty = CellSet(inst)
    for cell in inst.cells:
        st = corner_stats(empty, cell)
        assert (st.nw, st.se, st.nw_src, st.se_src) == (0, 0, 0, 0)
        # with no points the padded values are exactly the boundary terms
        tgt, ti, tj = inst.phi_target(cell)
        d = inst.vertex[tgt]
        assert st.nw_padded == max(0, min(ti - 1, d.u - 1 - min(d.a - ti, d.b - tj)))
        assert st.se_padded == max(0, min(d.a - ti, d.u - min(ti, tj)))
        src, si, sj = inst.phi_source(cell)
        d = inst.vertex[src]
        assert st.nw_src_padded == max(0, min(sj - 1, d.u - 1 - min(d.b - sj, d.a - si)))
        assert st.se_src_padded == max(0, min(d.b - sj, d.u - min(si, sj)))


def test_corner_stats_on_facet(double_instance):
    inst = double_instance
    facet = c_max(CellSet(inst))
    st = corner_stats(facet, (3, 2, 1))  # a member
    assert st.nw_padded + st.se_padded == inst.vertex["1"].u - 1
    assert st.nw_src_padded + st.se_src_padded == inst.vertex["2"].u - 1
    st = corner_stats(facet, (1, 1, 1))  # not a member
    assert (st.nw_padded + st.se_padded == inst.vertex["1"].u
            or st.nw_src_padded + st.se_src_padded == inst.vertex["2"].u)


def test_padded_stats_match_augmented_oracle():
    rng = random.Random(97)
    for _ in range(25):
        inst = random_instance(rng, max_cells=12)
        for _attempt in range(20):
            density = rng.random()
            cells = [c for c in inst.cells if rng.random() < density]
            cs = CellSet(inst, cells)
            if is_u_compatible(cs):
                break
        else:
            cs = CellSet(inst)
        for cell in inst.cells:
            st = corner_stats(cs, cell)
            assert (st.nw_padded, st.se_padded, st.nw_src_padded, st.se_src_padded) == \
                padded_stats_oracle(cs, cell)


def test_membership_property_on_facets(double_instance):
    from quiverdet import enumerate_facets

    inst = double_instance
    for facet in enumerate_facets(inst):
        for cell in inst.cells:
            st = corner_stats(facet, cell)
            ut = inst.vertex[inst.arrow(cell.k).target].u
            us = inst.vertex[inst.arrow(cell.k).source].u
            assert st.nw_padded + st.se_padded in (ut - 1, ut)
            assert st.nw_src_padded + st.se_src_padded in (us - 1, us)
            member = cell in facet
            assert member == (st.nw_padded + st.se_padded == ut - 1
                              and st.nw_src_padded + st.se_src_padded == us - 1)


def test_set_order_matches_definition(double_instance):
    # mask comparison realizes the definition: compare the sorted cell
    # sequences from the largest position down
    from quiverdet import cmp_T_sets
    from quiverdet.quiver import cell_key

    rng = random.Random(77)
    inst = double_instance
    for _ in range(200):
        size = rng.randint(1, inst.size)
        a = CellSet(inst, rng.sample(inst.cells, size))
        b = CellSet(inst, rng.sample(inst.cells, size))
        seq_a = [cell_key(c) for c in reversed(a.cells)]
        seq_b = [cell_key(c) for c in reversed(b.cells)]
        expected = (seq_a > seq_b) - (seq_a < seq_b)
        assert cmp_T_sets(a, b) == expected


def test_cellset_canonical(double_instance):
    cs = CellSet(double_instance, [(3, 2, 1), (1, 1, 1), (3, 2, 1)])
    assert len(cs) == 2
    assert [tuple(c) for c in cs.cells] == [(1, 1, 1), (3, 2, 1)]
    assert CellSet.from_mask(double_instance, cs.mask) == cs
    with pytest.raises(ValidationError):
        CellSet(double_instance, [(9, 9, 9)])

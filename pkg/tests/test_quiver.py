import json

import pytest

from quiverdet import (BipartiteQuiver, Cell, CellSet, ValidationError, build_instance,
                       cmp_T, cmp_T_sets, load_instance, n_cells)
from quiverdet.cli import parse_preset
from quiverdet.quiver import cell_key
from quiverdet.cvm import c_max, c_min


def test_double_preset_geometry(double_instance):
    inst = double_instance
    assert inst.vertex["1"].a == 3 and inst.vertex["1"].b == 4
    assert inst.vertex["2"].a == 6 and inst.vertex["2"].b == 2
    assert inst.size == 12
    assert inst.n_cells == 5


def test_star_geometry(star_instance):
    assert star_instance.n_cells == 11
    assert star_instance.size == 18
    assert star_instance.vertex["1"].v == 3


def test_single_cell(single_cell):
    assert single_cell.size == 1
    assert single_cell.n_cells == 1


def test_n_cells_classical(det33):
    # independent count: every maximal admissible set carries the same number of cells
    from quiverdet.verify import brute_maximal_facet_masks

    masks = brute_maximal_facet_masks(det33)
    assert {m.bit_count() for m in masks} == {8}
    assert n_cells(det33) == 8


def test_phi_offsets(double_instance):
    inst = double_instance
    assert inst.phi_target(Cell(1, 1, 2)) == ("1", 1, 3)
    assert inst.phi_source(Cell(1, 1, 2)) == ("2", 4, 1)
    assert inst.phi_target(Cell(2, 2, 1)) == ("1", 2, 2)
    assert inst.phi_source(Cell(2, 2, 1)) == ("2", 2, 2)


def test_phi_bijections(double_instance, star_instance):
    for inst in (double_instance, star_instance):
        seen_t, seen_s = set(), set()
        for cell in inst.cells:
            tv, ti, tj = inst.phi_target(cell)
            sv, si, sj = inst.phi_source(cell)
            assert inst.phi_target_inv(tv, ti, tj) == cell
            assert inst.phi_source_inv(sv, si, sj) == cell
            seen_t.add((tv, ti, tj))
            seen_s.add((sv, si, sj))
        assert len(seen_t) == len(seen_s) == inst.size


def test_cell_order():
    assert cmp_T((1, 2, 1), (1, 1, 2)) == -1  # page dominates
    assert cmp_T((1, 9, 1), (2, 1, 1)) == -1  # row dominates column
    assert cmp_T((1, 1, 1), (1, 1, 1)) == 0


def test_cell_order_is_total(double_instance):
    cells = double_instance.cells
    assert sorted(cells, key=cell_key) == list(cells)
    assert len(set(map(cell_key, cells))) == len(cells)


def test_set_order_closures(double_instance):
    empty = CellSet(double_instance)
    lo, hi = c_min(empty), c_max(empty)
    assert cmp_T_sets(lo, hi) == -1
    with pytest.raises(ValidationError):
        cmp_T_sets(lo, lo.remove(lo.cells[0]))


def test_strict_mode_rejections():
    quiver = BipartiteQuiver(("s",), ("t",), (("s", "t"),))
    with pytest.raises(ValidationError):
        build_instance(quiver, {"s": 2, "t": 2}, {"s": 0, "t": 1}, mode="strict")
    with pytest.raises(ValidationError):
        build_instance(quiver, {"s": 2, "t": 2}, {"s": 3, "t": 1}, mode="strict")
    with pytest.raises(ValidationError):
        # u exceeds the opposite-side rank sum
        build_instance(quiver, {"s": 3, "t": 3}, {"s": 1, "t": 2}, mode="strict")
    with pytest.raises(ValidationError):
        BipartiteQuiver(("s",), ("t",), (("t", "s"),))


def test_normalize_clamps_and_removes():
    quiver = BipartiteQuiver(("s1", "s2"), ("t",), (("s1", "t"), ("s2", "t")))
    inst = build_instance(quiver, {"s1": 2, "s2": 2, "t": 3},
                          {"s1": 5, "s2": 0, "t": 3}, mode="normalize")
    # s2 drops out with its page; the remaining ranks clamp to the bounds
    assert "s2" not in inst.vertex
    assert inst.normalization.removed_vertices == ("s2",)
    assert inst.normalization.removed_pages == (("s2", "t", 3, 2),)
    assert inst.u["s1"] <= min(inst.vertex["s1"].a, inst.vertex["s1"].b, inst.vertex["s1"].v)
    assert inst.u["t"] <= inst.vertex["t"].v


def test_normalize_empty_quiver_error():
    quiver = BipartiteQuiver(("s",), ("t",), (("s", "t"),))
    with pytest.raises(ValidationError):
        build_instance(quiver, {"s": 1, "t": 1}, {"s": 0, "t": 0}, mode="normalize")


def test_normalization_idempotent(double_instance, star_instance):
    for inst in (double_instance, star_instance):
        again = load_instance(inst.to_json_obj(), mode="normalize")
        assert again == inst and again.normalization.trivial
    quiver = BipartiteQuiver(("a", "b"), ("z",), (("a", "z"), ("b", "z"), ("a", "z")))
    messy = build_instance(quiver, {"a": 2, "b": 3, "z": 2},
                           {"a": 9, "b": 9, "z": 9}, mode="normalize")
    twice = build_instance(messy.quiver, messy.m, messy.u, mode="normalize")
    assert twice == messy and twice.normalization.trivial


def test_json_round_trip(star_instance, tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(star_instance.to_json())
    loaded = load_instance(str(path), mode="strict")
    assert loaded == star_instance


def test_malformed_instance_document():
    with pytest.raises(ValidationError):
        load_instance(json.dumps({"sources": ["s"], "targets": ["t"]}))


def test_presets():
    secant = parse_preset("secant:4,4,2")
    assert secant.size == 32 and secant.u == {"1": 2, "2": 2}
    star_default = parse_preset("star:3,(2,1),(2,1),(2,1)")
    assert star_default.u["1"] == 3  # largest normalized rank
    explicit = parse_preset("star:(3,2),(2,1),(2,1),(2,1)")
    assert explicit == parse_preset("star-example")
    with pytest.raises(ValidationError):
        parse_preset("det:3,3")
    with pytest.raises(ValidationError):
        parse_preset("ring:1,2,3")
    with pytest.raises(ValidationError):
        parse_preset("star:3")
    with pytest.raises(ValidationError):
        parse_preset("det:3,3,0")  # rank violation, rejected by strict building


def test_load_instance_from_json_text(double_instance):
    assert load_instance(double_instance.to_json(), mode="strict") == double_instance

"""Concurrent vertex maps: facet predicates, greedy closures, path reconstruction.

A concurrent vertex map is a maximal admissible cell set; equivalently an
admissible set of the full facet cardinality N.  Each one is the intersection
pattern of a unique straight road map: per target block, rank-many
nonintersecting staircase paths from the left edge to the top edge, and per
source block the transposed picture.  ``road_map`` rebuilds those paths from
the padded chain statistics; ``corners`` classifies their turning points,
which drive both the chute-move dynamics and the h-polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .chains import CellSet, is_u_compatible, max_diagonal_chain, padded_nw, padded_se
from .errors import CrossCheckError, ValidationError
from .quiver import Cell, Instance, SOURCE, TARGET, BipartiteQuiver, cell_key

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
NW = "NW"
SE = "SE"


def is_cvm(cs: CellSet) -> bool:
    """True iff the set is admissible and has the full facet cardinality."""
    ok = len(cs) == cs.instance.n_cells and is_u_compatible(cs)
    if __debug__ and ok:
        assert _membership_criterion_holds(cs), "cardinality route disagrees with membership route"
    return ok


def _membership_criterion_holds(cs: CellSet) -> bool:
    """Cell-by-cell check: P in C iff both raw chain-stat sums stay below the ranks."""
    inst = cs.instance
    for cell in inst.cells:
        tgt, ti, tj = inst.phi_target(cell)
        src, si, sj = inst.phi_source(cell)
        below = (cs.stats(tgt).nw_of(ti, tj) + cs.stats(tgt).se_of(ti, tj) < inst.vertex[tgt].u
                 and cs.stats(src).nw_of(si, sj) + cs.stats(src).se_of(si, sj) < inst.vertex[src].u)
        if below != cs._contains(cell):
            return False
    return True


def _greedy_close(seed: CellSet, descending: bool) -> CellSet:
    """Scan all cells in one direction, adding whatever keeps the set admissible."""
    inst = seed.instance
    if not is_u_compatible(seed):
        raise ValidationError("seed set is not u-compatible")
    tgt_pts: dict[str, list] = {v: [] for v in inst.vertex}
    src_pts: dict[str, list] = {v: [] for v in inst.vertex}
    chosen = set(seed.cells)

    def put(cell):
        tgt, ti, tj = inst.phi_target(cell)
        src, si, sj = inst.phi_source(cell)
        tgt_pts[tgt].append((ti, tj))
        src_pts[src].append((si, sj))

    for cell in seed.cells:
        put(cell)

    def fits(cell):
        tgt, ti, tj = inst.phi_target(cell)
        src, si, sj = inst.phi_source(cell)
        pts = tgt_pts[tgt]
        nw = max_diagonal_chain([p for p in pts if p[0] < ti and p[1] < tj])
        se = max_diagonal_chain([p for p in pts if p[0] > ti and p[1] > tj])
        if nw + se >= inst.vertex[tgt].u:
            return False
        pts = src_pts[src]
        nw = max_diagonal_chain([p for p in pts if p[0] < si and p[1] < sj])
        se = max_diagonal_chain([p for p in pts if p[0] > si and p[1] > sj])
        return nw + se < inst.vertex[src].u

    order = reversed(inst.cells) if descending else inst.cells
    for cell in order:
        if cell in chosen:
            continue
        if fits(cell):
            chosen.add(cell)
            put(cell)
    return CellSet(inst, chosen)


def c_max(seed: CellSet) -> CellSet:
    """Greedy completion scanning cells from the largest down: the largest facet containing the seed."""
    return _greedy_close(seed, descending=True)


def c_min(seed: CellSet) -> CellSet:
    """Greedy completion scanning cells from the smallest up: the smallest facet containing the seed."""
    return _greedy_close(seed, descending=False)


def initial_cvm(instance: Instance) -> CellSet:
    """Closed-form construction of the largest facet c_max(empty).

    Page by page: intersect "bottom u_target rows or rightmost leftover
    target-rank columns" with the transposed source-side picture, where the
    leftover rank discounts the ranks already served by later pages.
    """
    cells = []
    for ar in instance.arrows:
        ua = instance.vertex[ar.target].u
        ub = instance.vertex[ar.source].u
        s_alpha = sum(instance.u[a2.source] for a2 in instance.arrows
                      if a2.target == ar.target and a2.k > ar.k)
        s_beta = sum(instance.u[a2.target] for a2 in instance.arrows
                     if a2.source == ar.source and a2.k > ar.k)
        rows_t = ua                      # bottom rows claimed by the target side
        cols_t = max(ua - s_alpha, 0)    # rightmost columns claimed by the target side
        rows_s = max(ub - s_beta, 0)
        cols_s = ub
        for i in range(1, ar.rows + 1):
            for j in range(1, ar.cols + 1):
                in_t = (i > ar.rows - rows_t) or (j > ar.cols - cols_t)
                in_s = (i > ar.rows - rows_s) or (j > ar.cols - cols_s)
                if in_t and in_s:
                    cells.append(Cell(i, j, ar.k))
    result = CellSet(instance, cells)
    if __debug__:
        assert result == c_max(CellSet(instance)), "closed form disagrees with greedy closure"
    return result


# -- road maps ------------------------------------------------------------------


@dataclass(frozen=True)
class RoadMap:
    """Reconstructed path families: per target the horizontal paths, per source the vertical ones.

    Paths are vertex lists in block-matrix coordinates, ordered from the SW
    endpoint to the NE endpoint.
    """

    horizontal: dict[str, list[list[tuple[int, int]]]]
    vertical: dict[str, list[list[tuple[int, int]]]]

    def to_json_obj(self) -> dict:
        return {
            "horizontal": {v: [[list(p) for p in path] for path in paths]
                           for v, paths in self.horizontal.items()},
            "vertical": {v: [[list(p) for p in path] for path in paths]
                         for v, paths in self.vertical.items()},
        }


def _padded_tables(cs: CellSet, vid: str):
    """Tables of padded NW/SE statistics over the whole block of ``vid``."""
    inst = cs.instance
    data = inst.vertex[vid]
    st = cs.stats(vid)
    a, b, u = data.a, data.b, data.u
    nw_table = [[0] * (b + 1) for _ in range(a + 1)]
    se_table = [[0] * (b + 1) for _ in range(a + 1)]
    for x in range(1, a + 1):
        for y in range(1, b + 1):
            raw_nw = st.nw_of(x, y)
            raw_se = st.se_of(x, y)
            if data.side == TARGET:
                nw_table[x][y] = padded_nw(raw_nw, x, y, a, b, u)
                se_table[x][y] = padded_se(raw_se, x, y, a, b, u)
            else:
                nw_table[x][y] = padded_nw(raw_nw, y, x, b, a, u)
                se_table[x][y] = padded_se(raw_se, y, x, b, a, u)
    return nw_table, se_table


def _order_path(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """SW-to-NE traversal order: rows descending, columns ascending."""
    return sorted(points, key=lambda p: (-p[0], p[1]))


def _check_path(path: list[tuple[int, int]], sw: tuple[int, int], ne: tuple[int, int]) -> bool:
    if not path or path[0] != sw or path[-1] != ne:
        return False
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if (x1 - x0, y1 - y0) not in ((-1, 0), (0, 1)):
            return False
    return True


def road_map(cs: CellSet) -> RoadMap:
    """Rebuild the unique straight road map whose concurrency pattern is this facet.

    A block point lies on the p-th path exactly when its padded NW statistic
    is p - 1 and its padded SE statistic is rank - p.  The assembled point
    sets are verified to be monotone staircases with the prescribed
    endpoints, pairwise disjoint, straight (every corner of one family lies
    on a path of the other family), and to intersect back to the facet.
    """
    inst = cs.instance
    if not is_cvm(cs):
        raise ValidationError("road maps exist only for concurrent vertex maps")

    horizontal: dict[str, list[list[tuple[int, int]]]] = {}
    vertical: dict[str, list[list[tuple[int, int]]]] = {}
    for vid, data in inst.vertex.items():
        nw_table, se_table = _padded_tables(cs, vid)
        buckets: list[list[tuple[int, int]]] = [[] for _ in range(data.u)]
        for x in range(1, data.a + 1):
            for y in range(1, data.b + 1):
                p = nw_table[x][y] + 1
                if 1 <= p <= data.u and se_table[x][y] == data.u - p:
                    buckets[p - 1].append((x, y))
        paths = [_order_path(pts) for pts in buckets]
        for p, path in enumerate(paths, start=1):
            if data.side == TARGET:
                sw, ne = (data.a - data.u + p, 1), (p, data.b)
            else:
                sw, ne = (data.a, p), (1, data.b - data.u + p)
            if not _check_path(path, sw, ne):
                raise CrossCheckError(f"path {p} of block {vid!r} failed assembly")
        if data.side == TARGET:
            horizontal[vid] = paths
        else:
            vertical[vid] = paths

    h_cells = _covered_cells(inst, horizontal, TARGET)
    v_cells = _covered_cells(inst, vertical, SOURCE)
    if h_cells & v_cells != set(cs.cells):
        raise CrossCheckError("path intersection does not reproduce the facet")
    for vid, paths in horizontal.items():
        for path in paths:
            pset = set(path)
            for corner in _corners_of(pset, NW) + _corners_of(pset, SE):
                if inst.phi_target_inv(vid, *corner) not in v_cells:
                    raise CrossCheckError("horizontal corner off every vertical path")
    for vid, paths in vertical.items():
        for path in paths:
            pset = set(path)
            for corner in _corners_of(pset, NW) + _corners_of(pset, SE):
                if inst.phi_source_inv(vid, *corner) not in h_cells:
                    raise CrossCheckError("vertical corner off every horizontal path")
    return RoadMap(horizontal, vertical)


def _covered_cells(inst: Instance, families, side) -> set[Cell]:
    cells: set[Cell] = set()
    inv = inst.phi_target_inv if side == TARGET else inst.phi_source_inv
    for vid, paths in families.items():
        seen: set[tuple[int, int]] = set()
        for path in paths:
            for pt in path:
                if pt in seen:
                    raise CrossCheckError(f"paths of block {vid!r} intersect at {pt}")
                seen.add(pt)
                cells.add(inv(vid, *pt))
    return cells


def _corners_of(path_set: set[tuple[int, int]], kind: str) -> list[tuple[int, int]]:
    """Corners of a staircase path given as a point set.

    NW corners have both their south and east neighbors on the path, SE
    corners both their north and west neighbors.
    """
    if kind == NW:
        return [(x, y) for x, y in path_set
                if (x + 1, y) in path_set and (x, y + 1) in path_set]
    return [(x, y) for x, y in path_set
            if (x - 1, y) in path_set and (x, y - 1) in path_set]


# -- corner classification ---------------------------------------------------------


@dataclass(frozen=True)
class CornerRecord:
    cell: Cell
    kind: str         # NW or SE
    orientation: str  # HORIZONTAL or VERTICAL
    essential: bool


@dataclass(frozen=True)
class CornerReport:
    corners: tuple[CornerRecord, ...]
    essential_nw: int  # distinct cells carrying an essential NW corner
    essential_se: int

    def to_json_obj(self) -> dict:
        return {
            "corners": [{"cell": list(r.cell), "kind": r.kind,
                         "orientation": r.orientation, "essential": r.essential}
                        for r in self.corners],
            "essential_nw": self.essential_nw,
            "essential_se": self.essential_se,
        }


def _nw_corner_records(cs: CellSet, rm: RoadMap) -> list[CornerRecord]:
    """NW corners of all paths with their essentiality flags.

    Inside a target block the vertical paths of the incoming source blocks
    concatenate (in page order) into one relabeled family of v paths; the
    single NW corner a path is allowed "for free" is the NE endpoint of its
    intersection with the relabeled path shifted by v - u.  Everything else
    is essential.  Source blocks are the transposed picture.
    """
    inst = cs.instance
    records = []

    # Relabeled vertical index of every covered cell, per target block
    v_index: dict[str, dict[tuple[int, int], int]] = {t: {} for t in inst.quiver.targets}
    for beta, paths in rm.vertical.items():
        for q, path in enumerate(paths, start=1):
            for pt in path:
                cell = inst.phi_source_inv(beta, *pt)
                ar = inst.arrow(cell.k)
                shift = sum(inst.u[a2.source] for a2 in inst.arrows
                            if a2.target == ar.target and a2.k < ar.k)
                tpos = (cell.i, ar.col_offset + cell.j)
                v_index[ar.target][tpos] = q + shift

    # Relabeled horizontal index of every covered cell, per source block
    h_index: dict[str, dict[tuple[int, int], int]] = {s: {} for s in inst.quiver.sources}
    for alpha, paths in rm.horizontal.items():
        for p, path in enumerate(paths, start=1):
            for pt in path:
                cell = inst.phi_target_inv(alpha, *pt)
                ar = inst.arrow(cell.k)
                shift = sum(inst.u[a2.target] for a2 in inst.arrows
                            if a2.source == ar.source and a2.k < ar.k)
                spos = (ar.row_offset + cell.i, cell.j)
                h_index[ar.source][spos] = p + shift

    for alpha, paths in rm.horizontal.items():
        data = inst.vertex[alpha]
        for p, path in enumerate(paths, start=1):
            pset = set(path)
            free_index = p + data.v - data.u
            for pt in _corners_of(pset, NW):
                m = v_index[alpha].get(pt)
                if m is None:
                    raise CrossCheckError("NW corner not covered by a vertical path")
                essential = True
                if m == free_index:
                    inter = [q for q in pset if v_index[alpha].get(q) == m]
                    ne_end = min(inter, key=lambda q: (q[0], -q[1]))
                    essential = pt != ne_end
                records.append(CornerRecord(inst.phi_target_inv(alpha, *pt), NW, HORIZONTAL, essential))

    for beta, paths in rm.vertical.items():
        data = inst.vertex[beta]
        for q, path in enumerate(paths, start=1):
            pset = set(path)
            free_index = q + data.v - data.u
            for pt in _corners_of(pset, NW):
                pp = h_index[beta].get(pt)
                if pp is None:
                    raise CrossCheckError("NW corner not covered by a horizontal path")
                essential = True
                if pp == free_index:
                    inter = [s for s in pset if h_index[beta].get(s) == pp]
                    sw_end = min(inter, key=lambda s: (-s[0], s[1]))
                    essential = pt != sw_end
                records.append(CornerRecord(inst.phi_source_inv(beta, *pt), NW, VERTICAL, essential))
    return records


def corners(cs: CellSet) -> CornerReport:
    """Classify all path corners of a facet, NW directly and SE through the reflection.

    Reflecting the whole picture by 180 degrees is an exact symmetry that
    swaps NW with SE corners and preserves essentiality, so the SE side is
    read off the reflected configuration.
    """
    rm = road_map(cs)
    records = list(_nw_corner_records(cs, rm))
    r_inst, r_cs = reflect(cs)
    back = _reflect_cell_map(r_inst)
    for rec in _nw_corner_records(r_cs, road_map(r_cs)):
        records.append(CornerRecord(back[rec.cell], SE, rec.orientation, rec.essential))
    records.sort(key=lambda r: (cell_key(r.cell), r.kind, r.orientation))
    ess_nw = len({r.cell for r in records if r.kind == NW and r.essential})
    ess_se = len({r.cell for r in records if r.kind == SE and r.essential})
    for rec in records:
        if rec.cell not in cs:
            raise CrossCheckError("corner cell outside the facet")
    return CornerReport(tuple(records), ess_nw, ess_se)


# -- reflection -----------------------------------------------------------------


@lru_cache(maxsize=128)
def reflect_instance(instance: Instance) -> tuple[Instance, dict[Cell, Cell]]:
    """The 180-degree rotated instance and the cell bijection onto it.

    Arrow order reverses and every page rotates in place; each block matrix
    of the result is the rotation of the original block, so diagonal chains
    and admissibility transfer verbatim.  Cached per instance: callers must
    treat the returned map as read-only.
    """
    r = len(instance.arrows)
    arrows = tuple((ar.source, ar.target) for ar in reversed(instance.arrows))
    quiver = BipartiteQuiver(instance.quiver.sources, instance.quiver.targets, arrows)
    reflected = Instance(quiver, instance.m, instance.u,
                         normalization=instance.normalization)
    cmap = {}
    for cell in instance.cells:
        ar = instance.arrow(cell.k)
        cmap[cell] = Cell(ar.rows + 1 - cell.i, ar.cols + 1 - cell.j, r + 1 - cell.k)
    return reflected, cmap


def _reflect_cell_map(instance: Instance) -> dict[Cell, Cell]:
    _, cmap = reflect_instance(instance)
    return cmap


def reflect(cs: CellSet) -> tuple[Instance, CellSet]:
    """Image of a cell set under the 180-degree rotation (new instance, new set)."""
    reflected, cmap = reflect_instance(cs.instance)
    return reflected, CellSet(reflected, (cmap[c] for c in cs.cells))

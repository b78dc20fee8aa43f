"""Chute moves and complete facet enumeration.

A horizontal chutable rectangle is a 2-row strip inside a target block whose
only occupied positions are its NE, SE and SW corners; the move swaps the SE
occupant for the (empty) NW corner, producing a strictly smaller facet.
Vertical moves are the transposed picture inside source blocks.  Every facet
arises from the initial one by such moves, so a breadth-first closure
enumerates them all; sorted ascending, the result is a shelling order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import CellSet, cmp_T_sets
from .cvm import HORIZONTAL, VERTICAL, initial_cvm, is_cvm
from .errors import FacetCapExceeded, ValidationError
from .quiver import Cell, Instance, TARGET

DEFAULT_FACET_CAP = 10_000_000


@dataclass(frozen=True)
class ChuteMove:
    direction: str       # HORIZONTAL or VERTICAL
    vertex: str          # block the rectangle lives in
    removed: Cell        # the SE occupant
    added: Cell          # the NW corner
    extent: tuple[int, int]  # rectangle shape (rows, cols)

    def __str__(self):
        return (f"{self.direction} move in {self.vertex}: "
                f"{tuple(self.removed)} -> {tuple(self.added)} ({self.extent[0]}x{self.extent[1]})")


def _grid(cs: CellSet, vid: str):
    data = cs.instance.vertex[vid]
    occ = [[False] * (data.b + 2) for _ in range(data.a + 2)]
    for x, y in cs.block_points(vid):
        occ[x][y] = True
    return occ, data


def _horizontal_moves(cs: CellSet, vid: str) -> list[ChuteMove]:
    """All 2-row chutable rectangles of one target block.

    For a fixed SE occupant with its NE neighbor occupied, walk west: the
    first occupied position must sit in the bottom row (the SW corner) with
    a free top row above the walked span, and nothing wider can qualify.
    """
    inst = cs.instance
    occ, data = _grid(cs, vid)
    moves = []
    for x in range(1, data.a):          # top row of the rectangle
        top, bottom = occ[x], occ[x + 1]
        for y2 in range(2, data.b + 1):  # SE column
            if not (bottom[y2] and top[y2]):
                continue
            for y in range(y2 - 1, 0, -1):
                if top[y]:
                    break
                if bottom[y]:
                    moves.append(ChuteMove(
                        HORIZONTAL, vid,
                        removed=inst.phi_target_inv(vid, x + 1, y2),
                        added=inst.phi_target_inv(vid, x, y),
                        extent=(2, y2 - y + 1)))
                    break
    return moves


def _vertical_moves(cs: CellSet, vid: str) -> list[ChuteMove]:
    """Transposed scan: 2-column chutable rectangles of one source block."""
    inst = cs.instance
    occ, data = _grid(cs, vid)
    moves = []
    for y in range(1, data.b):          # left column of the rectangle
        for x2 in range(2, data.a + 1):  # SE row
            if not (occ[x2][y + 1] and occ[x2][y]):
                continue
            for x in range(x2 - 1, 0, -1):
                if occ[x][y]:
                    break
                if occ[x][y + 1]:
                    moves.append(ChuteMove(
                        VERTICAL, vid,
                        removed=inst.phi_source_inv(vid, x2, y + 1),
                        added=inst.phi_source_inv(vid, x, y),
                        extent=(x2 - x + 1, 2)))
                    break
    return moves


def chutable_moves(cs: CellSet) -> list[ChuteMove]:
    """All chute moves applicable to a facet.

    Horizontal rectangles are searched in target blocks and vertical ones in
    source blocks; a 2x2 rectangle qualifies as both and the two coinciding
    moves are emitted once (as the horizontal one).
    """
    if not is_cvm(cs):
        raise ValidationError("chute moves are defined on concurrent vertex maps")
    found: dict[tuple[Cell, Cell], ChuteMove] = {}
    for vid, data in cs.instance.vertex.items():
        scan = _horizontal_moves if data.side == TARGET else _vertical_moves
        for mv in scan(cs, vid):
            found.setdefault((mv.removed, mv.added), mv)
    return sorted(found.values(), key=lambda m: (m.removed, m.added))


def _rectangle_ok(cs: CellSet, move: ChuteMove) -> bool:
    inst = cs.instance
    data = inst.vertex[move.vertex]
    try:
        x1, y1 = inst.phi(move.vertex, move.added)
        x2, y2 = inst.phi(move.vertex, move.removed)
    except ValidationError:
        return False
    if move.direction == HORIZONTAL:
        if data.side != TARGET or x2 != x1 + 1 or y2 - y1 + 1 < 2:
            return False
        expect = {(x2, y1), (x1, y2), (x2, y2)}
    else:
        if data.side == TARGET or y2 != y1 + 1 or x2 - x1 + 1 < 2:
            return False
        expect = {(x1, y2), (x2, y2), (x2, y1)}
    inside = {(x, y) for x, y in cs.block_points(move.vertex)
              if x1 <= x <= x2 and y1 <= y <= y2}
    return inside == expect


def apply_move(cs: CellSet, move: ChuteMove) -> CellSet:
    """Apply one chute move; the result is a facet strictly below the input."""
    if not _rectangle_ok(cs, move):
        raise ValidationError(f"move not applicable: {move}")
    out = CellSet(cs.instance, (*(c for c in cs.cells if c != move.removed), move.added))
    if __debug__:
        assert is_cvm(out)
        assert cmp_T_sets(out, cs) < 0
    return out


def apply_inverse(cs: CellSet, move: ChuteMove) -> CellSet:
    """Undo a chute move previously applied to reach ``cs``."""
    if move.added not in cs or move.removed in cs:
        raise ValidationError(f"inverse move not applicable: {move}")
    return CellSet(cs.instance, (*(c for c in cs.cells if c != move.added), move.removed))


def enumerate_facets(instance: Instance, facet_cap: int = DEFAULT_FACET_CAP) -> list[CellSet]:
    """All facets, as the chute-move closure of the initial one, sorted ascending.

    The ascending order is contractual: it is a shelling order of the
    complex, and its length is the multiplicity.
    """
    if facet_cap < 1:
        raise ValidationError("facet cap must be positive")
    start = initial_cvm(instance)
    seen = {start.mask}
    frontier = [start]
    facets = [start]
    while frontier:
        nxt = []
        for cs in frontier:
            for mv in chutable_moves(cs):
                out = apply_move(cs, mv)
                if out.mask not in seen:
                    if len(seen) >= facet_cap:
                        raise FacetCapExceeded(
                            f"more than {facet_cap} facets; raise the cap to continue")
                    seen.add(out.mask)
                    nxt.append(out)
                    facets.append(out)
        frontier = nxt
    facets.sort(key=lambda f: f.mask)
    return facets

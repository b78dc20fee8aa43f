"""Diagonal-chain statistics on block matrices and the face predicate.

A diagonal chain is a point set strictly increasing in both coordinates.
A cell set is admissible ("u-compatible") when no block matrix sees a chain
longer than that block's rank; these sets are exactly the faces of the
complex the rest of the package works with.

The chain statistics of a cell P against a set C split the longest chain
through P into its strictly-NW and strictly-SE parts (``nw``/``se``); the
padded variants additionally account for the path endpoints pinned to the
block boundary and are the workhorse behind path reconstruction and the
membership criterion.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError
from .quiver import Cell, Instance, TARGET, cell_key


def max_diagonal_chain(points: Iterable[tuple[int, int]]) -> int:
    """Length of the longest subset strictly increasing in both coordinates.

    Sort by row with columns tie-broken descending, then take the longest
    strictly increasing subsequence of columns (patience sorting, O(n log n)).
    """
    pts = sorted(points, key=lambda p: (p[0], -p[1]))
    tails: list[int] = []
    for _, y in pts:
        pos = bisect_left(tails, y)
        if pos == len(tails):
            tails.append(y)
        else:
            tails[pos] = y
    return len(tails)


class BlockStats:
    """Chain-length tables for one block matrix and one cell set.

    ``nw[x][y]`` is the longest chain using only points in rows <= x and
    columns <= y (0-based sentinels included), ``se[x][y]`` the same for
    rows >= x and columns >= y.  Both come out of a single dynamic-programming
    sweep: the longest chain ending at an occupied (x, y) is 1 plus the best
    chain strictly NW of it, which is exactly nw[x-1][y-1].
    """

    __slots__ = ("a", "b", "nw", "se")

    def __init__(self, a: int, b: int, points: Iterable[tuple[int, int]]):
        self.a = a
        self.b = b
        occupied = [[False] * (b + 2) for _ in range(a + 2)]
        for x, y in points:
            occupied[x][y] = True

        nw = [[0] * (b + 1) for _ in range(a + 1)]
        for x in range(1, a + 1):
            row, above, occ = nw[x], nw[x - 1], occupied[x]
            for y in range(1, b + 1):
                best = above[y]
                if row[y - 1] > best:
                    best = row[y - 1]
                if occ[y] and above[y - 1] + 1 > best:
                    best = above[y - 1] + 1
                row[y] = best

        se = [[0] * (b + 2) for _ in range(a + 2)]
        for x in range(a, 0, -1):
            row, below, occ = se[x], se[x + 1], occupied[x]
            for y in range(b, 0, -1):
                best = below[y]
                if row[y + 1] > best:
                    best = row[y + 1]
                if occ[y] and below[y + 1] + 1 > best:
                    best = below[y + 1] + 1
                row[y] = best

        self.nw = nw
        self.se = se

    @property
    def max_chain(self) -> int:
        return self.nw[self.a][self.b]

    def nw_of(self, x: int, y: int) -> int:
        """Longest chain strictly NW of (x, y)."""
        return self.nw[x - 1][y - 1]

    def se_of(self, x: int, y: int) -> int:
        """Longest chain strictly SE of (x, y)."""
        return self.se[x + 1][y + 1]


def padded_nw(raw: int, x: int, y: int, a: int, b: int, u: int) -> int:
    """NW statistic padded by the forced boundary endpoints of the u paths."""
    return max(raw, min(x - 1, u - 1 - min(a - x, b - y)))


def padded_se(raw: int, x: int, y: int, a: int, b: int, u: int) -> int:
    """SE statistic padded by the forced boundary endpoints of the u paths."""
    return max(raw, min(a - x, u - min(x, y)))


class CellSet:
    """An immutable canonical set of cells of one instance.

    Cells are kept sorted under the lattice order and mirrored into a dense
    bitmask indexed by cell rank; comparing masks as integers is exactly the
    set order (compare the sorted sequences from the largest position down).
    Chain-statistic tables are computed lazily per block and cached, which is
    safe because the set never changes.
    """

    __slots__ = ("instance", "cells", "mask", "_stats")

    def __init__(self, instance: Instance, cells: Iterable = ()):
        self.instance = instance
        canon = sorted({instance.check_cell(c) for c in cells}, key=cell_key)
        self.cells: tuple[Cell, ...] = tuple(canon)
        mask = 0
        rank = instance.rank
        for c in canon:
            mask |= 1 << rank[c]
        self.mask = mask
        self._stats: dict[str, BlockStats] = {}

    @classmethod
    def from_mask(cls, instance: Instance, mask: int) -> "CellSet":
        cells = [instance.cells[r] for r in range(instance.size) if mask >> r & 1]
        return cls(instance, cells)

    @classmethod
    def from_triples(cls, instance: Instance, triples) -> "CellSet":
        return cls(instance, [Cell(*t) for t in triples])

    def to_triples(self) -> list[list[int]]:
        return [[c.i, c.j, c.k] for c in self.cells]

    # -- container protocol ---------------------------------------------------

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __contains__(self, cell):
        try:
            return self._contains(cell)
        except (TypeError, ValueError):
            return False

    def _contains(self, cell):
        r = self.instance.rank.get(Cell(*cell))
        return r is not None and self.mask >> r & 1 == 1

    def __eq__(self, other):
        return (isinstance(other, CellSet) and self.mask == other.mask
                and self.instance == other.instance)

    def __hash__(self):
        return hash((self.mask, self.instance))

    def __repr__(self):
        return f"CellSet({[tuple(c) for c in self.cells]})"

    # -- derived sets ----------------------------------------------------------

    def add(self, cell) -> "CellSet":
        return CellSet(self.instance, (*self.cells, cell))

    def remove(self, cell) -> "CellSet":
        cell = self.instance.check_cell(cell)
        if not self._contains(cell):
            raise ValidationError(f"cell {tuple(cell)} not in set")
        return CellSet(self.instance, (c for c in self.cells if c != cell))

    # -- block views -------------------------------------------------------------

    def block_points(self, vid: str) -> list[tuple[int, int]]:
        """The set's image inside the block matrix of ``vid`` (sorted positions)."""
        inst = self.instance
        if inst.vertex[vid].side == TARGET:
            pts = [(c.i, inst.arrow(c.k).col_offset + c.j)
                   for c in self.cells if inst.arrow(c.k).target == vid]
        else:
            pts = [(inst.arrow(c.k).row_offset + c.i, c.j)
                   for c in self.cells if inst.arrow(c.k).source == vid]
        pts.sort()
        return pts

    def page_points(self, k: int) -> list[tuple[int, int]]:
        return sorted((c.i, c.j) for c in self.cells if c.k == k)

    def stats(self, vid: str) -> BlockStats:
        st = self._stats.get(vid)
        if st is None:
            data = self.instance.vertex[vid]
            st = BlockStats(data.a, data.b, self.block_points(vid))
            self._stats[vid] = st
        return st


def cmp_T_sets(left: CellSet, right: CellSet) -> int:
    """Compare equal-size cell sets: sorted sequences from the largest cell down."""
    if left.instance != right.instance:
        raise ValidationError("cell sets belong to different instances")
    if len(left) != len(right):
        raise ValidationError(f"set comparison on unequal cardinalities {len(left)} != {len(right)}")
    return (left.mask > right.mask) - (left.mask < right.mask)


def is_u_compatible(cs: CellSet) -> bool:
    """True iff no block matrix contains a chain longer than its rank."""
    inst = cs.instance
    return all(cs.stats(vid).max_chain <= data.u for vid, data in inst.vertex.items())


def can_extend(cs: CellSet, cell) -> bool:
    """True iff adding ``cell`` keeps the set admissible.

    A new over-long chain would have to pass through the added cell, and the
    longest chain through it is nw + 1 + se in each of its two blocks; so the
    definition-level check collapses to two table lookups.
    """
    inst = cs.instance
    cell = inst.check_cell(cell)
    if cs._contains(cell):
        raise ValidationError(f"cell {tuple(cell)} already in set")
    tgt, ti, tj = inst.phi_target(cell)
    if cs.stats(tgt).nw_of(ti, tj) + cs.stats(tgt).se_of(ti, tj) >= inst.vertex[tgt].u:
        return False
    src, si, sj = inst.phi_source(cell)
    return cs.stats(src).nw_of(si, sj) + cs.stats(src).se_of(si, sj) < inst.vertex[src].u


@dataclass(frozen=True)
class ChainStats:
    """All eight chain statistics of one cell against one cell set.

    The first four live in the target-side block, the ``src`` four in the
    source-side block; ``*_padded`` adds the boundary padding terms.
    """

    nw: int
    se: int
    nw_padded: int
    se_padded: int
    nw_src: int
    se_src: int
    nw_src_padded: int
    se_src_padded: int


def corner_stats(cs: CellSet, cell) -> ChainStats:
    inst = cs.instance
    cell = inst.check_cell(cell)
    tgt, ti, tj = inst.phi_target(cell)
    src, si, sj = inst.phi_source(cell)
    td, sd = inst.vertex[tgt], inst.vertex[src]
    tst, sst = cs.stats(tgt), cs.stats(src)
    nw, se = tst.nw_of(ti, tj), tst.se_of(ti, tj)
    nw_s, se_s = sst.nw_of(si, sj), sst.se_of(si, sj)
    return ChainStats(
        nw=nw,
        se=se,
        nw_padded=padded_nw(nw, ti, tj, td.a, td.b, td.u),
        se_padded=padded_se(se, ti, tj, td.a, td.b, td.u),
        nw_src=nw_s,
        se_src=se_s,
        # the source-side block is the transpose situation: swap coordinates
        nw_src_padded=padded_nw(nw_s, sj, si, sd.b, sd.a, sd.u),
        se_src_padded=padded_se(se_s, sj, si, sd.b, sd.a, sd.u),
    )

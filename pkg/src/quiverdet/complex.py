"""Face enumeration and structural checks for the complex of admissible sets.

Admissible sets form a hereditary family, so a depth-first scan that only
ever extends by cells keeping the set admissible visits every face exactly
once.  The same engine backs the f-vector, the brute-force facet oracle and
the bounded purity spot-checks; at every node it rebuilds the per-block
chain tables (cheap at the guarded sizes) and reads off which cells are
still addable anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .chains import CellSet, is_u_compatible
from .cvm import c_max, c_min, corners
from .errors import GuardExceeded, ValidationError
from .quiver import Instance

DEFAULT_MAX_CELLS = 32
DEFAULT_VDC_GUARD = 14


class _FaceSearch:
    """Depth-first enumeration of admissible sets ``base ∪ X``.

    The visitor receives, for every admissible X over the universe cells,
    the X bitmask and the bitmask of all cells of L (not only the universe)
    that could still be added.
    """

    def __init__(self, instance: Instance, base=()):
        self.instance = instance
        vids = list(instance.vertex)
        vindex = {v: i for i, v in enumerate(vids)}
        self.blocks = []
        for v in vids:
            d = instance.vertex[v]
            self.blocks.append((d.a, d.b, [[False] * (d.b + 2) for _ in range(d.a + 2)]))
        self.block_u = [instance.vertex[v].u for v in vids]
        info = []
        for cell in instance.cells:
            tv, ti, tj = instance.phi_target(cell)
            sv, si, sj = instance.phi_source(cell)
            info.append((vindex[tv], ti, tj, instance.vertex[tv].u,
                         vindex[sv], si, sj, instance.vertex[sv].u))
        self.cell_info = info

        base_mask = 0
        for c in base:
            base_mask |= 1 << instance.rank[instance.check_cell(c)]
        self.base_mask = base_mask
        for r in range(instance.size):
            if base_mask >> r & 1:
                self._occupy(r, True)
        for (a, b, occ), u in zip(self.blocks, self.block_u):
            if _nw_table(a, b, occ)[a][b] > u:
                raise ValidationError("base set is not u-compatible")

    def _occupy(self, r: int, flag: bool):
        tv, ti, tj, _, sv, si, sj, _ = self.cell_info[r]
        self.blocks[tv][2][ti][tj] = flag
        self.blocks[sv][2][si][sj] = flag

    def _addable(self, occupied_mask: int) -> int:
        tabs = [(_nw_table(a, b, occ), _se_table(a, b, occ)) for a, b, occ in self.blocks]
        mask = 0
        bit = 1
        for tv, ti, tj, tu, sv, si, sj, su in self.cell_info:
            if not occupied_mask & bit:
                tnw, tse = tabs[tv]
                if tnw[ti - 1][tj - 1] + tse[ti + 1][tj + 1] < tu:
                    snw, sse = tabs[sv]
                    if snw[si - 1][sj - 1] + sse[si + 1][sj + 1] < su:
                        mask |= bit
            bit <<= 1
        return mask

    def run(self, visit, universe_mask: int | None = None):
        if universe_mask is None:
            universe_mask = (1 << self.instance.size) - 1 & ~self.base_mask

        def rec(x_mask: int, min_rank: int):
            addable = self._addable(self.base_mask | x_mask)
            visit(x_mask, addable)
            cand = addable & universe_mask & ~((1 << min_rank) - 1)
            while cand:
                low = cand & -cand
                cand ^= low
                r = low.bit_length() - 1
                self._occupy(r, True)
                rec(x_mask | low, r + 1)
                self._occupy(r, False)

        rec(0, 0)


def _nw_table(a, b, occ):
    nw = [[0] * (b + 1) for _ in range(a + 1)]
    for x in range(1, a + 1):
        row, up, o = nw[x], nw[x - 1], occ[x]
        for y in range(1, b + 1):
            best = up[y]
            t = row[y - 1]
            if t > best:
                best = t
            if o[y]:
                t = up[y - 1] + 1
                if t > best:
                    best = t
            row[y] = best
    return nw


def _se_table(a, b, occ):
    se = [[0] * (b + 2) for _ in range(a + 2)]
    for x in range(a, 0, -1):
        row, dn, o = se[x], se[x + 1], occ[x]
        for y in range(b, 0, -1):
            best = dn[y]
            t = row[y + 1]
            if t > best:
                best = t
            if o[y]:
                t = dn[y + 1] + 1
                if t > best:
                    best = t
            row[y] = best
    return se


@dataclass(frozen=True)
class FaceTable:
    """Face counts by cardinality (index = number of cells = dimension + 1)."""

    counts_by_size: tuple[int, ...]
    faces_by_size: tuple[tuple[int, ...], ...] | None = None
    interior_by_size: tuple[int, ...] | None = None
    boundary_generators: int | None = None

    @property
    def f_vector(self) -> tuple[int, ...]:
        """(f_-1, f_0, ..., f_{N-1})."""
        return self.counts_by_size

    @property
    def total(self) -> int:
        return sum(self.counts_by_size)

    @property
    def interior_total(self) -> int:
        return sum(self.interior_by_size or ())

    def to_json_obj(self) -> dict:
        obj = {"f_vector": list(self.counts_by_size), "total": self.total}
        if self.interior_by_size is not None:
            obj["interior_vector"] = list(self.interior_by_size)
            obj["interior_total"] = self.interior_total
            obj["boundary_generators"] = self.boundary_generators
        return obj


def f_vector(instance: Instance, max_cells_guard: int = DEFAULT_MAX_CELLS,
             store_faces: bool = False) -> FaceTable:
    """Count admissible sets by cardinality by pruned depth-first backtracking."""
    if instance.size > max_cells_guard:
        raise GuardExceeded(f"|L| = {instance.size} exceeds guard {max_cells_guard}")
    counts = [0] * (instance.size + 1)
    stored: list[list[int]] | None = [[] for _ in range(instance.size + 1)] if store_faces else None

    def visit(mask, _addable):
        size = mask.bit_count()
        counts[size] += 1
        if stored is not None:
            stored[size].append(mask)

    _FaceSearch(instance).run(visit)
    top = max(s for s, c in enumerate(counts) if c) if any(counts) else 0
    return FaceTable(
        counts_by_size=tuple(counts[: top + 1]),
        faces_by_size=tuple(tuple(ms) for ms in stored[: top + 1]) if stored is not None else None,
    )


def codim1_membership(sub: CellSet) -> list[CellSet]:
    """The one or two facets containing an admissible set of cardinality N - 1."""
    inst = sub.instance
    if len(sub) != inst.n_cells - 1:
        raise ValidationError(f"expected cardinality {inst.n_cells - 1}, got {len(sub)}")
    if not is_u_compatible(sub):
        raise ValidationError("set is not u-compatible")
    lo, hi = c_min(sub), c_max(sub)
    return [lo] if lo == hi else [lo, hi]


def boundary_generator_masks(instance: Instance, facets) -> list[int]:
    """Codim-1 faces lying in exactly one facet, deduplicated, as bitmasks."""
    out = []
    seen: set[int] = set()
    for facet in facets:
        for cell in facet.cells:
            sub_mask = facet.mask & ~(1 << instance.rank[cell])
            if sub_mask in seen:
                continue
            seen.add(sub_mask)
            if len(codim1_membership(CellSet.from_mask(instance, sub_mask))) == 1:
                out.append(sub_mask)
    return out


def interior_faces(instance: Instance, table: FaceTable, facets) -> FaceTable:
    """Mark interior faces: those not inside any boundary codim-1 face.

    The complex is a shellable ball, so its boundary is generated by the
    codim-1 faces contained in exactly one facet; a face is interior exactly
    when it is a subset of none of them (checked by bitmask containment).
    """
    if table.faces_by_size is None:
        raise ValidationError("interior faces need f_vector(store_faces=True)")
    gens = boundary_generator_masks(instance, facets)
    interior = []
    for masks in table.faces_by_size:
        count = 0
        for m in masks:
            for g in gens:
                if m & g == m:
                    break
            else:
                count += 1
        interior.append(count)
    return replace(table, interior_by_size=tuple(interior), boundary_generators=len(gens))


@dataclass(frozen=True)
class ShellingReport:
    ok: bool
    restriction_counts: tuple[int, ...]
    failure: str | None = None

    def to_json_obj(self) -> dict:
        return {"ok": self.ok, "restriction_counts": list(self.restriction_counts),
                "failure": self.failure}


def verify_shelling(facets_in_order, corner_kind: str = "SE") -> ShellingReport:
    """Check that the given facet order is a shelling and matches the corner counts.

    For every facet past the first, the intersections with earlier facets
    must be covered by shared codim-1 faces, and the number of those faces
    must equal the facet's essential corner count (zero, by convention and
    in fact, for the first facet).  The ascending scan direction pairs with
    SE corners; the descending direction is the reflected picture and pairs
    with NW corners.
    """
    if corner_kind not in ("SE", "NW"):
        raise ValidationError(f"corner kind must be SE or NW, got {corner_kind!r}")
    facets = list(facets_in_order)
    r_seq: list[int] = []
    if not facets:
        return ShellingReport(True, ())
    n_top = len(facets[0])
    masks = [f.mask for f in facets]
    for j, facet in enumerate(facets):
        if len(facet) != n_top:
            return ShellingReport(False, tuple(r_seq), f"facet {j + 1} has wrong cardinality")
        shared = set()
        inters = []
        mj = masks[j]
        for i in range(j):
            inter = masks[i] & mj
            inters.append(inter)
            if inter.bit_count() == n_top - 1:
                shared.add(inter)
        for inter in inters:
            if not any(inter & s == inter for s in shared):
                return ShellingReport(
                    False, tuple(r_seq),
                    f"facet {j + 1}: an earlier intersection is not inside a shared codim-1 face")
        rj = len(shared)
        r_seq.append(rj)
        rep = corners(facet)
        expected = rep.essential_se if corner_kind == "SE" else rep.essential_nw
        if rj != expected:
            return ShellingReport(
                False, tuple(r_seq),
                f"facet {j + 1}: restriction count {rj} != "
                f"essential {corner_kind} corners {expected}")
    return ShellingReport(True, tuple(r_seq))


@dataclass(frozen=True)
class VdcSample:
    prefix_length: int
    seed_cells: tuple
    maximal_count: int
    sizes: tuple[int, ...]

    @property
    def pure(self) -> bool:
        return len(set(self.sizes)) <= 1


@dataclass(frozen=True)
class VdcReport:
    samples: tuple[VdcSample, ...]

    @property
    def ok(self) -> bool:
        return all(s.pure for s in self.samples)

    def to_json_obj(self) -> dict:
        return {"ok": self.ok,
                "samples": [{"prefix_length": s.prefix_length,
                             "seed": [list(c) for c in s.seed_cells],
                             "maximal_count": s.maximal_count,
                             "sizes": sorted(set(s.sizes)),
                             "pure": s.pure} for s in self.samples]}


def check_vertex_decomposition_samples(instance: Instance, sample_budget: int = 30,
                                       size_guard: int = DEFAULT_VDC_GUARD,
                                       seed: int | None = None) -> VdcReport:
    """Bounded purity spot-check of the deletion/link towers.

    For random prefixes and random admissible seeds inside the prefix, all
    maximal completions by suffix cells must have the same cardinality.
    """
    if instance.size > size_guard:
        raise GuardExceeded(f"|L| = {instance.size} exceeds guard {size_guard}")
    rng = random.Random(seed)
    samples = []
    for _ in range(sample_budget):
        ell = rng.randint(0, instance.size)
        prefix = instance.cells[:ell]
        seed_cells: tuple = ()
        for _attempt in range(32):
            pick = tuple(c for c in prefix if rng.random() < 0.5)
            if is_u_compatible(CellSet(instance, pick)):
                seed_cells = pick
                break
        suffix_mask = ((1 << instance.size) - 1) & ~((1 << ell) - 1)
        sizes: list[int] = []

        def visit(mask, addable, _suffix=suffix_mask, _sizes=sizes):
            if addable & _suffix == 0:
                _sizes.append(mask.bit_count())

        _FaceSearch(instance, base=seed_cells).run(visit, universe_mask=suffix_mask)
        samples.append(VdcSample(ell, seed_cells, len(sizes), tuple(sizes)))
    return VdcReport(tuple(samples))

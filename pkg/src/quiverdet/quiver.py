"""Bipartite quiver instances, block-matrix geometry, and the cell lattice.

An instance fixes a bipartite quiver (arrows go from source vertices to
target vertices, arrow order is significant), a dimension vector ``m`` and a
rank vector ``u``.  Every arrow k carries a page of variable cells of shape
``m[target] x m[source]``; the pages concatenate horizontally into one block
matrix per target and stack vertically into one block matrix per source.
All downstream combinatorics lives on the cell lattice L of triples
``(i, j, k)`` (row, column, page; 1-based) under the total order
"page, then row, then column".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .errors import ValidationError

TARGET = "target"
SOURCE = "source"


class Cell(NamedTuple):
    """A lattice point of L: row ``i``, column ``j`` on page ``k`` (1-based)."""

    i: int
    j: int
    k: int


def cell_key(cell) -> tuple[int, int, int]:
    """Sort key realizing the total order on cells: page, then row, then column."""
    i, j, k = cell
    return (k, i, j)


def cmp_T(a, b) -> int:
    """Compare two cells under the total order; returns -1, 0 or 1."""
    ka, kb = cell_key(a), cell_key(b)
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class BipartiteQuiver:
    """A bipartite quiver: arrows run from sources to targets, in a fixed order.

    The arrow order is part of the data; it fixes the page order inside every
    block matrix.
    """

    sources: tuple[str, ...]
    targets: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]

    def __post_init__(self):
        src_set, tgt_set = set(self.sources), set(self.targets)
        if len(src_set) != len(self.sources) or len(tgt_set) != len(self.targets):
            raise ValidationError("duplicate vertex ids")
        if src_set & tgt_set:
            raise ValidationError(f"source and target ids overlap: {sorted(src_set & tgt_set)}")
        for s, t in self.arrows:
            if s not in src_set:
                raise ValidationError(f"arrow {s}->{t}: {s!r} is not a source vertex")
            if t not in tgt_set:
                raise ValidationError(f"arrow {s}->{t}: {t!r} is not a target vertex")

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.sources + self.targets

    def incident_count(self, vid: str) -> int:
        return sum(1 for s, t in self.arrows if vid in (s, t))


@dataclass(frozen=True)
class Arrow:
    """One arrow with its page geometry and offsets into both block matrices."""

    k: int
    source: str
    target: str
    rows: int        # m[target]
    cols: int        # m[source]
    col_offset: int  # columns of earlier pages inside the target block
    row_offset: int  # rows of earlier pages inside the source block


@dataclass(frozen=True)
class VertexData:
    """Derived block geometry of one vertex."""

    vid: str
    side: str  # TARGET or SOURCE
    m: int
    u: int
    a: int     # block rows
    b: int     # block cols
    v: int     # rank sum over the opposite endpoints of incident arrows


@dataclass(frozen=True)
class NormalizationReport:
    """What build_instance(mode="normalize") changed to reach the normal form."""

    clamped: tuple[tuple[str, int, int], ...] = ()      # (vertex, old u, new u)
    removed_vertices: tuple[str, ...] = ()
    removed_pages: tuple[tuple[str, str, int, int], ...] = ()  # (source, target, rows, cols)

    @property
    def removed_variable_count(self) -> int:
        return sum(r * c for _, _, r, c in self.removed_pages)

    @property
    def trivial(self) -> bool:
        return not (self.clamped or self.removed_vertices or self.removed_pages)

    def to_json_obj(self) -> dict:
        return {
            "clamped": [{"vertex": v, "from": old, "to": new} for v, old, new in self.clamped],
            "removed_vertices": list(self.removed_vertices),
            "removed_pages": [
                {"from": s, "to": t, "rows": r, "cols": c} for s, t, r, c in self.removed_pages
            ],
            "removed_variable_count": self.removed_variable_count,
        }


def _derive_geometry(quiver: BipartiteQuiver, m: Mapping[str, int], u: Mapping[str, int]):
    """Compute (a, b, v) for every vertex from the current quiver and ranks."""
    geom = {}
    for t in quiver.targets:
        b = sum(m[s] for s, tt in quiver.arrows if tt == t)
        v = sum(u[s] for s, tt in quiver.arrows if tt == t)
        geom[t] = (m[t], b, v)
    for s in quiver.sources:
        a = sum(m[t] for ss, t in quiver.arrows if ss == s)
        v = sum(u[t] for ss, t in quiver.arrows if ss == s)
        geom[s] = (a, m[s], v)
    return geom


class Instance:
    """A validated (quiver, m, u) triple with all derived geometry.

    Instances are immutable after construction and safe to share across
    threads; every downstream operation is a pure function of an Instance
    plus cell data.
    """

    def __init__(self, quiver: BipartiteQuiver, m: Mapping[str, int], u: Mapping[str, int],
                 normalization: NormalizationReport | None = None):
        self.quiver = quiver
        self.m = dict(m)
        self.u = dict(u)
        self.normalization = normalization or NormalizationReport()

        geom = _derive_geometry(quiver, self.m, self.u)
        self.vertex: dict[str, VertexData] = {}
        for vid in quiver.targets:
            a, b, v = geom[vid]
            self.vertex[vid] = VertexData(vid, TARGET, self.m[vid], self.u[vid], a, b, v)
        for vid in quiver.sources:
            a, b, v = geom[vid]
            self.vertex[vid] = VertexData(vid, SOURCE, self.m[vid], self.u[vid], a, b, v)

        arrows = []
        col_used = {t: 0 for t in quiver.targets}
        row_used = {s: 0 for s in quiver.sources}
        for k, (s, t) in enumerate(quiver.arrows, start=1):
            rows, cols = self.m[t], self.m[s]
            arrows.append(Arrow(k, s, t, rows, cols, col_used[t], row_used[s]))
            col_used[t] += cols
            row_used[s] += rows
        self.arrows: tuple[Arrow, ...] = tuple(arrows)

        cells = []
        for ar in self.arrows:
            for i in range(1, ar.rows + 1):
                for j in range(1, ar.cols + 1):
                    cells.append(Cell(i, j, ar.k))
        self.cells: tuple[Cell, ...] = tuple(cells)  # already in (k, i, j) order
        self.rank: dict[Cell, int] = {c: r for r, c in enumerate(self.cells)}
        self.size: int = len(self.cells)

        self.n_cells: int = (
            sum(self.u[a.source] * self.u[a.target] for a in self.arrows)
            + sum(d.u * (d.a - d.u) for d in self.vertex.values() if d.side == TARGET)
            + sum(d.u * (d.b - d.u) for d in self.vertex.values() if d.side == SOURCE)
        )

        self._key = (quiver.sources, quiver.targets, quiver.arrows,
                     tuple(sorted(self.m.items())), tuple(sorted(self.u.items())))

    # -- structural identity ------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Instance) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return (f"Instance(sources={list(self.quiver.sources)}, targets={list(self.quiver.targets)}, "
                f"arrows={list(self.quiver.arrows)}, |L|={self.size}, N={self.n_cells})")

    # -- coordinate maps ------------------------------------------------------

    def arrow(self, k: int) -> Arrow:
        return self.arrows[k - 1]

    def check_cell(self, cell) -> Cell:
        cell = Cell(*cell)
        if cell not in self.rank:
            raise ValidationError(f"cell {tuple(cell)} out of range")
        return cell

    def phi_target(self, cell) -> tuple[str, int, int]:
        """Block-matrix position of a cell on its target side: (vertex, row, col)."""
        cell = self.check_cell(cell)
        ar = self.arrow(cell.k)
        return ar.target, cell.i, ar.col_offset + cell.j

    def phi_source(self, cell) -> tuple[str, int, int]:
        """Block-matrix position of a cell on its source side: (vertex, row, col)."""
        cell = self.check_cell(cell)
        ar = self.arrow(cell.k)
        return ar.source, ar.row_offset + cell.i, cell.j

    def phi_target_inv(self, vid: str, row: int, col: int) -> Cell:
        data = self.vertex[vid]
        if data.side != TARGET:
            raise ValidationError(f"{vid!r} is not a target vertex")
        if not (1 <= row <= data.a and 1 <= col <= data.b):
            raise ValidationError(f"position ({row},{col}) outside block of {vid!r}")
        for ar in self.arrows:
            if ar.target == vid and ar.col_offset < col <= ar.col_offset + ar.cols:
                return Cell(row, col - ar.col_offset, ar.k)
        raise ValidationError(f"position ({row},{col}) not covered by any page of {vid!r}")

    def phi_source_inv(self, vid: str, row: int, col: int) -> Cell:
        data = self.vertex[vid]
        if data.side != SOURCE:
            raise ValidationError(f"{vid!r} is not a source vertex")
        if not (1 <= row <= data.a and 1 <= col <= data.b):
            raise ValidationError(f"position ({row},{col}) outside block of {vid!r}")
        for ar in self.arrows:
            if ar.source == vid and ar.row_offset < row <= ar.row_offset + ar.rows:
                return Cell(row - ar.row_offset, col, ar.k)
        raise ValidationError(f"position ({row},{col}) not covered by any page of {vid!r}")

    def phi(self, vid: str, cell) -> tuple[int, int]:
        """Position of a cell inside the block matrix of ``vid`` (either side)."""
        if self.vertex[vid].side == TARGET:
            v, r, c = self.phi_target(cell)
        else:
            v, r, c = self.phi_source(cell)
        if v != vid:
            raise ValidationError(f"cell {tuple(cell)} does not lie in the block of {vid!r}")
        return r, c

    def phi_inv(self, vid: str, row: int, col: int) -> Cell:
        if self.vertex[vid].side == TARGET:
            return self.phi_target_inv(vid, row, col)
        return self.phi_source_inv(vid, row, col)

    def block_vertices_of(self, cell) -> tuple[str, str]:
        """(target vertex, source vertex) of the page holding this cell."""
        ar = self.arrow(Cell(*cell).k)
        return ar.target, ar.source

    # -- serialization --------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "sources": list(self.quiver.sources),
            "targets": list(self.quiver.targets),
            "arrows": [{"from": s, "to": t} for s, t in self.quiver.arrows],
            "m": dict(self.m),
            "u": dict(self.u),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)


def n_cells(instance: Instance) -> int:
    """Cardinality shared by every facet: rank products over arrows plus boundary terms."""
    return instance.n_cells


def build_instance(quiver: BipartiteQuiver, m: Mapping[str, int], u: Mapping[str, int],
                   mode: str = "strict") -> Instance:
    """Validate or normalize (quiver, m, u) and build an Instance.

    strict mode rejects any violation of the normalized rank constraints
    ``0 < u <= min(a, b)`` and ``u <= v``.  normalize mode clamps ranks down
    to those bounds iteratively until stable, removes rank-0 vertices with
    their incident arrows (the dropped pages are reported, their variables
    would turn into degree-one generators), and records everything in the
    instance's NormalizationReport.
    """
    if mode not in ("strict", "normalize"):
        raise ValidationError(f"unknown mode {mode!r}")
    for vid in quiver.vertices:
        if vid not in m:
            raise ValidationError(f"m missing for vertex {vid!r}")
        if vid not in u:
            raise ValidationError(f"u missing for vertex {vid!r}")
        if int(m[vid]) != m[vid] or m[vid] < 1:
            raise ValidationError(f"m[{vid!r}] must be a positive integer, got {m[vid]!r}")
        if int(u[vid]) != u[vid]:
            raise ValidationError(f"u[{vid!r}] must be an integer, got {u[vid]!r}")

    if mode == "strict":
        for vid in quiver.vertices:
            if u[vid] <= 0:
                raise ValidationError(f"u[{vid!r}] = {u[vid]} is not positive")
            if quiver.incident_count(vid) == 0:
                raise ValidationError(f"vertex {vid!r} has no incident arrows")
        geom = _derive_geometry(quiver, m, u)
        for vid in quiver.vertices:
            a, b, v = geom[vid]
            if u[vid] > min(a, b):
                raise ValidationError(
                    f"u[{vid!r}] = {u[vid]} exceeds min(a, b) = {min(a, b)}")
            if u[vid] > v:
                raise ValidationError(f"u[{vid!r}] = {u[vid]} exceeds opposite rank sum {v}")
        return Instance(quiver, m, u)

    # normalize mode
    for vid in quiver.vertices:
        if u[vid] < 0:
            raise ValidationError(f"u[{vid!r}] = {u[vid]} is negative")
    sources = list(quiver.sources)
    targets = list(quiver.targets)
    arrows = list(quiver.arrows)
    mm = {vid: m[vid] for vid in quiver.vertices}
    uu = {vid: u[vid] for vid in quiver.vertices}
    clamped: list[tuple[str, int, int]] = []
    removed_vertices: list[str] = []
    removed_pages: list[tuple[str, str, int, int]] = []

    while True:
        if not arrows or not (sources or targets):
            raise ValidationError("empty quiver after normalization")
        work = BipartiteQuiver(tuple(sources), tuple(targets), tuple(arrows))
        geom = _derive_geometry(work, mm, uu)
        changed = False
        for vid in work.vertices:
            a, b, v = geom[vid]
            bound = min(a, b, v)
            if uu[vid] > bound:
                clamped.append((vid, uu[vid], bound))
                uu[vid] = bound
                changed = True
        dead = [vid for vid in work.vertices if uu[vid] <= 0]
        if dead:
            dead_set = set(dead)
            for s, t in arrows:
                if s in dead_set or t in dead_set:
                    removed_pages.append((s, t, mm[t], mm[s]))
            arrows = [(s, t) for s, t in arrows if s not in dead_set and t not in dead_set]
            sources = [v for v in sources if v not in dead_set]
            targets = [v for v in targets if v not in dead_set]
            removed_vertices.extend(dead)
            for vid in dead:
                del mm[vid], uu[vid]
            changed = True
        if not changed:
            break

    final = BipartiteQuiver(tuple(sources), tuple(targets), tuple(arrows))
    if any(final.incident_count(vid) == 0 for vid in final.vertices):
        # isolated vertices have min(a, b) = 0, so the loop above removed them
        raise AssertionError("normalization left an isolated vertex")
    report = NormalizationReport(tuple(clamped), tuple(removed_vertices), tuple(removed_pages))
    return Instance(final, mm, uu, normalization=report)


def load_instance(source, mode: str = "normalize") -> Instance:
    """Build an Instance from a JSON document (dict, JSON string, or file path).

    Schema: {"sources": [...], "targets": [...], "arrows": [{"from":..,"to":..}, ...],
    "m": {...}, "u": {...}}; the arrow array order defines the page order.
    """
    if isinstance(source, dict):
        obj = source
    else:
        text = str(source)
        try:
            if "{" not in text:
                with open(text, "r", encoding="utf-8") as fh:
                    text = fh.read()
            obj = json.loads(text)
        except OSError as exc:
            raise ValidationError(f"cannot read instance file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"instance document is not valid JSON: {exc}") from exc
    try:
        quiver = BipartiteQuiver(
            tuple(obj["sources"]), tuple(obj["targets"]),
            tuple((a["from"], a["to"]) for a in obj["arrows"]))
        return build_instance(quiver, obj["m"], obj["u"], mode=mode)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed instance document: {exc}") from exc

"""Multiplicity, h-polynomial and Z-graded Hilbert series, by independent routes.

All polynomial arithmetic is exact over the integers.  The h-polynomial has
three routes: counting facets by essential SE corners, by essential NW
corners, and transforming the f-vector; the series itself has a second,
interior-face expression.  The routes are mathematically equal, so any
disagreement is reported as an internal error rather than a result.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .complex import FaceTable, f_vector, interior_faces
from .cvm import corners
from .errors import CrossCheckError, ValidationError
from .moves import enumerate_facets
from .quiver import Instance

SE_CORNERS = "se_corners"
NW_CORNERS = "nw_corners"
F_TRANSFORM = "f_transform"


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _one_minus_t_power(n: int) -> list[int]:
    return [(-1) ** i * comb(n, i) for i in range(n + 1)]


@dataclass(frozen=True)
class HilbertSeries:
    """A rational series numerator / (1 - t)^N with nonnegative integer numerator."""

    numerator: tuple[int, ...]
    denominator_exponent: int

    def __post_init__(self):
        if any(h < 0 for h in self.numerator):
            raise CrossCheckError(f"negative h-vector entry in {self.numerator}")

    @property
    def multiplicity(self) -> int:
        return sum(self.numerator)

    @property
    def palindromic(self) -> bool:
        return self.numerator == tuple(reversed(self.numerator))

    def render(self) -> str:
        terms = []
        for i, h in enumerate(self.numerator):
            if h == 0:
                continue
            if i == 0:
                terms.append(str(h))
            else:
                coef = "" if h == 1 else str(h)
                power = "t" if i == 1 else f"t^{i}"
                terms.append(f"{coef}{power}")
        num = "+".join(terms) if terms else "0"
        return f"({num})/(1-t)^{self.denominator_exponent}"

    def to_json_obj(self) -> dict:
        return {"numerator": list(self.numerator),
                "denominator_exponent": self.denominator_exponent,
                "multiplicity": self.multiplicity,
                "palindromic": self.palindromic}


def _h_from_reports(reports, kind: str) -> tuple[int, ...]:
    counts: dict[int, int] = {}
    for rep in reports:
        n = rep.essential_se if kind == SE_CORNERS else rep.essential_nw
        counts[n] = counts.get(n, 0) + 1
    top = max(counts) if counts else 0
    return _trim([counts.get(i, 0) for i in range(top + 1)])


def _h_from_f(table: FaceTable, n_top: int) -> tuple[int, ...]:
    acc = [0] * (n_top + 1)
    for size, count in enumerate(table.counts_by_size):
        if count == 0:
            continue
        for i, c in enumerate(_one_minus_t_power(n_top - size)):
            acc[size + i] += count * c
    return _trim(acc)


def _h_from_interior(table: FaceTable, n_top: int) -> tuple[int, ...]:
    if table.interior_by_size is None:
        raise ValidationError("interior counts not computed")
    acc = [0] * (n_top + 1)
    for size, count in enumerate(table.interior_by_size):
        if count == 0:
            continue
        sign = (-1) ** (n_top - size)
        for i, c in enumerate(_one_minus_t_power(n_top - size)):
            acc[i] += sign * count * c
    return _trim(acc)


def h_polynomial(instance: Instance, route: str | None = None, facets=None,
                 face_table: FaceTable | None = None,
                 max_cells_guard: int = 32) -> tuple[int, ...]:
    """h-polynomial coefficients by the requested route (all three, cross-checked, if None)."""
    if route not in (None, SE_CORNERS, NW_CORNERS, F_TRANSFORM):
        raise ValidationError(f"unknown route {route!r}")
    results = {}
    if route in (None, SE_CORNERS, NW_CORNERS):
        if facets is None:
            facets = enumerate_facets(instance)
        reports = [corners(f) for f in facets]
        if route in (None, SE_CORNERS):
            results[SE_CORNERS] = _h_from_reports(reports, SE_CORNERS)
        if route in (None, NW_CORNERS):
            results[NW_CORNERS] = _h_from_reports(reports, NW_CORNERS)
    if route in (None, F_TRANSFORM):
        if face_table is None:
            face_table = f_vector(instance, max_cells_guard=max_cells_guard)
        results[F_TRANSFORM] = _h_from_f(face_table, instance.n_cells)
    if len(set(results.values())) != 1:
        raise CrossCheckError(f"h-polynomial routes disagree: {results}")
    return next(iter(results.values()))


def hilbert_series(instance: Instance, facets=None, oracle: bool = False,
                   max_cells_guard: int = 32) -> HilbertSeries:
    """The series h(t) / (1 - t)^N from the corner routes.

    Oracle mode additionally derives the numerator from the f-vector and
    from the alternating interior-face expression and insists all of them
    agree (this pulls in the brute-force guard).
    """
    if facets is None:
        facets = enumerate_facets(instance)
    reports = [corners(f) for f in facets]
    h_se = _h_from_reports(reports, SE_CORNERS)
    h_nw = _h_from_reports(reports, NW_CORNERS)
    if h_se != h_nw:
        raise CrossCheckError(f"corner routes disagree: {h_se} vs {h_nw}")
    if oracle:
        table = f_vector(instance, max_cells_guard=max_cells_guard, store_faces=True)
        table = interior_faces(instance, table, facets)
        h_f = _h_from_f(table, instance.n_cells)
        h_int = _h_from_interior(table, instance.n_cells)
        if not (h_se == h_f == h_int):
            raise CrossCheckError(
                f"series routes disagree: corners {h_se}, f-transform {h_f}, interior {h_int}")
    series = HilbertSeries(h_se, instance.n_cells)
    if series.multiplicity != len(facets):
        raise CrossCheckError(
            f"h(1) = {series.multiplicity} but {len(facets)} facets enumerated")
    return series


def multiplicity(instance: Instance, facets=None) -> int:
    """Number of facets; checked against the h-polynomial at t = 1."""
    if facets is None:
        facets = enumerate_facets(instance)
    return hilbert_series(instance, facets=facets).multiplicity


def gorenstein_hint(instance: Instance, facets=None) -> bool:
    """Whether the h-vector is palindromic (the Gorenstein indicator)."""
    return hilbert_series(instance, facets=facets).palindromic

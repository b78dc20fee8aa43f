"""End-to-end oracle suite: every fast route is replayed against a slow one.

Used by the ``verify`` CLI subcommand and by the acceptance tests.  Each
check pairs an optimized computation with an independent definition-level
recomputation; any mismatch is a bug, so the suite reports the first failure
with enough detail to reproduce it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .chains import CellSet, corner_stats, is_u_compatible
from .complex import _FaceSearch, verify_shelling
from .cvm import c_max, c_min, initial_cvm, reflect, reflect_instance
from .errors import QuiverDetError
from .moves import enumerate_facets
from .quiver import BipartiteQuiver, Instance, build_instance
from .series import hilbert_series

BRUTE_MAX_CELLS = 32


def brute_maximal_facet_masks(instance: Instance) -> list[int]:
    """All maximal admissible sets by exhaustive pruned search (no chute moves)."""
    out = []

    def visit(mask, addable):
        if addable == 0:
            out.append(mask)

    _FaceSearch(instance).run(visit)
    out.sort()
    return out


def criteria_agree(instance: Instance, cells) -> tuple[bool, bool, bool, bool]:
    """Evaluate the three facet criteria on an arbitrary cell set.

    Returns (cardinality route, raw-statistics route, padded-statistics
    route, all three agree).  The raw route asks that membership match
    "both raw chain-stat sums below the ranks" at every cell; the padded
    route asks the sums to sit in {rank - 1, rank} with membership exactly
    at the lower value on both sides.
    """
    cs = CellSet(instance, cells)
    by_card = len(cs) == instance.n_cells and is_u_compatible(cs)

    by_raw = True
    by_padded = True
    for cell in instance.cells:
        st = corner_stats(cs, cell)
        member = cell in cs
        ut = instance.vertex[instance.arrow(cell.k).target].u
        us = instance.vertex[instance.arrow(cell.k).source].u
        if member != (st.nw + st.se < ut and st.nw_src + st.se_src < us):
            by_raw = False
        tsum = st.nw_padded + st.se_padded
        ssum = st.nw_src_padded + st.se_src_padded
        if tsum not in (ut - 1, ut) or ssum not in (us - 1, us):
            by_padded = False
        elif member != (tsum == ut - 1 and ssum == us - 1):
            by_padded = False
    return by_card, by_raw, by_padded, by_card == by_raw == by_padded


def random_instance(rng: random.Random, max_cells: int = 16) -> Instance:
    """A random normalized instance within the verification envelope.

    At most 2 targets, 3 sources and 4 arrows, dimensions at most 3, ranks
    uniform within the normalized bounds; instances with more than
    ``max_cells`` cells are rejected and redrawn.
    """
    while True:
        targets = [f"t{i}" for i in range(1, rng.randint(1, 2) + 1)]
        sources = [f"s{i}" for i in range(1, rng.randint(1, 3) + 1)]
        arrows = tuple((rng.choice(sources), rng.choice(targets))
                       for _ in range(rng.randint(1, 4)))
        used = {v for a in arrows for v in a}
        sources = [s for s in sources if s in used]
        targets = [t for t in targets if t in used]
        quiver = BipartiteQuiver(tuple(sources), tuple(targets), arrows)
        m = {v: rng.randint(1, 3) for v in quiver.vertices}
        u = {}
        for t in targets:
            b = sum(m[s] for s, tt in arrows if tt == t)
            u[t] = rng.randint(1, min(m[t], b))
        for s in sources:
            a = sum(m[t] for ss, t in arrows if ss == s)
            u[s] = rng.randint(1, min(a, m[s]))
        try:
            inst = build_instance(quiver, m, u, mode="normalize")
        except QuiverDetError:
            continue
        if inst.size <= max_cells:
            return inst


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    instance: Instance
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.ok), None)

    def to_json_obj(self) -> dict:
        return {"ok": self.ok,
                "instance": self.instance.to_json_obj(),
                "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                           for c in self.checks]}


def verify_instance(instance: Instance, subset_trials: int = 1000,
                    seed: int | None = None, max_cells: int = BRUTE_MAX_CELLS,
                    facet_cap: int = 10_000_000) -> VerificationReport:
    """Run the full oracle suite on one instance."""
    rng = random.Random(seed)
    checks: list[CheckResult] = []

    def record(name, ok, detail=""):
        checks.append(CheckResult(name, bool(ok), detail))
        return ok

    facets = enumerate_facets(instance, facet_cap=facet_cap)
    n_top = instance.n_cells

    init = initial_cvm(instance)
    record("initial-closed-form", init == c_max(CellSet(instance)),
           "closed form vs greedy closure of the empty set")

    if instance.size <= max_cells:
        brute = brute_maximal_facet_masks(instance)
        record("facet-closure-vs-brute",
               brute == [f.mask for f in facets],
               f"{len(facets)} facets from moves vs {len(brute)} maximal admissible sets")
    else:
        record("facet-closure-vs-brute", True, "skipped: |L| over the brute guard")

    bad_card = [f for f in facets if len(f) != n_top or not is_u_compatible(f)]
    record("facet-cardinality", not bad_card, f"all facets admissible with {n_top} cells")

    ok = True
    for _ in range(subset_trials):
        density = rng.random()
        cells = [c for c in instance.cells if rng.random() < density]
        if not criteria_agree(instance, cells)[3]:
            ok = False
            break
    record("criteria-equivalence", ok, f"{subset_trials} random subsets")

    refl_inst, refl_map = reflect_instance(instance)
    ok = True
    for _ in range(8):
        probe = None
        for _attempt in range(32):
            pick = [c for c in instance.cells if rng.random() < 0.4]
            cand = CellSet(instance, pick)
            if is_u_compatible(cand):
                probe = cand
                break
        if probe is None:
            probe = CellSet(instance)
        double_inst, double_set = reflect(reflect(probe)[1])
        if double_inst != instance or tuple(double_set.cells) != tuple(probe.cells):
            ok = False
            break
        image = CellSet(refl_inst, (refl_map[c] for c in probe.cells))
        # the cell map is an involution on coordinates, so reflecting the
        # closure once more lands back in original coordinates
        back_map = reflect_instance(refl_inst)[1]
        back = {tuple(back_map[c]) for c in c_max(image).cells}
        if {tuple(c) for c in c_min(probe).cells} != back:
            ok = False
            break
    record("reflection-duality", ok, "involution and min/max exchange on random seeds")

    try:
        series = hilbert_series(instance, facets=facets, oracle=instance.size <= max_cells)
        record("series-routes", True,
               f"h = {list(series.numerator)}, multiplicity {series.multiplicity}")
    except QuiverDetError as exc:
        record("series-routes", False, str(exc))

    shelling = verify_shelling(facets)
    record("shelling", shelling.ok, shelling.failure or "increasing order shells")

    ok, detail = _codim1_check(instance, facets)
    record("codim1-membership", ok, detail)

    return VerificationReport(instance, tuple(checks))


def _codim1_check(instance: Instance, facets) -> tuple[bool, str]:
    from .complex import codim1_membership

    masks = [f.mask for f in facets]
    seen: set[int] = set()
    boundary = 0
    for facet in facets:
        for cell in facet.cells:
            sub = facet.mask & ~(1 << instance.rank[cell])
            if sub in seen:
                continue
            seen.add(sub)
            direct = {m for m in masks if m & sub == sub}
            if not 1 <= len(direct) <= 2:
                return False, f"codim-1 face inside {len(direct)} facets"
            via_closure = {f.mask for f in codim1_membership(CellSet.from_mask(instance, sub))}
            if via_closure != direct:
                return False, "closure route misses a containing facet"
            if len(direct) == 1:
                boundary += 1
    if boundary == 0:
        return False, "no boundary codim-1 face found"
    return True, f"{len(seen)} codim-1 faces, {boundary} on the boundary"

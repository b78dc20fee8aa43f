"""Command-line front end.

Every computation the library offers is exposed as a subcommand over an
instance loaded from a preset string or a JSON file.  All counts are exact
Python integers; --json switches every subcommand to machine-readable
output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .chains import CellSet
from .complex import check_vertex_decomposition_samples, f_vector, interior_faces, verify_shelling
from .cvm import corners
from .errors import QuiverDetError, ValidationError
from .ideal import export_cas
from .moves import DEFAULT_FACET_CAP, enumerate_facets
from .quiver import BipartiteQuiver, Instance, build_instance, load_instance
from .series import hilbert_series
from .verify import random_instance, verify_instance


def _star_groups(body: str) -> list[str]:
    groups, cur, depth = [], "", 0
    for ch in body:
        if ch == "," and depth == 0:
            groups.append(cur)
            cur = ""
        else:
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
    groups.append(cur)
    if depth != 0:
        raise ValidationError(f"unbalanced parentheses in {body!r}")
    return groups


def _pair(token: str) -> tuple[int, int]:
    if not (token.startswith("(") and token.endswith(")")):
        raise ValidationError(f"expected (m,u), got {token!r}")
    parts = token[1:-1].split(",")
    if len(parts) != 2:
        raise ValidationError(f"expected (m,u), got {token!r}")
    return int(parts[0]), int(parts[1])


def parse_preset(spec: str, mode: str = "strict") -> Instance:
    """Build an instance from a preset shorthand.

    Grammar: det:m,n,u | double:r,m,n,u,v | secant:a,b,t |
    star:m0,(m1,u1),... (target rank defaults to its largest normalized
    value; star:(m0,u0),... sets it) | star-example (the worked three-source
    example with ranks 2,1,1,1).
    """
    spec = spec.strip()
    if spec == "star-example":
        return parse_preset("star:(3,2),(2,1),(2,1),(2,1)", mode=mode)
    if ":" not in spec:
        raise ValidationError(f"malformed preset {spec!r}")
    head, body = spec.split(":", 1)
    try:
        if head == "det":
            m, n, u = (int(x) for x in body.split(","))
            quiver = BipartiteQuiver(("2",), ("1",), (("2", "1"),))
            return build_instance(quiver, {"1": m, "2": n}, {"1": u, "2": u}, mode=mode)
        if head == "double":
            r, m, n, u, v = (int(x) for x in body.split(","))
            if r < 1:
                raise ValidationError("double preset needs at least one arrow")
            quiver = BipartiteQuiver(("2",), ("1",), (("2", "1"),) * r)
            return build_instance(quiver, {"1": m, "2": n}, {"1": u, "2": v}, mode=mode)
        if head == "secant":
            a, b, t = (int(x) for x in body.split(","))
            return parse_preset(f"double:2,{a},{b},{t},{t}", mode=mode)
        if head == "star":
            groups = _star_groups(body)
            if len(groups) < 2:
                raise ValidationError("star preset needs a target and at least one source")
            if groups[0].startswith("("):
                m0, u0 = _pair(groups[0])
            else:
                m0, u0 = int(groups[0]), None
            pairs = [_pair(g) for g in groups[1:]]
            sources = tuple(f"{i + 2}" for i in range(len(pairs)))
            quiver = BipartiteQuiver(sources, ("1",), tuple((s, "1") for s in sources))
            m = {"1": m0, **{s: pm for s, (pm, _) in zip(sources, pairs)}}
            u = {"1": 0, **{s: pu for s, (_, pu) in zip(sources, pairs)}}
            if u0 is None:
                u0 = min(m0, sum(m[s] for s in sources), sum(u[s] for s in sources))
            u["1"] = u0
            return build_instance(quiver, m, u, mode=mode)
    except ValueError as exc:
        raise ValidationError(f"malformed preset {spec!r}: {exc}") from exc
    raise ValidationError(f"unknown preset kind {head!r}")


def _load(args) -> Instance:
    mode = "strict" if args.strict else "normalize"
    if args.preset:
        return parse_preset(args.preset, mode=mode)
    if args.file:
        return load_instance(args.file, mode=mode)
    raise ValidationError("an instance is required: pass --preset or --file")


def _emit(args, json_obj, text_lines):
    if args.json:
        print(json.dumps(json_obj, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _facet_line(facet: CellSet) -> str:
    return " ".join(",".join(map(str, c)) for c in facet.cells)


def _cmd_info(args) -> int:
    inst = _load(args)
    lines = [f"|L| = {inst.size} cells on {len(inst.arrows)} pages, facet size N = {inst.n_cells}"]
    for vid, d in inst.vertex.items():
        lines.append(f"  {d.side:6s} {vid}: m={d.m} u={d.u} block {d.a}x{d.b} v={d.v}")
    for ar in inst.arrows:
        lines.append(f"  page {ar.k}: {ar.source} -> {ar.target} ({ar.rows}x{ar.cols})")
    rep = inst.normalization
    if rep.trivial:
        lines.append("normalization: no changes")
    else:
        lines.append(f"normalization: {rep.to_json_obj()}")
    obj = inst.to_json_obj()
    obj.update({"cells": inst.size, "facet_size": inst.n_cells,
                "normalization": rep.to_json_obj(),
                "blocks": {vid: {"side": d.side, "a": d.a, "b": d.b, "u": d.u, "v": d.v}
                           for vid, d in inst.vertex.items()}})
    _emit(args, obj, lines)
    return 0


def _cmd_facets(args) -> int:
    inst = _load(args)
    facets = enumerate_facets(inst, facet_cap=args.facet_cap)
    _emit(args, [f.to_triples() for f in facets], [_facet_line(f) for f in facets])
    return 0


def _cmd_multiplicity(args) -> int:
    inst = _load(args)
    series = hilbert_series(inst, facets=enumerate_facets(inst, facet_cap=args.facet_cap))
    _emit(args, {"multiplicity": series.multiplicity}, [str(series.multiplicity)])
    return 0


def _cmd_hvector(args) -> int:
    inst = _load(args)
    series = hilbert_series(inst, facets=enumerate_facets(inst, facet_cap=args.facet_cap))
    _emit(args, {"h_vector": list(series.numerator), "palindromic": series.palindromic},
          [" ".join(map(str, series.numerator))])
    return 0


def _cmd_hilbert(args) -> int:
    inst = _load(args)
    series = hilbert_series(inst, facets=enumerate_facets(inst, facet_cap=args.facet_cap))
    _emit(args, series.to_json_obj(), [series.render()])
    return 0


def _cmd_fvector(args) -> int:
    inst = _load(args)
    table = f_vector(inst, max_cells_guard=args.max_cells)
    _emit(args, table.to_json_obj(),
          [" ".join(map(str, table.f_vector)), f"total {table.total}"])
    return 0


def _cmd_interior(args) -> int:
    inst = _load(args)
    table = f_vector(inst, max_cells_guard=args.max_cells, store_faces=True)
    facets = enumerate_facets(inst, facet_cap=args.facet_cap)
    table = interior_faces(inst, table, facets)
    _emit(args, table.to_json_obj(),
          [" ".join(map(str, table.interior_by_size)),
           f"total {table.interior_total}",
           f"boundary generators {table.boundary_generators}"])
    return 0


def _cmd_shelling(args) -> int:
    inst = _load(args)
    facets = enumerate_facets(inst, facet_cap=args.facet_cap)
    # both scan directions shell: ascending pairs with SE corner counts,
    # descending (the reflected picture) with NW counts
    up = verify_shelling(facets, corner_kind="SE")
    down = verify_shelling(list(reversed(facets)), corner_kind="NW")
    ok = up.ok and down.ok
    lines = [f"ascending shelling {'ok' if up.ok else 'FAILED'}",
             "restriction counts " + " ".join(map(str, up.restriction_counts)),
             f"descending shelling {'ok' if down.ok else 'FAILED'}"]
    for rep in (up, down):
        if rep.failure:
            lines.append(rep.failure)
    _emit(args, {"ascending": up.to_json_obj(), "descending": down.to_json_obj()}, lines)
    return 0 if ok else 1


def _cmd_vdc(args) -> int:
    inst = _load(args)
    report = check_vertex_decomposition_samples(
        inst, sample_budget=args.samples, size_guard=args.max_cells, seed=args.seed)
    lines = [f"sample ell={s.prefix_length} seed|{len(s.seed_cells)}| "
             f"maximal={s.maximal_count} {'pure' if s.pure else 'IMPURE'}"
             for s in report.samples]
    lines.append("all pure" if report.ok else "IMPURITY FOUND")
    _emit(args, report.to_json_obj(), lines)
    return 0 if report.ok else 1


def _cmd_export(args) -> int:
    inst = _load(args)
    text = export_cas(inst, flavor=args.flavor, generator_cap=args.generator_cap,
                      version=f"quiverdet {__version__}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_corners(args) -> int:
    inst = _load(args)
    facets = enumerate_facets(inst, facet_cap=args.facet_cap)
    rows = []
    for idx, facet in enumerate(facets, start=1):
        rep = corners(facet)
        rows.append({"facet": idx, "essential_nw": rep.essential_nw,
                     "essential_se": rep.essential_se})
    _emit(args, rows,
          [f"facet {r['facet']}: essential NW {r['essential_nw']}, essential SE {r['essential_se']}"
           for r in rows])
    return 0


def _cmd_verify(args) -> int:
    reports = []
    if args.preset or args.file:
        reports.append(verify_instance(_load(args), subset_trials=args.trials,
                                       seed=args.seed, max_cells=args.max_cells,
                                       facet_cap=args.facet_cap))
    rng = random.Random(args.seed)
    for _ in range(args.random):
        inst = random_instance(rng)
        reports.append(verify_instance(inst, subset_trials=args.trials,
                                       seed=rng.randrange(2 ** 30),
                                       max_cells=args.max_cells,
                                       facet_cap=args.facet_cap))
    if not reports:
        raise ValidationError("verify needs --preset, --file, or --random N")
    lines = []
    for rep in reports:
        for check in rep.checks:
            lines.append(f"[{'ok' if check.ok else 'FAIL'}] {check.name}: {check.detail}")
    failed = [rep for rep in reports if not rep.ok]
    if failed:
        first = failed[0].first_failure
        lines.append(f"FAILED: {first.name} on {failed[0].instance!r}: {first.detail}")
    else:
        lines.append(f"all checks passed on {len(reports)} instance(s)")
    _emit(args, [rep.to_json_obj() for rep in reports], lines)
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("instance")
    src.add_argument("--preset", help="preset shorthand, e.g. double:2,3,2,1,1 or det:3,3,2")
    src.add_argument("--file", help="path to an instance JSON document")
    common.add_argument("--strict", action="store_true",
                        help="reject rank violations instead of normalizing")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-cells", type=int, default=32,
                        help="guard for brute-force operations (default 32)")
    common.add_argument("--facet-cap", type=int, default=DEFAULT_FACET_CAP,
                        help="abort facet enumeration past this many facets")
    common.add_argument("--threads", type=int, default=1,
                        help="worker hint; the current implementation is serial")
    common.add_argument("--seed", type=int, default=None, help="seed for sampling subcommands")

    parser = argparse.ArgumentParser(
        prog="quiverdet",
        description="Combinatorics of bipartite determinantal ideals: facets, "
                    "f/h-vectors, Hilbert series, and cross-checking oracles.")
    parser.add_argument("--version", action="version", version=f"quiverdet {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    subs.add_parser("info", parents=[common], help="geometry, N, normalization report") \
        .set_defaults(func=_cmd_info)
    subs.add_parser("facets", parents=[common], help="all facets in shelling order") \
        .set_defaults(func=_cmd_facets)
    subs.add_parser("multiplicity", parents=[common], help="number of facets") \
        .set_defaults(func=_cmd_multiplicity)
    subs.add_parser("hvector", parents=[common], help="h-polynomial coefficients") \
        .set_defaults(func=_cmd_hvector)
    subs.add_parser("hilbert", parents=[common], help="Hilbert series") \
        .set_defaults(func=_cmd_hilbert)
    subs.add_parser("fvector", parents=[common], help="face counts by dimension") \
        .set_defaults(func=_cmd_fvector)
    subs.add_parser("interior", parents=[common], help="interior face counts") \
        .set_defaults(func=_cmd_interior)
    subs.add_parser("shelling", parents=[common], help="verify the shelling order") \
        .set_defaults(func=_cmd_shelling)
    subs.add_parser("corners", parents=[common], help="essential corner counts per facet") \
        .set_defaults(func=_cmd_corners)

    vdc = subs.add_parser("vdc-sample", parents=[common],
                          help="bounded purity spot-check of deletion/link towers")
    vdc.add_argument("--samples", type=int, default=30)
    vdc.set_defaults(func=_cmd_vdc)

    exp = subs.add_parser("export-cas", parents=[common],
                          help="emit a Macaulay2 or Singular check script")
    exp.add_argument("--flavor", choices=("m2", "singular"), default="m2")
    exp.add_argument("--out", help="write the script here instead of stdout")
    exp.add_argument("--generator-cap", type=int, default=5000)
    exp.set_defaults(func=_cmd_export)

    ver = subs.add_parser("verify", parents=[common], help="run the full oracle suite")
    ver.add_argument("--random", type=int, default=0,
                     help="additionally verify this many random small instances")
    ver.add_argument("--trials", type=int, default=1000,
                     help="random subsets per instance for the criteria check")
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    if args.max_cells < 1 or args.facet_cap < 1:
        parser.error("guards must be positive")
    try:
        return args.func(args)
    except QuiverDetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

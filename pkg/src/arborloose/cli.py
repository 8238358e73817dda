"""Command-line entry point: ``arborloose <subcommand> ...``.

Exit status: 0 success, 2 usage error, 3 domain error, 4 capacity error,
5 model violation, 1 failed selftest.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from arborloose.arboreal import (
    cell_complex,
    ingest_closed_set,
    loose_report,
    parse_flag_file,
    report_for_link,
)
from arborloose.checks import run_checks
from arborloose.closure import closure_2of6
from arborloose.errors import ArborError, DomainError
from arborloose.frontgen import (
    DEFAULT_EPS,
    RootedTree,
    front_curves,
    region_census,
    to_svg,
    venn_layout,
    venn_svg,
)
from arborloose.localization import build_localized_category, iso_image_set, to_dot
from arborloose.modcat import forced_iso_representable, forced_iso_reps
from arborloose.quiver import make_quiver, parse_morphism_list

log = logging.getLogger("arborloose")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _puncture_set(args):
    Q = make_quiver(args.n)
    return Q, parse_morphism_list(Q, args.w or "", allow_identities=False)


def cmd_closure(args) -> int:
    Q, W = _puncture_set(args)
    wbar = closure_2of6(Q, W)
    if args.format == "json":
        payload = {"n": args.n, "W": str(W), "closure": str(wbar), "size": len(wbar), "passes": wbar.passes}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(f"closure: {wbar}\nmorphisms: {len(wbar)}\npasses: {wbar.passes}\n", args.out)
    return 0


def _matrix_lines(matrix) -> list[str]:
    width = len(str(len(matrix) - 1))
    header = " " * (width + 1) + " ".join(f"{b:>2}" for b in range(len(matrix)))
    return [header] + [f"{a:>{width}} " + " ".join(f"{x:>2}" for x in row) for a, row in enumerate(matrix)]


def cmd_localize(args) -> int:
    Q, W = _puncture_set(args)
    wbar = closure_2of6(Q, W)
    lc = build_localized_category(Q, wbar.as_set())
    if args.format == "dot":
        _emit(to_dot(lc), args.out)
        return 0
    isos = iso_image_set(Q, wbar, lc)
    table = []
    if args.table:
        for a in lc.objects:
            for b in lc.objects:
                for c in lc.objects:
                    for f in lc.hom(a, b):
                        for g in lc.hom(b, c):
                            table.append(f"{f} then {g} = {lc.compose(f, g)}")
    if args.format == "json":
        payload = {
            "n": args.n,
            "W": str(W),
            "closure": str(wbar),
            "objects": Q.size,
            "hom_sizes": lc.hom_size_matrix(),
            "max_hom_size": lc.max_hom_size,
            "iso_images": str(isos),
            "composition": table,
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    lines = [f"objects: {Q.size}", f"closure: {wbar}", "hom-set sizes:"]
    lines += _matrix_lines(lc.hom_size_matrix())
    lines += [f"max hom-set size: {lc.max_hom_size}", f"iso images: {isos}"]
    if args.table:
        lines += ["composition:"] + ["  " + t for t in table]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_oracle(args) -> int:
    Q, W = _puncture_set(args)
    wbar = closure_2of6(Q, W)
    results = {}
    if args.kind in ("reps", "both"):
        forced = forced_iso_reps(Q, W, args.p, args.dmax)
        results["reps"] = {
            "forced": str(forced.members),
            "agrees": forced.members == wbar,
            "family_size": forced.family_size,
            "p": args.p,
            "dmax": args.dmax,
        }
    if args.kind in ("representable", "both"):
        forced = forced_iso_representable(Q, wbar.as_set())
        results["representable"] = {
            "forced": str(forced.members),
            "agrees": forced.members == wbar,
            "family_size": forced.family_size,
            "reduced": True,
        }
    if args.format == "json":
        payload = {"n": args.n, "W": str(W), "closure": str(wbar), "oracles": results}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = [f"closure: {wbar}"]
        for kind, r in results.items():
            verdict = "agrees" if r["agrees"] else "DISAGREES"
            lines.append(f"{kind}: {r['forced']} ({verdict}; {r['family_size']} modules)")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if all(r["agrees"] for r in results.values()) else 1


def cmd_loose_report(args) -> int:
    if args.flags:
        link = ingest_closed_set(args.n, parse_flag_file(Path(args.flags).read_text()))
        report = report_for_link(link)
    else:
        _, W = _puncture_set(args)
        report = loose_report(args.n, W)
    if args.faces_dot:
        Path(args.faces_dot).write_text(cell_complex(args.n).to_dot())
    if args.format == "json":
        _emit(report.to_json(), args.out)
    else:
        _emit(report.table(), args.out)
    return 0


def cmd_front(args) -> int:
    if args.venn:
        _emit(venn_svg(venn_layout(args.venn, args.eps)), args.out)
        return 0
    if not args.tree:
        raise DomainError("front needs --tree or --venn")
    Q = make_quiver(2)
    punctures = parse_morphism_list(Q, args.punctures or "", allow_identities=False)
    diagram = front_curves(RootedTree.parse(args.tree), 2, punctures.pairs(), eps=args.eps)
    if args.out:
        Path(args.out).write_text(to_svg(diagram))
    if args.census:
        census = region_census(diagram, args.resolution)
        labels = sorted(
            (sorted(v) if isinstance(v, frozenset) else v for v in census.labels.values()),
            key=str,
        )
        print(f"bounded: {census.bounded}\nunbounded: {census.unbounded}\nregions: {labels}")
    elif not args.out:
        sys.stdout.write(to_svg(diagram))
    return 0


def cmd_selftest(args) -> int:
    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_checks(args.max_n, only)
    for r in results:
        print(r.line(), flush=True)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arborloose",
        description="Loose cells and sheaf vanishing for punctured linear arboreal links.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json")):
        p.add_argument("--n", type=int, required=True, help="ambient parameter; Q has n+2 objects")
        p.add_argument("--w", default="", help='puncture set, e.g. "0->2,1->3"')
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("closure", help="2-out-of-6 closure of a morphism set")
    common(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("localize", help="hom sets and isomorphisms of the localized quiver")
    common(p, ("text", "json", "dot"))
    p.add_argument("--table", action="store_true", help="include the full composition table")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("oracle", help="module-theoretic detection of the inverted morphisms")
    common(p)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--dmax", type=int, default=2)
    p.add_argument("--kind", choices=("reps", "representable", "both"), default="both")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("loose-report", help="per-cell looseness and sheaf vanishing")
    common(p)
    p.add_argument("--flags", help="file with lines 'a,b full|proper' (replaces --w)")
    p.add_argument("--faces-dot", help="also write the face poset as DOT")
    p.set_defaults(func=cmd_loose_report)

    p = sub.add_parser("front", help="SVG front of a small arboreal link (n = 2)")
    p.add_argument("--tree", help='parent list, e.g. "root;0;1"')
    p.add_argument("--punctures", default="", help='punctured top cells, e.g. "0->2"')
    p.add_argument("--venn", type=int, help="draw the Venn layout for this n (2 or 3) instead")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--out")
    p.add_argument("--census", action="store_true", help="print complement region counts")
    p.add_argument("--resolution", type=int, default=512)
    p.set_defaults(func=cmd_front)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.command == "loose-report" and args.flags and args.w:
        parser.error("--flags and --w are mutually exclusive")
    try:
        return args.func(args)
    except ArborError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

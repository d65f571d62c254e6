"""Command line interface.

Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 regression
mismatch (report --check).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import get_entry, load_catalog
from .contextuality import kappa as kappa_of
from .cosets import (DEFAULT_MAX_COSETS, low_index_subgroups,
                     table_to_permutations, todd_coxeter)
from .dessin import modular_invariants, passport, signature
from .errors import (BudgetExceeded, EnumerationOverflow, GzooError, ParseError)
from .geometry import (basic_hyperplanes, build_defined_geometry,
                       build_stabilized_geometry, classify_generalized_polygon,
                       classify_gu, configuration, graph_stats, polygon_label,
                       predict_polar_space, veldkamp_closure)
from .permgroup import classify_two_point_stabilizers, group_from, rank_profile
from .report import (PipelineOptions, emit, format_checks, pipeline_entry,
                     pipeline_permutation, pipeline_presentation, run_checks)
from .textio import (format_permutations, parse_group_file, parse_permutations,
                     parse_subgroup_file)
from .words import SubgroupSpec


def _read(path):
    return Path(path).read_text()


def _load_group(args):
    pres, sub = parse_group_file(_read(args.grp))
    if getattr(args, "sub", None):
        sub = parse_subgroup_file(_read(args.sub), pres)
    return pres, sub if sub is not None else SubgroupSpec(())


def cmd_enumerate(args):
    pres, sub = _load_group(args)
    table = todd_coxeter(pres, sub, max_cosets=args.max_cosets)
    print(f"index: {table.n}")
    if args.verbose:
        pi = table_to_permutations(table)
        print(format_permutations(pi), end="")
    return 0


def cmd_low_index(args):
    pres, _ = parse_group_file(_read(args.grp))
    tables = low_index_subgroups(pres, args.max_index,
                                 node_budget=args.node_budget)
    from .report import class_labels
    labels = class_labels(tables)
    print("classes:", " ".join(labels[id(t)] for t in tables))
    if args.emit_perm:
        outdir = Path(args.emit_perm)
        outdir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.grp).stem
        for t in tables:
            pi = table_to_permutations(t)
            path = outdir / f"{stem}_{labels[id(t)]}.perm"
            path.write_text(format_permutations(pi))
            print(f"wrote {path}")
    return 0


def cmd_analyze(args):
    pi = parse_permutations(_read(args.perm))
    g = group_from(pi)
    data = {"degree": pi.degree, "order": g.order(),
            "transitive": g.is_transitive()}
    if g.is_transitive():
        prof = rank_profile(g)
        cls = classify_two_point_stabilizers(g)
        data.update(rank=prof.rank, orbital_count=prof.orbital_count,
                    subdegrees=list(prof.subdegrees), m=cls.m,
                    classes=[{"order": c.order,
                              "suborbit_sizes": list(c.suborbit_sizes),
                              "fingerprint_only": c.fingerprint_only}
                             for c in cls.classes])
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for k, v in data.items():
            print(f"{k}: {v}")
    return 0


def cmd_dessin(args):
    pi = parse_permutations(_read(args.perm))
    sig = signature(pi)
    pp = passport(pi)
    data = {"signature": {"B": sig.black, "W": sig.white,
                          "F": sig.faces, "g": sig.genus},
            "passport": list(pp.as_strings())}
    try:
        mi = modular_invariants(pi)
        data["modular"] = list(mi.as_tuple())
    except GzooError:
        pass
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(f"signature (B,W,F,g): {sig.as_tuple()}")
        print("passport:", ", ".join(pp.as_strings()))
        if "modular" in data:
            print("modular (n,g,nu2,nu3,c,f):", tuple(data["modular"]))
    return 0


def _geometry_for(args, g, cls):
    if args.mode == "stabilized":
        return build_stabilized_geometry(g, cls, args.cls,
                                         on_trivial="setwise")
    return build_defined_geometry(g, cls, args.cls,
                                  clique_budget=args.clique_budget)


def cmd_geometry(args):
    pi = parse_permutations(_read(args.perm))
    g = group_from(pi)
    cls = classify_two_point_stabilizers(g)
    geom = _geometry_for(args, g, cls)
    cfg = configuration(geom)
    stats = graph_stats(geom)
    data = {"mode": geom.mode, "config": cfg.label(),
            "lines": len(geom.lines),
            "partial_linear": geom.is_partial_linear(),
            "spectrum": [[e, m] for e, m in stats.spectrum],
            "flags": list(geom.flags)}
    if stats.srg:
        data["srg"] = list(stats.srg)
    if stats.connected:
        gu = classify_gu(geom)
        if gu.u is not None:
            data["gu"] = gu.u
        ngon = classify_generalized_polygon(geom)
        if ngon is not None:
            data["polygon"] = polygon_label(ngon, geom)
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for k, v in data.items():
            print(f"{k}: {v}")
    return 0


def cmd_kappa(args):
    pres, sub = _load_group(args)
    table = todd_coxeter(pres, sub, max_cosets=args.max_cosets)
    pi = table_to_permutations(table)
    g = group_from(pi)
    cls = classify_two_point_stabilizers(g)
    geom = _geometry_for(args, g, cls)
    rep = kappa_of(table, geom)
    data = {"index": table.n, "edges": rep.edge_count,
            "contextual": rep.contextual_count, "kappa": rep.kappa_str}
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for k, v in data.items():
            print(f"{k}: {v}")
    return 0


def cmd_predict_polar(args):
    pr = predict_polar_space(args.p, args.n)
    data = {"points": pr.points, "generators": pr.generators,
            "spread_size": pr.spread_size, "srg": list(pr.srg),
            "configuration": pr.configuration_label()}
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for k, v in data.items():
            print(f"{k}: {v}")
    return 0


def cmd_hyperplanes(args):
    pi = parse_permutations(_read(args.perm))
    g = group_from(pi)
    cls = classify_two_point_stabilizers(g)
    geom = build_defined_geometry(g, cls, args.cls,
                                  clique_budget=args.clique_budget)
    far = {"auto": "auto", "always": True, "never": False}[args.far]
    basics = basic_hyperplanes(geom, far=far)
    print(f"basic hyperplanes: {len(basics)}")
    if args.closure:
        fam = veldkamp_closure(basics, geom.n, budget=args.closure_budget)
        sizes = {k: len(v) for k, v in fam.classes.items()}
        print(f"closure: {fam.total} hyperplanes in {len(sizes)} size-classes")
        for size, count in sizes.items():
            print(f"  size {size}: {count}")
    return 0


def cmd_pipeline(args):
    options = PipelineOptions(max_index=args.max_index,
                              max_cosets=args.max_cosets,
                              clique_budget=args.clique_budget)
    if args.target.endswith(".grp"):
        rows = pipeline_presentation(Path(args.target).stem,
                                     _read(args.target), options)
    elif args.target.endswith(".perm"):
        rows = pipeline_permutation(Path(args.target).stem,
                                    _read(args.target), options)
    else:
        rows = pipeline_entry(get_entry(args.target), options)
    sys.stdout.buffer.write(emit(rows, "json" if args.json else "text"))
    return 0


def cmd_report(args):
    if not args.check:
        for entry in load_catalog():
            note = entry.data.get("note", "")
            print(f"{entry.name:<12} {entry.kind:<13} "
                  f"{'extended ' if entry.extended else ''}{note}")
        return 0
    results = run_checks(entries=args.entries or None,
                         include_extended=args.extended)
    print(format_checks(results))
    if any(r.verdict == "mismatch" for r in results):
        return 4
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="gzoo", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, grp=False, perm=False, mode=False, budgets=True):
        if grp:
            p.add_argument("--grp", required=True, help=".grp presentation file")
            p.add_argument("--sub", help="subgroup generator file")
        if perm:
            p.add_argument("--perm", required=True, help=".perm representation file")
        if mode:
            p.add_argument("--class", dest="cls", type=int, default=0,
                           help="stabilizer class index (largest first)")
            p.add_argument("--mode", choices=["stabilized", "defined"],
                           default="defined")
        if budgets:
            p.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
            p.add_argument("--clique-budget", type=int, default=1_000_000)
            p.add_argument("--closure-budget", type=int, default=1 << 20)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("enumerate", help="Todd-Coxeter coset enumeration")
    add_common(p, grp=True)
    p.add_argument("--verbose", action="store_true",
                   help="print the induced permutations")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("low-index", help="subgroup classes up to an index bound")
    add_common(p, grp=True)
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--emit-perm", metavar="DIR",
                   help="write one .perm file per class")
    p.set_defaults(func=cmd_low_index)

    p = sub.add_parser("analyze", help="order, rank, stabilizer classes")
    add_common(p, perm=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dessin", help="signature, passport, modular invariants")
    add_common(p, perm=True)
    p.set_defaults(func=cmd_dessin)

    p = sub.add_parser("geometry", help="build and classify a geometry")
    add_common(p, perm=True, mode=True)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("kappa", help="contextuality parameter via a presentation")
    add_common(p, grp=True, mode=True)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("predict-polar", help="closed-form polar-space counts")
    p.add_argument("-p", type=int, required=True, help="prime")
    p.add_argument("-n", type=int, required=True, help="qudit count")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_predict_polar)

    p = sub.add_parser("hyperplanes", help="basic hyperplanes and their closure")
    add_common(p, perm=True)
    p.add_argument("--class", dest="cls", type=int, default=0)
    p.add_argument("--closure", action="store_true")
    p.add_argument("--far", choices=["auto", "always", "never"], default="auto")
    p.set_defaults(func=cmd_hyperplanes)

    p = sub.add_parser("pipeline", help="full run on a catalog entry or file")
    p.add_argument("target", help="catalog entry name, .grp file, or .perm file")
    p.add_argument("--max-index", type=int, default=25)
    p.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    p.add_argument("--clique-budget", type=int, default=1_000_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("report", help="list catalog or run regression checks")
    p.add_argument("--check", action="store_true")
    p.add_argument("--extended", action="store_true",
                   help="include long-running entries")
    p.add_argument("--entries", nargs="*", help="restrict to these entries")
    p.set_defaults(func=cmd_report)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (BudgetExceeded, EnumerationOverflow) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except GzooError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

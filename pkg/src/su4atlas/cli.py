"""Command-line frontend: verification runs, group description, lattice
enumeration, hierarchy probing, exports and cache management.

Exit codes: 0 all pass, 1 verification diffs, 2 usage error, 3 resource
error (closure cap or quotient cap exceeded)."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import atlas, backend
from .classify import classification_report, hierarchy_level, pauli_group
from .gates import GateParseError, GateLookupError, parse_gate, parse_generators
from .group import (ClosureCapExceeded, DEFAULT_CAP, GroupCache, GroupError,
                    closure, default_cache_dir)
from .lattice import LatticeError, lattice_report

EXIT_OK = 0
EXIT_DIFF = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _cache_from(args):
    if getattr(args, "no_cache", False):
        return None
    return GroupCache(args.cache or default_cache_dir())


def _selected_entries(args):
    if getattr(args, "names", None):
        return [atlas.entry(n) for n in args.names]
    if getattr(args, "family", None):
        return atlas.all_entries(family=args.family)
    if getattr(args, "all_pauli", False):
        return atlas.pauli_containing()
    return atlas.all_entries()


def cmd_verify(args):
    entries = sorted(_selected_entries(args), key=lambda e: e.name)
    override = {"order": args.expect_order} if args.expect_order else None
    cache = _cache_from(args)

    def run(e):
        return atlas.verify(e, cap=args.cap, cache=cache,
                            max_level=args.max_level, override=override)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run, entries))
    else:
        results = [run(e) for e in entries]

    failures = 0
    reports = []
    for r in results:
        reports.append(r.report)
        if r.ok:
            print("PASS %-26s %s  (%.1fs)"
                  % (r.entry.name, r.entry.order_string(), r.seconds))
        else:
            failures += 1
            print("FAIL %-26s %s" % (r.entry.name, r.entry.order_string()))
            for field, d in sorted(r.diff.items()):
                print("     %-22s expected %r, computed %r"
                      % (field, d["expected"], d["computed"]))
    if args.format == "json":
        print(json.dumps([rep.to_json() for rep in reports],
                         ensure_ascii=False, sort_keys=True, indent=1))
    print("%d/%d entries verified" % (len(results) - failures, len(results)))
    return EXIT_DIFF if failures else EXIT_OK


def cmd_lattice(args):
    cache = _cache_from(args)
    c2 = closure(parse_generators("⟨SI, HI, IS, IH, BELL⟩"), cap=args.cap,
                 cache=cache)
    p2 = pauli_group(4)
    groups = {e.name: atlas.build_group(e, cap=args.cap, cache=cache)
              for e in atlas.pauli_containing()}
    progress = (lambda s: print("# " + s, file=sys.stderr)) if args.verbose else None
    rep = lattice_report(c2, p2, atlas_groups=groups, progress=progress)
    print("subgroups of C2 containing P2 (matrix lattice): %d total, %d strict"
          % (rep.total_subgroups, rep.strict_count))
    print("containing the scalar subgroup <iII> (the GAP counting): "
          "%d total, %d strict" % (rep.saturated_total, rep.saturated_strict))
    print("isomorphism classes (endpoints included): %d" % rep.class_count)
    for c in rep.classes:
        print("  %-26s x%-4d order %d"
              % (c.atlas_name or "UNMATCHED", c.count, c.sample_order))
    if rep.unmatched:
        print("unmatched classes: %d" % len(rep.unmatched))
    if rep.unresolved:
        print("unresolved fingerprint collisions: %s" % (rep.unresolved,))
    print("elapsed %.1fs" % rep.seconds)
    return EXIT_OK if rep.matched_all and rep.class_count == len(groups) \
        else EXIT_DIFF


def cmd_hierarchy(args):
    m = parse_gate(args.expr)
    print(hierarchy_level(m, max_level=args.max_level))
    return EXIT_OK


def cmd_describe(args):
    cache = _cache_from(args)
    name = args.target
    try:
        e = atlas.entry(name)
        g = atlas.build_group(e, cap=args.cap, cache=cache)
        rep = classification_report(g, e.name, max_level=args.max_level)
    except atlas.AtlasLookupError:
        gens = parse_generators(name)
        g = closure(gens, cap=args.cap, cache=cache)
        rep = classification_report(g, name, max_level=args.max_level)
    if args.format == "json":
        print(json.dumps(rep.to_json(), ensure_ascii=False, sort_keys=True,
                         indent=1))
    else:
        d = rep.to_json()
        d.pop("fingerprint")
        for k in ("name", "order", "projective_order", "lift", "irreducible",
                  "entanglement", "shape", "delta_order", "character_ring",
                  "hierarchy_level", "frame_potentials", "perfect",
                  "contains_pauli"):
            print("%-18s %s" % (k, d[k]))
    return EXIT_OK


def cmd_export(args):
    entries = sorted(_selected_entries(args) if (args.names or args.family)
                     else atlas.pauli_containing(), key=lambda e: e.name)
    if args.what == "csv":
        _export_csv(entries, args.path)
    elif args.what == "json":
        _export_json(entries, args.path, args)
    elif args.what == "gap":
        _export_gap(entries, args.path)
    else:
        raise ValueError("unknown export format %r" % args.what)
    print("wrote %s (%d entries)" % (args.path, len(entries)))
    return EXIT_OK


def _export_csv(entries, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["class", "name", "gates", "order", "gap_group",
                    "gap_projective"])
        for e in entries:
            w.writerow([e.family, e.name, " , ".join(e.generators),
                        e.order_string(),
                        e.external_ids.get("group") or "",
                        e.external_ids.get("projective") or ""])


def _export_json(entries, path, args):
    cache = _cache_from(args)
    out = []
    for e in entries:
        g = atlas.build_group(e, cap=args.cap, cache=cache)
        out.append(classification_report(g, e.name,
                                         max_level=args.max_level).to_json())
    with open(path, "w") as fh:
        json.dump(out, fh, ensure_ascii=False, sort_keys=True, indent=1)


def _gap_value(v):
    if v.is_zero():
        return "0"
    terms = []
    for k, c in v.coeffs:
        base = "1" if k == 0 else ("E(%d)" % v.conductor if k == 1
                                   else "E(%d)^%d" % (v.conductor, k))
        terms.append("(%d/%d)*%s" % (c.numerator, c.denominator, base))
    return "+".join(terms)


def _export_gap(entries, path):
    """Emit (never execute) a script for the external algebra system that
    rebuilds every group from its matrices and asserts the recorded IDs."""
    lines = ["# generated by su4atlas: cross-check script", ""]
    for e in entries:
        var = "g_" + "".join(ch if ch.isalnum() else "_" for ch in e.name)
        mats = []
        for s in e.generators:
            m = parse_gate(s)
            rows = ", ".join(
                "[" + ", ".join(_gap_value(x) for x in row) + "]"
                for row in m.entries)
            mats.append("[%s]" % rows)
        lines.append("%s := Group(%s);;" % (var, ", ".join(mats)))
        lines.append("Assert(0, Order(%s) = %d);"
                     % (var, e.expected["order"]))
        gid = e.external_ids.get("group")
        if gid and gid.startswith("["):
            lines.append("Assert(0, IdGroup(%s) = %s);" % (var, gid))
        elif gid and gid.startswith("("):
            lines.append("Assert(0, IsPerfectGroup(%s));" % var)
        lines.append("")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))


def cmd_cache(args):
    cache = GroupCache(args.cache or default_cache_dir())
    if args.action == "clear":
        print("removed %d files" % cache.clear())
    else:
        entries = cache.info()
        for meta in entries:
            print("%s order=%s conductor=%s lift=%s"
                  % (meta["key"][:16], meta.get("order"),
                     meta.get("conductor"), meta.get("lift")))
        print("%d cached closures in %s" % (len(entries), cache.directory))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="su4atlas",
        description="Exact atlas of the subgroups of the two-qubit Clifford "
                    "group and the primitive finite subgroups of SU(4).")
    ap.add_argument("--backend-info", action="store_true",
                    help="print the selected kernel backend and exit")
    sub = ap.add_subparsers(dest="command")

    def common(p, with_jobs=False):
        p.add_argument("--max-level", type=int, default=4, metavar="R")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, metavar="N")
        p.add_argument("--cache", default=None, metavar="DIR")
        p.add_argument("--no-cache", action="store_true")
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default="text")
        if with_jobs:
            p.add_argument("--jobs", type=int, default=1, metavar="N")

    pv = sub.add_parser("verify", help="verify atlas entries against the catalog")
    pv.add_argument("names", nargs="*")
    pv.add_argument("--family", choices=atlas.families())
    pv.add_argument("--all-pauli", action="store_true",
                    help="the 56 Pauli-containing Clifford subgroups")
    pv.add_argument("--expect-order", type=int, default=None,
                    help="override the expected order (negative control)")
    common(pv, with_jobs=True)
    pv.set_defaults(func=cmd_verify)

    pl = sub.add_parser("lattice",
                        help="enumerate all subgroups between P2 and C2")
    pl.add_argument("--verbose", action="store_true")
    common(pl)
    pl.set_defaults(func=cmd_lattice)

    ph = sub.add_parser("hierarchy", help="minimal Clifford-hierarchy level")
    ph.add_argument("expr")
    ph.add_argument("--max-level", type=int, default=4, metavar="R")
    ph.set_defaults(func=cmd_hierarchy)

    pd = sub.add_parser("describe",
                        help="classification report for a name or ⟨gens⟩")
    pd.add_argument("target")
    common(pd)
    pd.set_defaults(func=cmd_describe)

    pe = sub.add_parser("export", help="export the atlas (json, csv, gap)")
    pe.add_argument("what", choices=("json", "csv", "gap"))
    pe.add_argument("path")
    pe.add_argument("names", nargs="*")
    pe.add_argument("--family", choices=atlas.families())
    pe.add_argument("--all-pauli", action="store_true")
    common(pe)
    pe.set_defaults(func=cmd_export)

    pc = sub.add_parser("cache", help="closure cache management")
    pc.add_argument("action", choices=("info", "clear"))
    pc.add_argument("--cache", default=None, metavar="DIR")
    pc.set_defaults(func=cmd_cache)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.backend_info:
        print("backend: %s" % backend.BACKEND)
        return EXIT_OK
    if not getattr(args, "command", None):
        ap.print_usage()
        return EXIT_USAGE
    try:
        return args.func(args)
    except (GateParseError, GateLookupError, atlas.AtlasLookupError,
            GroupError) as ex:
        print("error: %s" % ex, file=sys.stderr)
        return EXIT_USAGE
    except (ClosureCapExceeded, LatticeError, MemoryError) as ex:
        print("resource error: %s" % ex, file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())

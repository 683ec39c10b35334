"""Command-line frontend.

Subcommands: search-trees, assign, verify, cost, depth, canon, involutory,
catalog.  Exit codes: 0 success, 2 nothing found, 64 usage error, 65 parse
error, 70 internal invariant breach.  No randomness anywhere: identical
invocations produce byte-identical output at any --threads value.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import catalogs
from .gf2 import FormatError, QuotientRing, poly_parse
from . import blockmat
from .blockmat import canonical_form, is_involutory, is_mds, matrix_to_text
from . import slp as slpmod
from . import instantiate
from .instantiate import CatalogEntry, catalog_records, catalog_to_text
from . import treesearch
from .treesearch import tree_from_text, tree_to_text

EX_OK = 0
EX_NOTFOUND = 2
EX_USAGE = 64
EX_PARSE = 65
EX_INTERNAL = 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("MDSFORGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"bad MDSFORGE_THREADS value {env!r}")
    return 1


def _parse_ring(text: str) -> QuotientRing:
    return QuotientRing(poly_parse(text))


def _parse_values(ring: QuotientRing, spec: str) -> list[int]:
    """Value-set spec: "a^-3..a^3" (powers, 1 included) or a comma list."""
    spec = spec.strip()
    if ".." in spec:
        lo_s, hi_s = spec.split("..", 1)

        def power(s):
            s = s.strip()
            if s == "1":
                return 0
            if s == "a":
                return 1
            if s.startswith("a^"):
                return int(s[2:])
            raise UsageError(f"bad power {s!r} in value spec")

        lo, hi = power(lo_s), power(hi_s)
        if lo > hi:
            raise UsageError("empty value range")
        vals = [1]
        for e in range(1, max(abs(lo), abs(hi)) + 1):
            if e <= hi:
                vals.append(ring.pow(2, e))
            if -e >= lo:
                vals.append(ring.pow(2, -e))
        return vals
    return [ring.parse_element(s.strip()) for s in spec.split(",")]


def _sniff(text: str) -> str:
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("cost "):
            return "catalog"
        if s.startswith("type"):
            return "tree"
        head = s.split()
        if head and head[0] == "ring":
            return "slp" if "inputs" in head else "matrix"
        return "unknown"
    return "empty"


def _read_file(path: str) -> str:
    try:
        with open(path, "r") as f:
            return f.read()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_search_trees(args) -> int:
    k = args.k
    if not 2 <= k <= 6:
        raise UsageError("--k must be between 2 and 6")
    threads = _threads(args)
    if args.capacity is not None:
        trees = treesearch.search_at_capacity(k, args.capacity,
                                              max_depth=args.max_depth,
                                              threads=threads)
        cap = args.capacity if trees else -1
    else:
        cap, trees = treesearch.search_simplest(k, max_capacity=args.max_capacity,
                                                threads=threads)
    if not trees:
        print(f"k {k}: no tree found")
        return EX_NOTFOUND
    types = sorted(set(t.type_vector for t in trees))
    types_s = ",".join("(" + ",".join(map(str, tv)) + ")" for tv in types)
    print(f"k {k}: min capacity {cap}; {len(trees)} tree classes; types {types_s}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for i, t in enumerate(trees, start=1):
            with open(os.path.join(args.out, f"{k}x{k}_cap{cap}_tree{i}.txt"), "w") as f:
                f.write(tree_to_text(t))
        print(f"wrote {len(trees)} tree files to {args.out}")
    else:
        for t in trees:
            sys.stdout.write("\n" + tree_to_text(t))
    return EX_OK


def _trees_for_assign(args):
    if args.all_trees:
        return list(catalogs.simplest_trees_4x4())
    if not args.tree:
        raise UsageError("need --tree FILE or --all-trees")
    return [tree_from_text(_read_file(args.tree))]


def cmd_assign(args) -> int:
    ring = _parse_ring(args.ring)
    values = (_parse_values(ring, args.values) if args.values
              else instantiate.default_value_set(ring))
    entries = []
    for tree in _trees_for_assign(args):
        if args.depth_bound is not None and tree.skeleton_depth() > args.depth_bound:
            continue
        entries.extend(instantiate.assign_parameters(
            tree, ring, args.cost_bound, values, args.depth_bound))
    classes: dict[tuple, CatalogEntry] = {}
    for e in entries:
        cur = classes.get(e.canonical)
        if cur is None or e.sort_key() < cur.sort_key():
            classes[e.canonical] = e
    result = sorted(classes.values(), key=CatalogEntry.sort_key)
    if not result:
        print("no assignment found")
        return EX_NOTFOUND
    text = catalog_to_text(result, comments=[
        f"assignments with cost <= {args.cost_bound}"
        + (f", depth <= {args.depth_bound}" if args.depth_bound is not None else ""),
        f"{len(result)} equivalence classes",
    ])
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        print(f"wrote {len(result)} entries to {args.out}")
    else:
        sys.stdout.write(text)
    return EX_OK


def cmd_verify(args) -> int:
    text = _read_file(args.file)
    kind = _sniff(text)
    failures = 0
    if kind == "catalog":
        for idx, (fields, matrix, slp, lineno) in enumerate(catalog_records(text), 1):
            entry = CatalogEntry.from_slp(slp)
            probs = []
            if entry.matrix != matrix:
                probs.append("matrix/implementation mismatch")
            for key, actual in (("cost", entry.cost), ("depth", entry.depth),
                                ("mds", int(entry.mds)),
                                ("involutory", int(entry.involutory))):
                if key in fields and fields[key] != actual:
                    probs.append(f"{key} stated {fields[key]} recomputed {actual}")
            status = "ok" if not probs else "FAIL " + "; ".join(probs)
            print(f"entry {idx} (line {lineno}): cost {entry.cost} depth {entry.depth} "
                  f"mds {int(entry.mds)} involutory {int(entry.involutory)} .. {status}")
            failures += bool(probs)
    elif kind == "matrix":
        m = blockmat.matrix_from_text(text)
        print(f"matrix k {m.k}: mds {int(is_mds(m))} involutory {int(is_involutory(m))}")
    elif kind == "slp":
        p = slpmod.slp_from_text(text)
        entry = CatalogEntry.from_slp(p) if len(p.outputs) == p.k_in else None
        if entry is None:
            print(f"slp: cost {slpmod.cost(p)} depth {slpmod.depth(p)} (not square)")
        else:
            print(f"slp: cost {entry.cost} depth {entry.depth} mds {int(entry.mds)} "
                  f"involutory {int(entry.involutory)}")
    else:
        raise FormatError(f"unrecognized file format for {args.file}")
    if failures:
        print(f"{failures} entries failed verification")
        return 1
    return EX_OK


def cmd_cost(args) -> int:
    text = _read_file(args.file)
    p = slpmod.slp_from_text(text)
    print(slpmod.cost(p))
    return EX_OK


def cmd_depth(args) -> int:
    text = _read_file(args.file)
    p = slpmod.slp_from_text(text)
    print(slpmod.depth(p))
    return EX_OK


def cmd_canon(args) -> int:
    text = _read_file(args.file)
    kind = _sniff(text)
    if kind == "slp":
        m = slpmod.extract_matrix(slpmod.slp_from_text(text))
    elif kind == "matrix":
        m = blockmat.matrix_from_text(text)
    else:
        raise FormatError("canon expects a matrix or SLP file")
    sys.stdout.write(matrix_to_text(canonical_form(m)))
    return EX_OK


def cmd_involutory(args) -> int:
    ring = _parse_ring(args.ring)
    trees = list(catalogs.simplest_trees_4x4()) if not args.tree \
        else [tree_from_text(_read_file(args.tree))]
    hits = instantiate.involutory_search(trees, ring, max_s=args.max_s,
                                         max_t=args.max_t, threads=_threads(args))
    if not hits:
        print("no involutory MDS matrix found")
        return EX_NOTFOUND
    seen = {}
    for h in hits:
        seen.setdefault(h.entry.canonical, h)
    ordered = sorted(seen.values(), key=lambda h: (h.entry.cost, h.tree_index,
                                                   h.assignment, h.row_order))
    comments = [
        f"involutory MDS search: s <= {args.max_s}, exponent heuristic t <= {args.max_t}",
        "trees hit: " + ",".join(map(str, sorted(set(h.tree_index for h in hits)))),
    ]
    sys.stdout.write(catalog_to_text([h.entry for h in ordered], comments=comments))
    return EX_OK


def cmd_catalog(args) -> int:
    for path in catalogs.list_data_files():
        print(path)
    return EX_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    ap = _Parser(prog="mdsforge",
                 description="search, instantiate and verify lightweight MDS matrices")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    def add_threads(p):
        p.add_argument("--threads", "-j", type=int, default=None,
                       help="worker count (default: MDSFORGE_THREADS or 1)")

    p = sub.add_parser("search-trees", help="enumerate simplest implementation trees")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--capacity", type=int, default=None)
    p.add_argument("--max-capacity", type=int, default=None)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--out", default=None, help="directory for tree files")
    add_threads(p)
    p.set_defaults(func=cmd_search_trees)

    p = sub.add_parser("assign", help="assign ring values to a tree under a cost bound")
    p.add_argument("--tree", default=None, help="tree file")
    p.add_argument("--all-trees", action="store_true",
                   help="use the bundled 4x4 simplest trees")
    p.add_argument("--ring", required=True, help='modulus, e.g. "x^8+x^2+1"')
    p.add_argument("--values", default=None, help='value set, e.g. "a^-3..a^3"')
    p.add_argument("--cost-bound", type=int, required=True)
    p.add_argument("--depth-bound", type=int, default=None)
    p.add_argument("--out", default=None)
    add_threads(p)
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("verify", help="recompute and check a catalog, matrix or SLP file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cost", help="cost of an SLP file")
    p.add_argument("file")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("depth", help="depth of an SLP file")
    p.add_argument("file")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("canon", help="canonical form of a matrix or SLP file")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("involutory", help="involutory MDS search over the simplest trees")
    p.add_argument("--ring", required=True)
    p.add_argument("--tree", default=None, help="restrict to one tree file")
    p.add_argument("--max-s", type=int, default=6)
    p.add_argument("--max-t", type=int, default=8)
    add_threads(p)
    p.set_defaults(func=cmd_involutory)

    p = sub.add_parser("catalog", help="print bundled data file paths")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "command", None):
            ap.print_help()
            return EX_USAGE
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EX_USAGE
    except FormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EX_PARSE
    except (ValueError, AssertionError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EX_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

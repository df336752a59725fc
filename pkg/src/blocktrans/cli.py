"""Command-line interface.

Exit codes: 0 success, 1 negative result (not a design, intransitive group,
nothing found), 2 usage, parse or validation error.
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict
from pathlib import Path
from typing import Sequence

from .catalog import resolve_group_source
from .classify import iso_classes, lambda3
from .design import (
    block_orbit, intersection_pattern, pattern_orbits, read_design,
    verify_design, write_design,
)
from .errors import CatalogParseError, InfeasibleParametersError, NotADesignError, ValidationError, fmt_set
from .sieve import (
    diagonal_sieve, format_report, imprimitive_partition_sieve, load_simple_groups,
    product_action_sieve, twisted_wreath_sieve,
)

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _records(source: str):
    try:
        return resolve_group_source(source)
    except (KeyError, FileNotFoundError) as e:
        raise UsageError(str(e).strip("'\"")) from None


def _params_line(p) -> str:
    return f"{p.label()} b={p.b} lambda={p.lam} r={p.r}"


def _not_design(e: NotADesignError) -> str:
    (s1, c1), (s2, c2) = e.witness
    return f"not a {e.t}-design: {fmt_set(s1)} lies in {c1} blocks, {fmt_set(s2)} in {c2}"


# ---------------------------------------------------------------- sieve

def cmd_sieve(args, out) -> int:
    if args.kind == "imprimitive":
        rep = imprimitive_partition_sieve(args.k)
    elif args.kind == "product":
        rep = product_action_sieve(args.k)
    elif args.kind == "diagonal":
        rep = diagonal_sieve(args.k, load_simple_groups(args.table))
    else:
        rep = twisted_wreath_sieve(args.k)
    out.write(format_report(rep, verbose=args.verbose))
    return OK


# ---------------------------------------------------------------- design

def cmd_design_orbit(args, out) -> int:
    recs = _records(args.group)
    if len(recs) != 1:
        raise UsageError(f"group source {args.group!r} holds {len(recs)} records; name one with #<name>")
    g = recs[0].group()
    d = block_orbit(g, _ints(args.base))
    if args.out:
        write_design(d, args.out)
    try:
        p = verify_design(d, args.t)
    except NotADesignError as e:
        out.write(f"b={d.b}\n{_not_design(e)}\n")
        return NEGATIVE
    out.write(_params_line(p) + "\n")
    systems = g.block_systems() if g.is_transitive() else []
    for s in systems:
        pats = {intersection_pattern(b, s.classes) for b in d.blocks}
        out.write(f"system ({s.c},{s.d}): patterns " + " ".join(
            "(" + ",".join(str(x) for x in pt if x) + ")" for pt in sorted(pats, reverse=True)) + "\n")
    return OK


def cmd_design_verify(args, out) -> int:
    d = read_design(args.file)
    try:
        p = verify_design(d, args.t)
    except NotADesignError as e:
        out.write(_not_design(e) + "\n")
        return NEGATIVE
    out.write(_params_line(p) + "\n")
    return OK


def cmd_design_search(args, out) -> int:
    pattern = _ints(args.pattern)
    recs = []
    for src in args.group or []:
        recs += _records(src)
    if args.catalog:
        recs += _records(args.catalog)
    if not recs:
        raise UsageError("give --group or --catalog")
    outdir = Path(args.out_dir) if args.out_dir else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    lambdas: set[int] = set()
    skipped = 0
    for rec in recs:
        g = rec.group()
        if not g.is_transitive() or g.is_primitive():
            skipped += 1
            continue
        for i, od in enumerate(pattern_orbits(g, pattern, args.t), start=1):
            if od.params is None:
                continue
            lambdas.add(od.params.lam)
            name = f"{_safe(rec.name)}_{i:03d}_lambda{od.params.lam}.design"
            out.write(f"{rec.name}: rep {','.join(map(str, od.representative))} {_params_line(od.params)}\n")
            if outdir:
                write_design(od.design, outdir / name)
    if skipped:
        out.write(f"skipped {skipped} intransitive or primitive records\n")
    out.write("lambda values: " + (",".join(map(str, sorted(lambdas))) or "none") + "\n")
    return OK if lambdas else NEGATIVE


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)


# ---------------------------------------------------------------- group

def group_info_line(rec) -> tuple[str, bool]:
    g = rec.group()
    head = f"{rec.name}: degree={rec.degree}"
    if not g.is_transitive():
        orbits = sorted(len(o) for o in g.orbits())
        return f"{head} order={g.order()} intransitive orbits={','.join(map(str, orbits))}", False
    sub = g.subdegrees(1)
    body = f"order={g.order()} subdegrees={','.join(map(str, sorted(sub.orbit_sizes)))} rank={sub.rank}"
    systems = g.block_systems()
    if systems:
        tail = "systems=" + ",".join(f"({s.c},{s.d})" for s in systems)
    else:
        tail = "primitive; no systems"
    return f"{head} transitive {body} {tail}", True


def cmd_group_info(args, out) -> int:
    code = OK
    for rec in _records(args.source):
        line, transitive = group_info_line(rec)
        out.write(line + "\n")
        if not transitive:
            code = NEGATIVE
    return code


def cmd_catalog_stats(args, out) -> int:
    recs = _records(args.source)
    trans = [r for r in recs if r.group().is_transitive()]
    prim = [r for r in trans if r.group().is_primitive()]
    degrees = sorted({r.degree for r in recs})
    out.write(f"records={len(recs)} degrees={','.join(map(str, degrees))} transitive={len(trans)} "
              f"primitive={len(prim)} imprimitive={len(trans) - len(prim)}\n")
    return OK


# ---------------------------------------------------------------- classify

def _design_files(paths: Sequence[str]) -> list[Path]:
    files: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files += sorted(q for q in p.iterdir() if q.is_file() and not q.name.startswith("."))
        elif p.is_file():
            files.append(p)
        else:
            raise UsageError(f"no such file or directory: {p}")
    if not files:
        raise UsageError("no design files given")
    return files


def cmd_classify(args, out) -> int:
    files = _design_files(args.paths)
    ds = [read_design(f) for f in files]
    classes = iso_classes(ds)
    lam = [lambda3(ds[c[0]]) for c in classes]
    named = sorted(
        ((lam[i], sorted(files[j].name for j in c)) for i, c in enumerate(classes)),
        key=lambda t: (t[0] is None, t[0] or 0, t[1]),
    )
    n = len(named)
    out.write(f"{n} class{'es' if n != 1 else ''}\n")
    per = defaultdict(int)
    for l, _ in named:
        per[l] += 1
    keys = sorted(per, key=lambda l: (l is None, l or 0))
    cells = [("-" if l is None else str(l), str(per[l])) for l in keys]
    w = [max(len(a), len(b)) for a, b in cells]
    out.write("lambda " + " ".join(a.rjust(x) for (a, _), x in zip(cells, w)) + "\n")
    out.write("n      " + " ".join(b.rjust(x) for (_, b), x in zip(cells, w)) + "\n")
    for i, (_, names) in enumerate(named, start=1):
        out.write(f"class {i}: {' '.join(names)}\n")
    return OK


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blocktrans", description="Block-transitive 3-design toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", help="run a feasibility sieve")
    s.add_argument("kind", choices=["imprimitive", "product", "diagonal", "twisted"])
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--table", help="simple-group CSV (default: bundled)")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_sieve)

    d = sub.add_parser("design", help="build, verify or search designs")
    dsub = d.add_subparsers(dest="action", required=True)
    o = dsub.add_parser("orbit")
    o.add_argument("--group", required=True)
    o.add_argument("--base", required=True, help="comma-separated base block")
    o.add_argument("--t", type=int, default=3)
    o.add_argument("--out")
    o.set_defaults(func=cmd_design_orbit)
    v = dsub.add_parser("verify")
    v.add_argument("file")
    v.add_argument("--t", type=int, default=3)
    v.set_defaults(func=cmd_design_verify)
    se = dsub.add_parser("search")
    se.add_argument("--group", action="append")
    se.add_argument("--catalog", help="catalog path or 'builtin'")
    se.add_argument("--pattern", required=True)
    se.add_argument("--t", type=int, default=3)
    se.add_argument("--out-dir")
    se.set_defaults(func=cmd_design_search)

    g = sub.add_parser("group", help="group information")
    gsub = g.add_subparsers(dest="action", required=True)
    gi = gsub.add_parser("info")
    gi.add_argument("source")
    gi.set_defaults(func=cmd_group_info)

    c = sub.add_parser("catalog", help="catalog statistics")
    csub = c.add_subparsers(dest="action", required=True)
    cs = csub.add_parser("stats")
    cs.add_argument("source")
    cs.set_defaults(func=cmd_catalog_stats)

    cl = sub.add_parser("classify", help="isomorphism classes of design files")
    cl.add_argument("paths", nargs="+")
    cl.set_defaults(func=cmd_classify)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ValidationError, CatalogParseError, InfeasibleParametersError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

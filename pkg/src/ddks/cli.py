"""Command-line front end: ``ddks <verb> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import ENGINE_VERSION, __version__, catalog
from .automorphisms import automorphism_group
from .cache import ENV_VAR, NullCache, ResultCache
from .classify import has_quotient_isomorphic_to, is_cct, mon
from .group import FiniteGroup, center, derived_subgroup
from .reports import TABLES, run_report
from .structures import (
    StructureError,
    count_orbits,
    find_prestructures,
    find_structures,
    lift_structures,
    random_structures,
    structure_metadata,
)
from .topology import TopologyError, compute_h1, surface_invariants

LIST_LIMIT = 1_000_000


class CliError(Exception):
    pass


def _group(spec: str) -> tuple[str, FiniteGroup]:
    """A catalog label, or a path to a presentation file (``path[:label]``)."""
    path, _, name = spec.partition(":") if not Path(spec).exists() else (spec, "", "")
    if Path(path).is_file():
        G = catalog.load_group_file(path, name or None)
        return f"file:{Path(path).resolve()}:{G.label or ''}", G
    lab = catalog.resolve(spec)
    return lab, catalog.load_group(lab)


def _emit(payload: Any, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    rows = payload if isinstance(payload, list) else [payload]
    if fmt == "csv":
        keys = list(dict.fromkeys(k for r in rows for k in r))
        buf = io.StringIO()
        w = csv.DictWriter(buf, keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        out.write(buf.getvalue())
        return
    for i, r in enumerate(rows):
        if i:
            out.write("\n")
        for k, v in r.items():
            out.write(f"- **{k}**: {v}\n")


# -- verbs ---------------------------------------------------------------------


def cmd_group(a, cache) -> Any:
    lab, G = _group(a.label)
    if a.action == "info":
        return {"label": lab, "order": G.order, "generators": list(G.generators),
                "abelian": G.is_abelian, "center_order": center(G).order,
                "derived_order": derived_subgroup(G).order,
                "classes": len(G.conjugacy_classes)}
    if a.action == "cct":
        v = is_cct(G)
        return {"label": lab, "cct": v.is_cct, "vacuous": v.vacuous,
                "witness": list(v.witness) if v.witness else None}
    if a.action == "mon":
        v = mon(G)
        return {"label": lab, "monolithic": v.is_monolithic, "mon_order": v.mon.order,
                "mon": v.mon.elements()}
    if a.action == "aut":
        def run():
            return {"aut_order": len(automorphism_group(G))}

        res, hit = cache.memo("aut", lab, {}, run)
        return {"label": lab, **res, "cached": hit}
    raise CliError(f"unknown group action {a.action}")


def cmd_structures(a, cache) -> Any:
    lab, G = _group(a.label)
    if a.action == "search":
        if a.b != 2 and not a.extended:
            raise CliError("b != 2 uses the brute-force path; pass --extended to allow it")
        params = {"b": a.b, "n": a.n}
        t0 = time.perf_counter()
        if a.prestructures:
            res, hit = cache.memo("prestructures", lab, {"n": a.n},
                                  lambda: {"total": find_prestructures(G, a.n, threads=a.threads)})
            return {"label": lab, "prestructures": res["total"], "cached": hit}
        if a.count_only:
            def run():
                r = find_structures(G, a.b, n=a.n, count_only=True, threads=a.threads,
                                    allow_general_b=a.extended)
                return {"total": r.total, "shards": r.shards}

            res, hit = cache.memo("count", lab, params, run)
            return {"label": lab, "b": a.b, "n": a.n, **res, "cached": hit,
                    "seconds": round(time.perf_counter() - t0, 3)}
        first = a.first
        if first is None and not a.extended:
            total = find_structures(G, a.b, n=a.n, count_only=True, threads=a.threads,
                                    allow_general_b=a.extended).total
            if total > LIST_LIMIT:
                raise CliError(f"{total} structures; use --count-only, --first K, or --extended")
        r = find_structures(G, a.b, n=a.n, first=first, threads=a.threads,
                            canonical=a.canonical, allow_general_b=a.extended)
        return [structure_metadata(G, t, a.b).to_record(lab) for t in r]
    if a.action == "lift":
        if not a.over:
            raise CliError("lift needs --over LABEL")
        qlab, Q = _group(a.over)
        found = has_quotient_isomorphic_to(G, Q)
        if found is None:
            raise CliError(f"{qlab} is not a quotient of {lab}")
        N, proj = found
        rows = []
        for base in random_structures(Q, a.samples, seed=a.seed):
            L = lift_structures(G, N, proj, base, Q)
            rows.append({"base": list(base), "lifts": len(L), "generating": sum(g for _, g in L)})
        return rows
    raise CliError(f"unknown structures action {a.action}")


def cmd_h1(a, cache) -> Any:
    lab, G = _group(a.label)
    if a.scan_torsion:
        seen: dict[str, int] = {}
        for s in random_structures(G, a.samples, seed=a.seed):
            key = compute_h1(G, s).format()
            seen[key] = seen.get(key, 0) + 1
        return [{"label": lab, "h1": k, "count": v} for k, v in sorted(seen.items())]
    r = find_structures(G, first=a.representative + 1, canonical=False)
    rows = r.structures
    if len(rows) <= a.representative:
        raise CliError(f"{lab}: fewer than {a.representative + 1} structures")
    s = tuple(int(x) for x in rows[a.representative])

    def run():
        h = compute_h1(G, s)
        return {**h.to_record(), "h1": h.format()}

    res, hit = cache.memo("h1-one", lab, {"representative": a.representative}, run)
    return {"label": lab, "structure": list(s), **res, "cached": hit}


def cmd_invariants(a, cache) -> Any:
    return surface_invariants(a.order, a.b, a.n, a.m1, a.m2, a.q).to_record()


def cmd_orbits(a, cache) -> Any:
    lab, G = _group(a.label)
    total = find_structures(G, count_only=True, threads=a.threads).total
    auts = automorphism_group(G)
    return {"label": lab, "total": total, "aut_order": len(auts), "orbits": count_orbits(total, auts)}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddks", description=__doc__)
    p.add_argument("--version", action="version", version=f"ddks {__version__} (engine {ENGINE_VERSION})")
    p.add_argument("--format", choices=("md", "csv", "json"), default="md")
    p.add_argument("--cache-dir", help=f"result cache root (default ${ENV_VAR} or ~/.cache/ddks)")
    p.add_argument("--no-cache", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("group", help="inspect a catalog group or presentation file")
    g.add_argument("action", choices=("info", "cct", "mon", "aut"))
    g.add_argument("label")
    g.set_defaults(func=cmd_group)

    s = sub.add_parser("structures", help="search or lift structures")
    s.add_argument("action", choices=("search", "lift"))
    s.add_argument("label")
    s.add_argument("--b", type=int, default=2)
    s.add_argument("--n", type=int, default=None, help="order of z (default: any)")
    s.add_argument("--count-only", action="store_true")
    s.add_argument("--prestructures", action="store_true", help="count prestructures instead")
    s.add_argument("--first", type=int, default=None, metavar="K")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--canonical", action="store_true", help="sort output lexicographically")
    s.add_argument("--extended", action="store_true", help="allow long or unbounded runs")
    s.add_argument("--over", help="quotient label for lift")
    s.add_argument("--samples", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_structures)

    o = sub.add_parser("orbits", help="structure count divided by |Aut(G)|")
    o.add_argument("label")
    o.add_argument("--threads", type=int, default=1)
    o.set_defaults(func=cmd_orbits)

    h = sub.add_parser("h1", help="first homology of the branched cover")
    h.add_argument("label")
    grp = h.add_mutually_exclusive_group()
    grp.add_argument("--representative", type=int, default=0, metavar="K")
    grp.add_argument("--scan-torsion", action="store_true")
    h.add_argument("--samples", type=int, default=64)
    h.add_argument("--seed", type=int, default=0)
    h.set_defaults(func=cmd_h1)

    i = sub.add_parser("invariants", help="closed-form surface invariants")
    i.add_argument("--order", type=int, required=True)
    i.add_argument("--b", type=int, default=2)
    i.add_argument("--n", type=int, default=2)
    i.add_argument("--m1", type=int, default=1)
    i.add_argument("--m2", type=int, default=1)
    i.add_argument("--q", type=int, default=None)
    i.set_defaults(func=cmd_invariants)

    r = sub.add_parser("report", help="reproduce a table and diff it against golden values")
    r.add_argument("table", choices=TABLES)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--samples", type=int, default=64, help="structures scanned for G(64,266) in h1-table")
    r.set_defaults(func=None)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    a = build_parser().parse_args(argv)
    cache = NullCache() if a.no_cache else ResultCache(a.cache_dir)
    try:
        if a.verb == "report":
            rep = run_report(a.table, cache, threads=a.threads, scan=a.samples)
            out.write(rep.render(a.format))
            return 0 if rep.ok else 1
        _emit(a.func(a, cache), a.format, out)
        return 0
    except (CliError, catalog.CatalogError, StructureError, TopologyError, ValueError) as e:
        print(f"ddks: error: {e}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

"""Tables reproduced from the catalog, with a diff against stored golden values."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Callable

from . import catalog
from .automorphisms import automorphism_group
from .cache import NullCache, ResultCache
from .classify import is_cct
from .snf import AbelianInvariants
from .structures import SearchContext, find_structures, random_structures, structure_metadata
from .topology import compute_h1, surface_invariants

CCT_ORDERS = (36, 40, 48, 54, 56, 60)
ORDER64 = ("G(64,199)", "G(64,200)", "G(64,201)", "G(64,264)", "G(64,265)", "G(64,249)", "G(64,266)")
TABLES = tuple(f"cct-{o}" for o in CCT_ORDERS) + ("order64-structures", "h1-table", "invariants-table")


@dataclass
class Report:
    name: str
    columns: list[str]
    rows: list[list[Any]]
    mismatches: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def render(self, fmt: str = "md") -> str:
        if fmt == "json":
            return json.dumps(
                {"table": self.name, "columns": self.columns,
                 "rows": [dict(zip(self.columns, r)) for r in self.rows],
                 "mismatches": self.mismatches, "notes": self.notes},
                indent=2, sort_keys=False,
            ) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.columns)
            w.writerows(self.rows)
            return buf.getvalue()
        if fmt != "md":
            raise ValueError(f"unknown format {fmt!r}")
        out = [f"## {self.name}", "", "| " + " | ".join(self.columns) + " |",
               "|" + "---|" * len(self.columns)]
        out += ["| " + " | ".join(str(c) for c in r) + " |" for r in self.rows]
        for n in self.notes:
            out += ["", n]
        out += ["", "golden: OK" if self.ok else "golden: MISMATCH"]
        out += [f"- {m}" for m in self.mismatches]
        return "\n".join(out) + "\n"


def _labels_of_order(order: int) -> list[str]:
    return [lab for lab in catalog.labels() if catalog.entry(lab).order == order]


def cct_report(order: int, cache: ResultCache | None = None) -> Report:
    cache = cache or NullCache()
    rows, mism = [], []
    for lab in _labels_of_order(order):
        G = catalog.load_group(lab)
        if G.is_abelian:
            continue

        def run(G=G):
            v = is_cct(G)
            return {"cct": v.is_cct, "witness": list(v.witness) if v.witness else None}

        res, _ = cache.memo("cct", lab, {}, run)
        gold = catalog.entry(lab).annotations.get("cct")
        rows.append([lab, "yes" if res["cct"] else "no",
                     "" if res["witness"] is None else " ".join(map(str, res["witness"]))])
        if gold is not None and gold != res["cct"]:
            mism.append(f"{lab}: cct={res['cct']}, golden {gold}")
    non = [r[0] for r in rows if r[1] == "no"]
    notes = [f"non-CCT: {{{', '.join(non)}}}" if non else "non-CCT: none"]
    return Report(f"cct-{order}", ["group", "CCT", "witness (x y w)"], rows, mism, notes)


def _structures_row(lab: str, cache: ResultCache, threads: int) -> dict:
    def run():
        G = catalog.load_group(lab)
        ctx = SearchContext(G)
        total = find_structures(G, count_only=True, threads=threads, ctx=ctx).total
        aut = len(automorphism_group(G))
        meta = structure_metadata(G, next(iter(find_structures(G, first=1, ctx=ctx))))
        return {"total": total, "aut": aut, "orbits": total // aut if total % aut == 0 else None,
                "k_orders": [meta.K1.order, meta.K2.order], "z_order": meta.n,
                "strong": meta.strong}

    return cache.memo("order64-structures", lab, {"b": 2, "n": 2}, run)[0]


def order64_report(cache: ResultCache | None = None, threads: int = 1) -> Report:
    cache = cache or NullCache()
    rows, mism = [], []
    for lab in ORDER64:
        r = _structures_row(lab, cache, threads)
        ann = catalog.entry(lab).annotations
        gold = ann["structures"]
        rows.append([lab, "yes" if ann.get("monolithic") else "no", r["total"], r["aut"],
                     r["orbits"], f"({r['k_orders'][0]}, {r['k_orders'][1]})"])
        for key, have in (("total", r["total"]), ("orbits", r["orbits"]), ("k_orders", r["k_orders"])):
            if gold[key] != have:
                mism.append(f"{lab}: {key}={have}, golden {gold[key]}")
        if ann["aut_order"] != r["aut"]:
            mism.append(f"{lab}: |Aut|={r['aut']}, golden {ann['aut_order']}")
    cols = ["group", "monolithic", "structures", "|Aut(G)|", "orbits", "(|K1|, |K2|)"]
    return Report("order64-structures", cols, rows, mism)


def _h1_variants(lab: str, cache: ResultCache, scan: int, seed: int) -> dict:
    """H1 of one structure, or of ``scan`` sampled structures when ``scan > 0``."""

    def run():
        G = catalog.load_group(lab)
        if scan:
            sample = random_structures(G, scan, seed=seed)
        else:
            sample = [next(iter(find_structures(G, first=1)))]
        seen: dict[str, dict] = {}
        for s in sample:
            h = compute_h1(G, s)
            meta = structure_metadata(G, s)
            key = h.format()
            if key not in seen:
                seen[key] = {"h1": h.to_record(), "m": [meta.m1, meta.m2], "count": 0,
                             "example": list(s)}
            seen[key]["count"] += 1
        return {"sampled": len(sample), "variants": list(seen.values())}

    return cache.memo("h1", lab, {"scan": scan, "seed": seed}, run)[0]


def h1_report(cache: ResultCache | None = None, scan: int = 64, seed: int = 0) -> Report:
    cache = cache or NullCache()
    rows, mism, notes = [], [], []
    for lab in ORDER64:
        ann = catalog.entry(lab).annotations
        variants = ann.get("h1_variants")
        res = _h1_variants(lab, cache, scan if variants else 0, seed)
        got = sorted(res["variants"], key=lambda v: (v["h1"]["rank"], v["h1"]["torsion"]))
        for v in got:
            h = AbelianInvariants.from_record(v["h1"])
            inv = surface_invariants(64, 2, 2, *v["m"], q=h.rank // 2)
            rows.append([lab, h.format(), inv.q, inv.c1_sq, inv.c2, inv.sigma,
                         inv.b1_base, inv.b2_base, inv.g1, inv.g2])
        want = [AbelianInvariants.from_record(d) for d in (variants or [ann["h1"]])]
        have = [AbelianInvariants.from_record(v["h1"]) for v in got]
        if sorted(map(AbelianInvariants.format, want)) != sorted(map(AbelianInvariants.format, have)):
            mism.append(f"{lab}: H1 {[h.format() for h in have]}, golden {[w.format() for w in want]}")
        if variants:
            freq = ", ".join(f"{AbelianInvariants.from_record(v['h1']).format()}: {v['count']}" for v in got)
            notes.append(f"{lab}: {res['sampled']} sampled structures ({freq})")
    cols = ["group", "H1(S, Z)", "q", "K^2", "c2", "sigma", "b1", "b2", "g1", "g2"]
    return Report("h1-table", cols, rows, mism, notes)


_GOLD_INV = {  # (q, K^2, c2, sigma, b1, b2, g1, g2)
    "strong": (4, 736, 320, 32, 2, 2, 81, 81),
    "index2": (6, 736, 320, 32, 3, 3, 41, 41),
}


def invariants_report(cache: ResultCache | None = None) -> Report:
    """Closed-form columns for the seven order-64 groups; ``q`` from H1."""
    cache = cache or NullCache()
    rows, mism = [], []
    for lab in ORDER64:
        res = _h1_variants(lab, cache, 0, 0)
        v = res["variants"][0]
        q = v["h1"]["rank"] // 2
        inv = surface_invariants(64, 2, 2, *v["m"], q=q)
        rows.append([lab, *v["m"], inv.c1_sq, inv.c2, inv.sigma, inv.chi, inv.q, inv.p_g,
                     inv.b1_base, inv.b2_base, inv.g1, inv.g2, "/".join(map(str, inv.betti))])
        gold = _GOLD_INV["strong" if v["m"] == [1, 1] else "index2"]
        have = (inv.q, inv.c1_sq, inv.c2, inv.sigma, inv.b1_base, inv.b2_base, inv.g1, inv.g2)
        if have != gold:
            mism.append(f"{lab}: {have}, golden {gold}")
    cols = ["group", "m1", "m2", "K^2", "c2", "sigma", "chi", "q", "p_g", "b1", "b2", "g1", "g2", "Betti"]
    return Report("invariants-table", cols, rows, mism)


def run_report(table: str, cache: ResultCache | None = None, threads: int = 1, scan: int = 64) -> Report:
    if table.startswith("cct-"):
        try:
            order = int(table[4:])
        except ValueError:
            order = -1
        if order not in CCT_ORDERS:
            raise ValueError(f"unknown table {table!r}; choose from {', '.join(TABLES)}")
        return cct_report(order, cache)
    makers: dict[str, Callable[[], Report]] = {
        "order64-structures": lambda: order64_report(cache, threads),
        "h1-table": lambda: h1_report(cache, scan),
        "invariants-table": lambda: invariants_report(cache),
    }
    if table not in makers:
        raise ValueError(f"unknown table {table!r}; choose from {', '.join(TABLES)}")
    return makers[table]()

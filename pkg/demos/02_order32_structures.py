#!/usr/bin/env python3
# Exhaustive search on the two extra-special groups of order 32.

import time

from ddks import catalog
from ddks.automorphisms import automorphism_group
from ddks.structures import count_orbits, find_structures, structure_metadata, verify_structure

for label in ("H5(Z2)", "G5(Z2)"):
    G = catalog.load_group(label)
    t = time.perf_counter()
    total = find_structures(G, count_only=True).total
    dt = time.perf_counter() - t
    auts = automorphism_group(G)
    print(f"{G.label}: {total} structures in {dt:.2f}s, |Aut| = {len(auts)}, "
          f"orbits = {count_orbits(total, auts)}")

# look at one structure by hand
G = catalog.load_group("G(32,49)")
s = next(iter(find_structures(G, first=1)))
names = ("r11", "t11", "r12", "t12", "r21", "t21", "r22", "t22", "z")
print(dict(zip(names, s)))
print("violations:", verify_structure(G, s))
meta = structure_metadata(G, s)
print("o(z) =", meta.n, " |K1|, |K2| =", meta.K1.order, meta.K2.order, " strong:", meta.strong)

# Aut(G) acts freely: moving s by a non-trivial automorphism never fixes it
auts = automorphism_group(G)
moved = sum(tuple(int(a[x]) for x in s) != tuple(s) for a in auts[1:])
print("automorphisms moving s:", moved, "of", len(auts) - 1)

#!/usr/bin/env python3
# Order 64: lifting from an extra-special quotient, then H1 of the cover.

from collections import Counter

from ddks import catalog
from ddks.classify import has_quotient_isomorphic_to
from ddks.structures import lift_structures, random_structures
from ddks.topology import compute_h1, surface_invariants

# G(64,264) = G(32,49) x Z2: every base structure has 256 lifts, 16 of which
# fail to generate
G, Q = catalog.load_group("G(64,264)"), catalog.load_group("G(32,49)")
N, proj = has_quotient_isomorphic_to(G, Q)
for base in random_structures(Q, 3, seed=1):
    lifts = lift_structures(G, N, proj, base)
    print("base", base, "->", len(lifts), "lifts,", sum(g for _, g in lifts), "generating")

# H1 through Reidemeister-Schreier: 1472 x 513 relation matrix, then SNF
for label in ("G(64,199)", "G(64,264)"):
    G = catalog.load_group(label)
    s = random_structures(G, 1, seed=0)[0]
    print(label, compute_h1(G, s).format())

# G(64,266) has two torsion types; a random scan finds both
G = catalog.load_group("G(64,266)")
seen = Counter(compute_h1(G, s).format() for s in random_structures(G, 40, seed=2))
print("G(64,266):", dict(seen))

# closed-form invariants for the non-strong case (|K1| = |K2| = 32, so m = 2)
r = surface_invariants(64, 2, 2, 2, 2, q=6)
print(f"K^2={r.c1_sq} c2={r.c2} sigma={r.sigma} p_g={r.p_g} Betti={r.betti}")

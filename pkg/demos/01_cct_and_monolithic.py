#!/usr/bin/env python3
# Which small groups survive the two cheap filters?
#
# A CCT group carries no prestructure at all, and a non-monolithic group only
# carries structures lifted from a proper quotient.  So the first pass over a
# catalog is: drop CCT groups, then split the rest by monolithicity.

from ddks import catalog
from ddks.classify import is_cct, mon

survivors = []
for label in catalog.labels():
    G = catalog.load_group(label)
    if G.order > 63 or G.is_abelian:
        continue
    v = is_cct(G)
    if v.is_cct:
        continue
    m = mon(G)
    print(f"{label:10s} order {G.order:2d}  non-CCT, witness {v.witness}, "
          f"monolithic={m.is_monolithic} |mon|={m.mon.order}")
    if m.is_monolithic:
        survivors.append(label)

# only these need a real search below order 64
print("\nnon-CCT and monolithic:", survivors)

# the witness is a triple (x, y, w): x and w both commute with y but not with each other
G = catalog.load_group("S3xS3")
x, y, w = is_cct(G).witness
print("S3 x S3:", G.comm(x, y), G.comm(y, w), G.comm(x, w))

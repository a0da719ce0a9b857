"""Finite-type invariants from clasp diagrams.

Sending a diagram to the sum of all its subdiagrams (the I map) and
truncating to at most n chords gives a universal invariant of order n,
valued in a finitely presented group A_n.  For n = 3 that group is free of
rank three, and a calibration on three knots recovers v2 and v3.
"""

# %%
from __future__ import annotations

import sys

import numpy as np

from claspkit.core import mirror, parse_diagram, random_diagram
from claspkit.vassiliev import (
    AnConfig, FormalSum, I_inverse, I_map, an_presentation, calibrate_v23, pair, reduce_in_an, v2_from_conway, v2v3,
)

trefoil = parse_diagram("1-3:2:+ 2-4:1:+")

# %% [markdown]
# I sums over subdiagrams; pairing counts how often a pattern occurs.

# %%
print(I_map(trefoil))
print(I_inverse(trefoil))
print("pair(1-2:1:+, trefoil) =", pair(parse_diagram("1-2:1:+"), trefoil))
s = FormalSum([(trefoil, 2), (parse_diagram("1-2:1:-"), -1)])
assert I_map(I_inverse(s)) == s

# %% [markdown]
# Presentations of A_n.  Small bounds already give the stable ranks for
# n <= 2; pass `--a3` to compute A_3 at the default bounds (about 30 s).

# %%
small = AnConfig(braid_max_strand=5, braid_context=0)
for n in range(3):
    P = an_presentation(n, small)
    print(f"A_{n}: {len(P.generators)} generators, {P.relation_shape[0]} relations, "
          f"free rank {P.free_rank}, torsion {P.torsion or 'none'}")

# %%
if "--a3" in sys.argv:
    P3 = an_presentation(3)
    print(f"A_3: free rank {P3.free_rank}, torsion {P3.torsion or 'none'}, provenance {P3.provenance}")
    cal = calibrate_v23(P3)
    for name, d in [("unknot", parse_diagram("empty")), ("trefoil", trefoil), ("mirror", mirror(trefoil))]:
        print(f"{name:8s} coordinates {reduce_in_an(d, 3, P3)} -> (v2, v3) = {v2v3(d, P3, cal)}")

# %% [markdown]
# The shipped weights evaluate the same functional directly.  v2 matches the
# z^2 coefficient of the Conway polynomial, and v3 changes sign under mirror.

# %%
rng = np.random.default_rng(11)
for _ in range(6):
    d = random_diagram(int(rng.integers(2, 6)), rng)
    v2, v3 = v2v3(d)
    print(f"{d.key:45s} v2={v2:3d} (Conway {v2_from_conway(d):3d})  v3={v3:3d}  mirror v3={v2v3(mirror(d))[1]:3d}")

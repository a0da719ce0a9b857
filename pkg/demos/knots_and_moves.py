"""Clasp diagrams, their Alexander polynomials and the moves between them."""

# %% [markdown]
# A clasp diagram is a set of signed chords on a line with a total order
# (heights).  The text form lists chords as `left-right:height:sign`.

# %%
from __future__ import annotations

import numpy as np

from claspkit.alexander import alexander, conway, knot_determinant, s_matrix, seifert_genus_bound
from claspkit.core import linking_matrix, mirror, parse_diagram, random_diagram, sign_matrix
from claspkit.moves import applicable_moves, apply_move, equiv_search, replay
from claspkit.vassiliev import v2v3

six_one = parse_diagram("1-4:3:- 2-6:2:+ 3-5:1:+")
print("diagram:", six_one.key)
print("linking matrix L:\n", np.array(linking_matrix(six_one)))
print("sign matrix E:\n", np.array(sign_matrix(six_one)))

# %% [markdown]
# The Laurent matrix S_D is built from L and E; its determinant is the
# Alexander polynomial.

# %%
for row in s_matrix(six_one):
    print("  ", "  ".join(str(e).rjust(10) for e in row))
print("Alexander:", alexander(six_one))
print("Conway:   ", conway(six_one))
print("det:", knot_determinant(six_one), " genus bound:", seifert_genus_bound(six_one))
print("(v2, v3):", v2v3(six_one))

# %% [markdown]
# Small knots.  The trefoil and its mirror share an Alexander polynomial;
# v3 tells them apart.

# %%
trefoil = parse_diagram("1-3:2:+ 2-4:1:+")
fig8 = parse_diagram("1-3:2:+ 2-4:1:-")
for name, d in [("trefoil", trefoil), ("mirror", mirror(trefoil)), ("figure-eight", fig8)]:
    print(f"{name:13s} {d.key:18s} Δ = {alexander(d)!s:18s} (v2, v3) = {v2v3(d)}")

# %% [markdown]
# Every legal move leaves the invariants alone.  Here we apply all moves
# available on a random diagram (insertions capped at one extra chord).

# %%
rng = np.random.default_rng(1)
d = random_diagram(5, rng)
base = (alexander(d), v2v3(d))
moves = applicable_moves(d, ["A", "B", "C1_delete", "C1_insert", "C2_delete", "C2_insert"], max_chords=d.n + 1)
changed = sum((alexander(e), v2v3(e)) != base for e in (apply_move(d, m) for m in moves))
print(f"{d.key}: {len(moves)} moves, {changed} changed the invariants")

# %% [markdown]
# Bounded search finds move sequences, or proves two diagrams distinct via
# an invariant.

# %%
e = d
for _ in range(3):
    ms = applicable_moves(e, ["A", "B", "C1_delete", "C2_delete"])
    e = apply_move(e, ms[int(rng.integers(len(ms)))])
out = equiv_search(d, e, budget=5000)
print(e.key, "->", out.status, [str(m) for m in out.path])
if out.status == "connected":
    assert replay(d, out.path) == e
apart = equiv_search(trefoil, fig8)
print("trefoil vs figure-eight:", apart.status, "by", apart.witness)

"""From pure braids to clasp diagrams.

A pure braid word whose letters all join an odd strand to an even one
(admissible letters) closes up, by joining strands pairwise at the top
and bottom, into a knot with one clasp per letter.  Any word can be
brought to that form, and combing makes the resulting diagram descending.
"""

# %%
from __future__ import annotations

import numpy as np

from claspkit.alexander import alexander
from claspkit.braid import (
    comb, descending_diagram, eliminate_inadmissible, free_reduce, is_admissible, is_combed, parse_word,
    random_word, serialize_word, short_circuit_clasp, word_to_clasp,
)
from claspkit.core import is_descending

# %% [markdown]
# Letters are `A(i,j)` (generator) and `a(i,j)` (inverse).

# %%
w = parse_word("A(1,4) A(1,2) a(5,6) A(3,6) a(1,4)")
print(serialize_word(w), " admissible:", is_admissible(w), " combed:", is_combed(w))

# %% [markdown]
# Inadmissible letters are rewritten one at a time; each rule trades the
# letter for admissible ones on more strands.

# %%
for src in ("a(2,4)", "A(3,5)", "A(2,4)"):
    print(f"{src:8s} -> {serialize_word(eliminate_inadmissible(parse_word(src)))}")

# %% [markdown]
# Short-circuit closure of an admissible word, and the full pipeline.

# %%
print(short_circuit_clasp(parse_word("a(1,2) a(1,2)")).key)
print(word_to_clasp(parse_word("a(2,4)")).key)

# %% [markdown]
# Combing moves letters with smaller first strand to the left; an admissible
# combed word closes to a descending diagram.  The descending diagram can be
# much larger than the direct one but represents the same knot.

# %%
print(serialize_word(comb(parse_word("A(2,3) A(1,2)"))))
rng = np.random.default_rng(5)
rows = []
for _ in range(8):
    w = free_reduce(random_word(rng, 5, 6, min_len=3))
    direct = word_to_clasp(w)
    desc = descending_diagram(w)
    rows.append((serialize_word(w), direct.n, desc.n, is_descending(desc), alexander(direct) == alexander(desc)))
for word, n1, n2, ok, same in rows:
    print(f"{word:40s} chords {n1:3d} -> {n2:3d}  descending={ok}  same Δ={same}")

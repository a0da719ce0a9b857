"""Pure braid words and their short-circuit closures as clasp diagrams.

Words are products of generators ``A(i,j)^{±1}`` read top to bottom (the
first factor is on top).  The text form writes ``A(i,j)`` for the generator
and ``a(i,j)`` for its inverse; the empty word is ``id``.

Closure convention: strand 1 is traversed downward, then strand 2 upward,
strand 3 downward and so on, so the bottoms of strands ``2r-1, 2r`` and the
tops of strands ``2r, 2r+1`` are joined.  The ``k``-th letter of an
``n``-letter admissible word becomes a chord of height ``n+1-k`` whose sign
is opposite to the exponent of the letter.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import ClaspDiagram, from_raw
from .errors import DomainError, ParseError, ResourceError

__all__ = [
    "Generator",
    "BraidWord",
    "IDENTITY",
    "parse_word",
    "serialize_word",
    "free_reduce",
    "exponent_class_sums",
    "is_combed",
    "is_admissible",
    "comb",
    "tau",
    "eliminate_step",
    "eliminate_inadmissible",
    "short_circuit_clasp",
    "word_to_clasp",
    "descending_diagram",
    "short_circuit_move",
    "SHORT_CIRCUIT_FORMS",
    "CLOSURE_SIDES",
    "random_word",
    "strand_count",
    "COMB_CAP",
]

COMB_CAP = 100_000

_LETTER = re.compile(r"^([Aa])\((\d+),(\d+)\)$")


@dataclass(frozen=True, order=True)
class Generator:
    i: int
    j: int
    exp: int = 1

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise DomainError(f"generator indices must satisfy 1 <= i < j, got ({self.i},{self.j})")
        if self.exp not in (1, -1):
            raise DomainError(f"exponent must be ±1, got {self.exp}")

    @property
    def admissible(self) -> bool:
        return self.i % 2 == 1 and self.j % 2 == 0

    def inverse(self) -> Generator:
        return Generator(self.i, self.j, -self.exp)

    def __str__(self):
        return f"{'A' if self.exp > 0 else 'a'}({self.i},{self.j})"


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[Generator, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.letters)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return BraidWord(self.letters[k])
        return self.letters[k]

    def __add__(self, other: BraidWord) -> BraidWord:
        return BraidWord(self.letters + tuple(other))

    def inverse(self) -> BraidWord:
        return BraidWord(tuple(g.inverse() for g in reversed(self.letters)))

    def __str__(self):
        return serialize_word(self)


IDENTITY = BraidWord(())


def _word(letters: Iterable[Generator]) -> BraidWord:
    return BraidWord(tuple(letters))


def A(i: int, j: int, exp: int = 1) -> Generator:
    return Generator(i, j, exp)


def parse_word(text: str) -> BraidWord:
    tokens = text.split()
    if not tokens:
        raise ParseError("empty input; use 'id' for the trivial word")
    if tokens == ["id"]:
        return IDENTITY
    letters = []
    for tok in tokens:
        m = _LETTER.match(tok)
        if m is None:
            raise ParseError(f"bad braid letter {tok!r}")
        i, j = int(m[2]), int(m[3])
        if not 1 <= i < j:
            raise DomainError(f"letter {tok!r} needs 1 <= i < j")
        letters.append(Generator(i, j, 1 if m[1] == "A" else -1))
    return _word(letters)


def serialize_word(w: BraidWord) -> str:
    return " ".join(str(g) for g in w) if len(w) else "id"


def free_reduce(w: BraidWord | Sequence[Generator]) -> BraidWord:
    stack: list[Generator] = []
    for g in w:
        if stack and stack[-1].i == g.i and stack[-1].j == g.j and stack[-1].exp == -g.exp:
            stack.pop()
        else:
            stack.append(g)
    return _word(stack)


def exponent_class_sums(w: BraidWord) -> dict[tuple[int, int], int]:
    """Exponent sum per generator pair (the image in the abelianisation)."""
    sums: Counter = Counter()
    for g in w:
        sums[(g.i, g.j)] += g.exp
    return dict(sums)


def is_combed(w: BraidWord) -> bool:
    return all(a.i <= b.i for a, b in zip(w.letters, w.letters[1:]))


def is_admissible(w: BraidWord) -> bool:
    return all(g.admissible for g in w)


def strand_count(w: BraidWord) -> int:
    """Smallest odd strand count containing every strand index of ``w``."""
    m = max((g.j for g in w), default=1)
    return m if m % 2 else m + 1


# -- combing -----------------------------------------------------------------------

def _conjugator(x: Generator, i: int, j: int) -> list[Generator]:
    """``P`` with ``x A(i,j) x^-1 = P A(i,j) P^-1`` when ``i < x.i``."""
    r, s = x.i, x.j
    if j < r or s < j:
        return []
    if x.exp > 0:
        if j == r:
            return [A(i, r, -1), A(i, s, -1)]
        if j == s:
            return [A(i, r, -1)]
        return [A(i, r, -1), A(i, s, -1), A(i, r), A(i, s)]
    if j == r:
        return [A(i, s)]
    if j == s:
        return [A(i, s), A(i, r)]
    return [A(i, s), A(i, r), A(i, s, -1), A(i, r, -1)]


def _conjugate_letters(x: Generator, word: Sequence[Generator]) -> list[Generator]:
    out: list[Generator] = []
    for y in word:
        p = _conjugator(x, y.i, y.j)
        if p:
            pinv = [g.inverse() for g in reversed(p)]
            out.extend(p)
            out.append(y)
            out.extend(pinv)
        else:
            out.append(y)
    return list(free_reduce(out))


def comb(w: BraidWord, cap: int = COMB_CAP) -> BraidWord:
    """Combed form: first indices non-decreasing, same pure braid.

    Letters with the smallest first index are pushed to the left through the
    remaining letters using the Artin conjugation relations; the remainder
    is then combed recursively.
    """
    w = free_reduce(w)
    if not len(w):
        return w
    i = min(g.i for g in w)
    head: list[Generator] = []
    rest: list[Generator] = []
    for g in w:
        if g.i != i:
            rest.append(g)
            continue
        pushed = [g]
        for x in reversed(rest):
            pushed = _conjugate_letters(x, pushed)
            if len(pushed) > cap:
                raise ResourceError(f"combing exceeded {cap} letters")
        head = list(free_reduce(head + pushed))
        if len(head) > cap:
            raise ResourceError(f"combing exceeded {cap} letters")
    tail = comb(_word(rest), cap) if rest else IDENTITY
    return free_reduce(head + list(tail))


# -- strand insertion and elimination of inadmissible letters ------------------------

def _tau_index(k: int, x: int) -> int:
    return x if x <= k else x + 2


def tau(k: int, w: BraidWord | Sequence[Generator]) -> BraidWord:
    """Insert two strands between strands ``k`` and ``k+1``."""
    if k < 0:
        raise DomainError("tau needs k >= 0")
    return _word(Generator(_tau_index(k, g.i), _tau_index(k, g.j), g.exp) for g in w)


def _taus(ks: Sequence[int], w: Sequence[Generator]) -> list[Generator]:
    # ks lists the composition outermost first, so apply it right to left
    for k in reversed(ks):
        w = tau(k, w).letters
    return list(w)


def _rule(g: Generator) -> tuple[int, list[int], list[Generator], list[int]]:
    """Rule number, taus on the prefix, replacement letters, taus on the suffix."""
    i, j, e = g.i, g.j, g.exp
    if i % 2 == 0:
        r = i // 2
        if j % 2 == 1:
            s = (j - 1) // 2
            return (1 if e < 0 else 2), [2 * r - 1, 2 * s + 1], [A(2 * r + 1, 2 * s + 4, e)], [2 * r, 2 * s]
        s = j // 2
        if e < 0:
            return 3, [2 * r - 1], [A(2 * r + 1, 2 * s + 2)], [2 * r]
        return (5, [2 * r - 1, 2 * s - 1, 2 * s - 1],
                [A(2 * r + 1, 2 * s + 4, -1), A(2 * s + 3, 2 * s + 6, -1)], [2 * r, 2 * s, 2 * s])
    if j % 2 == 1:
        r, s = (i - 1) // 2, (j - 1) // 2
        if e > 0:
            return 4, [2 * s + 1], [A(2 * r + 1, 2 * s + 2, -1)], [2 * s]
        return (6, [2 * s + 1, 2 * s + 1],
                [A(2 * r + 1, 2 * s + 2), A(2 * s + 1, 2 * s + 4)], [2 * s, 2 * s])
    raise DomainError(f"{g} is admissible")


def eliminate_step(w: BraidWord, pos: int | None = None) -> tuple[BraidWord, int]:
    """Rewrite the first inadmissible letter (or the one at ``pos``); return the word and the rule used."""
    letters = list(w)
    if pos is None:
        pos = next((k for k, g in enumerate(letters) if not g.admissible), None)
        if pos is None:
            return w, 0
    rule, pre, mid, post = _rule(letters[pos])
    out = _taus(pre, letters[:pos]) + mid + _taus(post, letters[pos + 1:])
    return _word(out), rule


def eliminate_inadmissible(w: BraidWord) -> BraidWord:
    """Replace inadmissible letters left to right until only ``A(odd, even)`` remain."""
    count = sum(not g.admissible for g in w)
    while count:
        w, _ = eliminate_step(w)
        new_count = sum(not g.admissible for g in w)
        if new_count != count - 1:
            raise AssertionError("elimination step did not remove exactly one inadmissible letter")
        count = new_count
    return w


# -- closures ------------------------------------------------------------------

def short_circuit_clasp(w: BraidWord) -> ClaspDiagram:
    """Clasp diagram of the short-circuit closure of an admissible word."""
    n = len(w)
    items = []
    for k, g in enumerate(w, 1):
        if not g.admissible:
            raise DomainError(f"letter {k} ({g}) is inadmissible")
        pi = (g.i - 1) * n + k
        pj = (g.j - 1) * n + (n + 1 - k)
        items.append((pi, pj, n + 1 - k, -g.exp, False))
    return from_raw(items)


def word_to_clasp(w: BraidWord) -> ClaspDiagram:
    return short_circuit_clasp(eliminate_inadmissible(free_reduce(w)))


def _settle(letters: list[Generator], pos: int) -> list[Generator]:
    """Move the letter at ``pos`` right until the first index order is restored."""
    g = letters.pop(pos)
    k = pos
    while k < len(letters) and letters[k].i < g.i:
        k += 1
    letters.insert(k, g)
    return letters


def descending_diagram(w: BraidWord, cap: int = COMB_CAP) -> ClaspDiagram:
    """A descending clasp diagram with the same closure as ``w``.

    The word is made admissible, combed, and made admissible again.  Combing
    an admissible word only introduces letters ``A(odd, odd)``; their
    elimination keeps the word combed once the second letter produced by
    rule 6 is moved past the letters below it, all of which commute with it.
    """
    w = eliminate_inadmissible(free_reduce(w))
    w = comb(w, cap)
    letters = list(w)
    while True:
        pos = next((k for k, g in enumerate(letters) if not g.admissible), None)
        if pos is None:
            break
        new, rule = eliminate_step(_word(letters), pos)
        letters = list(new)
        if rule == 6:
            letters = _settle(letters, pos + 1)
        elif rule != 4:
            raise AssertionError(f"unexpected elimination rule {rule} on a combed admissible-derived word")
        if len(letters) > cap:
            raise ResourceError(f"word length exceeded {cap}")
    out = _word(letters)
    if not is_combed(out):
        raise AssertionError("descending_diagram produced an uncombed word")
    return short_circuit_clasp(out)


# -- short-circuit moves --------------------------------------------------------------

# form -> (side the move is usually written on, parameter description)
SHORT_CIRCUIT_FORMS = {
    "1a": "A(2r-1,2r)^e",
    "1b": "A(2r,2r+1)^e",
    "2a": "(A(r,2s+1) A(r,2s))^e, 0<r<2s",
    "2b": "(A(2s+1,r) A(2s,r))^e, 0<2s+1<r",
    "2c": "(A(r,2s) A(r,2s-1))^e, 0<r<2s-1",
    "2d": "(A(2s,r) A(2s-1,r))^e, 0<2s<r",
}

# Sides on which each form leaves the closure unchanged under the strand
# traversal used by ``short_circuit_clasp``: a factor whose strand pair is
# joined at the top must sit at the start of the word, one whose pair is
# joined at the bottom at the end.
CLOSURE_SIDES = {
    "1a": "suffix",
    "1b": "prefix",
    "2a": "prefix",
    "2b": "prefix",
    "2c": "suffix",
    "2d": "suffix",
}


def _form_letters(form: str, r: int, s: int | None, eps: int) -> list[Generator]:
    if eps not in (1, -1):
        raise DomainError("epsilon must be ±1")
    if r < 1:
        raise DomainError("r must be positive")
    if form == "1a":
        pair = [A(2 * r - 1, 2 * r)]
    elif form == "1b":
        pair = [A(2 * r, 2 * r + 1)]
    else:
        if s is None or s < 1:
            raise DomainError(f"form {form} needs a positive s")
        if form == "2a":
            if not r < 2 * s:
                raise DomainError("form 2a needs 0 < r < 2s")
            pair = [A(r, 2 * s + 1), A(r, 2 * s)]
        elif form == "2b":
            if not 2 * s + 1 < r:
                raise DomainError("form 2b needs 2s+1 < r")
            pair = [A(2 * s + 1, r), A(2 * s, r)]
        elif form == "2c":
            if not r < 2 * s - 1:
                raise DomainError("form 2c needs 0 < r < 2s-1")
            pair = [A(r, 2 * s), A(r, 2 * s - 1)]
        elif form == "2d":
            if not 2 * s < r:
                raise DomainError("form 2d needs 2s < r")
            pair = [A(2 * s, r), A(2 * s - 1, r)]
        else:
            raise DomainError(f"unknown short-circuit form {form!r}")
    if eps < 0:
        pair = [g.inverse() for g in reversed(pair)]
    return pair


def short_circuit_move(w: BraidWord, form: str, side: str, r: int, s: int | None = None,
                       eps: int = 1) -> BraidWord:
    """Attach one of the six short-circuit factors to ``w`` on the given side."""
    if form not in SHORT_CIRCUIT_FORMS:
        raise DomainError(f"unknown short-circuit form {form!r}")
    factor = _form_letters(form, r, s, eps)
    if side == "prefix":
        return _word(factor + list(w))
    if side == "suffix":
        return _word(list(w) + factor)
    raise DomainError(f"side must be 'prefix' or 'suffix', got {side!r}")


def random_word(rng: np.random.Generator, max_len: int = 6, max_strand: int = 7,
                min_len: int = 0) -> BraidWord:
    length = int(rng.integers(min_len, max_len + 1))
    letters = []
    for _ in range(length):
        i, j = sorted(int(x) for x in rng.choice(np.arange(1, max_strand + 1), size=2, replace=False))
        letters.append(Generator(i, j, int(rng.choice((1, -1)))))
    return _word(letters)

"""Long clasp diagrams: data model, text format, matrices and subdiagrams.

A long clasp diagram with ``n`` chords is stored with its ``2n`` endpoints
compressed to ``1..2n`` and its heights compressed to ``1..n``.  A larger
height means the chord passes over.  Chords are kept sorted by left
endpoint, so the 1-based position of a chord in ``ClaspDiagram.chords`` is
its chord number.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, ParseError, ResourceError

__all__ = [
    "Chord",
    "ClaspDiagram",
    "EMPTY",
    "parse_diagram",
    "serialize_diagram",
    "read_corpus",
    "linked",
    "linking_matrix",
    "sign_matrix",
    "mirror",
    "is_descending",
    "induced_subdiagram",
    "canonical_key",
    "perfect_matchings",
    "enumerate_diagrams",
    "diagram_count",
    "random_diagram",
    "from_raw",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 6

_TOKEN = re.compile(r"^(\d+)-(\d+):(\d+):([+-])(\*?)$")


@dataclass(frozen=True)
class Chord:
    left: int
    right: int
    height: int
    sign: int
    special: bool = False

    def __post_init__(self):
        if self.left >= self.right:
            raise DomainError(f"chord endpoints must satisfy left < right, got {self.left}-{self.right}")
        if self.sign not in (1, -1):
            raise DomainError(f"chord sign must be +1 or -1, got {self.sign}")

    def token(self) -> str:
        s = "+" if self.sign > 0 else "-"
        if self.special:
            s += "*"
        return f"{self.left}-{self.right}:{self.height}:{s}"


@dataclass(frozen=True)
class ClaspDiagram:
    """An immutable long clasp diagram.

    The constructor sorts the chords by left endpoint and checks that the
    endpoints are exactly ``1..2n`` and the heights a permutation of ``1..n``.
    """

    chords: tuple[Chord, ...] = field(default=())

    def __post_init__(self):
        chords = tuple(sorted(self.chords, key=lambda c: c.left))
        object.__setattr__(self, "chords", chords)
        n = len(chords)
        ends = [p for c in chords for p in (c.left, c.right)]
        if len(set(ends)) != len(ends):
            dup = sorted(p for p in set(ends) if ends.count(p) > 1)
            raise DomainError(f"repeated endpoint(s) {dup}")
        if set(ends) != set(range(1, 2 * n + 1)):
            raise DomainError(f"endpoints must be exactly 1..{2 * n}")
        if sorted(c.height for c in chords) != list(range(1, n + 1)):
            raise DomainError(f"heights must be a permutation of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.chords)

    def __len__(self) -> int:
        return len(self.chords)

    def __iter__(self) -> Iterator[Chord]:
        return iter(self.chords)

    def chord(self, i: int) -> Chord:
        """Chord number ``i`` (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"chord index {i} out of range 1..{self.n}")
        return self.chords[i - 1]

    @cached_property
    def key(self) -> str:
        return serialize_diagram(self)

    @cached_property
    def height_order(self) -> tuple[int, ...]:
        """Chord numbers sorted from the lowest to the highest chord."""
        return tuple(sorted(range(1, self.n + 1), key=lambda i: self.chords[i - 1].height))

    @property
    def has_special(self) -> bool:
        return any(c.special for c in self.chords)

    def __str__(self) -> str:
        return self.key


EMPTY = ClaspDiagram(())


def from_raw(items: Iterable[tuple[float, float, float, int, bool]]) -> ClaspDiagram:
    """Build a diagram from chords given by arbitrary distinct positions and height keys.

    Each item is ``(a, b, height_key, sign, special)``; positions and height
    keys only matter through their relative order.
    """
    items = list(items)
    pos = sorted(p for a, b, *_ in items for p in (a, b))
    rank = {p: r for r, p in enumerate(pos, 1)}
    if len(rank) != len(pos):
        raise DomainError("raw endpoint positions must be distinct")
    hrank = {h: r for r, h in enumerate(sorted(it[2] for it in items), 1)}
    if len(hrank) != len(items):
        raise DomainError("raw height keys must be distinct")
    chords = []
    for a, b, h, s, sp in items:
        lo, hi = (a, b) if a < b else (b, a)
        chords.append(Chord(rank[lo], rank[hi], hrank[h], s, sp))
    return ClaspDiagram(tuple(chords))


def parse_diagram(text: str) -> ClaspDiagram:
    """Parse ``empty`` or whitespace-separated ``L-R:H:S`` tokens."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty input; use the keyword 'empty' for the diagram without chords")
    if tokens == ["empty"]:
        return EMPTY
    chords = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            raise ParseError(f"bad chord token {tok!r}")
        left, right, height = int(m[1]), int(m[2]), int(m[3])
        if left >= right:
            raise DomainError(f"chord {tok!r} must have L < R")
        chords.append(Chord(left, right, height, 1 if m[4] == "+" else -1, m[5] == "*"))
    return ClaspDiagram(tuple(chords))


def serialize_diagram(d: ClaspDiagram) -> str:
    if not d.chords:
        return "empty"
    return " ".join(c.token() for c in d.chords)


def read_corpus(lines: Iterable[str]) -> list[str]:
    """Non-empty, non-comment lines of a corpus file, stripped."""
    out = []
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _check_index(d: ClaspDiagram, i: int) -> None:
    if not 1 <= i <= d.n:
        raise IndexError(f"chord index {i} out of range 1..{d.n}")


def linked(d: ClaspDiagram, i: int, j: int) -> bool:
    """True iff the endpoints of chords ``i`` and ``j`` interleave."""
    _check_index(d, i)
    _check_index(d, j)
    if i == j:
        raise IndexError("linked() needs two distinct chords")
    a, b = d.chords[i - 1], d.chords[j - 1]
    return a.left < b.left < a.right < b.right or b.left < a.left < b.right < a.right


def linked_pairs(d: ClaspDiagram) -> list[tuple[int, int]]:
    """All linked pairs ``(i, j)`` with ``i < j``."""
    ch = d.chords
    out = []
    for i in range(len(ch)):
        ri = ch[i].right
        for j in range(i + 1, len(ch)):
            # chords are sorted by left endpoint, so l_i < l_j here
            if ch[j].left < ri < ch[j].right:
                out.append((i + 1, j + 1))
    return out


def linking_matrix(d: ClaspDiagram) -> np.ndarray:
    """The matrix L: ``l_ij = 1`` (i < j) or ``-1`` (i > j) when chord i passes over linked chord j."""
    n = d.n
    lm = np.zeros((n, n), dtype=np.int64)
    for i, j in linked_pairs(d):
        if d.chords[i - 1].height > d.chords[j - 1].height:
            lm[i - 1, j - 1] = 1
        else:
            lm[j - 1, i - 1] = -1
    return lm


def sign_matrix(d: ClaspDiagram) -> np.ndarray:
    """The diagonal matrix E of chord signs."""
    return np.diag(np.array([c.sign for c in d.chords], dtype=np.int64)).reshape(d.n, d.n)


def mirror(d: ClaspDiagram) -> ClaspDiagram:
    n = d.n
    return ClaspDiagram(tuple(
        Chord(c.left, c.right, n + 1 - c.height, -c.sign, c.special) for c in d.chords
    ))


def is_descending(d: ClaspDiagram) -> bool:
    n = d.n
    return all(c.height == n - k for k, c in enumerate(d.chords))


def induced_subdiagram(d: ClaspDiagram, subset: Iterable[int]) -> ClaspDiagram:
    """Restriction of ``d`` to the chords numbered in ``subset``, recompressed."""
    idx = sorted(set(subset))
    for i in idx:
        _check_index(d, i)
    if len(idx) == d.n:
        return d
    chosen = [d.chords[i - 1] for i in idx]
    return from_raw((c.left, c.right, c.height, c.sign, c.special) for c in chosen)


def canonical_key(d: ClaspDiagram) -> str:
    return d.key


def perfect_matchings(points: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    """All perfect matchings of ``points`` (pairs listed by smaller element)."""
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for k in range(len(rest)):
        partner = rest[k]
        for m in perfect_matchings(rest[:k] + rest[k + 1:]):
            yield [(first, partner)] + m


def diagram_count(k: int) -> int:
    """``(2k-1)!! * k! * 2^k``: number of long clasp diagrams with k chords."""
    double_fact = math.prod(range(1, 2 * k, 2))
    return double_fact * math.factorial(k) * 2 ** k


def enumerate_diagrams(k: int, cap: int | None = ENUMERATION_CAP) -> list[ClaspDiagram]:
    """Every long clasp diagram with exactly ``k`` ordinary chords.

    Pass ``cap=None`` to lift the size guard.
    """
    if k < 0:
        raise DomainError("chord count must be non-negative")
    if cap is not None and k > cap:
        raise ResourceError(f"enumerating {diagram_count(k)} diagrams with {k} chords exceeds cap {cap}")
    out = []
    for matching in perfect_matchings(list(range(1, 2 * k + 1))):
        for heights in itertools.permutations(range(1, k + 1)):
            for signs in itertools.product((1, -1), repeat=k):
                out.append(ClaspDiagram(tuple(
                    Chord(a, b, h, s) for (a, b), h, s in zip(matching, heights, signs)
                )))
    return out


def random_diagram(n: int, rng: np.random.Generator, special_prob: float = 0.0) -> ClaspDiagram:
    """Uniformly random diagram with ``n`` chords (random matching, heights and signs)."""
    pts = rng.permutation(2 * n) + 1
    heights = rng.permutation(n) + 1
    signs = rng.choice((1, -1), size=n)
    chords = []
    for k in range(n):
        a, b = int(pts[2 * k]), int(pts[2 * k + 1])
        sp = bool(special_prob and rng.random() < special_prob)
        chords.append(Chord(min(a, b), max(a, b), int(heights[k]), int(signs[k]), sp))
    return ClaspDiagram(tuple(chords))

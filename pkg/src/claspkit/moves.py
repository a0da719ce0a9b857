"""Moves on long clasp diagrams and a bounded equivalence search.

Move kinds:

``A``           swap the heights of two unlinked chords with consecutive heights
``B``           cyclic shift of all heights
``C1_delete``   erase an isolated chord (``C1_insert`` is the inverse)
``C2_delete``   erase a nested-adjacent pair with consecutive heights and
                opposite signs (``C2_insert`` is the inverse)
``C4_forward``  rewrite four chords by a loaded four-clasp rule
                (``C4_backward`` applies the rule right to left)

Gaps are numbered ``0..2n``: gap ``g`` lies just after endpoint ``g``.
Height slots are numbered ``0..n``: slot ``h`` puts new chords just above
height ``h``.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .core import Chord, ClaspDiagram, canonical_key, from_raw, linked, parse_diagram
from .errors import ConfigError, DomainError, ParseError

__all__ = [
    "MoveInstance",
    "SearchOutcome",
    "C4Rule",
    "MOVE_KINDS",
    "apply_A",
    "apply_B",
    "apply_C1",
    "c1_insert",
    "apply_C2",
    "c2_insert",
    "apply_C4",
    "apply_move",
    "inverse_move",
    "replay",
    "applicable_moves",
    "equiv_search",
    "parse_c4_rules",
    "load_c4_rules",
    "set_c4_rules",
    "get_c4_rules",
    "c4_matches",
    "C4Report",
    "embed_pattern",
    "validate_c4_rule",
]

MOVE_KINDS = (
    "A", "B", "C1_delete", "C1_insert", "C2_delete", "C2_insert", "C4_forward", "C4_backward",
)


@dataclass(frozen=True, order=True)
class MoveInstance:
    """One concrete move on a concrete diagram.

    Only the fields relevant to ``kind`` are set: ``k`` (height rank for A),
    ``direction`` (B), ``chords`` (chord numbers for deletions and C4),
    ``gap``/``slot``/``sign`` (insertions), ``gap2`` (C2 insertion: gap of
    the right ends), ``order`` (C2 insertion: +1 if the outer chord is
    higher) and ``rule`` (C4 rule index).
    """

    kind: str
    k: int | None = None
    direction: int | None = None
    chords: tuple[int, ...] = ()
    gap: int | None = None
    gap2: int | None = None
    slot: int | None = None
    sign: int | None = None
    order: int | None = None
    rule: int | None = None

    def __str__(self) -> str:
        parts = []
        for name in ("k", "direction", "chords", "gap", "gap2", "slot", "sign", "order", "rule"):
            v = getattr(self, name)
            if v is not None and v != ():
                parts.append(f"{name}={v}")
        return f"{self.kind}({', '.join(parts)})"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for name in ("k", "direction", "gap", "gap2", "slot", "sign", "order", "rule"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if self.chords:
            out["chords"] = list(self.chords)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "MoveInstance":
        fields = dict(obj)
        if "kind" not in fields or fields["kind"] not in MOVE_KINDS:
            raise ParseError(f"bad move record {obj!r}")
        fields["chords"] = tuple(fields.get("chords", ()))
        try:
            return cls(**fields)
        except TypeError as exc:
            raise ParseError(f"bad move record {obj!r}") from exc


@dataclass
class SearchOutcome:
    """Result of :func:`equiv_search`.

    ``status`` is ``"connected"`` (``path`` replays D1 into D2),
    ``"distinct"`` (``witness`` names the invariant, ``values`` its two
    values) or ``"unknown"`` (budget exhausted).
    """

    status: str
    path: list[MoveInstance] = field(default_factory=list)
    witness: str | None = None
    values: tuple | None = None
    nodes_expanded: int = 0
    max_chords_seen: int = 0

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "nodes_expanded": self.nodes_expanded,
            "max_chords_seen": self.max_chords_seen,
        }
        if self.status == "connected":
            out["path"] = [m.to_json() for m in self.path]
        if self.status == "distinct":
            out["witness"] = self.witness
            out["values"] = [str(v) for v in self.values]
        return out


# -- helpers -----------------------------------------------------------------

def _rebuild(chords: Iterable[tuple[float, float, float, int, bool]]) -> ClaspDiagram:
    return from_raw(chords)


def _raw(d: ClaspDiagram) -> list[tuple[float, float, float, int, bool]]:
    return [(c.left, c.right, c.height, c.sign, c.special) for c in d.chords]


def _at_height(d: ClaspDiagram, h: int) -> int:
    return d.height_order[h - 1]


# -- A and B -----------------------------------------------------------------

def apply_A(d: ClaspDiagram, k: int) -> ClaspDiagram:
    """Swap the chords at heights ``k`` and ``k+1``; they must not be linked."""
    if not 1 <= k < d.n:
        raise DomainError(f"height rank {k} out of range 1..{d.n - 1}")
    i, j = _at_height(d, k), _at_height(d, k + 1)
    if linked(d, i, j):
        raise DomainError(f"chords {i} and {j} at heights {k}, {k + 1} are linked")
    chords = list(d.chords)
    ci, cj = chords[i - 1], chords[j - 1]
    chords[i - 1] = Chord(ci.left, ci.right, k + 1, ci.sign, ci.special)
    chords[j - 1] = Chord(cj.left, cj.right, k, cj.sign, cj.special)
    return ClaspDiagram(tuple(chords))


def apply_B(d: ClaspDiagram, direction: int = 1) -> ClaspDiagram:
    """Cyclic height shift: ``+1`` sends ``h`` to ``(h mod n) + 1``, ``-1`` is its inverse."""
    if d.n == 0:
        raise DomainError("cannot shift the heights of the empty diagram")
    if direction not in (1, -1):
        raise DomainError(f"direction must be +1 or -1, got {direction}")
    n = d.n
    shift = (lambda h: h % n + 1) if direction == 1 else (lambda h: (h - 2) % n + 1)
    return ClaspDiagram(tuple(
        Chord(c.left, c.right, shift(c.height), c.sign, c.special) for c in d.chords
    ))


# -- C1 ----------------------------------------------------------------------

def _is_isolated(d: ClaspDiagram, i: int) -> bool:
    c = d.chord(i)
    return c.right == c.left + 1


def apply_C1(d: ClaspDiagram, target: int) -> ClaspDiagram:
    """Erase chord ``target``, which must have adjacent endpoints."""
    if not _is_isolated(d, target):
        raise DomainError(f"chord {target} is not isolated")
    return _rebuild(r for idx, r in enumerate(_raw(d), 1) if idx != target)


def _check_gap_slot(d: ClaspDiagram, gap: int, slot: int) -> None:
    if not 0 <= gap <= 2 * d.n:
        raise DomainError(f"gap {gap} out of range 0..{2 * d.n}")
    if not 0 <= slot <= d.n:
        raise DomainError(f"height slot {slot} out of range 0..{d.n}")


def c1_insert(d: ClaspDiagram, gap: int, slot: int, sign: int) -> ClaspDiagram:
    """Insert an isolated chord of the given sign into ``gap`` just above height ``slot``."""
    _check_gap_slot(d, gap, slot)
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    raw = _raw(d)
    raw.append((gap + 0.25, gap + 0.5, slot + 0.5, sign, False))
    return _rebuild(raw)


# -- C2 ----------------------------------------------------------------------

def _c2_pair_ok(d: ClaspDiagram, i: int, j: int) -> bool:
    a, b = d.chord(i), d.chord(j)
    if a.left > b.left:
        a, b = b, a
    return (
        b.left == a.left + 1
        and b.right == a.right - 1
        and abs(a.height - b.height) == 1
        and a.sign == -b.sign
    )


def apply_C2(d: ClaspDiagram, pair: Sequence[int]) -> ClaspDiagram:
    """Erase a nested-adjacent pair with consecutive heights and opposite signs."""
    i, j = pair
    if i == j:
        raise DomainError("C2 needs two distinct chords")
    d.chord(i), d.chord(j)
    if not _c2_pair_ok(d, i, j):
        raise DomainError(f"chords {i} and {j} are not a parallel pair with consecutive heights and opposite signs")
    return _rebuild(r for idx, r in enumerate(_raw(d), 1) if idx not in (i, j))


def c2_insert(d: ClaspDiagram, gap: int, slot: int, sign: int, order: int = 1,
              gap2: int | None = None) -> ClaspDiagram:
    """Insert a parallel pair at heights ``slot+1, slot+2``.

    The left ends go into ``gap`` and the right ends into ``gap2``
    (default: the same gap, giving an empty nest).  The outer chord gets
    ``sign``, the inner one ``-sign``; ``order=+1`` puts the outer chord on
    top.
    """
    gap2 = gap if gap2 is None else gap2
    _check_gap_slot(d, gap, slot)
    _check_gap_slot(d, gap2, slot)
    if gap2 < gap:
        raise DomainError("gap2 must not precede gap")
    if sign not in (1, -1) or order not in (1, -1):
        raise DomainError("sign and order must be +1 or -1")
    raw = _raw(d)
    hi, lo = slot + 0.6, slot + 0.3
    outer_h, inner_h = (hi, lo) if order == 1 else (lo, hi)
    raw.append((gap + 0.1, gap2 + 0.4, outer_h, sign, False))
    raw.append((gap + 0.2, gap2 + 0.3, inner_h, -sign, False))
    return _rebuild(raw)


# -- C4 ----------------------------------------------------------------------

@dataclass(frozen=True)
class C4Rule:
    """A four-chord rewrite ``lhs -> rhs`` applied to blocks of consecutive heights."""

    lhs: ClaspDiagram
    rhs: ClaspDiagram

    def __post_init__(self):
        if self.lhs.n != 4 or self.rhs.n != 4:
            raise DomainError("a four-clasp rule needs exactly 4 chords on each side")


_C4_RULES: list[C4Rule] = []


def parse_c4_rules(text: str) -> list[C4Rule]:
    """Parse ``lhs: <diagram>`` / ``rhs: <diagram>`` line pairs; ``#`` starts a comment."""
    rules = []
    pending = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tag, _, body = line.partition(":")
        tag = tag.strip().lower()
        if tag == "lhs":
            if pending is not None:
                raise ParseError(f"line {lineno}: lhs without a matching rhs before it")
            pending = parse_diagram(body.strip())
        elif tag == "rhs":
            if pending is None:
                raise ParseError(f"line {lineno}: rhs without lhs")
            rules.append(C4Rule(pending, parse_diagram(body.strip())))
            pending = None
        else:
            raise ParseError(f"line {lineno}: expected 'lhs:' or 'rhs:'")
    if pending is not None:
        raise ParseError("rule file ends with an unmatched lhs")
    return rules


def load_c4_rules(path: str | Path) -> list[C4Rule]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read C4 rule file {path}: {exc}") from exc
    return parse_c4_rules(text)


def set_c4_rules(rules: Sequence[C4Rule]) -> None:
    """Register the rules used when no explicit rule list is passed."""
    _C4_RULES[:] = list(rules)


def get_c4_rules() -> list[C4Rule]:
    return list(_C4_RULES)


def _resolve_rules(rules: Sequence[C4Rule] | None) -> list[C4Rule]:
    rules = list(rules) if rules is not None else list(_C4_RULES)
    if not rules:
        raise ConfigError("no C4 rule loaded; pass a rule file with --c4-rules")
    return rules


def c4_matches(d: ClaspDiagram, pattern: ClaspDiagram) -> list[tuple[int, ...]]:
    """Chord quadruples whose heights form a consecutive block and whose induced subdiagram is ``pattern``."""
    from .core import induced_subdiagram

    out = []
    order = d.height_order
    for base in range(d.n - 3):
        quad = tuple(sorted(order[base:base + 4]))
        if induced_subdiagram(d, quad).key == pattern.key:
            out.append(quad)
    return out


def _rewrite_block(d: ClaspDiagram, quad: Sequence[int], target: ClaspDiagram) -> ClaspDiagram:
    chosen = [d.chord(i) for i in quad]
    positions = sorted(p for c in chosen for p in (c.left, c.right))
    base = min(c.height for c in chosen) - 1
    new = [Chord(positions[t.left - 1], positions[t.right - 1], base + t.height, t.sign, t.special)
           for t in target.chords]
    rest = [c for idx, c in enumerate(d.chords, 1) if idx not in quad]
    return ClaspDiagram(tuple(rest + new))


def apply_C4(d: ClaspDiagram, inst: MoveInstance, rules: Sequence[C4Rule] | None = None) -> ClaspDiagram:
    rules = _resolve_rules(rules)
    if inst.rule is None or not 0 <= inst.rule < len(rules):
        raise DomainError(f"unknown C4 rule index {inst.rule}")
    rule = rules[inst.rule]
    src, dst = (rule.lhs, rule.rhs) if inst.kind == "C4_forward" else (rule.rhs, rule.lhs)
    quad = tuple(sorted(inst.chords))
    if len(quad) != 4 or quad not in c4_matches(d, src):
        raise DomainError(f"chords {inst.chords} do not match the C4 pattern {src}")
    return _rewrite_block(d, quad, dst)


@dataclass
class C4Report:
    """Outcome of checking a rule in random contexts."""

    contexts: int
    failures: int = 0
    counterexample: tuple[str, str] | None = None

    @property
    def accepted(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"contexts": self.contexts, "failures": self.failures, "accepted": self.accepted,
                "counterexample": list(self.counterexample) if self.counterexample else None}


def embed_pattern(context: ClaspDiagram, pattern: ClaspDiagram, positions: Sequence[int],
                  slot: int) -> ClaspDiagram:
    """Place ``pattern`` into ``context``.

    ``positions`` lists the 8 skeleton points (out of ``2*(m+4)``) taken by
    the pattern endpoints; the pattern heights sit as a block above context
    height ``slot``.
    """
    total = 2 * (context.n + pattern.n)
    pos = sorted(positions)
    other = [p for p in range(1, total + 1) if p not in set(pos)]
    k = pattern.n
    chords = [Chord(other[c.left - 1], other[c.right - 1], c.height + (k if c.height > slot else 0), c.sign)
              for c in context.chords]
    chords += [Chord(pos[c.left - 1], pos[c.right - 1], slot + c.height, c.sign) for c in pattern.chords]
    return ClaspDiagram(tuple(chords))


def validate_c4_rule(rule: C4Rule, contexts: int = 10_000, seed: int = 0, max_context: int = 3,
                     fail_fast: bool = True) -> C4Report:
    """Compare normalized Alexander polynomials of both rule sides in random contexts.

    Each context is a random diagram with up to ``max_context`` chords, a
    random interleaving of the pattern endpoints and a random height slot,
    shared by the two sides.  A rule is trusted only with zero failures.
    """
    import numpy as np

    from .alexander import alexander
    from .core import random_diagram

    rng = np.random.default_rng(seed)
    report = C4Report(contexts)
    for _ in range(contexts):
        m = int(rng.integers(0, max_context + 1))
        ctx = random_diagram(m, rng)
        positions = (rng.choice(2 * m + 8, size=8, replace=False) + 1).tolist()
        slot = int(rng.integers(0, m + 1))
        left = embed_pattern(ctx, rule.lhs, positions, slot)
        right = embed_pattern(ctx, rule.rhs, positions, slot)
        if alexander(left) != alexander(right):
            report.failures += 1
            if report.counterexample is None:
                report.counterexample = (left.key, right.key)
            if fail_fast:
                break
    return report


# -- dispatch ----------------------------------------------------------------

def apply_move(d: ClaspDiagram, inst: MoveInstance, rules: Sequence[C4Rule] | None = None) -> ClaspDiagram:
    kind = inst.kind
    if kind == "A":
        return apply_A(d, inst.k)
    if kind == "B":
        return apply_B(d, inst.direction)
    if kind == "C1_delete":
        return apply_C1(d, inst.chords[0])
    if kind == "C1_insert":
        return c1_insert(d, inst.gap, inst.slot, inst.sign)
    if kind == "C2_delete":
        return apply_C2(d, inst.chords)
    if kind == "C2_insert":
        return c2_insert(d, inst.gap, inst.slot, inst.sign, inst.order, inst.gap2)
    if kind in ("C4_forward", "C4_backward"):
        return apply_C4(d, inst, rules)
    raise DomainError(f"unknown move kind {kind!r}")


def inverse_move(d: ClaspDiagram, inst: MoveInstance, rules: Sequence[C4Rule] | None = None) -> MoveInstance:
    """The move that undoes ``inst`` on ``apply_move(d, inst)``."""
    kind = inst.kind
    if kind == "A":
        return inst
    if kind == "B":
        return MoveInstance("B", direction=-inst.direction)
    if kind == "C1_delete":
        c = d.chord(inst.chords[0])
        return MoveInstance("C1_insert", gap=c.left - 1, slot=c.height - 1, sign=c.sign)
    if kind == "C1_insert":
        return MoveInstance("C1_delete", chords=(_chord_number_after_insert(d, inst.gap, 1),))
    if kind == "C2_delete":
        a, b = sorted((d.chord(i) for i in inst.chords), key=lambda c: c.left)
        # endpoints strictly inside the inner chord stay between the two gaps
        return MoveInstance(
            "C2_insert", gap=a.left - 1, gap2=b.right - 3, slot=min(a.height, b.height) - 1,
            sign=a.sign, order=1 if a.height > b.height else -1,
        )
    if kind == "C2_insert":
        first = _chord_number_after_insert(d, inst.gap, 2)
        return MoveInstance("C2_delete", chords=(first, first + 1))
    if kind in ("C4_forward", "C4_backward"):
        # the rewritten chords occupy the same endpoint positions
        positions = {p for i in inst.chords for p in (d.chord(i).left, d.chord(i).right)}
        after = apply_move(d, inst, rules)
        quad = tuple(i for i, c in enumerate(after.chords, 1) if c.left in positions)
        back = "C4_backward" if kind == "C4_forward" else "C4_forward"
        return MoveInstance(back, chords=quad, rule=inst.rule)
    raise DomainError(f"unknown move kind {kind!r}")


def _chord_number_after_insert(d: ClaspDiagram, gap: int, count: int) -> int:
    # chords of d whose left endpoint is at or before the gap keep their numbers
    return sum(1 for c in d.chords if c.left <= gap) + 1


def replay(d: ClaspDiagram, path: Iterable[MoveInstance], rules: Sequence[C4Rule] | None = None) -> ClaspDiagram:
    for inst in path:
        d = apply_move(d, inst, rules)
    return d


# -- enumeration of legal moves ----------------------------------------------

def applicable_moves(
    d: ClaspDiagram,
    kinds: Iterable[str] = MOVE_KINDS,
    max_chords: int | None = None,
    rules: Sequence[C4Rule] | None = None,
) -> list[MoveInstance]:
    """Every legal instance of the requested kinds.

    Insertions are only listed while the result stays within ``max_chords``
    (default ``n + 2``).  C4 kinds are skipped when no rule is available.
    """
    kinds = set(kinds)
    unknown = kinds - set(MOVE_KINDS)
    if unknown:
        raise DomainError(f"unknown move kinds {sorted(unknown)}")
    n = d.n
    cap = n + 2 if max_chords is None else max_chords
    out: list[MoveInstance] = []
    if "A" in kinds:
        order = d.height_order
        for k in range(1, n):
            if not linked(d, order[k - 1], order[k]):
                out.append(MoveInstance("A", k=k))
    if "B" in kinds and n >= 1:
        out.append(MoveInstance("B", direction=1))
        if n > 2:
            out.append(MoveInstance("B", direction=-1))
    if "C1_delete" in kinds:
        for i in range(1, n + 1):
            if _is_isolated(d, i):
                out.append(MoveInstance("C1_delete", chords=(i,)))
    if "C1_insert" in kinds and n + 1 <= cap:
        for gap, slot, sign in itertools.product(range(2 * n + 1), range(n + 1), (1, -1)):
            out.append(MoveInstance("C1_insert", gap=gap, slot=slot, sign=sign))
    if "C2_delete" in kinds:
        for i in range(1, n + 1):
            c = d.chords[i - 1]
            # the inner partner, if any, starts right after c
            for j in range(i + 1, n + 1):
                if d.chords[j - 1].left == c.left + 1:
                    if _c2_pair_ok(d, i, j):
                        out.append(MoveInstance("C2_delete", chords=(i, j)))
                    break
    if "C2_insert" in kinds and n + 2 <= cap:
        gaps = [(g1, g2) for g1 in range(2 * n + 1) for g2 in range(g1, 2 * n + 1)]
        for (g1, g2), slot, sign, order in itertools.product(gaps, range(n + 1), (1, -1), (1, -1)):
            out.append(MoveInstance("C2_insert", gap=g1, gap2=g2, slot=slot, sign=sign, order=order))
    if kinds & {"C4_forward", "C4_backward"}:
        available = list(rules) if rules is not None else list(_C4_RULES)
        for idx, rule in enumerate(available):
            if "C4_forward" in kinds:
                for quad in c4_matches(d, rule.lhs):
                    out.append(MoveInstance("C4_forward", chords=quad, rule=idx))
            if "C4_backward" in kinds:
                for quad in c4_matches(d, rule.rhs):
                    out.append(MoveInstance("C4_backward", chords=quad, rule=idx))
    return out


# -- search ------------------------------------------------------------------

def _invariant_witness(d1: ClaspDiagram, d2: ClaspDiagram, use_vassiliev: bool):
    from .alexander import alexander

    a1, a2 = alexander(d1), alexander(d2)
    if a1 != a2:
        return "alexander", (a1, a2)
    if use_vassiliev:
        from .vassiliev import v2v3

        w1, w2 = v2v3(d1), v2v3(d2)
        if w1[0] != w2[0]:
            return "v2", (w1[0], w2[0])
        if w1[1] != w2[1]:
            return "v3", (w1[1], w2[1])
    return None


def equiv_search(
    d1: ClaspDiagram,
    d2: ClaspDiagram,
    budget: int = 20_000,
    max_chords: int | None = None,
    kinds: Iterable[str] | None = None,
    rules: Sequence[C4Rule] | None = None,
    use_vassiliev: bool = True,
) -> SearchOutcome:
    """Bidirectional best-first search for a move sequence from ``d1`` to ``d2``.

    Invariants are compared first; a difference ends the search with
    ``"distinct"``.  States are deduplicated by canonical key and expanded
    in order of (chord count, depth, key).  ``budget`` bounds the total
    number of expanded states over both directions.
    """
    if canonical_key(d1) == canonical_key(d2):
        return SearchOutcome("connected", [], nodes_expanded=0, max_chords_seen=max(d1.n, d2.n))
    witness = _invariant_witness(d1, d2, use_vassiliev)
    if witness is not None:
        return SearchOutcome("distinct", witness=witness[0], values=witness[1],
                             max_chords_seen=max(d1.n, d2.n))
    cap = max(d1.n, d2.n) + 2 if max_chords is None else max_chords
    if kinds is None:
        kinds = [k for k in MOVE_KINDS if not k.startswith("C4")]
        available = list(rules) if rules is not None else list(_C4_RULES)
        if available:
            kinds += ["C4_forward", "C4_backward"]
    kinds = list(kinds)

    # parent[side][key] = (previous key, move applied to previous) or None
    parents: list[dict[str, tuple[str, MoveInstance] | None]] = [{d1.key: None}, {d2.key: None}]
    states: list[dict[str, ClaspDiagram]] = [{d1.key: d1}, {d2.key: d2}]
    heaps = [[(d1.n, 0, d1.key)], [(d2.n, 0, d2.key)]]
    expanded = 0
    max_seen = max(d1.n, d2.n)

    def path_to(side: int, key: str) -> list[tuple[ClaspDiagram, MoveInstance]]:
        steps = []
        while parents[side][key] is not None:
            prev, move = parents[side][key]
            steps.append((states[side][prev], move))
            key = prev
        steps.reverse()
        return steps

    def assemble(meet: str) -> list[MoveInstance]:
        forward = [m for _, m in path_to(0, meet)]
        backward = []
        for prev, move in reversed(path_to(1, meet)):
            backward.append(inverse_move(prev, move, rules))
        return forward + backward

    while expanded < budget and (heaps[0] or heaps[1]):
        side = 0 if (heaps[0] and (not heaps[1] or len(states[0]) <= len(states[1]))) else 1
        n, depth, key = heapq.heappop(heaps[side])
        d = states[side][key]
        expanded += 1
        for inst in applicable_moves(d, kinds, max_chords=cap, rules=rules):
            nxt = apply_move(d, inst, rules)
            nk = nxt.key
            if nk in parents[side]:
                continue
            parents[side][nk] = (key, inst)
            states[side][nk] = nxt
            max_seen = max(max_seen, nxt.n)
            if nk in parents[1 - side]:
                return SearchOutcome("connected", assemble(nk), nodes_expanded=expanded,
                                     max_chords_seen=max_seen)
            heapq.heappush(heaps[side], (nxt.n, depth + 1, nk))
    return SearchOutcome("unknown", nodes_expanded=expanded, max_chords_seen=max_seen)

"""Finite-type invariants from clasp diagrams.

``I`` sends a diagram to the sum of its subdiagrams.  Truncating to at most
``n`` chords and dividing out the images of the move relations gives the
abelian group ``A_n``; the class of ``I_n(D)`` in ``A_n`` is a universal
order-``n`` invariant.  For ``n = 3`` the group is free of rank three and
the coordinates of ``I_3(D)`` are affine in ``(v2, v3)``.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .core import EMPTY, ClaspDiagram, enumerate_diagrams, from_raw, mirror, parse_diagram
from .errors import DomainError, ParseError, ResourceError
from .lattice import QuotientMap, SparseEchelon

log = logging.getLogger(__name__)

__all__ = [
    "FormalSum",
    "I_map",
    "I_inverse",
    "truncated_image",
    "pair",
    "pattern_eval",
    "expand_special",
    "AnConfig",
    "RelationSet",
    "an_relations",
    "PresentationResult",
    "an_presentation",
    "reduce_in_an",
    "V23Calibration",
    "calibrate_v23",
    "v2v3",
    "v2_from_conway",
    "v23_weights",
    "load_v23_weights",
    "dump_v23_weights",
    "FAMILIES",
    "braid_relation_pairs",
    "TREFOIL",
    "write_relation_cache",
    "read_relation_cache",
]

TREFOIL = parse_diagram("1-3:2:+ 2-4:1:+")


# -- formal sums -------------------------------------------------------------

class FormalSum:
    """Finite integer combination of clasp diagrams, keyed by canonical key."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[ClaspDiagram, int]] = ()):
        self._terms: dict[str, tuple[ClaspDiagram, int]] = {}
        for d, c in terms:
            self._add(d, c)

    def _add(self, d: ClaspDiagram, c: int) -> None:
        if not c:
            return
        k = d.key
        old = self._terms.get(k)
        total = c + (old[1] if old else 0)
        if total:
            self._terms[k] = (d, total)
        else:
            self._terms.pop(k, None)

    @classmethod
    def of(cls, d: ClaspDiagram, c: int = 1) -> FormalSum:
        return cls([(d, c)])

    def items(self) -> Iterator[tuple[ClaspDiagram, int]]:
        for k in sorted(self._terms):
            yield self._terms[k]

    def coeff(self, d: ClaspDiagram | str) -> int:
        k = d if isinstance(d, str) else d.key
        hit = self._terms.get(k)
        return hit[1] if hit else 0

    def to_dict(self) -> dict[str, int]:
        return {k: c for k, (_, c) in sorted(self._terms.items())}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: FormalSum) -> FormalSum:
        out = FormalSum(self.items())
        for d, c in other.items():
            out._add(d, c)
        return out

    def __neg__(self) -> FormalSum:
        return FormalSum((d, -c) for d, c in self.items())

    def __sub__(self, other: FormalSum) -> FormalSum:
        return self + (-other)

    def __mul__(self, k: int) -> FormalSum:
        return FormalSum((d, k * c) for d, c in self.items())

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"FormalSum({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " ".join(f"{c:+d}[{k}]" for k, c in self.to_dict().items())


def _as_sum(s: FormalSum | ClaspDiagram) -> FormalSum:
    return FormalSum.of(s) if isinstance(s, ClaspDiagram) else s


# -- subdiagram sums ---------------------------------------------------------

_KEY_TO_DIAGRAM: dict[str, ClaspDiagram] = {}


def _subdiagram(d: ClaspDiagram, subset: Sequence[int]) -> ClaspDiagram:
    if len(subset) == d.n:
        return d
    chosen = [d.chords[i] for i in subset]
    return from_raw((c.left, c.right, c.height, c.sign, c.special) for c in chosen)


@lru_cache(maxsize=200_000)
def _subdiagram_counts(d: ClaspDiagram, max_size: int) -> tuple[tuple[str, int], ...]:
    counts: Counter[str] = Counter()
    for size in range(min(max_size, d.n) + 1):
        for subset in itertools.combinations(range(d.n), size):
            sub = _subdiagram(d, subset)
            k = sub.key
            counts[k] += 1
            _KEY_TO_DIAGRAM.setdefault(k, sub)
    return tuple(sorted(counts.items()))


def truncated_image(d: ClaspDiagram, n: int) -> dict[str, int]:
    """Coefficients of ``I(d)`` on diagrams with at most ``n`` chords."""
    return dict(_subdiagram_counts(d, n))


def I_map(s: FormalSum | ClaspDiagram, max_chords: int | None = None) -> FormalSum:
    """Linear extension of ``D -> sum of all subdiagrams of D`` (optionally truncated)."""
    out = FormalSum()
    for d, c in _as_sum(s).items():
        for k, m in _subdiagram_counts(d, d.n if max_chords is None else max_chords):
            out._add(_KEY_TO_DIAGRAM[k], c * m)
    return out


def I_inverse(s: FormalSum | ClaspDiagram) -> FormalSum:
    """Linear extension of ``D -> sum over subdiagrams D' of (-1)^(|D|-|D'|) D'``."""
    out = FormalSum()
    for d, c in _as_sum(s).items():
        for size in range(d.n + 1):
            sign = -1 if (d.n - size) % 2 else 1
            for subset in itertools.combinations(range(d.n), size):
                out._add(_subdiagram(d, subset), sign * c)
    return out


def pair(a: ClaspDiagram, b: ClaspDiagram) -> int:
    """Number of chord subsets of ``b`` whose induced subdiagram is ``a``."""
    if a.n > b.n:
        return 0
    if a.n == 0:
        return 1
    plus = sum(1 for c in a.chords if c.sign > 0)
    target = a.key
    count = 0
    for subset in itertools.combinations(range(b.n), a.n):
        if sum(1 for i in subset if b.chords[i].sign > 0) != plus:
            continue
        if _subdiagram(b, subset).key == target:
            count += 1
    return count


def pattern_eval(weights: Iterable[tuple[ClaspDiagram, int]], b: ClaspDiagram) -> int:
    """``sum c * pair(A, b)`` over the weight list."""
    weights = list(weights)
    if not weights:
        return 0
    top = max(a.n for a, _ in weights)
    image = truncated_image(b, top)
    return sum(c * image.get(a.key, 0) for a, c in weights)


def expand_special(d: ClaspDiagram) -> FormalSum:
    """Replace each special chord of sign ``e`` by ``e*(ordinary chord) - e*(no chord)``."""
    special = [i for i, c in enumerate(d.chords) if c.special]
    plain = [(c.left, c.right, c.height, c.sign, False) for c in d.chords]
    out = FormalSum()
    for keep in itertools.product((True, False), repeat=len(special)):
        coeff = 1
        dropped = set()
        for i, kept in zip(special, keep):
            e = d.chords[i].sign
            coeff *= e if kept else -e
            if not kept:
                dropped.add(i)
        out._add(from_raw(r for idx, r in enumerate(plain) if idx not in dropped), coeff)
    return out


# -- relations of A_n ----------------------------------------------------------

FAMILIES = ("R-A", "R-B", "R-C1", "R-C2", "R-braid")


@dataclass(frozen=True)
class AnConfig:
    """Bounds for the relation instances that present ``A_n``.

    ``move_chords`` bounds the diagrams carrying A, B, C1 and C2 instances
    (default ``n + 1``).  Braid-derived pairs come from Margalit-McCammond
    relations and short-circuit moves on strands ``<= braid_max_strand``,
    wrapped in contexts of at most ``braid_context`` letters.
    """

    move_chords: int | None = None
    braid_max_strand: int = 7
    braid_context: int = 1
    families: tuple[str, ...] = FAMILIES

    def escalate(self) -> AnConfig:
        """The next larger configuration: two more strands for braid-derived pairs."""
        return AnConfig(self.move_chords, self.braid_max_strand + 2, self.braid_context, self.families)

    def digest(self, n: int) -> str:
        mc = n + 1 if self.move_chords is None else self.move_chords
        fam = "+".join(f.replace("R-", "") for f in self.families)
        return f"n{n}-m{mc}-s{self.braid_max_strand}-c{self.braid_context}-{fam}"


@dataclass
class RelationSet:
    """Sparse relation rows over ``generators`` (indices into that list)."""

    order: int
    generators: list[ClaspDiagram]
    rows: list[dict[int, int]]
    provenance: dict[str, int] = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.generators)


def _generators(n: int) -> list[ClaspDiagram]:
    return [d for k in range(n + 1) for d in enumerate_diagrams(k)]


def _difference_row(d: ClaspDiagram, e: ClaspDiagram, n: int, index: Mapping[str, int]) -> dict[int, int]:
    row: dict[int, int] = {}
    for k, v in _subdiagram_counts(d, n):
        row[index[k]] = row.get(index[k], 0) + v
    for k, v in _subdiagram_counts(e, n):
        row[index[k]] = row.get(index[k], 0) - v
    return {c: v for c, v in row.items() if v}


def _move_pairs(n: int, move_chords: int, families: Sequence[str]) -> Iterator[tuple[str, ClaspDiagram, ClaspDiagram]]:
    from .moves import applicable_moves, apply_move

    kinds = {"R-A": "A", "R-B": "B", "R-C1": "C1_delete"}
    wanted = [kinds[f] for f in families if f in kinds]
    fam_of = {v: k for k, v in kinds.items()}
    for m in range(move_chords + 1):
        for d in enumerate_diagrams(m, cap=None):
            for inst in applicable_moves(d, wanted):
                yield fam_of[inst.kind], d, apply_move(d, inst)
    if "R-C2" in families:
        # every C2 pair on a diagram with <= move_chords chords arises by insertion
        for m in range(move_chords - 1):
            for e in enumerate_diagrams(m, cap=None):
                for inst in applicable_moves(e, ["C2_insert"], max_chords=m + 2):
                    yield "R-C2", apply_move(e, inst), e


def _inv(word: list) -> list:
    return [g.inverse() for g in reversed(word)]


def braid_relation_pairs(max_strand: int) -> list[tuple[list, list]]:
    """Word pairs ``(L, R)`` with ``L = R`` in the pure braid group, from the MM relations.

    Each relation also contributes its inverse form.
    """
    from .braid import A

    out = []
    strands = range(1, max_strand + 1)
    for i, r, j, s in itertools.combinations(strands, 4):
        for e1, e2 in itertools.product((1, -1), repeat=2):
            # MM1, disjoint and nested
            for x, y in (([A(i, r, e1)], [A(j, s, e2)]), ([A(i, s, e1)], [A(r, j, e2)])):
                out.append((x + y, y + x))
        # MM3 for i < r < j < s
        for e in (1, -1):
            x = [A(i, j, e)]
            y = [A(i, r), A(r, s), A(i, r, -1)]
            out.append((x + y, y + x))
            out.append((x + _inv(y), _inv(y) + x))
    for i, r, s in itertools.combinations(strands, 3):
        a = [A(i, r), A(r, s), A(i, s)]
        b = [A(r, s), A(i, s), A(i, r)]
        c = [A(i, s), A(i, r), A(r, s)]
        for p, q in ((a, b), (b, c)):
            out.append((p, q))
            out.append((_inv(p), _inv(q)))
    return out


def _contexts(max_strand: int, length: int) -> list[tuple[list, list]]:
    from .braid import A

    letters = [A(i, j, e) for i, j in itertools.combinations(range(1, max_strand + 1), 2) for e in (1, -1)]
    out = [([], [])]
    for total in range(1, length + 1):
        for left in range(total + 1):
            for lw in itertools.product(letters, repeat=left):
                for rw in itertools.product(letters, repeat=total - left):
                    out.append((list(lw), list(rw)))
    return out


def _short_circuit_pairs(max_strand: int, context: int) -> Iterator[tuple[list, list]]:
    from .braid import CLOSURE_SIDES, _form_letters

    words = [u + v for u, v in _contexts(max_strand, context) if not v]
    for w in words:
        for form, side in CLOSURE_SIDES.items():
            for r in range(1, max_strand + 1):
                svals = [None] if form.startswith("1") else range(1, max_strand // 2 + 1)
                for s in svals:
                    for eps in (1, -1):
                        try:
                            factor = _form_letters(form, r, s, eps)
                        except DomainError:
                            continue
                        if max(g.j for g in factor) > max_strand:
                            continue
                        yield w, (factor + w if side == "prefix" else w + factor)


def _braid_pairs(config: AnConfig) -> Iterator[tuple[ClaspDiagram, ClaspDiagram]]:
    from .braid import _word, word_to_clasp

    rels = braid_relation_pairs(config.braid_max_strand)
    for u, v in _contexts(config.braid_max_strand, config.braid_context):
        for p, q in rels:
            yield word_to_clasp(_word(u + p + v)), word_to_clasp(_word(u + q + v))
    for w1, w2 in _short_circuit_pairs(config.braid_max_strand, config.braid_context):
        yield word_to_clasp(_word(w1)), word_to_clasp(_word(w2))


def an_relations(n: int, config: AnConfig | None = None) -> RelationSet:
    """Truncated ``I``-images of relation instances, deduplicated, over all diagrams with ``<= n`` chords."""
    if n < 0:
        raise DomainError("order must be non-negative")
    config = config or AnConfig()
    move_chords = n + 1 if config.move_chords is None else config.move_chords
    if move_chords > 5:
        raise ResourceError(f"move instances on diagrams with {move_chords} chords exceed the enumeration cap")
    gens = _generators(n)
    index = {d.key: i for i, d in enumerate(gens)}
    rows: list[dict[int, int]] = []
    seen: set[frozenset] = set()
    prov: Counter[str] = Counter()

    def add(family: str, d: ClaspDiagram, e: ClaspDiagram) -> None:
        prov[family] += 1
        row = _difference_row(d, e, n, index)
        if not row:
            return
        # a row and its negative span the same relation
        lead = min(row)
        if row[lead] < 0:
            row = {c: -v for c, v in row.items()}
        key = frozenset(row.items())
        if key not in seen:
            seen.add(key)
            rows.append(row)

    for fam, d, e in _move_pairs(n, move_chords, config.families):
        add(fam, d, e)
    if "R-braid" in config.families:
        for d, e in _braid_pairs(config):
            add("R-braid", d, e)
    log.info("A_%d relations: %d distinct rows from %s", n, len(rows), dict(prov))
    return RelationSet(n, gens, rows, dict(prov))


# -- relation cache ------------------------------------------------------------

def write_relation_cache(rel: RelationSet, path: str | Path) -> None:
    lines = [f"an-cache v1 order={rel.order} gens={len(rel.generators)} rows={len(rel.rows)}"]
    lines += [d.key for d in rel.generators]
    for r, row in enumerate(rel.rows):
        for c in sorted(row):
            lines.append(f"{r} {c} {row[c]}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_relation_cache(path: str | Path) -> RelationSet:
    text = Path(path).read_text().splitlines()
    if not text:
        raise ParseError(f"{path}: empty cache file")
    head = text[0].split()
    if len(head) != 5 or head[:2] != ["an-cache", "v1"]:
        raise ParseError(f"{path}: bad cache header {text[0]!r}")
    try:
        fields = dict(h.split("=", 1) for h in head[2:])
        order, ngens, nrows = int(fields["order"]), int(fields["gens"]), int(fields["rows"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"{path}: bad cache header {text[0]!r}") from exc
    if len(text) < 1 + ngens:
        raise ParseError(f"{path}: truncated generator list")
    gens = [parse_diagram(line) for line in text[1:1 + ngens]]
    rows: list[dict[int, int]] = [{} for _ in range(nrows)]
    for line in text[1 + ngens:]:
        if not line.strip():
            continue
        try:
            r, c, v = map(int, line.split())
            rows[r][c] = v
        except (ValueError, IndexError) as exc:
            raise ParseError(f"{path}: bad triplet {line!r}") from exc
    return RelationSet(order, gens, rows, {})


# -- presentation of A_n ---------------------------------------------------------

@dataclass
class PresentationResult:
    """``A_n`` as ``Z^generators / relations`` with its Smith-normal-form summary."""

    order: int
    generators: list[ClaspDiagram]
    relation_shape: tuple[int, int]
    relation_rank: int
    free_rank: int
    torsion: list[int]
    unit_factors: int
    basis_representatives: list[str]
    provenance: dict[str, int]
    quotient: QuotientMap = field(repr=False)
    index: dict[str, int] = field(repr=False, default_factory=dict)

    @property
    def complete(self) -> bool:
        """False when torsion shows up, which at these orders means the bounds were too small."""
        return not self.torsion

    def summary(self) -> dict:
        return {
            "order": self.order,
            "generators": len(self.generators),
            "relations": list(self.relation_shape),
            "relation_rank": self.relation_rank,
            "free_rank": self.free_rank,
            "torsion": self.torsion,
            "unit_factors": self.unit_factors,
            "basis_representatives": self.basis_representatives,
            "provenance": self.provenance,
            "status": "ok" if self.complete else "presentation incomplete at bounds",
        }


def _elimination_column(i: int, gens: Sequence[ClaspDiagram]) -> int:
    # larger diagrams get smaller column numbers and are eliminated first
    return len(gens) - 1 - i


def an_presentation(
    n: int,
    config: AnConfig | None = None,
    cache_dir: str | Path | None = None,
    relations: RelationSet | None = None,
) -> PresentationResult:
    config = config or AnConfig()
    rel = relations
    cache_file = Path(cache_dir) / f"an-{config.digest(n)}.txt" if cache_dir is not None else None
    if rel is None and cache_file is not None and cache_file.exists():
        rel = read_relation_cache(cache_file)
        if rel.order != n:
            raise ParseError(f"{cache_file}: cache is for order {rel.order}, not {n}")
    if rel is None:
        rel = an_relations(n, config)
        if cache_file is not None:
            cache_file.parent.mkdir(parents=True, exist_ok=True)
            write_relation_cache(rel, cache_file)
    gens = rel.generators
    ech = SparseEchelon(len(gens))
    for row in rel.rows:
        ech.add({_elimination_column(c, gens): v for c, v in row.items()})
    q = QuotientMap.from_echelon(ech)
    free_cols = q.residual_cols[len(q.invariant_factors):]
    reps = []
    identity_tail = all(
        q.Q[i][j] == int(i == j) for i in range(len(q.residual_cols)) for j in range(len(q.residual_cols))
    )
    if identity_tail:
        reps = [gens[_elimination_column(c, gens)].key for c in free_cols]
    return PresentationResult(
        order=n,
        generators=gens,
        relation_shape=rel.shape,
        relation_rank=ech.rank,
        free_rank=q.free_rank,
        torsion=q.torsion_orders,
        unit_factors=sum(1 for d in q.invariant_factors if d == 1) + sum(
            1 for c, r in ech.pivots.items() if r[c] == 1),
        basis_representatives=reps,
        provenance=dict(rel.provenance),
        quotient=q,
        index={d.key: i for i, d in enumerate(gens)},
    )


def reduce_in_an(d: ClaspDiagram | FormalSum, n: int, P: PresentationResult) -> list[int]:
    """Free coordinates of the class of the truncated ``I(d)`` in ``A_n``."""
    if P.order != n:
        raise DomainError(f"presentation is for order {P.order}, not {n}")
    row: dict[int, int] = {}
    for diag, c in _as_sum(d).items():
        if diag.has_special:
            raise DomainError("expand special chords before reducing")
        for k, m in _subdiagram_counts(diag, n):
            col = _elimination_column(P.index[k], P.generators)
            row[col] = row.get(col, 0) + c * m
    free, torsion = P.quotient.apply(row)
    if any(torsion):
        raise DomainError("class has a torsion component; the presentation is incomplete at these bounds")
    return free


# -- v2 and v3 -------------------------------------------------------------------

@dataclass
class V23Calibration:
    """Linear map from ``A_3`` coordinates to ``(v2, v3, 1)``."""

    matrix: list[list[Fraction]]
    anchors: dict[str, list[int]]

    def apply(self, coords: Sequence[int]) -> tuple[int, int]:
        out = [sum(m * c for m, c in zip(row, coords)) for row in self.matrix]
        if out[2] != 1 or any(x.denominator != 1 for x in out):
            raise DomainError(f"coordinates {list(coords)} are not the image of a knot: got {out}")
        return int(out[0]), int(out[1])


def _solve3(cols: list[list[int]], targets: list[list[int]]) -> list[list[Fraction]]:
    """``M`` with ``M @ cols[k] = targets[k]`` for three column vectors."""
    # invert the 3x3 matrix whose columns are cols by Gauss-Jordan over Fractions
    a = [[Fraction(cols[j][i]) for j in range(3)] + [Fraction(int(i == k)) for k in range(3)] for i in range(3)]
    for c in range(3):
        p = next((r for r in range(c, 3) if a[r][c] != 0), None)
        if p is None:
            raise DomainError("calibration anchors are affinely dependent")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(3):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    inv = [row[3:] for row in a]
    T = [[Fraction(targets[k][i]) for k in range(3)] for i in range(3)]
    return [[sum(T[i][k] * inv[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def calibrate_v23(P: PresentationResult) -> V23Calibration:
    """Fix the affine map by ``empty -> (0,0)``, trefoil ``-> (1,1)``, its mirror ``-> (1,-1)``."""
    if P.order != 3 or P.free_rank != 3:
        raise DomainError(f"calibration needs A_3 of free rank 3, got order {P.order} rank {P.free_rank}")
    anchors = {
        "empty": reduce_in_an(EMPTY, 3, P),
        TREFOIL.key: reduce_in_an(TREFOIL, 3, P),
        mirror(TREFOIL).key: reduce_in_an(mirror(TREFOIL), 3, P),
    }
    cols = list(anchors.values())
    matrix = _solve3(cols, [[0, 0, 1], [1, 1, 1], [1, -1, 1]])
    return V23Calibration(matrix, anchors)


def v23_weights(P: PresentationResult, cal: V23Calibration | None = None) -> list[tuple[str, int, int]]:
    """Per-diagram weights ``(key, w2, w3)`` with ``v_k(D) = sum w_k(A) * pair(A, D)``.

    They come from pushing every generator through the quotient map and the
    calibration, so they are one concrete representative of each functional.
    """
    cal = cal or calibrate_v23(P)
    out = []
    for i, g in enumerate(P.generators):
        free, torsion = P.quotient.apply({_elimination_column(i, P.generators): 1})
        w = [sum(m * c for m, c in zip(row, free)) for row in cal.matrix[:2]]
        if any(x.denominator != 1 for x in w):
            raise DomainError(f"non-integral weight for {g.key}: {w}")
        if any(w):
            out.append((g.key, int(w[0]), int(w[1])))
    return out


_WEIGHTS_RESOURCE = "v23_weights.json"
_weights_cache: list[tuple[ClaspDiagram, int, int]] | None = None


def load_v23_weights() -> list[tuple[ClaspDiagram, int, int]]:
    """The shipped weights computed from the default ``A_3`` presentation."""
    global _weights_cache
    if _weights_cache is None:
        raw = json.loads(resources.files("claspkit").joinpath("data").joinpath(_WEIGHTS_RESOURCE).read_text())
        _weights_cache = [(parse_diagram(k), w2, w3) for k, w2, w3 in raw["weights"]]
    return _weights_cache


def dump_v23_weights(weights: Sequence[tuple[str, int, int]], config: AnConfig) -> str:
    return json.dumps({"order": 3, "config": config.digest(3), "weights": [list(w) for w in weights]}, indent=0)


def v2v3(d: ClaspDiagram, P: PresentationResult | None = None,
         calibration: V23Calibration | None = None) -> tuple[int, int]:
    """``(v2, v3)`` of the knot of ``d``.

    With a presentation the class of ``I_3(d)`` is reduced and calibrated;
    without one the shipped subdiagram weights are used.
    """
    if d.has_special:
        raise DomainError("v2v3 expects an ordinary diagram")
    if P is not None:
        cal = calibration or calibrate_v23(P)
        return cal.apply(reduce_in_an(d, 3, P))
    image = truncated_image(d, 3)
    v2 = v3 = 0
    for a, w2, w3 in load_v23_weights():
        m = image.get(a.key, 0)
        v2 += w2 * m
        v3 += w3 * m
    return v2, v3


def v2_from_conway(d: ClaspDiagram) -> int:
    """The ``z^2`` coefficient of the Conway polynomial."""
    from .alexander import conway

    return conway(d).coeff(2)

"""Integer lattices: sparse row echelon reduction and Smith normal form.

Rows are sparse ``{column: value}`` dicts over a fixed column order.  The
echelon form is built incrementally with extended-gcd row combinations, so
every pivot is positive and the row span never changes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = ["SparseEchelon", "smith_normal_form", "QuotientMap"]

Row = dict[int, int]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``g = gcd(a, b) = a*x + b*y`` and ``g >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _axpy(y: Row, a: int, x: Row) -> None:
    """``y += a * x`` in place, dropping zeros."""
    for c, v in x.items():
        nv = y.get(c, 0) + a * v
        if nv:
            y[c] = nv
        else:
            y.pop(c, None)


class SparseEchelon:
    """Incremental row echelon form over the integers.

    Columns are integers; a smaller column index is eliminated first, so the
    caller controls which generators survive by choosing the numbering.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, Row] = {}
        self.inserted = 0

    def add(self, row: Row) -> bool:
        """Insert a row; return True if it enlarged the span."""
        self.inserted += 1
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = min(row)
            a = row[lead]
            piv = self.pivots.get(lead)
            if piv is None:
                if a < 0:
                    row = {c: -v for c, v in row.items()}
                self.pivots[lead] = row
                return True
            p = piv[lead]
            if a % p == 0:
                _axpy(row, -(a // p), piv)
                continue
            g, x, y = _xgcd(p, a)
            # new pivot x*piv + y*row has leading entry g;
            # (a/g)*piv - (p/g)*row has leading entry 0
            new_piv = {c: x * v for c, v in piv.items()}
            _axpy(new_piv, y, row)
            rest = {c: (a // g) * v for c, v in piv.items()}
            _axpy(rest, -(p // g), row)
            self.pivots[lead] = new_piv
            row = rest
        return False

    def extend(self, rows: Iterable[Row]) -> None:
        for r in rows:
            self.add(r)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Diagonal ``d`` and unimodular ``P``, ``Q`` with ``P m Q = diag(d)``.

    ``d`` lists the nonzero invariant factors in divisibility order.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    P = [[int(i == j) for j in range(rows)] for i in range(rows)]
    Q = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in Q:
            r[i], r[j] = r[j], r[i]

    def comb_rows(i, j, x, y, u, v):
        # row_i, row_j <- x*row_i + y*row_j, u*row_i + v*row_j
        for mat in (a, P):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * p + y * q for p, q in zip(ri, rj)]
            mat[j] = [u * p + v * q for p, q in zip(ri, rj)]

    def comb_cols(i, j, x, y, u, v):
        for mat in (a, Q):
            for r in mat:
                ci, cj = r[i], r[j]
                r[i] = x * ci + y * cj
                r[j] = u * ci + v * cj

    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    p, q = a[t][t], a[i][t]
                    if q % p == 0:
                        # plain subtraction keeps row t, so the loop terminates
                        comb_rows(t, i, 1, 0, -(q // p), 1)
                    else:
                        g, x, y = _xgcd(p, q)
                        comb_rows(t, i, x, y, -q // g, p // g)
                    changed = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    p, q = a[t][t], a[t][j]
                    if q % p == 0:
                        comb_cols(t, j, 1, 0, -(q // p), 1)
                    else:
                        g, x, y = _xgcd(p, q)
                        comb_cols(t, j, x, y, -q // g, p // g)
                    changed = True
            if changed:
                continue
            piv = a[t][t]
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % piv), None)
            if bad is None:
                break
            # fold the offending row into row t to restore divisibility
            comb_rows(t, bad[0], 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            P[t] = [-v for v in P[t]]
        diag.append(a[t][t])
        t += 1
    return diag, P, Q


@dataclass
class QuotientMap:
    """Coordinates on ``Z^m / L`` for a lattice ``L`` of row vectors.

    ``apply`` sends a row vector to ``(free, torsion)`` where ``free`` has
    one entry per free summand and ``torsion[k]`` is taken modulo
    ``torsion_orders[k]``.
    """

    ncols: int
    eliminated: dict[int, Row] = field(default_factory=dict)
    residual_cols: list[int] = field(default_factory=list)
    Q: list[list[int]] = field(default_factory=list)
    invariant_factors: list[int] = field(default_factory=list)

    @property
    def torsion_orders(self) -> list[int]:
        return [d for d in self.invariant_factors if d > 1]

    @property
    def free_rank(self) -> int:
        return len(self.residual_cols) - len(self.invariant_factors)

    @classmethod
    def from_echelon(cls, ech: SparseEchelon) -> QuotientMap:
        units = {c: r for c, r in ech.pivots.items() if r[c] == 1}
        others = {c: r for c, r in ech.pivots.items() if r[c] != 1}
        # express every unit-pivot column through columns without unit pivots
        eliminated: dict[int, Row] = {}
        for c in sorted(units, reverse=True):
            expr: Row = {}
            for col, v in units[c].items():
                if col == c:
                    continue
                sub = eliminated.get(col)
                if sub is None:
                    expr[col] = expr.get(col, 0) - v
                else:
                    _axpy(expr, -v, sub)
            eliminated[c] = {k: v for k, v in expr.items() if v}
        residual_cols = sorted(set(range(ech.ncols)) - set(units))
        index = {c: k for k, c in enumerate(residual_cols)}
        residual_rows = []
        for c, r in others.items():
            vec = [0] * len(residual_cols)
            for col, v in cls._substitute(r, eliminated).items():
                vec[index[col]] += v
            residual_rows.append(vec)
        if residual_rows:
            diag, _, Q = smith_normal_form(residual_rows)
        else:
            diag, Q = [], [[int(i == j) for j in range(len(residual_cols))] for i in range(len(residual_cols))]
        return cls(ech.ncols, eliminated, residual_cols, Q, diag)

    @staticmethod
    def _substitute(row: Row, eliminated: dict[int, Row]) -> Row:
        out: Row = {}
        for col, v in row.items():
            sub = eliminated.get(col)
            if sub is None:
                out[col] = out.get(col, 0) + v
            else:
                _axpy(out, v, sub)
        return {k: v for k, v in out.items() if v}

    def apply(self, row: Row) -> tuple[list[int], list[int]]:
        reduced = self._substitute(row, self.eliminated)
        vec = [0] * len(self.residual_cols)
        pos = {c: k for k, c in enumerate(self.residual_cols)}
        for col, v in reduced.items():
            vec[pos[col]] += v
        y = [sum(vec[i] * self.Q[i][j] for i in range(len(vec)) if vec[i]) for j in range(len(vec))]
        r = len(self.invariant_factors)
        torsion = [y[k] % d for k, d in enumerate(self.invariant_factors) if d > 1]
        return y[r:], torsion

    def free_basis_columns(self) -> list[list[tuple[int, int]]]:
        """For each free coordinate, the residual columns (with multiplicity) of its dual basis vector."""
        r = len(self.invariant_factors)
        out = []
        for j in range(r, len(self.residual_cols)):
            out.append([(self.residual_cols[i], self.Q[i][j]) for i in range(len(self.residual_cols))
                        if self.Q[i][j]])
        return out

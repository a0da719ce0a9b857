"""Alexander and Conway polynomials of clasp diagrams.

The Alexander polynomial is ``det S_D`` where ``S_D`` is built from the
linked pairs and signs of the diagram.  ``alexander_via_seifert`` recomputes
it from the ``2n x 2n`` Seifert matrix of the natural genus-``n`` surface and
serves as an independent check.
"""

from __future__ import annotations

import numpy as np

from .core import ClaspDiagram, linked_pairs, linking_matrix, sign_matrix
from .errors import DomainError, OracleMismatch
from .laurent import LaurentPoly, det, det_modular

__all__ = [
    "s_matrix",
    "alexander_raw",
    "normalize_alexander",
    "alexander",
    "seifert_matrix",
    "alexander_via_seifert",
    "conway",
    "knot_determinant",
    "seifert_genus_bound",
    "equal_up_to_unit",
    "EXACT_LIMIT",
]

# above this many chords det S_D is computed by modular evaluation
EXACT_LIMIT = 24

_T = LaurentPoly.monomial(1)
_TINV = LaurentPoly.monomial(-1)
_ONE = LaurentPoly.const(1)
_ZERO = LaurentPoly()


def s_matrix(d: ClaspDiagram) -> list[list[LaurentPoly]]:
    """The Laurent matrix ``S_D``."""
    n = d.n
    s = [[_ZERO] * n for _ in range(n)]
    for i, c in enumerate(d.chords):
        s[i][i] = LaurentPoly.const(-c.sign)
    for i, j in linked_pairs(d):
        over, under = (i, j) if d.chords[i - 1].height > d.chords[j - 1].height else (j, i)
        if over < under:
            s[over - 1][under - 1] = _T - 1
            s[under - 1][over - 1] = _TINV - 1
        else:
            s[over - 1][under - 1] = 1 - _T
            s[under - 1][over - 1] = 1 - _TINV
    return s


def alexander_raw(d: ClaspDiagram, certify: bool = False) -> LaurentPoly:
    """``det S_D``; as a knot invariant it is defined only up to a unit ``±t^k``.

    ``S_D(t^-1)`` is the transpose of ``S_D(t)``, so the determinant is
    already symmetric.  Large diagrams use the modular route, which exploits
    this; ``certify`` makes that route provably exact.
    """
    m = s_matrix(d)
    if d.n <= EXACT_LIMIT:
        return det(m)
    return det_modular(m, symmetric=True, certify=certify)


def normalize_alexander(p: LaurentPoly) -> LaurentPoly:
    """The representative of ``±t^k p`` that is symmetric in ``t <-> t^-1`` and equals 1 at ``t = 1``."""
    if p.is_zero():
        raise DomainError("the zero polynomial has no normalised form")
    lo, hi = p.min_exp, p.max_exp
    if (lo + hi) % 2:
        raise DomainError(f"{p} has no symmetric unit multiple")
    q = p.shift(-(lo + hi) // 2)
    if q != q.invert_variable():
        raise DomainError(f"{p} has no symmetric unit multiple")
    at_one = q(1)
    if at_one not in (1, -1):
        raise DomainError(f"{p} evaluates to {at_one} at t=1, expected ±1")
    return q if at_one == 1 else -q


def alexander(d: ClaspDiagram) -> LaurentPoly:
    """Normalised Alexander polynomial of the knot represented by ``d``."""
    return normalize_alexander(alexander_raw(d))


def seifert_matrix(d: ClaspDiagram) -> np.ndarray:
    """Block matrix ``[[L, 0], [I, -E]]``."""
    n = d.n
    v = np.zeros((2 * n, 2 * n), dtype=np.int64)
    v[:n, :n] = linking_matrix(d)
    v[n:, :n] = np.eye(n, dtype=np.int64)
    v[n:, n:] = -sign_matrix(d)
    return v


def equal_up_to_unit(p: LaurentPoly, q: LaurentPoly) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    shifted = q.shift(p.min_exp - q.min_exp)
    return p == shifted or p == -shifted


def alexander_via_seifert(d: ClaspDiagram, check: bool = True) -> LaurentPoly:
    """``det(u V - u^-1 V^T)`` with ``t = u^2``.

    With ``check`` set, the result is compared with ``alexander_raw`` up to a
    unit and ``OracleMismatch`` is raised on disagreement.
    """
    v = seifert_matrix(d)
    m = len(v)
    u = LaurentPoly.monomial(1, var="u")
    uinv = LaurentPoly.monomial(-1, var="u")
    mat = [[u * int(v[i, j]) - uinv * int(v[j, i]) for j in range(m)] for i in range(m)]
    du = det(mat, var="u")
    result = LaurentPoly(du.halve_exponents().coeffs)
    if check and not equal_up_to_unit(result, alexander_raw(d)):
        raise OracleMismatch(f"Seifert-matrix Alexander {result} disagrees with det S_D for {d}")
    return result


def conway(d: ClaspDiagram | LaurentPoly) -> LaurentPoly:
    """Conway polynomial in ``z`` from the normalised Alexander polynomial, ``z^2 = t - 2 + t^-1``."""
    p = d if isinstance(d, LaurentPoly) else alexander(d)
    z2 = _T - 2 + _TINV
    rem = p
    out: dict[int, int] = {}
    while rem:
        top = rem.max_exp
        if top < 0 or rem.coeff(top) != rem.coeff(-top):
            raise DomainError(f"{p} is not a symmetric Laurent polynomial")
        c = rem.coeff(top)
        out[2 * top] = c
        rem = rem - z2 ** top * c
    return LaurentPoly(out, var="z")


def knot_determinant(d: ClaspDiagram) -> int:
    return abs(int(alexander(d)(-1)))


def seifert_genus_bound(d: ClaspDiagram) -> int:
    """Genus of the natural Seifert surface, an upper bound for the knot genus."""
    return d.n

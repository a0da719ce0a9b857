"""Exact integer Laurent polynomials in one variable and their determinants."""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb, prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ResourceError

__all__ = [
    "LaurentPoly",
    "LaurentMatrix",
    "det",
    "det_cofactor",
    "det_bareiss",
    "det_modular",
    "coefficient_bound",
    "COFACTOR_LIMIT",
    "PRIMES",
]

COFACTOR_LIMIT = 8

# primes just below 2^31, so products of two residues fit in int64
PRIMES = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
    2147483353, 2147483323, 2147483269, 2147483249, 2147483237, 2147483179,
    2147483171, 2147483137, 2147483123, 2147483077, 2147483069, 2147483059,
)
_PRIME_PRODUCT = prod(PRIMES)
_BATCH_ENTRIES = 1 << 22
_EARLY_BATCH = 4
EARLY_ZEROS = 3

_TERM = re.compile(r"([+-]?)(\d+)(?:\*([A-Za-z])\^(-?\d+))?")


class LaurentPoly:
    """Element of Z[t, t^-1] stored as ``{exponent: coefficient}`` without zero entries."""

    __slots__ = ("_c", "var", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None, var: str = "t"):
        self._c = {int(e): int(c) for e, c in (coeffs or {}).items() if c}
        self.var = var
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict[int, int], var: str) -> LaurentPoly:
        p = cls.__new__(cls)
        p._c = coeffs
        p.var = var
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int, var: str = "t") -> LaurentPoly:
        return cls({0: c}, var)

    @classmethod
    def monomial(cls, e: int, c: int = 1, var: str = "t") -> LaurentPoly:
        return cls({e: c}, var)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], var: str = "t") -> LaurentPoly:
        out: dict[int, int] = {}
        for e, c in pairs:
            out[int(e)] = out.get(int(e), 0) + int(c)
        return cls(out, var)

    @classmethod
    def parse(cls, text: str, var: str = "t") -> LaurentPoly:
        """Inverse of ``str()``: terms such as ``-2*t^-1+5-2*t^1``."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls({}, var)
        out: dict[int, int] = {}
        pos = 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"cannot parse Laurent polynomial {text!r} at {s[pos:]!r}")
            if m[3] is not None and m[3] != var:
                raise ValueError(f"unexpected variable {m[3]!r} in {text!r}")
            c = int(m[2]) * (-1 if m[1] == "-" else 1)
            e = int(m[4]) if m[4] is not None else 0
            out[e] = out.get(e, 0) + c
            pos = m.end()
        return cls(out, var)

    # -- container-ish protocol -------------------------------------------------
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def terms(self) -> list[tuple[int, int]]:
        return sorted(self._c.items())

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def min_exp(self) -> int:
        return min(self._c)

    @property
    def max_exp(self) -> int:
        return max(self._c)

    # -- arithmetic -------------------------------------------------------------
    def _lift(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly._raw({0: other} if other else {}, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for e, c in other._c.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._c.items()}, self.var)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return LaurentPoly._raw({}, self.var)
        out: dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in out.items() if c}, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._c) == 1:
                (e, c), = self._c.items()
                if c in (1, -1):
                    return LaurentPoly._raw({-e * -k: c ** -k}, self.var)
            raise ValueError("only units can be raised to negative powers")
        result = LaurentPoly._raw({0: 1}, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``t^k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._c.items()}, self.var)

    def invert_variable(self) -> LaurentPoly:
        """Substitute ``t -> t^-1``."""
        return LaurentPoly._raw({-e: c for e, c in self._c.items()}, self.var)

    def substitute_power(self, k: int) -> LaurentPoly:
        """Substitute ``t -> t^k``."""
        return LaurentPoly._raw({e * k: c for e, c in self._c.items()}, self.var)

    def halve_exponents(self) -> LaurentPoly:
        """Substitute ``u^2 -> t``; every exponent must be even."""
        if any(e % 2 for e in self._c):
            raise ValueError("odd exponent present; cannot halve")
        return LaurentPoly._raw({e // 2: c for e, c in self._c.items()}, self.var)

    def __call__(self, x):
        if isinstance(x, int) and x not in (1, -1) and self._c and self.min_exp < 0:
            x = Fraction(x)
        return sum((c * x ** e for e, c in self._c.items()), 0)

    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        """Quotient ``self / other``; raises ``ArithmeticError`` if it is not a Laurent polynomial."""
        if not other._c:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._c:
            return LaurentPoly._raw({}, self.var)
        lo_d = other.min_exp
        divisor = [0] * (other.max_exp - lo_d + 1)
        for e, c in other._c.items():
            divisor[e - lo_d] = c
        lo_n = self.min_exp
        rem = [0] * (self.max_exp - lo_n + 1)
        for e, c in self._c.items():
            rem[e - lo_n] = c
        dlen = len(divisor)
        if len(rem) < dlen:
            raise ArithmeticError("inexact Laurent division")
        lead = divisor[-1]
        q = [0] * (len(rem) - dlen + 1)
        for k in range(len(q) - 1, -1, -1):
            top = rem[k + dlen - 1]
            if top:
                if top % lead:
                    raise ArithmeticError("inexact Laurent division")
                f = top // lead
                q[k] = f
                for m, dc in enumerate(divisor):
                    if dc:
                        rem[k + m] -= f * dc
        if any(rem):
            raise ArithmeticError("inexact Laurent division")
        return LaurentPoly._raw({k + lo_n - lo_d: c for k, c in enumerate(q) if c}, self.var)

    # -- comparison / display ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        if isinstance(other, LaurentPoly):
            return self._c == other._c and (self.var == other.var or not self._c or set(self._c) == {0})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, c in self.terms():
            body = str(abs(c)) if e == 0 else f"{abs(c)}*{self.var}^{e}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self.terms()]


LaurentMatrix = list  # square list-of-lists of LaurentPoly


def det_cofactor(m: Sequence[Sequence[LaurentPoly]], var: str = "t") -> LaurentPoly:
    """Laplace expansion along rows, memoised over the set of used columns."""
    n = len(m)
    if n == 0:
        return LaurentPoly.const(1, var)
    # nonzero entries per row
    rows = [[(j, m[i][j]) for j in range(n) if m[i][j]] for i in range(n)]
    memo: dict[int, LaurentPoly] = {}

    def minor(i: int, used: int) -> LaurentPoly:
        if i == n:
            return LaurentPoly.const(1, var)
        hit = memo.get(used)
        if hit is not None:
            return hit
        total = LaurentPoly({}, var)
        for j, entry in rows[i]:
            bit = 1 << j
            if used & bit:
                continue
            # sign = (-1)^(number of free columns left of j)
            free_before = j - bin(used & (bit - 1)).count("1")
            sub = minor(i + 1, used | bit)
            if sub:
                term = entry * sub
                total = total - term if free_before % 2 else total + term
        memo[used] = total
        return total

    return minor(0, 0)


def det_bareiss(m: Sequence[Sequence[LaurentPoly]], var: str = "t") -> LaurentPoly:
    """Fraction-free Gaussian elimination with exact Laurent division."""
    n = len(m)
    if n == 0:
        return LaurentPoly.const(1, var)
    a = [list(row) for row in m]
    sign = 1
    prev = LaurentPoly.const(1, var)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return LaurentPoly({}, var)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = piv * a[i][j] - aik * a[k][j]
                a[i][j] = num.exact_div(prev) if num else num
            a[i][k] = LaurentPoly({}, var)
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def det(m: Sequence[Sequence[LaurentPoly]], var: str = "t") -> LaurentPoly:
    """Exact determinant; cofactor expansion up to ``COFACTOR_LIMIT`` rows, Bareiss above."""
    if len(m) <= COFACTOR_LIMIT:
        return det_cofactor(m, var)
    return det_bareiss(m, var)


def coefficient_bound(m: Sequence[Sequence[LaurentPoly]]) -> int:
    """Upper bound for the sum of absolute coefficients of ``det m``.

    Every term of the Leibniz expansion picks one entry per row, so the
    product of the row sums of coefficient norms bounds the result.
    """
    bound = 1
    for row in m:
        bound *= sum(sum(abs(c) for c in e._c.values()) for e in row)
    return bound


def _batched_det_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Determinants of the stacked matrices ``a[b]`` over GF(p); ``a`` is destroyed."""
    nb, n, _ = a.shape
    out = np.ones(nb, dtype=np.int64)
    alive = np.ones(nb, dtype=bool)
    for k in range(n):
        zero = np.nonzero(a[:, k, k] == 0)[0]
        for b in zero:
            rows = np.nonzero(a[b, k:, k])[0]
            if len(rows) == 0:
                alive[b] = False
                a[b, k, k] = 1
                continue
            r = k + int(rows[0])
            a[b, [k, r]] = a[b, [r, k]]
            out[b] = (p - out[b]) % p
        piv = a[:, k, k]
        out = out * piv % p
        if k == n - 1:
            break
        inv = np.array([pow(int(x), p - 2, p) for x in piv], dtype=np.int64)
        f = a[:, k + 1:, k] * inv[:, None] % p
        a[:, k + 1:, k + 1:] = (a[:, k + 1:, k + 1:] - f[:, :, None] * a[:, k, None, k + 1:]) % p
    out[~alive] = 0
    return out


def _newton_to_monomial(xs: Sequence[int], dd: Sequence[int], p: int) -> list[int]:
    """Monomial coefficients (low to high) of the Newton form with nodes ``xs``."""
    n = len(dd)
    coeffs = [0] * n
    for i in range(n - 1, -1, -1):
        # coeffs = coeffs * (x - xs[i]) + dd[i]
        nxt = [0] * n
        for k in range(n - 1):
            nxt[k + 1] = coeffs[k]
        for k in range(n):
            nxt[k] = (nxt[k] - xs[i] * coeffs[k]) % p
        nxt[0] = (nxt[0] + dd[i]) % p
        coeffs = nxt
    return coeffs


def _interpolate_mod(xs: list[int], ys: list[int], p: int) -> list[int]:
    """Monomial coefficients (low to high) of the interpolating polynomial over GF(p)."""
    n = len(xs)
    dd = list(ys)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) * pow(xs[i] - xs[i - level], p - 2, p) % p
    return _newton_to_monomial(xs, dd, p)


class _NewtonEarly:
    """Incremental Newton interpolation that reports when the degree has settled.

    Nodes are random, so a polynomial of degree ``d`` yields ``EARLY_ZEROS``
    consecutive zero divided differences after ``d + 1`` nodes and, with
    probability about ``d / p`` per node, not before.
    """

    def __init__(self, p: int, max_nodes: int):
        self.p, self.max_nodes = p, max_nodes
        self.xs: list[int] = []
        self.dd: list[int] = []
        self.zeros = 0

    def add(self, x: int, y: int) -> None:
        p = self.p
        w = y % p
        for xi, ci in zip(self.xs, self.dd):
            w = (w - ci) * pow(x - xi, p - 2, p) % p
        self.xs.append(x)
        self.dd.append(w)
        self.zeros = self.zeros + 1 if w == 0 else 0

    @property
    def done(self) -> bool:
        return self.zeros >= EARLY_ZEROS or len(self.xs) >= self.max_nodes

    def coefficients(self) -> list[int]:
        return _newton_to_monomial(self.xs, self.dd, self.p)


def _symmetric_lift(r: int, m: int) -> int:
    return r - m if r > m // 2 else r


def det_modular(
    m: Sequence[Sequence[LaurentPoly]],
    var: str = "t",
    symmetric: bool = False,
    certify: bool = False,
) -> LaurentPoly:
    """Determinant by evaluation at many points modulo word-sized primes.

    With ``symmetric`` the caller guarantees ``det`` is invariant under
    ``t -> t^-1``; it is then a polynomial in ``t + t^-1`` and half as many
    evaluation points suffice.  Residues are combined by the Chinese
    remainder theorem.  By default each prime interpolates through random
    nodes until the degree settles, and the loop stops once one further
    prime leaves the lifted coefficients unchanged.  ``certify`` instead uses
    the full degree bound and keeps going until the modulus exceeds twice
    :func:`coefficient_bound`, which makes the result provably exact.
    """
    n = len(m)
    if n == 0:
        return LaurentPoly.const(1, var)
    exps = [e for row in m for entry in row for e in entry._c]
    if not exps:
        return LaurentPoly({}, var)
    lo, hi = min(exps), max(exps)
    coeff_arrays = {}
    for e in range(lo, hi + 1):
        arr = [[entry._c.get(e, 0) for entry in row] for row in m]
        if any(any(r) for r in arr):
            coeff_arrays[e] = arr
    if symmetric:
        reach = max(hi, -lo)
        degree = n * reach
        ts = list(range(2, degree + 3))
    else:
        degree = n * (hi - lo)
        ts = list(range(2, degree + 3))
    target = 2 * coefficient_bound(m) if certify else None
    if target is not None and target >= _PRIME_PRODUCT:
        raise ResourceError(f"certifying this determinant needs a modulus above {target.bit_length()} bits; "
                            f"the prime table reaches {_PRIME_PRODUCT.bit_length()}")

    modulus = 1
    lifted: dict[int, int] | None = None
    residues: dict[int, int] = {}
    for p in PRIMES:
        mats = {e: np.array(arr, dtype=object) % p for e, arr in coeff_arrays.items()}
        mats = {e: a.astype(np.int64) for e, a in mats.items()}

        def evaluate(chunk: Sequence[int]) -> list[int]:
            stack = np.zeros((len(chunk), n, n), dtype=np.int64)
            for b, t0 in enumerate(chunk):
                acc = np.zeros((n, n), dtype=np.int64)
                for e, a in mats.items():
                    acc = (acc + a * pow(t0, e, p)) % p
                stack[b] = acc
            return [int(v) for v in _batched_det_mod(stack, p)]

        def node(t0: int, v: int) -> tuple[int, int]:
            # symmetric: a polynomial in t + 1/t; otherwise det * t^(-n*lo) in t
            if symmetric:
                return (t0 + pow(t0, -1, p)) % p, v
            return t0, v * pow(t0, -n * lo, p) % p

        if target is None:
            # random nodes with early termination once the degree settles
            rng = np.random.default_rng(p)
            newton = _NewtonEarly(p, degree + 1)
            seen: set[int] = set()
            while not newton.done:
                chunk = []
                while len(chunk) < _EARLY_BATCH:
                    t0 = int(rng.integers(2, p - 1))
                    x = (t0 + pow(t0, -1, p)) % p if symmetric else t0
                    if x not in seen:
                        seen.add(x)
                        chunk.append(t0)
                for t0, v in zip(chunk, evaluate(chunk)):
                    if not newton.done:
                        newton.add(*node(t0, v))
            q = newton.coefficients()
        else:
            values = []
            batch = max(1, _BATCH_ENTRIES // (n * n))
            for start in range(0, len(ts), batch):
                values.extend(evaluate(ts[start:start + batch]))
            xs, ys = zip(*(node(t0, v) for t0, v in zip(ts, values)))
            q = _interpolate_mod(list(xs), list(ys), p)
        if symmetric:
            coeffs: dict[int, int] = {}
            for k, qk in enumerate(q):
                if qk:
                    for i in range(k + 1):
                        e = k - 2 * i
                        coeffs[e] = (coeffs.get(e, 0) + qk * comb(k, i)) % p
        else:
            coeffs = {k + n * lo: c for k, c in enumerate(q) if c}
        # Chinese remaindering with the residues gathered so far
        keys = set(coeffs) | set(residues)
        new_modulus = modulus * p
        inv = pow(modulus, -1, p)
        merged = {}
        for e in keys:
            r_old = residues.get(e, 0)
            r_new = coeffs.get(e, 0)
            x = r_old + modulus * ((r_new - r_old) * inv % p)
            merged[e] = x % new_modulus
        residues, modulus = merged, new_modulus
        current = {e: _symmetric_lift(r, modulus) for e, r in residues.items()}
        current = {e: c for e, c in current.items() if c}
        if target is not None:
            if modulus > target:
                return LaurentPoly(current, var)
        elif lifted is not None and current == lifted:
            return LaurentPoly(current, var)
        lifted = current
    raise ArithmeticError("ran out of primes before the modular determinant stabilised")

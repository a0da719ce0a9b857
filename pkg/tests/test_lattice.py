from __future__ import annotations

import itertools
from math import gcd

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from claspkit.lattice import QuotientMap, SparseEchelon, smith_normal_form


def _int_det(m) -> int:
    m = [list(r) for r in m]
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * _int_det(minor)
    return total


def _determinantal_divisors(m) -> list[int]:
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = gcd(g, _int_det([[m[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        out.append(g)
    return out


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_form_matches_determinantal_divisors(m):
    diag, P, Q = smith_normal_form(m)
    dd = _determinantal_divisors(m)
    assert len(diag) == len(dd)
    prod = 1
    for d_k, f in zip(dd, diag):
        prod *= f
        assert prod == d_k
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_smith_transforms_are_unimodular(m):
    diag, P, Q = smith_normal_form(m)
    assert abs(_int_det(P)) == 1 and abs(_int_det(Q)) == 1
    D = _matmul(_matmul(P, m), Q)
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            assert v == (diag[i] if i == j and i < len(diag) else 0)


def test_smith_zero_matrix():
    diag, _, _ = smith_normal_form([[0, 0], [0, 0]])
    assert diag == []


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_echelon_rank_and_span(m):
    ncols = len(m[0])
    ech = SparseEchelon(ncols)
    for row in m:
        ech.add({c: v for c, v in enumerate(row) if v})
    assert ech.rank == np.linalg.matrix_rank(np.array(m, dtype=float))
    for p, row in ech.pivots.items():
        assert row[p] > 0 and min(row) == p
    # every input row lies in the span: adding it again does not grow the rank
    for row in m:
        assert not ech.add({c: v for c, v in enumerate(row) if v})


def test_quotient_map_small_example():
    ech = SparseEchelon(3)
    ech.add({0: 2})
    ech.add({1: 3})
    q = QuotientMap.from_echelon(ech)
    assert q.free_rank == 1
    assert sorted(q.torsion_orders) in ([6], [2, 3])
    free, tors = q.apply({2: 1})
    assert free in ([1], [-1]) and all(t == 0 for t in tors)
    assert q.apply({0: 2}) == ([0], [0] * len(tors))
    assert q.apply({0: 1})[1] != [0] * len(tors)


@settings(max_examples=100, deadline=None)
@given(matrices, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_quotient_map_kills_relations(m, vec):
    ncols = len(m[0])
    ech = SparseEchelon(ncols)
    rows = [{c: v for c, v in enumerate(row) if v} for row in m]
    ech.extend(rows)
    q = QuotientMap.from_echelon(ech)
    assert q.free_rank == ncols - ech.rank
    for r in rows:
        free, tors = q.apply(r)
        assert all(x == 0 for x in free) and all(t == 0 for t in tors)
    # linearity
    v = {c: vec[c] for c in range(ncols) if vec[c]}
    f1, t1 = q.apply(v)
    f2, t2 = q.apply({c: 2 * x for c, x in v.items()})
    assert f2 == [2 * x for x in f1]
    assert t2 == [(2 * x) % d for x, d in zip(t1, q.torsion_orders)]

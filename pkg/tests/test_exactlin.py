import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from congruences.errors import AmbientMismatch, DimensionError
from congruences.exactlin import (Subspace, determinant, inverse, join, maximal_minors, meet,
                                  nullspace, pair_functional, plucker_embed, plucker_relations,
                                  random_subspace, rank, rref)


def naive_det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * naive_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)))


def minor_scan_rank(m):
    rows, cols = len(m), len(m[0])
    for k in range(min(rows, cols), 0, -1):
        for r in combinations(range(rows), k):
            for c in combinations(range(cols), k):
                if naive_det([[m[i][j] for j in c] for i in r]):
                    return k
    return 0


small_matrices = st.integers(1, 4).flatmap(
    lambda rows: st.integers(1, 4).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-2, 2), min_size=cols, max_size=cols),
                              min_size=rows, max_size=rows)))


def test_rank_examples():
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([[0] * 4 for _ in range(3)]) == 0
    assert rank([[1, 1, 1, 1], [1, 2, 4, 8], [2, 3, 5, 9]]) == 2


@given(small_matrices)
@settings(max_examples=300, deadline=None)
def test_rank_matches_minor_scan(m):
    assert rank(m) == minor_scan_rank(m)


def test_determinant_and_inverse():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert determinant(m) == naive_det(m) == 18
    inv = inverse(m)
    product = [[sum(Fraction(m[i][k]) * inv[k][j] for k in range(3)) for j in range(3)]
               for i in range(3)]
    assert product == [[int(i == j) for j in range(3)] for i in range(3)]
    with pytest.raises(DimensionError):
        inverse([[1, 2], [2, 4]])


def test_rref_and_nullspace():
    reduced, pivots = rref([[2, 4, 6], [1, 2, 4]])
    assert reduced == ((1, 2, 0), (0, 0, 1))
    assert pivots == (0, 2)
    assert nullspace([[1, 2, 0], [0, 0, 1]]) == ((-2, 1, 0),)


def test_meet_examples():
    x3 = Subspace.coordinate(3, [0, 1, 2])
    x0 = Subspace.coordinate(3, [1, 2, 3])
    assert meet(x3, x0) == Subspace.coordinate(3, [1, 2])
    assert meet(Subspace.coordinate(3, [0, 1]), Subspace.coordinate(3, [2, 3])) is None
    line = Subspace.span([(1, 1, 1, 1), (1, 2, 4, 8)])
    assert meet(line, line) == line


def test_join_examples():
    p, q = Subspace.point((1, 0, 0, 0)), Subspace.point((1, 1, 1, 1))
    assert join(p, q).dim == 1
    line = join(p, q)
    assert join(line, line) == line
    skew = join(Subspace.coordinate(3, [0, 1]), Subspace.coordinate(3, [2, 3]))
    assert skew.dim == 3
    assert join(None, line) == line


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        meet(Subspace.coordinate(3, [0]), Subspace.coordinate(4, [0]))


@given(st.integers(0, 10 ** 6), st.integers(3, 6))
@settings(max_examples=60, deadline=None)
def test_grassmann_formula(seed, ambient):
    rng = random.Random(seed)
    a = random_subspace(rng, ambient, rng.randint(0, ambient - 1), 5)
    b = random_subspace(rng, ambient, rng.randint(0, ambient - 1), 5)
    cut = meet(a, b)
    if cut is not None:
        assert cut.dim + join(a, b).dim == a.dim + b.dim
        assert a.contains(cut) and b.contains(cut)
    else:
        assert join(a, b).dim == a.dim + b.dim + 1


def test_subspace_equality_is_canonical():
    a = Subspace.span([(1, 1, 1, 1), (1, 2, 4, 8)])
    b = Subspace.span([(2, 3, 5, 9), (0, 1, 3, 7)])
    assert a == b
    assert a.contains_point((3, 4, 6, 10))
    assert not a.contains_point((0, 0, 0, 1))
    assert all(sum(h[i] * row[i] for i in range(4)) == 0
               for h in a.annihilator() for row in a.matrix)


def test_plucker_embed_examples():
    assert plucker_embed(Subspace.coordinate(3, [0, 1])).coords == (1, 0, 0, 0, 0, 0)
    line = Subspace.span([(1, 1, 1, 1), (1, 2, 4, 8)])
    p = plucker_embed(line).coords
    assert p == (1, 3, 7, 2, 6, 4)
    assert p[0] * p[5] - p[1] * p[4] + p[2] * p[3] == 0
    assert plucker_embed(Subspace.coordinate(3, [0, 3])).coords == (0, 0, 1, 0, 0, 0)


@pytest.mark.parametrize('r,N', [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)])
def test_plucker_relations_hold(r, N):
    rng = random.Random(r * 100 + N)
    for _ in range(20):
        point = plucker_embed(random_subspace(rng, N, r, 7))
        assert not any(plucker_relations(point))


def test_row_mixing_leaves_plucker_point():
    rows = [(1, 1, 1, 1, 0), (1, 2, 4, 8, 1), (0, 1, 0, 2, 5)]
    mixed = [tuple(3 * a - b for a, b in zip(rows[0], rows[1])), rows[1],
             tuple(a + 2 * b for a, b in zip(rows[2], rows[0]))]
    assert plucker_embed(Subspace.span(rows)) == plucker_embed(Subspace.span(mixed))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_pair_functional_expands_determinant(seed):
    rng = random.Random(seed)
    N = rng.randint(3, 5)
    m = [[rng.randint(-4, 4) for _ in range(N + 1)] for _ in range(N - 1)]
    x = [rng.randint(-4, 4) for _ in range(N + 1)]
    y = [rng.randint(-4, 4) for _ in range(N + 1)]
    weights = pair_functional(N, x, y)
    minors = maximal_minors(m)
    assert sum(w * p for w, p in zip(weights, minors)) == naive_det(m + [x, y])

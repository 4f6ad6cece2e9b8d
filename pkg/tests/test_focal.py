import random
from fractions import Fraction

import pytest

from congruences.catalog import case1, case2_nodal, case3
from congruences.errors import BasePointError
from congruences.exactlin import Subspace, nullspace, random_vector
from congruences.family import Chart
from congruences.focal import (DOUBLE_HYPERPLANE, IRREDUCIBLE, TWO_HYPERPLANES, CONJUGATE_PAIR,
                               characteristic_pair, directional_locus, focal_quadric,
                               focal_samples, is_fundamental, quadric_rank, rational_sqrt,
                               realize, split_quadric, _gram)
from congruences.polyalg import BiPoly
from tests.conftest import on_twisted_cubic

s, t = BiPoly.s(), BiPoly.t()
ZERO, ONE = BiPoly(), BiPoly.constant(1)

# lines through (1, s, 0, 0) on x2 = x3 = 0 and (0, 0, 1, t) on x0 = x1 = 0
SKEW_LINES = Chart(1, 3, ((ONE, s, ZERO, ZERO), (ZERO, ZERO, ONE, t)), declared_birational=True)


def test_characteristic_pair_of_a_constant_direction():
    c = Chart(1, 3, ((ONE, ZERO, ZERO, ZERO), (ZERO, ONE, s, ZERO)))
    assert characteristic_pair(c, 1, 0, (0, 1)).is_zero
    assert not characteristic_pair(c, 1, 0, (1, 0)).is_zero


def test_directional_locus_of_skew_lines():
    assert directional_locus(SKEW_LINES, 2, 3, (1, 0)) == Subspace.point((0, 0, 1, 3))
    assert directional_locus(SKEW_LINES, 2, 3, (0, 1)) == Subspace.point((1, 2, 0, 0))


def test_skew_lines_focal_points():
    q = focal_quadric(SKEW_LINES, 2, 3)
    assert quadric_rank(q) == 2
    split = split_quadric(q)
    assert split.kind == TWO_HYPERPLANES
    points = {realize(q, h) for h in split.hyperplanes}
    assert points == {Subspace.point((1, 2, 0, 0)), Subspace.point((0, 0, 1, 3))}


def test_secant_focal_points_are_the_secancy_points():
    # (s, t) = (u + v, uv) with u = 1, v = 2
    q = focal_quadric(case1(1), 3, 2)
    split = split_quadric(q)
    assert split.kind == TWO_HYPERPLANES
    points = {realize(q, h) for h in split.hyperplanes}
    assert points == {Subspace.point((1, 1, 1, 1)), Subspace.point((1, 2, 4, 8))}


def test_secant_focal_points_can_be_irrational():
    # u, v roots of x^2 - x - 1
    split = split_quadric(focal_quadric(case1(1), 1, -1))
    assert split.kind == CONJUGATE_PAIR
    assert split.discriminant > 0


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_case3_focal_quadric_is_a_double_hyperplane_in_the_plane(n):
    plane = Subspace.coordinate(n + 2, range(n + 1))
    rng = random.Random(n)
    for _ in range(5):
        s0, t0 = Fraction(rng.randint(1, 50), 7), Fraction(rng.randint(-50, 50), 3)
        q = focal_quadric(case3(n), s0, t0)
        assert quadric_rank(q) == 1
        split = split_quadric(q)
        assert split.kind == DOUBLE_HYPERPLANE
        assert plane.contains(realize(q, split.hyperplanes[0]))


def test_case1_plane_focal_quadric_is_a_conic():
    q = focal_quadric(case1(2), 2, 3)
    assert quadric_rank(q) == 3
    assert split_quadric(q).kind == IRREDUCIBLE


def test_directional_loci_lie_on_the_quadric():
    c = case3(3)
    s0, t0 = Fraction(1, 3), 2
    q = focal_quadric(c, s0, t0)
    for v in [(1, 0), (0, 1), (2, -1), (1, 3)]:
        pair = characteristic_pair(c, s0, t0, v)
        kernel = nullspace((pair.f1, pair.f2), c.r + 1)
        assert kernel
        assert all(q.value(x) == 0 for x in kernel)
        assert directional_locus(c, s0, t0, v).dim == len(kernel) - 1


@pytest.mark.parametrize('chart,params', [
    (case1(2), (2, 3)),
    (case3(3), (Fraction(1, 3), 2)),
    (SKEW_LINES, (2, 3)),
])
def test_focal_quadric_does_not_depend_on_the_tangent_basis(chart, params):
    s0, t0 = params
    expected = focal_quadric(chart, s0, t0).gram
    rng = random.Random(41)
    for _ in range(5):
        a, b, c_, d = (rng.randint(-9, 9) for _ in range(4))
        if not a * d - b * c_:
            continue
        first = characteristic_pair(chart, s0, t0, (a, b))
        second = characteristic_pair(chart, s0, t0, (c_, d))
        # a change of basis rescales the gram by its determinant; _gram normalizes it away
        assert _gram(first, second) == expected


def test_focal_quadric_at_a_base_point():
    with pytest.raises(BasePointError):
        focal_quadric(Chart(1, 3, ((ONE, t, t * t, ZERO), (ONE, ZERO, ZERO, s))), 0, 0)


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(2) is None
    assert rational_sqrt(-1) is None


def test_is_fundamental_for_the_secant_congruence():
    c = case1(1)
    for u in range(-3, 4):
        assert is_fundamental(c, (1, u, u * u, u ** 3))
    assert not is_fundamental(c, (1, 0, 0, 1))
    assert not is_fundamental(c, (1, 2, 3, 5))


def test_is_fundamental_for_the_cone():
    c = case3(3)
    assert is_fundamental(c, (1, 2, -1, 3, 0, 0))
    assert is_fundamental(c, Subspace.point((0, 1, 0, 0, 0, 0)))
    assert not is_fundamental(c, (1, 2, -1, 3, 1, 1))


def test_focal_samples_of_the_secant_congruence(rng):
    samples = focal_samples(case1(1), 6, rng)
    points = [sample.point for sample in samples if sample.point is not None]
    assert points
    for point in points:
        assert on_twisted_cubic(point)
        assert is_fundamental(case1(1), point)


def test_focal_samples_of_the_cone_lie_on_the_plane(rng):
    plane = Subspace.coordinate(5, range(4))
    samples = focal_samples(case3(3), 4, rng)
    assert len(samples) >= 4
    for sample in samples:
        assert sample.kind == DOUBLE_HYPERPLANE
        assert plane.contains_point(sample.point)


def test_random_points_are_not_fundamental(rng):
    c = case2_nodal()
    for _ in range(5):
        x = random_vector(rng, 4, 9)
        if x[3] and x[0]:
            assert not is_fundamental(c, x)

"""
End-to-end checks on the catalog: bidegrees, degree identity, sections,
focal loci and the smooth/singular verdicts of the classification.
"""
import random
from fractions import Fraction

import pytest

from congruences.catalog import (ScrollSpec, case1, case2_nodal, case2_normal, case2_scroll,
                                 case3, pencil_plane, scroll_plane)
from congruences.classify import (CASE_I, CASE_II, CASE_III, SINGULAR, SMOOTH, classify,
                                  generators_in_plane, recover_focal_plane)
from congruences.errors import BasePointError, FocalError, GenericityFailure
from congruences.exactlin import Subspace, normalize, random_subspace, random_vector, vec_mat
from congruences.family import Bidegree, bidegree, class_, fixed_locus, order, plucker_degree, section
from congruences.focal import (TWO_HYPERPLANES, component_points, focal_quadric, focal_samples,
                               is_fundamental, quadric_rank, split_quadric)
from tests.conftest import on_twisted_cubic

NORMAL_MODELS = [(1, 0), (2, 1), (3, 0), (3, 2), (4, 1), (5, 0)]


def _section(c, ambient_dim, rng, config, attempts=4):
    for _ in range(attempts):
        try:
            L = random_subspace(rng, ambient_dim, 3, 9)
            return L, section(c, L, rng, config)
        except GenericityFailure:
            continue
    raise AssertionError('no generic P^3 found in {0} draws'.format(attempts))


@pytest.mark.parametrize('chart,expected', [
    (pencil_plane(1), Bidegree(1, 0)),
    (case2_scroll(ScrollSpec((1,))), Bidegree(1, 1)),
    (case2_scroll(ScrollSpec((2,))), Bidegree(1, 2)),
    (case1(1), Bidegree(1, 3)),
])
def test_smooth_congruences_of_lines(chart, expected, config):
    assert bidegree(chart, config=config) == expected
    assert classify(chart, config=config).smooth == SMOOTH


@pytest.mark.parametrize('r', [1, 2, 3])
def test_veronese_congruences(r, config):
    c = case1(r)
    assert order(c, config=config) == 1
    assert class_(c, config=config) == 3
    assert plucker_degree(c, config=config) == 4
    assert fixed_locus(c, config=config) is None
    assert classify(c, config=config).case_tag == CASE_I


@pytest.mark.parametrize('chart', [
    pencil_plane(1),
    case1(1),
    case1(2),
    case1(3),
    case2_scroll(ScrollSpec((1,))),
    case2_scroll(ScrollSpec((2,))),
    case2_scroll(ScrollSpec((1, 2))),
    case2_nodal(),
    case2_normal(2, 1),
    case3(2),
    case3(3),
])
def test_degree_is_order_plus_class(chart, config):
    b = bidegree(chart, config=config)
    assert plucker_degree(chart, config=config) == b.order + b.class_


@pytest.mark.parametrize('chart,ambient_dim', [
    (case1(3), 5),
    (case2_scroll(ScrollSpec((1, 2))), 4),
])
def test_sections_keep_the_bidegree(chart, ambient_dim, config):
    rng = random.Random(ambient_dim)
    results = []
    for _ in range(2):
        _, cut = _section(chart, ambient_dim, rng, config)
        assert (cut.r, cut.N) == (1, 3)
        results.append(bidegree(cut, config=config))
    assert results == [Bidegree(1, 3), Bidegree(1, 3)]


def _outside_focal_locus(name, x):
    if name == 'case1':
        return not on_twisted_cubic(x)
    if name == 'nodal':
        return x[0] != 0 and x[3] != 0
    return x[4] != 0


@pytest.mark.parametrize('name,chart', [
    ('case1', case1(1)),
    ('nodal', case2_nodal()),
    ('case3', case3(3)),
])
def test_focal_points_are_fundamental(name, chart, config):
    rng = random.Random(len(name))
    points = [sample.point for sample in focal_samples(chart, 10, rng, config)
              if sample.point is not None]
    assert len(points) >= 10
    for point in points[:10]:
        assert is_fundamental(chart, point)

    checked = 0
    while checked < 10:
        x = random_vector(rng, chart.N + 1, 9)
        if _outside_focal_locus(name, x):
            assert not is_fundamental(chart, x)
            checked += 1


def test_focal_locus_of_a_section(config):
    c = case2_scroll(ScrollSpec((1, 2)))
    plane = scroll_plane(ScrollSpec((1, 2)))
    L, cut = _section(c, 4, random.Random(8), config)
    samples = focal_samples(cut, 6, random.Random(9), config)
    points = [vec_mat(sample.point, L.matrix) for sample in samples if sample.point is not None]
    assert points
    for point in points:
        assert L.contains_point(point)
        assert is_fundamental(c, point)
    assert any(plane.contains_point(point) for point in points)


def test_focal_points_of_a_case1_section(config):
    # two Segre points on the fiber over (2, 3); L through both meets that fiber in their line
    c = case1(3)
    first, second = (1, 0, 2, 0, 0, 0), (0, 0, 0, 0, 1, 3)
    rng = random.Random(12)
    for _ in range(6):
        L = Subspace.span([first, second, random_vector(rng, 6, 9), random_vector(rng, 6, 9)])
        if L.dim != 3:
            continue
        try:
            cut = section(c, L, rng, config)
            q = focal_quadric(cut, 2, 3)
        except (GenericityFailure, BasePointError, FocalError):
            continue
        break
    else:
        raise AssertionError('no section through both Segre points worked')
    split = split_quadric(q)
    assert split.kind == TWO_HYPERPLANES
    points = {normalize(vec_mat(x, L.matrix)) for x in component_points(q, split, rng)}
    assert points == {normalize(first), normalize(second)}
    assert all(is_fundamental(c, point) for point in points)


@pytest.mark.parametrize('n', [1, 2, 3, 4, 5])
def test_cones(n, config):
    c = case3(n)
    assert plucker_degree(c, config=config) == n + 1
    assert class_(c, config=config) == n
    rng = random.Random(n)
    for _ in range(5):
        s0, t0 = Fraction(rng.randint(1, 40), 3), Fraction(rng.randint(-40, 40), 7)
        assert quadric_rank(focal_quadric(c, s0, t0)) == 1
    if n >= 2:
        report = classify(c, config=config)
        assert (report.case_tag, report.smooth) == (CASE_III, SINGULAR)


def test_two_generators_in_the_focal_plane_make_it_singular(config):
    nodal = case2_nodal()
    assert generators_in_plane(nodal, recover_focal_plane(nodal, config=config)) == 2
    assert classify(nodal, config=config).smooth == SINGULAR
    spec = ScrollSpec((1, 3), residual=((0,), (2, -3, 1)))
    assert classify(case2_scroll(spec), config=config).smooth == SINGULAR


@pytest.mark.parametrize('n,e', NORMAL_MODELS)
def test_normal_models(n, e, config):
    c = case2_normal(n, e)
    assert order(c, config=config) == 1
    assert class_(c, config=config) == n
    assert plucker_degree(c, config=config) == n + 1
    assert fixed_locus(c, config=config) is None


@pytest.mark.parametrize('n,e', NORMAL_MODELS)
def test_normal_models_have_at_most_one_generator_in_the_plane(n, e):
    c = case2_normal(n, e)
    plane = Subspace.coordinate(n + 2, range(n + 1))
    assert generators_in_plane(c, plane) <= 1


@pytest.mark.parametrize('n,e', [(1, 0), (2, 1), (3, 0)])
def test_small_normal_models_are_case_two(n, e, config):
    assert classify(case2_normal(n, e), config=config).case_tag == CASE_II


@pytest.mark.parametrize('chart', [
    case2_scroll(ScrollSpec((1,))),
    case2_scroll(ScrollSpec((2,))),
    case2_scroll(ScrollSpec((1, 2))),
    case2_nodal(),
    case2_normal(3, 0),
    case2_normal(4, 1),
    case3(1),
    case3(3),
])
def test_class_is_at_least_r(chart, config):
    assert fixed_locus(chart, config=config) is None
    assert class_(chart, config=config) >= chart.r

"""
Focal geometry of a chart at a single fiber.

The characteristic map sends a tangent direction v of the parameter plane
to the pair of linear forms on the fiber measuring how the fiber moves out
of itself along v.  The focal quadric is the 2x2 determinant of the pairs
for the two coordinate directions; it is computed at rational parameters
and split over Q when possible.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import isqrt

from congruences import DEFAULT_CONFIG
from congruences.errors import BasePointError, FocalError, QuadricRankError
from congruences.exactlin import (Subspace, dot, inverse, normalize, nullspace, rank, to_rat,
                                  vec_mat)
from congruences.family import completions_forms, eval_chart

logger = logging.getLogger(__name__)

TWO_HYPERPLANES = 'two_hyperplanes'
DOUBLE_HYPERPLANE = 'double_hyperplane'
IRREDUCIBLE = 'irreducible'
CONJUGATE_PAIR = 'conjugate_pair'


@dataclass(frozen=True)
class CharPair(object):
    f1: tuple
    f2: tuple

    @property
    def is_zero(self):
        return not any(self.f1) and not any(self.f2)


@dataclass(frozen=True)
class FocalQuadric(object):
    fiber_dim: int
    gram: tuple
    source_params: tuple
    fiber_rows: tuple

    def value(self, x):
        return sum((self.gram[i][j] * x[i] * x[j]
                    for i in range(self.fiber_dim + 1) for j in range(self.fiber_dim + 1)),
                   Fraction(0))


@dataclass(frozen=True)
class QuadricSplit(object):
    kind: str
    hyperplanes: tuple = ()
    discriminant: Fraction = None


@dataclass(frozen=True)
class FocalSample(object):
    point: tuple
    params: tuple
    kind: str
    gram: tuple


def _derivative_rows(c, var, s0, t0):
    return tuple(tuple(e.diff(var).evaluate(s0, t0) for e in row) for row in c.rows)


def characteristic_pair(c, s0, t0, v):
    fiber = eval_chart(c, s0, t0)
    rows = c.evaluate(s0, t0)
    a, b = to_rat(v[0]), to_rat(v[1])
    if not a and not b:
        raise FocalError('direction must be nonzero')
    ds = _derivative_rows(c, 's', s0, t0)
    dt = _derivative_rows(c, 't', s0, t0)
    moved = tuple(tuple(a * x + b * y for x, y in zip(rs, rt)) for rs, rt in zip(ds, dt))
    completion = tuple(tuple(Fraction(int(i == j)) for i in range(c.N + 1))
                       for j in fiber.complement_coordinates())
    dual = inverse(rows + completion)
    forms = []
    for k in (c.r + 1, c.r + 2):
        column = tuple(dual[i][k] for i in range(c.N + 1))
        forms.append(tuple(dot(row, column) for row in moved))
    return CharPair(forms[0], forms[1])


def _symmetric_product(u, v):
    n = len(u)
    return [[(u[i] * v[j] + u[j] * v[i]) / 2 for j in range(n)] for i in range(n)]


def _gram(first, second):
    n = len(first.f1)
    plus = _symmetric_product(first.f1, second.f2)
    minus = _symmetric_product(second.f1, first.f2)
    gram = [[plus[i][j] - minus[i][j] for j in range(n)] for i in range(n)]
    lead = next((x for row in gram for x in row if x), None)
    if lead is None:
        return None
    return tuple(tuple(x / lead for x in row) for row in gram)


def focal_quadric(c, s0, t0, rng=None):
    s0, t0 = to_rat(s0), to_rat(t0)
    directions = [((1, 0), (0, 1))]
    if rng is not None:
        a, b, c_, d = (rng.randint(-9, 9) for _ in range(4))
        if a * d - b * c_:
            directions.append(((a, b), (c_, d)))
    for first_v, second_v in directions:
        first = characteristic_pair(c, s0, t0, first_v)
        second = characteristic_pair(c, s0, t0, second_v)
        if first.is_zero or second.is_zero:
            logger.debug('degenerate direction at (%s, %s), reparametrizing', s0, t0)
            continue
        gram = _gram(first, second)
        if gram is not None:
            return FocalQuadric(c.r, gram, (s0, t0), c.evaluate(s0, t0))
    raise FocalError('no pair of nondegenerate directions at ({0}, {1})'.format(s0, t0))


def quadric_rank(q):
    value = rank(q.gram)
    if value > 4:
        raise QuadricRankError('focal quadric of rank {0} > 4 at {1}'.format(value, q.source_params))
    return value


def rational_sqrt(x):
    x = to_rat(x)
    if x < 0:
        return None
    num, den = isqrt(x.numerator), isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


def split_quadric(q):
    g = q.gram
    n = len(g)
    value = quadric_rank(q)
    if value == 1:
        i = next(i for i in range(n) if g[i][i])
        return QuadricSplit(DOUBLE_HYPERPLANE, (normalize(g[i]),))
    if value >= 3:
        return QuadricSplit(IRREDUCIBLE)
    # rank 2 has a nonsingular 2x2 principal block
    i, j = next((i, j) for i in range(n) for j in range(i + 1, n)
                if g[i][i] * g[j][j] - g[i][j] ** 2)
    # Q = (a, b, c_) applied to y = (g_i.x, g_j.x), with the inverse block as coefficients
    block = inverse(((g[i][i], g[i][j]), (g[i][j], g[j][j])))
    a, b, c_ = block[0][0], block[0][1], block[1][1]
    discriminant = b * b - a * c_
    root = rational_sqrt(discriminant)
    if root is None:
        return QuadricSplit(CONJUGATE_PAIR, (), discriminant)
    if a:
        u = tuple(a * x + (b - root) * y for x, y in zip(g[i], g[j]))
        v = tuple(a * x + (b + root) * y for x, y in zip(g[i], g[j]))
    else:
        u = g[j]
        v = tuple(2 * b * x + c_ * y for x, y in zip(g[i], g[j]))
    return QuadricSplit(TWO_HYPERPLANES, (normalize(u), normalize(v)), discriminant)


def realize(q, covector):
    """The zero set of a linear form on the fiber, as a subspace of P^N."""
    kernel = nullspace((covector,), len(covector))
    if not kernel:
        return None
    return Subspace.span([vec_mat(x, q.fiber_rows) for x in kernel])


def directional_locus(c, s0, t0, v):
    """Z(chi(v)): the fiber points where the direction v is focal."""
    pair = characteristic_pair(c, s0, t0, v)
    kernel = nullspace((pair.f1, pair.f2), c.r + 1)
    if not kernel:
        return None
    return Subspace.span([vec_mat(x, c.evaluate(s0, t0)) for x in kernel])


def _moves_along(vector, curve):
    """False iff the Plucker vector is projectively constant on the curve (a contracted curve)."""
    fs, ft = curve.diff('s'), curve.diff('t')
    tangent = [ft * p.diff('s') - fs * p.diff('t') for p in vector]
    for i, j in combinations(range(len(vector)), 2):
        if not curve.divides(vector[i] * tangent[j] - vector[j] * tangent[i]):
            return True
    return False


def is_fundamental(c, P):
    """
    True iff the fibers through P form a curve: the containment minors of
    [rows; P] share a nonconstant factor in some affine chart, along which
    the fiber actually moves.
    """
    coords = P.matrix[0] if isinstance(P, Subspace) else tuple(to_rat(x) for x in P)
    for (vector, _), forms in zip(c.completions, completions_forms(c, coords)):
        if not forms:
            return True
        common = reduce(lambda a, b: a.gcd(b), forms)
        if any(_moves_along(vector, f) for f in common.factors()):
            return True
    return False


def _random_point(subspace, rng, height=9):
    while True:
        weights = [Fraction(rng.randint(-height, height)) for _ in subspace.matrix]
        if any(weights):
            return normalize(vec_mat(weights, subspace.matrix))


def _line_section_point(q, rng, attempts=30, height=9):
    n = q.fiber_dim + 1

    def bilinear(x, y):
        return sum((q.gram[i][j] * x[i] * y[j] for i in range(n) for j in range(n)), Fraction(0))

    for _ in range(attempts):
        x = [Fraction(rng.randint(-height, height)) for _ in range(n)]
        y = [Fraction(rng.randint(-height, height)) for _ in range(n)]
        qx, qy, bxy = bilinear(x, x), bilinear(y, y), bilinear(x, y)
        if not qx:
            return normalize(vec_mat(x, q.fiber_rows)) if any(x) else None
        root = rational_sqrt(bxy * bxy - qx * qy)
        if root is None:
            continue
        # lambda*x + y with qx*lambda^2 + 2*bxy*lambda + qy = 0
        lam = (-bxy + root) / qx
        point = [lam * a + b for a, b in zip(x, y)]
        if any(point):
            return normalize(vec_mat(point, q.fiber_rows))
    return None


def component_points(q, split, rng):
    """One rational point on each component of the focal quadric, when one is found."""
    if split.kind in (TWO_HYPERPLANES, DOUBLE_HYPERPLANE):
        components = (realize(q, covector) for covector in split.hyperplanes)
        return [_random_point(x, rng) for x in components if x is not None]
    point = _line_section_point(q, rng)
    return [] if point is None else [point]


def focal_samples(c, k, rng=None, config=None):
    """
    Rational points on the focal quadrics of k fibers.  Parameters are drawn
    with small integer coordinates first, since rational points on the
    components (for instance both focal points of a secant) are then common.
    """
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(6)
    samples, fallbacks = [], []
    fibers = 0
    height = 6
    for attempt in range(60 * k):
        if fibers >= k:
            break
        if attempt and attempt % 40 == 0:
            height = min(2 * height, config.rational_height_bound)
        s0, t0 = Fraction(rng.randint(-height, height)), Fraction(rng.randint(-height, height))
        try:
            q = focal_quadric(c, s0, t0, rng)
        except (BasePointError, FocalError):
            continue
        split = split_quadric(q)
        points = component_points(q, split, rng)
        if not points:
            fallbacks.append(FocalSample(None, (s0, t0), split.kind, q.gram))
            continue
        samples.extend(FocalSample(p, (s0, t0), split.kind, q.gram) for p in points)
        fibers += 1
    if fibers < k:
        logger.info('focal samples: only %s of %s fibers gave rational points', fibers, k)
        samples.extend(fallbacks[:k - fibers])
    return samples

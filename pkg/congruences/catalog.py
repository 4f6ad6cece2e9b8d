"""
Constructors for the congruences of order one that the classification
produces, each with known invariants.

Coordinate convention for every chart below: ``s`` moves along a pencil of
fibers and ``t`` moves along the base curve.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from congruences import DEFAULT_CONFIG
from congruences.errors import (BasePointError, DimensionError, GenericityFailure,
                                InvalidScroll)
from congruences.exactlin import Subspace, nullspace, random_subspace, rank, ring_determinant
from congruences.family import (Chart, cone_embed, containment_weights, regular_parameters,
                                section)
from congruences.polyalg import BiPoly, content_gcd, linear_combination, squarefree

logger = logging.getLogger(__name__)

ZERO = BiPoly()
ONE = BiPoly.constant(1)


def _s():
    return BiPoly.s()


def _t():
    return BiPoly.t()


def _const(row):
    return tuple(BiPoly.constant(x) for x in row)


def _unit(size, i):
    return tuple(Fraction(int(j == i)) for j in range(size))


def _rational_normal(degree):
    t = _t()
    return tuple(t ** k for k in range(degree + 1))


def pencil_plane(r, base=None, wall=None):
    """
    All r-planes through a fixed (r-1)-plane ``base``: the moving point
    sweeps the plane ``wall``, which must be complementary to the base.
    """
    if r < 1:
        raise DimensionError('pencil_plane needs r >= 1, got {0}'.format(r))
    N = r + 2
    base = base or Subspace.coordinate(N, range(3, N + 1))
    wall = wall or Subspace.coordinate(N, range(3))
    if base.ambient_dim != N or wall.ambient_dim != N:
        raise DimensionError('base and wall must live in P^{0}'.format(N))
    if base.dim != r - 1:
        raise DimensionError('base must have dimension {0}, got {1}'.format(r - 1, base.dim))
    if wall.dim != 2 or rank(base.matrix + wall.matrix) != N + 1:
        raise DimensionError('wall must be a plane complementary to the base')
    s, t = _s(), _t()
    w0, w1, w2 = wall.matrix
    moving = tuple(w0[j] + s * w1[j] + t * w2[j] for j in range(N + 1))
    rows = tuple(_const(row) for row in base.matrix) + (moving,)
    return Chart(r, N, rows, declared_birational=True)


def case1(r):
    """
    Order one, class three.  r=1: secants of the twisted cubic in the
    coordinates (s, t) = (u + v, u*v) of the secant through nu(u), nu(v).
    r=2: planes of the cubic scroll through the lines of P^2.  r=3: the
    P^3's of the Segre P^1 x P^2 over the lines of the P^2 factor.
    """
    s, t = _s(), _t()
    if r == 1:
        rows = ((ONE, ZERO, -t, -s * t),
                (ZERO, ONE, s, s * s - t))
        return Chart(1, 3, rows, declared_birational=True)
    if r == 2:
        rows = ((ONE, ZERO, ZERO, s, ZERO),
                (ZERO, ONE, ZERO, t, s),
                (ZERO, ZERO, ONE, ZERO, t))
        return Chart(2, 4, rows, declared_birational=True)
    if r == 3:
        rows = ((ONE, ZERO, s, ZERO, ZERO, ZERO),
                (ZERO, ONE, t, ZERO, ZERO, ZERO),
                (ZERO, ZERO, ZERO, ONE, ZERO, s),
                (ZERO, ZERO, ZERO, ZERO, ONE, t))
        return Chart(3, 5, rows, declared_birational=True)
    raise DimensionError('case I exists only for r in 1, 2, 3; got {0}'.format(r))


def secant_chart_raw():
    """Secants of the twisted cubic through nu(s) and nu(t); two to one."""
    s, t = _s(), _t()
    return Chart(1, 3, (tuple(s ** k for k in range(4)), tuple(t ** k for k in range(4))))


def plane_conic_secants():
    """Secants of a conic, viewed in G(1,3); they only fill a plane."""
    s, t = _s(), _t()
    rows = ((ONE, ZERO, -t, ZERO),
            (ZERO, ONE, s, ZERO))
    return Chart(1, 3, rows, declared_birational=True)


@dataclass(frozen=True)
class ScrollSpec(object):
    """
    Data of a case-II congruence: the scroll R(parts) is projected from
    ``center`` to X in P^(r+2), and ``residual`` holds the forms g_i(t)
    (coefficients, lowest degree first, deg g_i = parts[i] - 1) of the
    divisor that X meets the focal plane in.
    """
    parts: tuple
    residual: tuple = None
    center: Subspace = None
    plane: Subspace = None
    seed: int = 0

    @property
    def r(self):
        return len(self.parts)

    @property
    def n(self):
        return sum(self.parts)


def scroll_generators(parts):
    """Rows of the generator G~(t) of R(n_1, ..., n_r) in P^(n + r - 1)."""
    size = sum(parts) + len(parts)
    rows = []
    offset = 0
    for part in parts:
        row = [ZERO] * size
        for k, entry in enumerate(_rational_normal(part)):
            row[offset + k] = entry
        rows.append(tuple(row))
        offset += part + 1
    return tuple(rows)


def _default_residual(parts):
    residual = []
    for i, part in enumerate(parts):
        m = part - 1
        residual.append(tuple(Fraction(comb(m, k) * (-i) ** (m - k)) for k in range(m + 1)))
    return tuple(residual)


def _residual_covectors(parts, residual):
    if len(residual) != len(parts):
        raise InvalidScroll('need {0} residual forms, got {1}'.format(len(parts), len(residual)))
    c0, c1 = [], []
    for part, g in zip(parts, residual):
        g = tuple(Fraction(x) for x in g)
        if len(g) != part:
            raise InvalidScroll('residual form for a part {0} needs {0} coefficients'.format(part))
        c0.extend(g + (Fraction(0),))
        c1.extend((Fraction(0),) + g)
    if not any(c0):
        raise InvalidScroll('residual forms are all zero')
    return tuple(c0), tuple(c1)


def _avoids_scroll(center, generators):
    """True iff no generator of the scroll, t = oo included, meets the center."""
    columns = len(generators[0])
    constant = [[BiPoly.constant(x).element for x in row] for row in center.matrix]
    stacked = constant + [[e.element for e in row] for row in generators]
    size = len(stacked)
    minors = []
    for subset in combinations(range(columns), size):
        block = [[row[j] for j in subset] for row in stacked]
        minors.append(BiPoly(ring_determinant(block, lambda a, b: a.exquo(b))))
    common = content_gcd(minors)
    if common.is_zero or not common.is_constant:
        return False
    at_infinity = []
    for row in generators:
        top = max(e.degree('t') for e in row)
        at_infinity.append(tuple(Fraction(int(e.degree('t') == top)) for e in row))
    return rank(center.matrix + tuple(at_infinity)) == size


def _combination(rows, weights):
    return tuple(sum((w * row[j] for w, row in zip(weights, rows)), Fraction(0))
                 for j in range(len(rows[0])))


def _scroll_center(spec, divisor_span, generators, rng):
    n, r = spec.n, spec.r
    ambient = n + r - 1
    if spec.center is not None:
        center = spec.center
        if center.ambient_dim != ambient or center.dim != n - 4:
            raise InvalidScroll('center must be a P^{0} in P^{1}'.format(n - 4, ambient))
        if not divisor_span.contains(center):
            raise InvalidScroll('center is not inside the span of the residual divisor')
        if not _avoids_scroll(center, generators):
            raise InvalidScroll('center meets the scroll')
        return center
    for _ in range(25):
        weights = [[rng.randint(-3, 3) for _ in divisor_span.matrix] for _ in range(n - 3)]
        points = [_combination(divisor_span.matrix, ws) for ws in weights]
        center = Subspace.span(points, ambient)
        if center is not None and center.dim == n - 4 and _avoids_scroll(center, generators):
            return center
    raise InvalidScroll('no center disjoint from R{0} inside the divisor span'.format(
        tuple(spec.parts)))


def _project(vector, annihilator, pad):
    if annihilator is None:
        return tuple(vector) + (Fraction(0),) * pad
    return tuple(sum((h * x for h, x in zip(covector, vector)), Fraction(0))
                 for covector in annihilator)


def _project_row(row, annihilator, pad):
    if annihilator is None:
        return tuple(row) + (ZERO,) * pad
    return tuple(linear_combination(covector, row) for covector in annihilator)


def case2_scroll(spec):
    """
    Fibers are the r-planes through a generator G(t) of X inside the span
    of G(t) and the focal plane; the pencil point runs on a line of the plane.
    """
    chart, _ = _build_scroll(spec)
    return chart


def scroll_plane(spec):
    """The focal plane of case2_scroll(spec), as a subspace of P^(r+2)."""
    _, plane = _build_scroll(spec)
    return plane


def _build_scroll(spec):
    parts = tuple(spec.parts)
    if not parts or any(int(p) < 1 for p in parts):
        raise InvalidScroll('scroll parts must be positive, got {0}'.format(parts))
    n, r = spec.n, spec.r
    N = r + 2
    rng = random.Random(spec.seed)
    residual = spec.residual if spec.residual is not None else _default_residual(parts)
    c0, c1 = _residual_covectors(parts, residual)
    generators = scroll_generators(parts)
    divisor = nullspace((c0, c1), n + r)

    if n >= 4:
        divisor_span = Subspace.span(divisor, n + r - 1)
        center = _scroll_center(spec, divisor_span, generators, rng)
        annihilator = center.annihilator()
        pad = 0
    else:
        if spec.center is not None:
            raise InvalidScroll('a scroll of degree {0} is not projected'.format(n))
        annihilator = None
        pad = 3 - n

    generator_rows = tuple(_project_row(row, annihilator, pad) for row in generators)
    plane_points = [_project(x, annihilator, pad) for x in divisor]
    plane_points += [_unit(N + 1, j) for j in range(N + 1 - pad, N + 1)]
    plane = Subspace.span(plane_points, N) if plane_points else None
    if plane is None or plane.dim != r:
        raise InvalidScroll('residual divisor spans a P^{0}, need P^{1}'.format(
            -1 if plane is None else plane.dim, r))
    if spec.plane is not None and spec.plane != plane:
        raise InvalidScroll('given plane differs from the span of the residual divisor')

    s = _s()
    for attempt in range(25):
        if r == 1:
            b, a = plane.matrix
        else:
            b, a = (_combination(plane.matrix, [rng.randint(-3, 3) for _ in plane.matrix])
                    for _ in range(2))
        pencil = tuple(BiPoly.constant(bj) + s * aj for aj, bj in zip(a, b))
        chart = Chart(r, N, generator_rows + (pencil,), declared_birational=True)
        try:
            regular_parameters(chart, rng, 100)
        except BasePointError:
            logger.debug('pencil line %s of the focal plane is special, redrawing', attempt)
            continue
        return chart, plane
    raise InvalidScroll('no pencil line of the focal plane gives a chart')


def case2_nodal():
    """
    X = the plane nodal cubic (1 - t^2, t, t^3, 0), the twisted cubic
    projected from a point of the chord through nu(1), nu(-1); the focal
    line passes through the node.
    """
    s, t = _s(), _t()
    rows = ((1 - t * t, t, t ** 3, ZERO),
            (ZERO, ONE, ONE, s))
    return Chart(1, 3, rows, declared_birational=True)


def normal_model_exists(n, e):
    return n >= 1 and 0 <= e <= n - 1 and (n - e) % 2 == 1


def case2_normal(n, e):
    """
    The linearly normal model with invariant e in G(n, n+2).  The focal
    plane is x_(n+1) = x_(n+2) = 0; the fiber over (s, t) is the hyperplane
    of the focal plane with coefficients s*(1..t^a) + (1..t^b), joined with
    the point (1, t) of the line x_0 = ... = x_n = 0.
    """
    if not normal_model_exists(n, e):
        raise DimensionError('no normal model for n={0}, e={1}: need 0 <= e <= n-1 and '
                             'n-e odd'.format(n, e))
    a, b = (n - e - 1) // 2, (n + e - 1) // 2
    s, t = _s(), _t()
    weights = tuple(s * t ** k for k in range(a + 1)) + tuple(t ** k for k in range(b + 1))
    pivot = a + 1
    rows = []
    for j in range(n + 1):
        if j == pivot:
            continue
        row = [ZERO] * (n + 3)
        row[j] = ONE
        row[pivot] = -weights[j]
        rows.append(tuple(row))
    rows.append((ZERO,) * (n + 1) + (ONE, t))
    return Chart(n, n + 2, tuple(rows), declared_birational=True)


def case3(n):
    """
    The cone over a rational normal curve of the focal plane's dual: the
    fiber over (s, t) is the hyperplane sum t^j x_j = 0 of the plane, joined
    with e_0 + s*(0, ..., 1, t).  The line s = 0 is contracted to the plane.
    """
    if n < 1:
        raise DimensionError('case3 needs n >= 1, got {0}'.format(n))
    s, t = _s(), _t()
    rows = []
    for j in range(1, n + 1):
        row = [ZERO] * (n + 3)
        row[j] = ONE
        row[0] = -(t ** j)
        rows.append(tuple(row))
    rows.append((ONE,) + (ZERO,) * n + (s, s * t))
    return Chart(n, n + 2, tuple(rows), declared_birational=True)


def case3_section(n, r, rng=None, config=None):
    """case3(n) cut by a random P^(r+2), rewritten in G(r, r+2)."""
    if not 1 <= r <= n:
        raise DimensionError('case3_section needs 1 <= r <= n, got n={0}, r={1}'.format(n, r))
    chart = case3(n)
    if r == n:
        return chart
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(7)
    failure = None
    for _ in range(config.retry_limit):
        L = random_subspace(rng, n + 2, r + 2, 9)
        try:
            return section(chart, L, rng, config)
        except GenericityFailure as exc:
            logger.info('section plane rejected: %s', exc)
            failure = exc
    raise failure


def cone_over(c, fixed):
    """cone_embed with T spanned by the last ``fixed + 1`` coordinate points."""
    if fixed < 0:
        return c
    ambient = c.N + fixed + 1
    T = Subspace.coordinate(ambient, range(c.N + 1, ambient + 1))
    return cone_embed(c, T)


def pencils_through_generator(c, t0):
    """
    The number of chart pencils (lines t = const) whose fibers all contain
    the generator spanned by the first r rows at t0.
    """
    values = c.evaluate(0, t0)[:c.r]
    generator = Subspace.span(values, c.N)
    if generator is None or generator.dim != c.r - 1:
        raise BasePointError('generator rows drop rank at t = {0}'.format(t0),
                             params=(Fraction(0), Fraction(t0)))
    forms = []
    for point in generator.matrix:
        for weights in containment_weights(c, point):
            form = linear_combination(weights, c.reduced_plucker)
            if form:
                forms.append(form)
    common = content_gcd(forms)
    if common.is_zero:
        raise GenericityFailure('generator lies in every fiber')
    if common.degree('s') > 0:
        raise GenericityFailure('fibers through the generator do not form pencils')
    if common.is_constant:
        return 0
    return squarefree(common).degree('t')

"""
Charts of congruences and their global invariants.

A chart is an (r+1) x (N+1) matrix of polynomials in (s, t) whose row space
at a parameter is the fiber P^r(s, t).  Every count (order, class, degree)
is a linear condition on the Plucker vector of the chart, so the Plucker
vector is computed once per chart and the Schubert conditions become linear
combinations of its coordinates.  The vector is divided by the gcd of its
coordinates before counting, which removes base curves of the
parametrization.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from congruences import DEFAULT_CONFIG
from congruences.errors import (BasePointError, DegenerateCongruence, DimensionError,
                                GenericityFailure)
from congruences.exactlin import (Subspace, meet, pair_functional, plucker_indices,
                                  random_rational, random_subspace, random_vector, rank,
                                  ring_determinant)
from congruences.polyalg import (BiPoly, FINITE, SolutionCount, content_gcd, count_solutions,
                                 linear_combination)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bidegree(object):
    order: int
    class_: int

    def as_dict(self):
        return {'order': self.order, 'class': self.class_}


@dataclass(frozen=True, eq=True)
class Chart(object):
    r: int
    N: int
    rows: tuple
    declared_birational: bool = field(default=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(e if isinstance(e, BiPoly) else BiPoly.constant(e) for e in row)
                     for row in self.rows)
        object.__setattr__(self, 'rows', rows)
        if len(rows) != self.r + 1:
            raise DimensionError('chart for r={0} needs {1} rows, got {2}'.format(
                self.r, self.r + 1, len(rows)))
        if any(len(row) != self.N + 1 for row in rows):
            raise DimensionError('chart rows must have {0} entries'.format(self.N + 1))

    @cached_property
    def plucker(self):
        """Raw maximal minors, in lexicographic column-subset order."""
        minors = []
        for subset in plucker_indices(self.r, self.N):
            block = [[row[j].element for j in subset] for row in self.rows]
            minors.append(BiPoly(ring_determinant(block, lambda a, b: a.exquo(b))))
        return tuple(minors)

    @cached_property
    def base_factor(self):
        return content_gcd(self.plucker).monic()

    @cached_property
    def reduced_plucker(self):
        factor = self.base_factor
        if factor.is_constant:
            return self.plucker
        return tuple(p.exquo(factor) for p in self.plucker)

    @cached_property
    def completions(self):
        """
        The reduced Plucker vector in the four affine charts of P^1 x P^1,
        each with the extra equations selecting the part at infinity.
        """
        s, t = BiPoly.s(), BiPoly.t()
        affine = self.reduced_plucker
        ds = max(p.degree('s') for p in affine)
        dt = max(p.degree('t') for p in affine)

        def strip(vector):
            factor = content_gcd(vector)
            return tuple(p.exquo(factor) for p in vector)

        at_s = strip(tuple(p.invert('s', ds) for p in affine))
        at_t = strip(tuple(p.invert('t', dt) for p in affine))
        at_both = strip(tuple(p.invert('s', ds).invert('t', dt) for p in affine))
        return ((affine, ()), (at_s, (s,)), (at_t, (t,)), (at_both, (s, t)))

    def evaluate(self, s0, t0):
        return tuple(tuple(e.evaluate(s0, t0) for e in row) for row in self.rows)

    def __repr__(self):
        return '<Chart r={0} N={1}>'.format(self.r, self.N)


def eval_chart(c, s0, t0):
    values = c.evaluate(s0, t0)
    if rank(values) != c.r + 1:
        raise BasePointError('chart rows drop rank at (s, t) = ({0}, {1})'.format(s0, t0),
                             params=(Fraction(s0), Fraction(t0)))
    return Subspace.span(values, c.N)


def random_parameters(rng, height):
    return random_rational(rng, height), random_rational(rng, height)


def regular_parameters(c, rng, height, attempts=50):
    for _ in range(attempts):
        s0, t0 = random_parameters(rng, height)
        if rank(c.evaluate(s0, t0)) == c.r + 1:
            return s0, t0
    raise BasePointError('no regular parameter found in {0} draws'.format(attempts))


def containment_weights(c, x):
    """
    Weights over the Plucker indices of the maximal minors of [rows; x],
    each expanded along its last row: x lies in the fiber iff all vanish.
    """
    index = {subset: i for i, subset in enumerate(plucker_indices(c.r, c.N))}
    forms = []
    for columns in combinations(range(c.N + 1), c.r + 2):
        weights = [Fraction(0)] * len(index)
        for position, j in enumerate(columns):
            if not x[j]:
                continue
            rest = columns[:position] + columns[position + 1:]
            sign = 1 if (c.r + 3 + position) % 2 == 0 else -1
            weights[index[rest]] += sign * Fraction(x[j])
        if any(weights):
            forms.append(tuple(weights))
    return forms


def completions_forms(c, x):
    """The containment minors of x as polynomials, one list per affine chart."""
    weights = containment_weights(c, x)
    result = []
    for vector, _ in c.completions:
        forms = [linear_combination(w, vector) for w in weights]
        result.append([f for f in forms if f])
    return result


def _combine(weight_list, coefficients):
    total = [Fraction(0)] * len(weight_list[0])
    for c, weights in zip(coefficients, weight_list):
        for i, w in enumerate(weights):
            if w:
                total[i] += c * w
    return tuple(total)


def _random_combination(weight_list, rng, height):
    return _combine(weight_list, [rng.randint(-height, height) or 1 for _ in weight_list])


def count_on_chart(c, forms, p_weights, q_weights, check_infinity=True):
    """
    Count parameters where the linear forms ``p_weights``, ``q_weights`` and
    every form of ``forms`` vanish on the reduced Plucker vector, over the
    affine chart and (optionally) the lines at infinity.
    """
    completions = c.completions if check_infinity else c.completions[:1]
    with_multiplicity, distinct = 0, 0
    for vector, at_infinity in completions:
        p = linear_combination(p_weights, vector)
        q = linear_combination(q_weights, vector)
        validators = [linear_combination(w, vector) for w in forms]
        validators = [v for v in validators if v] + list(at_infinity)
        excluded = [x for x in vector if x]
        count = count_solutions(p, q, validators, excluded)
        if not count.is_finite:
            return count
        with_multiplicity += count.count_with_multiplicity
        distinct += count.distinct_count
    return SolutionCount(FINITE, with_multiplicity, distinct)


def _require_codimension_two(c):
    if c.N != c.r + 2:
        raise DimensionError('order and class need N = r + 2, got r={0}, N={1}'.format(c.r, c.N))


def _agreeing_draws(draw, config, label):
    """
    Repeat ``draw`` until two results agree.  ``draw`` returns None for a
    degenerate draw.  Returns (value, number_of_non_degenerate_draws).
    """
    seen = []
    for attempt in range(config.retry_limit + 1):
        value = draw()
        if value is None:
            logger.info('%s: degenerate draw %s, redrawing', label, attempt)
            continue
        if value in seen:
            return value, len(seen) + 1
        seen.append(value)
        logger.debug('%s: draw %s gave %s', label, attempt, value)
    if not seen:
        return None, 0
    raise GenericityFailure('{0}: random draws disagree ({1}) after {2} retries'.format(
        label, ', '.join(str(v) for v in seen), config.retry_limit))


def order_draw(c, rng, config):
    height = config.rational_height_bound
    point = random_vector(rng, c.N + 1, height)
    forms = containment_weights(c, point)
    p = _random_combination(forms, rng, height)
    q = _random_combination(forms, rng, height)
    return count_on_chart(c, forms, p, q, config.check_infinity)


def order(c, rng=None, config=None):
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng()
    _require_codimension_two(c)

    def draw():
        count = order_draw(c, rng, config)
        if not count.is_finite or count.count_with_multiplicity == 0:
            return None
        return count.count_with_multiplicity

    value, _ = _agreeing_draws(draw, config, 'order')
    if value is None:
        raise DegenerateCongruence('every point draw meets the congruence degenerately: '
                                   'the fibers do not fill P^{0}'.format(c.N))
    return value


def class_draw(c, rng, config):
    height = config.rational_height_bound
    plane = random_subspace(rng, c.N, 2, height).matrix
    forms = [pair_functional(c.N, plane[a], plane[b]) for a, b in combinations(range(3), 2)]
    p = _random_combination(forms, rng, height)
    q = _random_combination(forms, rng, height)
    return count_on_chart(c, forms, p, q, config.check_infinity)


def class_(c, rng=None, config=None):
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(1)
    _require_codimension_two(c)

    def draw():
        count = class_draw(c, rng, config)
        return count.count_with_multiplicity if count.is_finite else None

    value, _ = _agreeing_draws(draw, config, 'class')
    if value is None:
        raise GenericityFailure('class: every plane draw meets the congruence in a curve')
    return value


def bidegree(c, rng=None, config=None):
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng()
    return Bidegree(order(c, rng, config), class_(c, rng, config))


def check_birational(c, rng=None, config=None):
    """Count preimages of the Plucker image of one random parameter; 1 means birational."""
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(2)
    height = config.rational_height_bound
    s0, t0 = regular_parameters(c, rng, height)
    vector = c.reduced_plucker
    target = [p.evaluate(s0, t0) for p in vector]
    pivot = next(i for i, x in enumerate(target) if x)
    equations = [vector[i] * target[pivot] - vector[pivot] * target[i]
                 for i in range(len(vector)) if i != pivot]
    equations = [e for e in equations if e]
    if not equations:
        return False
    p = linear_combination([rng.randint(1, height) for _ in equations], equations)
    q = linear_combination([rng.randint(1, height) for _ in equations], equations)
    count = count_solutions(p, q, equations, [x for x in vector if x])
    logger.debug('birationality check at (%s, %s): %s', s0, t0, count)
    return count.is_finite and count.distinct_count == 1


def plucker_degree(c, rng=None, config=None):
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(3)
    if not check_birational(c, rng, config):
        if c.declared_birational:
            raise GenericityFailure('chart declared birational but a random image point '
                                    'has several preimages')
        raise GenericityFailure('plucker_degree needs a birational chart')
    height = config.rational_height_bound
    size = len(c.reduced_plucker)

    def draw():
        p = tuple(Fraction(rng.randint(-height, height)) for _ in range(size))
        q = tuple(Fraction(rng.randint(-height, height)) for _ in range(size))
        count = count_on_chart(c, [], p, q, config.check_infinity)
        return count.count_with_multiplicity if count.is_finite else None

    value, _ = _agreeing_draws(draw, config, 'plucker degree')
    if value is None:
        raise GenericityFailure('plucker degree: linear sections are never finite')
    return value


def _pair_forms(c, basis):
    """d(i, j) = det[rows; basis_i; basis_j] as polynomials, antisymmetric."""
    forms = {}
    for i, j in combinations(range(len(basis)), 2):
        value = linear_combination(pair_functional(c.N, basis[i], basis[j]), c.reduced_plucker)
        forms[(i, j)] = value
        forms[(j, i)] = -value
    return forms


def section(c, L, rng=None, config=None):
    """
    The congruence of intersections P^r(s, t) n L, written in the
    coordinates of L = P^(l+2) given by the rows of L's echelon matrix.
    """
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(4)
    _require_codimension_two(c)
    if L.ambient_dim != c.N:
        raise DimensionError('section subspace lives in P^{0}, chart in P^{1}'.format(
            L.ambient_dim, c.N))
    l = L.dim - 2
    if not 1 <= l < c.r:
        raise DimensionError('section needs 1 <= l < r, got l={0}, r={1}'.format(l, c.r))

    for _ in range(3):
        s0, t0 = regular_parameters(c, rng, config.rational_height_bound)
        cut = meet(eval_chart(c, s0, t0), L)
        if cut is None or cut.dim != l:
            raise GenericityFailure('section plane meets the fiber at ({0}, {1}) in dimension '
                                    '{2}, expected {3}'.format(s0, t0, -1 if cut is None else cut.dim, l))

    basis = L.matrix
    d = _pair_forms(c, basis)
    nonzero = [key for key in sorted(d) if key[0] < key[1] and d[key]]
    if not nonzero:
        raise GenericityFailure('section plane meets every fiber in excess dimension')

    # parameters where the cut jumps dimension are common zeros of all d(i, j)
    height = config.rational_height_bound
    forms = [d[key] for key in nonzero]
    p = linear_combination([rng.randint(1, height) for _ in forms], forms)
    q = linear_combination([rng.randint(1, height) for _ in forms], forms)
    jumps = count_solutions(p, q, forms, [x for x in c.reduced_plucker if x])
    if not jumps.is_finite or jumps.distinct_count:
        raise GenericityFailure('section plane is special: {0} fibers meet it in excess '
                                'dimension'.format(jumps.distinct_count or 'infinitely many'))

    a, b = nonzero[0]
    zero = BiPoly()
    rows = []
    for k in range(len(basis)):
        if k in (a, b):
            continue
        row = [zero] * len(basis)
        row[a] = d[(b, k)]
        row[b] = -d[(a, k)]
        row[k] = d[(a, b)]
        factor = content_gcd(row)
        rows.append(tuple(e.exquo(factor) for e in row))
    result = Chart(l, l + 2, tuple(rows), c.declared_birational)
    regular_parameters(result, rng, height)
    return result


def fixed_locus(c, rng=None, config=None, samples=None):
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(5)
    height = config.rational_height_bound
    samples = samples or 2 * (c.N + 1) + config.retry_limit
    candidate = eval_chart(c, *regular_parameters(c, rng, height))
    stable = 0
    for _ in range(samples):
        fiber = eval_chart(c, *regular_parameters(c, rng, height))
        cut = meet(candidate, fiber)
        if cut is None:
            return None
        if cut == candidate:
            stable += 1
            if stable >= 2 and is_fixed(c, candidate):
                return candidate
        else:
            stable = 0
            candidate = cut
    logger.info('fixed locus candidate %r did not verify symbolically', candidate)
    return None


def is_fixed(c, T):
    """True iff every point of T lies in every fiber, as polynomial identities."""
    for point in T.matrix:
        for weights in containment_weights(c, point):
            if linear_combination(weights, c.reduced_plucker):
                return False
    return True


def cone_embed(c, T):
    """Join every fiber of a chart over G(k, k+2) with T in P^(r+2), r = k + dim T + 1."""
    if T is None:
        return c
    _require_codimension_two(c)
    columns = T.complement_coordinates()
    if len(columns) != c.N + 1:
        raise DimensionError('T of dimension {0} in P^{1} leaves a P^{2}, chart needs '
                             'P^{3}'.format(T.dim, T.ambient_dim, len(columns) - 1, c.N))
    zero = BiPoly()
    rows = []
    for row in c.rows:
        embedded = [zero] * (T.ambient_dim + 1)
        for j, entry in zip(columns, row):
            embedded[j] = entry
        rows.append(tuple(embedded))
    for point in T.matrix:
        rows.append(tuple(BiPoly.constant(x) for x in point))
    return Chart(c.r + T.dim + 1, T.ambient_dim, tuple(rows), c.declared_birational)


def is_degenerate(c, rng=None, config=None):
    try:
        order(c, rng, config)
    except DegenerateCongruence:
        return True
    return False


def reparametrize(c, a, b, c_, d):
    """Substitute s -> a*s + b, t -> c_*t + d."""
    rows = tuple(tuple(e.compose(s=(a, b), t=(c_, d)) for e in row) for row in c.rows)
    return Chart(c.r, c.N, rows, c.declared_birational)


def change_coordinates(c, g):
    """Apply the projective transformation x -> x.g to every fiber."""
    rows = []
    for row in c.rows:
        rows.append(tuple(linear_combination([g[i][j] for i in range(c.N + 1)], row)
                          for j in range(c.N + 1)))
    return Chart(c.r, c.N, tuple(rows), c.declared_birational)


def mix_rows(c, g):
    """Replace the rows by the combinations g.rows (g invertible, constant)."""
    rows = tuple(tuple(linear_combination(g[i], [row[j] for row in c.rows])
                       for j in range(c.N + 1)) for i in range(c.r + 1))
    return Chart(c.r, c.N, rows, c.declared_birational)


def jacobian_rank(c, s0, t0):
    """Projective rank of the differential of the Plucker map at (s0, t0)."""
    vector = c.reduced_plucker
    value = [p.evaluate(s0, t0) for p in vector]
    ds = [p.diff('s').evaluate(s0, t0) for p in vector]
    dt = [p.diff('t').evaluate(s0, t0) for p in vector]
    return rank([value, ds, dt]) - 1

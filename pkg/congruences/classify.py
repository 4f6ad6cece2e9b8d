"""
Classification of congruences of order one in G(r, r+2).

The decision runs on the fixed-point-free reduction of the chart: cut by a
complement of the fixed locus, then read the case from the generic rank of
the focal quadric.  Rank three or more is case I; a double hyperplane lying
in one fixed plane is case III; two hyperplanes, one of which stays in a
fixed plane, is case II.  Smoothness then follows from the case: case I is
always smooth, case III is singular at the vertex once the class is at
least two, and case II is smooth iff at most one generator of the focal
scroll lies in the focal plane.
"""
import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from congruences import DEFAULT_CONFIG
from congruences.errors import (BasePointError, DimensionError, FocalError, GenericityFailure,
                                NoFocalPlane, NotOrderOne)
from congruences.exactlin import join, meet, random_rational, random_subspace
from congruences.family import (class_, eval_chart, fixed_locus, jacobian_rank, order,
                                regular_parameters, section)
from congruences.focal import (CONJUGATE_PAIR, IRREDUCIBLE, focal_quadric, quadric_rank, realize,
                               split_quadric)
from congruences.polyalg import content_gcd, linear_combination

logger = logging.getLogger(__name__)

CASE_I = 'I'
CASE_II = 'II'
CASE_III = 'III'
PLANE_PENCIL = 'plane_pencil'

SMOOTH = 'smooth'
SINGULAR = 'singular'
UNDETERMINED = 'undetermined'

FOCAL_SAMPLES = 5
_PARAMETER_HEIGHT = 97


@dataclass
class Report(object):
    r: int
    order: int
    class_: int
    fixed_dim: int
    case_tag: str
    focal_summary: dict
    smooth: str
    diagnostics: list = field(default_factory=list)

    @property
    def reduced_r(self):
        return self.r - self.fixed_dim - 1

    def as_dict(self):
        data = asdict(self)
        data['class'] = data.pop('class_')
        data['reduced_r'] = self.reduced_r
        return data


def predicted_verdicts(n, r, s):
    """Smoothness verdicts possible for class n in G(r, r+2) with an s-dimensional fixed locus."""
    if n < r - s - 1:
        return frozenset()
    if n <= r - s:
        return frozenset([SMOOTH])
    return frozenset([SMOOTH, SINGULAR])


def _parameters(rng):
    return random_rational(rng, _PARAMETER_HEIGHT), random_rational(rng, _PARAMETER_HEIGHT)


def _focal_at_random(c, rng, attempts=40):
    for _ in range(attempts):
        s0, t0 = _parameters(rng)
        try:
            return focal_quadric(c, s0, t0, rng)
        except (BasePointError, FocalError) as exc:
            logger.debug('skipping focal sample: %s', exc)
    raise GenericityFailure('no regular fiber with a focal quadric in {0} draws'.format(attempts))


def generic_focal_rank(c, rng, samples=FOCAL_SAMPLES):
    """Max focal rank over the samples, with two more draws when the samples disagree."""
    quadrics = [_focal_at_random(c, rng) for _ in range(samples)]
    ranks = [quadric_rank(q) for q in quadrics]
    if len(set(ranks)) > 1:
        logger.info('focal ranks disagree across samples: %s', ranks)
        extra = [_focal_at_random(c, rng) for _ in range(2)]
        quadrics += extra
        ranks += [quadric_rank(q) for q in extra]
    best = max(range(len(ranks)), key=lambda i: ranks[i])
    return ranks[best], quadrics[best]


def _linear_components(q):
    split = split_quadric(q)
    if split.kind in (IRREDUCIBLE, CONJUGATE_PAIR):
        return None
    components = [realize(q, covector) for covector in split.hyperplanes]
    return [x for x in components if x is not None]


def recover_focal_plane(c, rng=None, config=None):
    """
    The r-plane containing one linear focal component of every fiber.
    Components of two fibers are joined pairwise; a join of dimension r is
    accepted when every other sampled fiber has a component inside it.
    """
    plane, _ = _recover_focal_plane(c, rng, config)
    return plane


def _recover_focal_plane(c, rng=None, config=None):
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(8)
    needed = c.r + 3
    samples, skipped = [], 0
    for _ in range(12 * needed):
        if len(samples) >= needed:
            break
        components = _linear_components(_focal_at_random(c, rng))
        if components is None:
            skipped += 1
            continue
        samples.append(components)
    if len(samples) < needed:
        raise NoFocalPlane('only {0} of {1} fibers split into linear focal components '
                           '({2} did not)'.format(len(samples), needed, skipped))

    first, second, rest = samples[0], samples[1], samples[2:]
    for a in first:
        for b in second:
            candidate = join(a, b)
            if candidate is None or candidate.dim != c.r:
                continue
            if all(any(candidate.contains(x) for x in components) for components in rest):
                logger.debug('focal plane %r verified on %s fibers', candidate, len(samples))
                return candidate, samples
    raise NoFocalPlane('no r-plane carries a focal component of every sampled fiber')


def sweeping_fibers(plane, samples):
    """Sampled fibers with a focal component outside the plane; case II needs one on every fiber."""
    return sum(1 for components in samples if any(not plane.contains(x) for x in components))


def _valuation(poly, var):
    index = 0 if var == 's' else 1
    return min(monomial[index] for monomial, _ in poly.terms())


def _collapse_polynomial(rows, covectors):
    values = [linear_combination(h, row) for h in covectors for row in rows]
    return content_gcd([v for v in values if v])


def generators_in_plane(c, plane):
    """
    Number of generators lying in the focal plane, with multiplicity: the
    parameter curves whose fibers all collapse onto the plane, i.e. the
    common factor of h(row) over the equations h of the plane, together
    with the lines at infinity.
    """
    covectors = plane.annihilator()
    common = _collapse_polynomial(c.rows, covectors)
    if common.is_zero:
        raise GenericityFailure('every fiber lies in the focal plane')
    count = 0 if common.is_constant else common.total_degree
    for var in ('s', 't'):
        inverted = []
        for row in c.rows:
            degree = max(e.degree(var) for e in row)
            inverted.append(tuple(e.invert(var, degree) for e in row))
        at_infinity = _collapse_polynomial(inverted, covectors)
        if not at_infinity.is_zero:
            count += _valuation(at_infinity, var)
    return count


def jacobian_check(c, rng=None, samples=25, config=None):
    """True iff the Plucker map has differential rank 2 at ``samples`` random parameters."""
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(9)
    for _ in range(samples):
        s0, t0 = regular_parameters(c, rng, config.rational_height_bound)
        value = jacobian_rank(c, s0, t0)
        if value != 2:
            logger.info('jacobian rank %s at (%s, %s)', value, s0, t0)
            return False
    return True


def _reduce(c, T, rng, config):
    """Cut c by a random complement of its fixed locus T."""
    reduced_dim = c.r - T.dim - 1
    failure = None
    for _ in range(config.retry_limit):
        L = random_subspace(rng, c.N, reduced_dim + 2, 9)
        if meet(L, T) is not None:
            continue
        try:
            return section(c, L, rng, config)
        except GenericityFailure as exc:
            logger.info('complement of the fixed locus rejected: %s', exc)
            failure = exc
    raise failure or GenericityFailure('no complement of the fixed locus found')


def classify(c, rng=None, config=None, check_jacobian=False):
    config = config or DEFAULT_CONFIG
    rng = rng or config.rng(10)
    if c.N != c.r + 2:
        raise DimensionError('classify needs a chart in G(r, r+2), got r={0}, N={1}'.format(
            c.r, c.N))

    value = order(c, config=config)
    if value != 1:
        raise NotOrderOne('congruence has order {0}'.format(value))

    T = fixed_locus(c, config=config)
    fixed_dim = -1 if T is None else T.dim
    diagnostics = []
    if fixed_dim == c.r - 1:
        logger.info('fixed locus is a P^%s: plane of r-planes through it', fixed_dim)
        return Report(c.r, 1, class_(c, config=config), fixed_dim, PLANE_PENCIL,
                      {'rank': 0, 'split': None}, SMOOTH, diagnostics)

    reduced = c if T is None else _reduce(c, T, rng, config)
    rank, quadric = generic_focal_rank(reduced, rng)
    split = split_quadric(quadric).kind
    summary = {'rank': rank, 'split': split}
    n = class_(reduced, config=config)

    plane = None
    if rank >= 3:
        case = CASE_I
    else:
        samples = []
        try:
            plane, samples = _recover_focal_plane(reduced, rng, config)
        except NoFocalPlane as exc:
            logger.info('no fixed focal plane: %s', exc)
        if plane is not None:
            case = CASE_III if rank == 1 else CASE_II
            if case == CASE_II:
                summary['sweeping_fibers'] = sweeping_fibers(plane, samples)
                if not summary['sweeping_fibers']:
                    diagnostics.append('second focal component stays in the focal plane')
                    plane = None
        elif rank == 2 and reduced.r == 1:
            case = CASE_I
        else:
            case = CASE_III if rank == 1 else CASE_II
            diagnostics.append('reducible focal quadric without a fixed focal plane')

    if case == CASE_I:
        verdict = SMOOTH
    elif case == CASE_III:
        verdict = SINGULAR if n >= 2 else SMOOTH
    elif plane is None:
        verdict = UNDETERMINED
    else:
        collapsed = generators_in_plane(reduced, plane)
        summary['generators_in_plane'] = collapsed
        verdict = SMOOTH if collapsed <= 1 else SINGULAR
    logger.info('classified as case %s, class %s, %s', case, n, verdict)

    # the verdict table covers non-cones; case III is singular at its vertex
    allowed = predicted_verdicts(n, c.r, fixed_dim)
    if case != CASE_III and verdict != UNDETERMINED and verdict not in allowed:
        diagnostics.append('verdict {0} not allowed for class {1} with r={2}, s={3}'.format(
            verdict, n, c.r, fixed_dim))
    if n < c.r - fixed_dim - 2:
        diagnostics.append('class {0} below r - s - 1 = {1}'.format(n, c.r - fixed_dim - 2))
    if check_jacobian and not jacobian_check(reduced, rng, config=config):
        diagnostics.append('plucker map drops rank at a random parameter')

    return Report(c.r, 1, n, fixed_dim, case, summary, verdict, diagnostics)


def fiber_meets_plane(c, plane, s0, t0):
    """Dimension of the fiber over (s0, t0) meeting the plane; -1 when disjoint."""
    cut = meet(eval_chart(c, Fraction(s0), Fraction(t0)), plane)
    return -1 if cut is None else cut.dim

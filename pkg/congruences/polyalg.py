"""
Bivariate polynomials over Q in the chart parameters (s, t) and the
elimination kernel used to count intersections.

``BiPoly`` wraps a sympy sparse ``PolyElement`` of QQ[s, t]; scalars cross
the boundary as ``fractions.Fraction``.  Resultants come from a Sylvester
matrix reduced by Bareiss elimination over Q[t].  ``count_solutions`` works
one irreducible factor of the resultant at a time, inside the residue field
K = Q[t]/(f), so irrational solutions are counted by degree and never
approximated.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from congruences.errors import EliminationError
from congruences.exactlin import ring_determinant

logger = logging.getLogger(__name__)

_R, _S, _T = ring('s,t', QQ)
_U, _X = ring('x', QQ)

FINITE = 'finite'
POSITIVE_DIMENSIONAL = 'positive_dimensional'

# shears t -> t + c*s tried until the projection separates the solutions
_SHEARS = (0, 1, -1, 2, -2, 3, 5, -7, 11, 13, -17, 19)


def qq(value):
    if isinstance(value, int):
        return QQ(value)
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value):
    return Fraction(int(value.numerator), int(value.denominator))


class BiPoly(object):
    __slots__ = ('_p',)

    def __init__(self, element=None):
        self._p = _R.zero if element is None else element

    @classmethod
    def from_terms(cls, terms):
        """Build from a mapping {(deg_s, deg_t): rational}."""
        data = {}
        for (i, j), c in dict(terms).items():
            if c:
                data[(int(i), int(j))] = qq(c)
        return cls(_R.from_dict(data) if data else _R.zero)

    @classmethod
    def constant(cls, value):
        return cls.from_terms({(0, 0): value})

    @classmethod
    def s(cls):
        return cls(_S)

    @classmethod
    def t(cls):
        return cls(_T)

    @property
    def element(self):
        return self._p

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            return other._p
        return _R.ground_new(qq(other))

    def __add__(self, other):
        return BiPoly(self._p + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return BiPoly(self._p - self._coerce(other))

    def __rsub__(self, other):
        return BiPoly(self._coerce(other) - self._p)

    def __neg__(self):
        return BiPoly(-self._p)

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            return BiPoly(self._p * other._p)
        return BiPoly(self._p.mul_ground(qq(other)))

    __rmul__ = __mul__

    def __pow__(self, exponent):
        return BiPoly(self._p ** exponent)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self._p == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms()))

    def __bool__(self):
        return bool(self._p)

    @property
    def is_zero(self):
        return not self._p

    @property
    def is_constant(self):
        return self._p.is_ground

    def degree(self, var):
        if not self._p:
            return -1
        return self._p.degree(_S if var == 's' else _T)

    @property
    def total_degree(self):
        if not self._p:
            return -1
        return max(i + j for i, j in self._p.itermonoms())

    def terms(self):
        """Sorted list of ((deg_s, deg_t), Fraction)."""
        return sorted(((tuple(m), from_qq(c)) for m, c in self._p.iterterms()))

    def diff(self, var):
        return BiPoly(self._p.diff(_S if var == 's' else _T))

    def evaluate(self, s0, t0):
        s0, t0 = Fraction(s0), Fraction(t0)
        total = Fraction(0)
        for (i, j), c in self._p.iterterms():
            total += from_qq(c) * s0 ** i * t0 ** j
        return total

    def gcd(self, other):
        if not self._p:
            return other
        if not other._p:
            return self
        return BiPoly(self._p.gcd(other._p))

    def exquo(self, other):
        return BiPoly(self._p.exquo(other._p))

    def divides(self, other):
        if not other._p:
            return True
        return not other._p.rem(self._p)

    def factors(self):
        """Distinct irreducible factors over Q; constants have none."""
        if self.is_constant:
            return []
        _, factors = self._p.factor_list()
        return [BiPoly(f) for f, _ in factors]

    def monic(self):
        if not self._p:
            return self
        return BiPoly(self._p.monic())

    def swap(self):
        return BiPoly(_R.from_dict({(j, i): c for (i, j), c in self._p.iterterms()})
                      if self._p else _R.zero)

    def shear(self, c):
        """Substitute t -> t + c*s."""
        if not c or not self._p:
            return self
        return self.compose(s=(1, 0), t=(Fraction(c), 1), affine=False)

    def compose(self, s=(1, 0), t=(1, 0), affine=True):
        """
        Affine substitution.  With ``affine`` the pairs mean s -> a*s + b and
        t -> c*t + d; otherwise ``t=(c, d)`` means t -> c*s + d*t (a shear).
        """
        if affine:
            new_s = _S * qq(s[0]) + qq(s[1])
            new_t = _T * qq(t[0]) + qq(t[1])
        else:
            new_s = _S
            new_t = _S * qq(t[0]) + _T * qq(t[1])
        result = _R.zero
        for (i, j), c in self._p.iterterms():
            result += (new_s ** i) * (new_t ** j) * c
        return BiPoly(result)

    def invert(self, var, degree):
        """var -> 1/var, multiplied through by var**degree (degree >= deg_var)."""
        data = {}
        for (i, j), c in self._p.iterterms():
            key = (degree - i, j) if var == 's' else (i, degree - j)
            data[key] = c
        return BiPoly(_R.from_dict(data) if data else _R.zero)

    def univariate(self, var):
        """Coefficients in ``var`` as a list of polynomials in the other variable."""
        index = 0 if var == 's' else 1
        coefficients = [_U.zero] * (max(self.degree(var), 0) + 1)
        for monom, c in self._p.iterterms():
            coefficients[monom[index]] += _U.from_dict({(monom[1 - index],): c})
        return coefficients

    @classmethod
    def from_univariate(cls, element, var):
        data = {}
        for (k,), c in element.iterterms():
            data[(k, 0) if var == 's' else (0, k)] = c
        return cls(_R.from_dict(data) if data else _R.zero)

    def __repr__(self):
        return 'BiPoly({0})'.format(str(self._p) if self._p else '0')


def add(p, q):
    return p + q


def mul(p, q):
    return p * q


def partial_derivative(p, var):
    return p.diff(var)


def evaluate(p, s0, t0):
    return p.evaluate(s0, t0)


def linear_combination(weights, polys):
    total = _R.zero
    for w, p in zip(weights, polys):
        if w and p:
            total += p.element.mul_ground(qq(w))
    return BiPoly(total)


def content_gcd(polys):
    return reduce(lambda a, b: a.gcd(b), polys, BiPoly())


def _other(var):
    return 't' if var == 's' else 's'


def sylvester_matrix(a, b):
    """Sylvester matrix of two coefficient lists (low degree first)."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [_U.zero] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [_U.zero] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    return rows


def resultant(p, q, eliminate='s'):
    if p.degree(eliminate) < 1 or q.degree(eliminate) < 1:
        raise EliminationError('resultant needs positive degree in {0}: got {1} and {2}'.format(
            eliminate, p.degree(eliminate), q.degree(eliminate)))
    rows = sylvester_matrix(p.univariate(eliminate), q.univariate(eliminate))
    det = ring_determinant(rows, lambda x, y: x.exquo(y))
    return BiPoly.from_univariate(det, _other(eliminate))


def squarefree(p):
    if p.is_zero:
        raise EliminationError('squarefree part of the zero polynomial')
    if p.degree('s') > 0 and p.degree('t') > 0:
        raise EliminationError('squarefree expects a univariate polynomial')
    var = 's' if p.degree('s') > 0 else 't'
    if p.is_constant:
        return BiPoly.constant(1)
    derivative = p.diff(var)
    return p.exquo(p.gcd(derivative)).monic()


@dataclass(frozen=True)
class SolutionCount(object):
    kind: str
    count_with_multiplicity: int = 0
    distinct_count: int = 0

    @property
    def is_finite(self):
        return self.kind == FINITE


class _ResidueField(object):
    """Arithmetic in Q[x]/(f) for an irreducible f, and in (Q[x]/(f))[y]."""

    def __init__(self, modulus):
        self.modulus = modulus

    def reduce(self, a):
        return a.rem(self.modulus)

    def inverse(self, a):
        s, _, h = a.gcdex(self.modulus)
        return (s.quo_ground(h.LC)).rem(self.modulus)

    def lift(self, coefficients):
        poly = [self.reduce(c) for c in coefficients]
        return self.trim(poly)

    @staticmethod
    def trim(poly):
        while poly and not poly[-1]:
            poly.pop()
        return poly

    def monic(self, poly):
        inv = self.inverse(poly[-1])
        return [self.reduce(c * inv) for c in poly]

    def rem(self, a, b):
        a = list(a)
        while len(a) >= len(b) and a:
            lead = a[-1]
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = self.reduce(a[shift + i] - lead * c)
            a.pop()
            self.trim(a)
        return a

    def quo(self, a, b):
        a = list(a)
        quotient = [_U.zero] * max(len(a) - len(b) + 1, 0)
        while len(a) >= len(b) and a:
            lead = a[-1]
            shift = len(a) - len(b)
            quotient[shift] = lead
            for i, c in enumerate(b):
                a[shift + i] = self.reduce(a[shift + i] - lead * c)
            a.pop()
            self.trim(a)
        return quotient

    def gcd(self, a, b):
        a, b = self.trim(list(a)), self.trim(list(b))
        while b:
            b = self.monic(b)
            a, b = b, self.rem(a, b)
        return self.monic(a) if a else a

    def derivative(self, poly):
        return self.trim([self.reduce(c * k) for k, c in enumerate(poly)][1:])

    def squarefree(self, poly):
        return self.quo(self.monic(poly), self.gcd(poly, self.derivative(poly)))

    def evaluate(self, poly, point):
        value = _U.zero
        for c in reversed(poly):
            value = self.reduce(value * point + c)
        return value


def _eliminate(p, q, validators, excluded):
    """
    Count solutions by eliminating s.  Returns None when some root of the
    resultant carries more than one solution, finite or at s = infinity
    (the caller then shears).
    """
    res = resultant(p, q, 's')
    if res.is_constant:
        return SolutionCount(FINITE, 0, 0)
    _, factors = res.univariate('s')[0].factor_list()
    pc, qc = p.univariate('s'), q.univariate('s')
    leading = (pc[-1], qc[-1])
    vcs = [v.univariate('s') for v in validators]
    ecs = [e.univariate('s') for e in excluded]
    with_multiplicity, distinct = 0, 0
    for factor, multiplicity in factors:
        degree = factor.degree()
        if degree < 1:
            continue
        field = _ResidueField(factor)
        common = field.gcd(field.lift(pc), field.lift(qc))
        if len(common) < 2:
            # leading-coefficient degeneration, no finite solution over this root
            continue
        common = field.squarefree(common)
        if len(common) > 2:
            return None
        if not any(field.reduce(lc) for lc in leading):
            # both curves also pass through s = infinity over this root
            return None
        root = field.reduce(-common[0])
        if any(field.evaluate(field.lift(vc), root) for vc in vcs):
            continue
        if ecs and not any(field.evaluate(field.lift(ec), root) for ec in ecs):
            continue
        distinct += degree
        with_multiplicity += multiplicity * degree
    return SolutionCount(FINITE, with_multiplicity, distinct)


def count_solutions(p, q, validators=(), excluded=()):
    """
    Count the affine solutions of p = q = 0 at which every validator
    vanishes, dropping points where all ``excluded`` polynomials vanish
    (chart base points).
    """
    if p.is_zero or q.is_zero:
        return SolutionCount(POSITIVE_DIMENSIONAL)
    if not p.gcd(q).is_constant:
        return SolutionCount(POSITIVE_DIMENSIONAL)
    if p.is_constant or q.is_constant:
        return SolutionCount(FINITE, 0, 0)
    validators, excluded = list(validators), list(excluded)
    for shear in _SHEARS:
        system = [x.shear(shear) for x in [p, q] + validators + excluded]
        ps, qs = system[0], system[1]
        if ps.degree('s') < 1 or qs.degree('s') < 1:
            continue
        count = _eliminate(ps, qs, system[2:2 + len(validators)], system[2 + len(validators):])
        if count is not None:
            return count
        logger.debug('shear %s does not separate solutions, retrying', shear)
    raise EliminationError('could not separate the solutions by a shear')

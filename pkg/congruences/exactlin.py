"""
Exact linear algebra over the rationals.

Scalars are ``fractions.Fraction`` values; matrices are tuples of row tuples.
Projective subspaces keep their spanning matrix in reduced row echelon form,
so two ``Subspace`` objects compare equal exactly when they span the same
space.  Ranks and determinants go through fraction-free (Bareiss)
elimination, which is generic over any exact ring and is reused by
``polyalg`` for matrices of polynomials.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import comb, gcd

from congruences.errors import AmbientMismatch, DimensionError

logger = logging.getLogger(__name__)

Rat = Fraction


def to_rat(value):
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def matrix(rows):
    return tuple(tuple(to_rat(x) for x in row) for row in rows)


def _lcm(a, b):
    return a * b // gcd(a, b)


def integral_rows(rows):
    """Scale every row by the lcm of its denominators; rank is unchanged."""
    scaled, factors = [], []
    for row in rows:
        row = [to_rat(x) for x in row]
        factor = reduce(_lcm, (x.denominator for x in row), 1)
        scaled.append([x.numerator * (factor // x.denominator) for x in row])
        factors.append(factor)
    return scaled, factors


def bareiss(rows, exact_div=None):
    """
    Fraction-free row echelon form.

    Works over any exact ring whose zero is falsy: ints, Fractions and sympy
    ``PolyElement`` values all qualify.  ``exact_div(a, b)`` must return the
    exact quotient; every division performed here is exact because the
    entries after step k are (k+1)-minors of the input.

    Returns ``(echelon, pivot_columns, sign)`` where ``sign`` records row swaps.
    """
    if exact_div is None:
        exact_div = lambda a, b: a // b
    m = [list(row) for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    sign = 1
    prev = None
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        pivot = next((i for i in range(row, nrows) if m[i][col]), None)
        if pivot is None:
            continue
        if pivot != row:
            m[row], m[pivot] = m[pivot], m[row]
            sign = -sign
        lead = m[row][col]
        for i in range(row + 1, nrows):
            below = m[i][col]
            for j in range(col + 1, ncols):
                elt = lead * m[i][j] - below * m[row][j]
                if prev is not None:
                    elt = exact_div(elt, prev)
                m[i][j] = elt
            m[i][col] = below - below
        prev = lead
        pivots.append(col)
        row += 1
    return m, pivots, sign


def rank(m):
    rows = [row for row in m]
    if not rows or not rows[0]:
        return 0
    scaled, _ = integral_rows(rows)
    _, pivots, _ = bareiss(scaled)
    return len(pivots)


def determinant(m):
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in m):
        raise DimensionError('determinant of a non-square {0}x{1} matrix'.format(n, len(m[0])))
    scaled, factors = integral_rows(m)
    echelon, pivots, sign = bareiss(scaled)
    if len(pivots) < n:
        return Fraction(0)
    return Fraction(sign * echelon[n - 1][n - 1], reduce(lambda a, b: a * b, factors, 1))


def ring_determinant(m, exact_div):
    """Determinant of a square matrix over an exact ring (e.g. polynomials)."""
    n = len(m)
    echelon, pivots, sign = bareiss(m, exact_div)
    if len(pivots) < n:
        return echelon[0][0] - echelon[0][0]
    value = echelon[n - 1][n - 1]
    return value if sign == 1 else -value


def rref(m):
    """Reduced row echelon form over Q, zero rows dropped; returns (rows, pivots)."""
    rows = [[to_rat(x) for x in row] for row in m]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def nullspace(m, ncols=None):
    """Basis of {v : m v = 0} as a tuple of column vectors."""
    if ncols is None:
        ncols = len(m[0])
    reduced, pivots = rref(m) if m else ((), ())
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return tuple(basis)


def mat_mul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
                 for row in a)


def vec_mat(v, m):
    return tuple(sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0))
                 for j in range(len(m[0])))


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def inverse(m):
    n = len(m)
    augmented = [list(row) + [Fraction(int(i == j)) for j in range(n)]
                 for i, row in enumerate(matrix(m))]
    reduced, pivots = rref(augmented)
    if len(reduced) < n or pivots[n - 1] != n - 1:
        raise DimensionError('matrix is singular')
    return tuple(tuple(row[n:]) for row in reduced)


def normalize(vector):
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    lead = next((x for x in vector if x), None)
    if lead is None:
        return tuple(vector)
    return tuple(to_rat(x) / lead for x in vector)


@dataclass(frozen=True)
class Subspace(object):
    """A projective subspace of P^N held by its reduced row echelon spanning matrix."""
    ambient_dim: int
    matrix: tuple

    @classmethod
    def span(cls, rows, ambient_dim=None):
        rows = matrix(rows)
        if ambient_dim is None:
            ambient_dim = len(rows[0]) - 1
        if any(len(row) != ambient_dim + 1 for row in rows):
            raise AmbientMismatch('rows do not live in P^{0}'.format(ambient_dim))
        reduced, _ = rref(rows)
        if not reduced:
            return None
        return cls(ambient_dim, reduced)

    @classmethod
    def point(cls, coords):
        return cls.span([coords])

    @classmethod
    def coordinate(cls, ambient_dim, indices):
        rows = [[int(j == i) for j in range(ambient_dim + 1)] for i in indices]
        return cls.span(rows, ambient_dim)

    @property
    def dim(self):
        return len(self.matrix) - 1

    @property
    def rows(self):
        return self.matrix

    def contains(self, other):
        if other is None:
            return True
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch('P^{0} vs P^{1}'.format(self.ambient_dim, other.ambient_dim))
        return rank(self.matrix + other.matrix) == len(self.matrix)

    def contains_point(self, coords):
        return rank(self.matrix + (matrix([coords])[0],)) == len(self.matrix)

    def annihilator(self):
        """Covectors (hyperplane equations) cutting out the subspace."""
        return nullspace(self.matrix, self.ambient_dim + 1)

    def complement_coordinates(self):
        """Coordinate points spanning a complement: the non-pivot unit vectors."""
        _, pivots = rref(self.matrix)
        return tuple(j for j in range(self.ambient_dim + 1) if j not in pivots)

    def __repr__(self):
        return '<Subspace dim={0} in P^{1}>'.format(self.dim, self.ambient_dim)


def _check_ambient(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch('cannot combine subspaces of P^{0} and P^{1}'.format(
            a.ambient_dim, b.ambient_dim))


def join(a, b):
    if a is None:
        return b
    if b is None:
        return a
    _check_ambient(a, b)
    return Subspace.span(a.matrix + b.matrix, a.ambient_dim)


def meet(a, b):
    """Intersection of two subspaces; None stands for the empty subspace."""
    if a is None or b is None:
        return None
    _check_ambient(a, b)
    normals = a.annihilator()
    if not normals:
        return b
    # y.B must be annihilated by every equation of a
    restricted = tuple(tuple(dot(row, n) for n in normals) for row in b.matrix)
    coefficients = nullspace(tuple(zip(*restricted)), len(b.matrix))
    if not coefficients:
        return None
    return Subspace.span([vec_mat(y, b.matrix) for y in coefficients], a.ambient_dim)


@dataclass(frozen=True)
class PluckerPoint(object):
    r: int
    N: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != comb(self.N + 1, self.r + 1):
            raise DimensionError('expected {0} Plucker coordinates, got {1}'.format(
                comb(self.N + 1, self.r + 1), len(self.coords)))

    def as_dict(self):
        return dict(zip(plucker_indices(self.r, self.N), self.coords))


def plucker_indices(r, N):
    return tuple(combinations(range(N + 1), r + 1))


def maximal_minors(rows):
    cols = len(rows[0])
    k = len(rows)
    return tuple(determinant([[row[j] for j in subset] for row in rows])
                 for subset in combinations(range(cols), k))


def plucker_embed(s):
    coords = normalize(maximal_minors(s.matrix))
    return PluckerPoint(s.dim, s.ambient_dim, coords)


def _signed(lookup, indices):
    if len(set(indices)) < len(indices):
        return Fraction(0)
    order = sorted(range(len(indices)), key=lambda i: indices[i])
    # parity of the sorting permutation
    seen, sign = set(), 1
    for start in range(len(order)):
        if start in seen:
            continue
        length, j = 0, start
        while j not in seen:
            seen.add(j)
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign * lookup[tuple(sorted(indices))]


def plucker_relations(point):
    """
    Values of all Grassmann-Plucker quadrics at ``point``:
    sum_l (-1)^l p[I + j_l] p[J - j_l] for |I| = r, |J| = r + 2.
    """
    lookup = point.as_dict()
    k = point.r + 1
    values = []
    for first in combinations(range(point.N + 1), k - 1):
        for second in combinations(range(point.N + 1), k + 1):
            total = Fraction(0)
            for l, j in enumerate(second):
                rest = second[:l] + second[l + 1:]
                term = _signed(lookup, first + (j,)) * _signed(lookup, rest)
                total += term if l % 2 == 0 else -term
            values.append(total)
    return values


def pair_functional(N, x, y):
    """
    Weights w with det[M; x; y] = sum_c w[c] * P(M)[c] for any (N-1)x(N+1)
    matrix M with Plucker vector P(M) indexed by plucker_indices(N - 2, N).
    Laplace expansion along the last two rows.
    """
    index = {c: i for i, c in enumerate(plucker_indices(N - 2, N))}
    weights = [Fraction(0)] * len(index)
    full = set(range(N + 1))
    for a, b in combinations(range(N + 1), 2):
        minor = to_rat(x[a]) * to_rat(y[b]) - to_rat(x[b]) * to_rat(y[a])
        if not minor:
            continue
        complement = tuple(sorted(full - {a, b}))
        sign = -1 if (a + b) % 2 == 0 else 1
        weights[index[complement]] += sign * minor
    return tuple(weights)


def random_rational(rng, height):
    numerator = rng.randint(-height, height)
    return Fraction(numerator, rng.randint(1, height))


def random_vector(rng, length, height):
    """A random nonzero integral vector; projective points need no denominators."""
    while True:
        v = tuple(Fraction(rng.randint(-height, height)) for _ in range(length))
        if any(v):
            return v


def random_subspace(rng, ambient_dim, dim, height):
    while True:
        rows = [random_vector(rng, ambient_dim + 1, height) for _ in range(dim + 1)]
        if rank(rows) == dim + 1:
            return Subspace.span(rows, ambient_dim)

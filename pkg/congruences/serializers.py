import json
from fractions import Fraction

from congruences.errors import ChartFormatError
from congruences.family import Chart
from congruences.formatting import format_rational
from congruences.polyalg import BiPoly

rathandler = lambda obj: format_rational(obj) if isinstance(obj, Fraction) else None


def parse_rational(text):
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ChartFormatError('expected a rational string, got {0!r}'.format(text))
    num, _, den = text.strip().partition('/')
    try:
        value = Fraction(int(num), int(den)) if den else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ChartFormatError('malformed rational {0!r}'.format(text))
    return value


def poly_to_records(p):
    return [[ds, dt, format_rational(c)] for (ds, dt), c in p.terms()]


def poly_from_records(records):
    terms = {}
    for record in records:
        if not isinstance(record, list) or len(record) != 3:
            raise ChartFormatError('monomial records are [ds, dt, "p/q"], got {0!r}'.format(record))
        ds, dt, coefficient = record
        if not isinstance(ds, int) or not isinstance(dt, int) or ds < 0 or dt < 0:
            raise ChartFormatError('monomial exponents must be non-negative integers')
        if (ds, dt) in terms:
            raise ChartFormatError('repeated monomial s^{0} t^{1}'.format(ds, dt))
        terms[(ds, dt)] = parse_rational(coefficient)
    return BiPoly.from_terms(terms)


def chart_to_dict(c):
    return {
        'r': c.r,
        'N': c.N,
        'rows': [[poly_to_records(e) for e in row] for row in c.rows],
        'declared_birational': c.declared_birational,
    }


def chart_from_dict(data):
    if not isinstance(data, dict):
        raise ChartFormatError('chart JSON must be an object')
    missing = [key for key in ('r', 'N', 'rows') if key not in data]
    if missing:
        raise ChartFormatError('chart JSON is missing {0}'.format(', '.join(missing)))
    r, N, rows = data['r'], data['N'], data['rows']
    if not isinstance(r, int) or not isinstance(N, int) or r < 0 or N <= r:
        raise ChartFormatError('need integers 0 <= r < N, got r={0!r}, N={1!r}'.format(r, N))
    if not isinstance(rows, list) or len(rows) != r + 1:
        raise ChartFormatError('chart needs {0} rows'.format(r + 1))
    if any(not isinstance(row, list) or len(row) != N + 1 for row in rows):
        raise ChartFormatError('every row needs {0} entries'.format(N + 1))
    polys = tuple(tuple(poly_from_records(entry) for entry in row) for row in rows)
    chart = Chart(r, N, polys, bool(data.get('declared_birational', False)))
    if all(p.is_zero for p in chart.plucker):
        raise ChartFormatError('chart rows never reach full rank')
    if all(p.is_constant for p in chart.reduced_plucker):
        raise ChartFormatError('chart has a constant Plucker map')
    return chart


def subspace_to_list(s):
    return None if s is None else [list(row) for row in s.matrix]


def focal_to_dict(q, rank, split, points):
    return {
        'params': list(q.source_params),
        'gram': [list(row) for row in q.gram],
        'rank': rank,
        'split': {
            'kind': split.kind,
            'hyperplanes': [list(h) for h in split.hyperplanes],
            'discriminant': split.discriminant,
        },
        'sample_points': [list(p) for p in points],
    }


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2, default=rathandler) + '\n'


def load_chart(path):
    try:
        with open(path) as f:
            data = json.load(f)
    except ValueError as exc:
        raise ChartFormatError('{0} is not JSON: {1}'.format(path, exc))
    return chart_from_dict(data)

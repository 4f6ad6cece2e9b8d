import argparse
import logging
import sys

from congruences import __version__, create_config
from congruences.catalog import (ScrollSpec, case1, case2_nodal, case2_normal, case2_scroll, case3,
                                 case3_section, cone_over, pencil_plane)
from congruences.classify import classify
from congruences.errors import CongruenceError, ConfigError
from congruences.family import fixed_locus, order, class_, plucker_degree
from congruences.focal import component_points, focal_quadric, quadric_rank, split_quadric
from congruences.formatting import family_key, format_subspace
from congruences.serializers import (chart_to_dict, dumps, focal_to_dict, load_chart,
                                     parse_rational, subspace_to_list)

logger = logging.getLogger(__name__)


def parse_params(items):
    params = {}
    for item in items or ():
        key, sep, value = item.partition('=')
        if not sep or not key:
            raise ConfigError('parameters are key=value, got {0!r}'.format(item))
        params[key.strip().lower()] = value.strip()
    return params


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise ConfigError('missing parameter {0}='.format(key))
        return default
    try:
        return int(params.pop(key))
    except ValueError:
        raise ConfigError('{0} must be an integer'.format(key))


def _int_list(text, key):
    try:
        return tuple(int(x) for x in text.split(',') if x.strip())
    except ValueError:
        raise ConfigError('{0} must be comma-separated integers'.format(key))


def _residual(text):
    """'0;2,-3,1' -> ((0,), (2, -3, 1)): forms separated by ';', coefficients by ','."""
    try:
        return tuple(tuple(parse_rational(x) for x in form.split(',')) for form in text.split(';'))
    except CongruenceError:
        raise ConfigError('residual must look like 0;2,-3,1')


def _scroll(params):
    if 'parts' not in params:
        raise ConfigError('missing parameter parts=')
    parts = _int_list(params.pop('parts'), 'parts')
    residual = _residual(params.pop('residual')) if 'residual' in params else None
    return case2_scroll(ScrollSpec(parts, residual=residual, seed=_int(params, 'seed', 0)))


FAMILIES = {
    'pencil-plane': lambda p, config: pencil_plane(_int(p, 'r', 1)),
    'case1': lambda p, config: case1(_int(p, 'r')),
    'case2-scroll': lambda p, config: _scroll(p),
    'case2-nodal': lambda p, config: case2_nodal(),
    'case2-normal': lambda p, config: case2_normal(_int(p, 'n'), _int(p, 'e')),
    'case3': lambda p, config: case3(_int(p, 'n')),
    'case3-section': lambda p, config: case3_section(_int(p, 'n'), _int(p, 'r'), config=config),
}


def construct(family, params, config):
    family = family_key(family)
    params = dict(params)
    if family == 'cone-embed':
        if 'family' not in params:
            raise ConfigError('cone-embed needs family=')
        base = family_key(params.pop('family'))
        fixed = _int(params, 'fixed')
        if base == 'cone-embed':
            raise ConfigError('cone-embed cannot wrap itself')
        return cone_over(construct(base, params, config), fixed)
    if family not in FAMILIES:
        raise ConfigError('unknown family {0!r}; choose from {1}'.format(
            family, ', '.join(sorted(FAMILIES) + ['cone-embed'])))
    chart = FAMILIES[family](params, config)
    if params:
        raise ConfigError('unknown parameters for {0}: {1}'.format(family, ', '.join(sorted(params))))
    return chart


def cmd_construct(family, params, config):
    return chart_to_dict(construct(family, parse_params(params), config))


def cmd_invariants(path, config):
    c = load_chart(path)
    T = fixed_locus(c, config=config)
    logger.info('fixed locus: %s', format_subspace(T))
    return {
        'order': order(c, config=config),
        'class': class_(c, config=config),
        'plucker_degree': plucker_degree(c, config=config),
        'fixed_dim': -1 if T is None else T.dim,
        'fixed_locus': subspace_to_list(T),
    }


def cmd_classify(path, config, check_jacobian=False):
    return classify(load_chart(path), config=config, check_jacobian=check_jacobian).as_dict()


def cmd_focal(path, s, t, config):
    c = load_chart(path)
    rng = config.rng(6)
    q = focal_quadric(c, parse_rational(s), parse_rational(t), rng)
    split = split_quadric(q)
    points = component_points(q, split, rng)
    return focal_to_dict(q, quadric_rank(q), split, points)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='congruence',
        description='Construct, measure and classify congruences of order one in G(r, r+2).')
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('--seed', type=int, help='Seed of every random draw')
    parser.add_argument('--height', type=int, dest='rational_height_bound',
                        help='Height bound of random rationals')
    parser.add_argument('--retries', type=int, dest='retry_limit',
                        help='Redraws allowed before a genericity failure')
    parser.add_argument('--output', dest='output_path', help='Write JSON here instead of stdout')
    parser.add_argument('--verbose', action='store_true', help='Log progress at INFO')

    commands = parser.add_subparsers(dest='command')
    commands.required = True

    p = commands.add_parser('construct', help='Emit the chart of a catalog family')
    p.add_argument('family')
    p.add_argument('params', nargs='*', help='key=value parameters')

    p = commands.add_parser('invariants', help='Order, class, Plucker degree, fixed locus')
    p.add_argument('chart')

    p = commands.add_parser('classify', help='Case, class and smoothness of a chart')
    p.add_argument('chart')
    p.add_argument('--jacobian-check', action='store_true',
                   help='Cross-check the Plucker differential at random parameters')

    p = commands.add_parser('focal', help='Focal quadric of one fiber')
    p.add_argument('chart')
    p.add_argument('s')
    p.add_argument('t')
    return parser


def run(args, config):
    if args.command == 'construct':
        return cmd_construct(args.family, args.params, config)
    if args.command == 'invariants':
        return cmd_invariants(args.chart, config)
    if args.command == 'classify':
        return cmd_classify(args.chart, config, args.jacobian_check)
    return cmd_focal(args.chart, args.s, args.t, config)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = create_config(seed=args.seed,
                               rational_height_bound=args.rational_height_bound,
                               retry_limit=args.retry_limit,
                               output_path=args.output_path)
    except CongruenceError as exc:
        sys.stderr.write('congruence: {0}\n'.format(exc))
        return exc.exit_code

    level = logging.INFO if args.verbose else getattr(logging, config.log_level.upper(),
                                                      logging.WARNING)
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s %(message)s')

    try:
        result = run(args, config)
    except CongruenceError as exc:
        # bad input stays quiet; computational failures reach the error handlers
        level = logging.INFO if exc.exit_code == 2 else logging.ERROR
        logger.log(level, '%s failed', args.command, exc_info=True)
        sys.stderr.write('congruence: {0}\n'.format(exc))
        return exc.exit_code
    except (IOError, OSError) as exc:
        sys.stderr.write('congruence: {0}\n'.format(exc))
        return 2

    text = dumps(result)
    if config.output_path:
        with open(config.output_path, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0

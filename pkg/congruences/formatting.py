import re
from fractions import Fraction


def format_rational(x):
    x = Fraction(x)
    return '{0}/{1}'.format(x.numerator, x.denominator)


def format_vector(v):
    return '(' + ', '.join(str(Fraction(x)) for x in v) + ')'


def format_subspace(s):
    if s is None:
        return 'empty'
    return 'P^{0} spanned by {1}'.format(s.dim, ', '.join(format_vector(row) for row in s.matrix))


def family_key(text):
    """'case2-scroll', 'Case2 Scroll' and 'case2_scroll' all name the same family."""
    if not text:
        return text
    words = re.split(r'[\s_\-]+', text.strip().lower())
    return '-'.join(word for word in words if word)

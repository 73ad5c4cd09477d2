from fractions import Fraction

from hypothesis import settings, strategies as st

from izansatz.algebra import Poly

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

NAMES = ["I0", "I2", "I3", "t0", "t1", "v", "N", "J2", "w", "I1"]

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(lambda c: c != 0)
monomials = st.dictionaries(st.sampled_from(NAMES), st.integers(1, 3), max_size=3)


@st.composite
def polys(draw, names=None, max_terms=5):
    pool = names or NAMES
    mono = st.dictionaries(st.sampled_from(pool), st.integers(1, 3), max_size=3)
    terms = draw(st.lists(st.tuples(coeffs, mono), max_size=max_terms))
    return Poly.from_terms(terms)


def q(a, b=1):
    return Fraction(a, b)

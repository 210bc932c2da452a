from fractions import Fraction

from hypothesis import strategies as st

from pscf.powersum import PowerSum

small_fraction = st.builds(
    Fraction,
    st.integers(-10, 10),
    st.integers(1, 10),
)


def power_sums(max_terms=4, max_root=10, positive=False, unit="n"):
    lo = 1 if positive else -max_root
    root = st.integers(lo, max_root).filter(lambda r: r != 0)
    terms = st.lists(st.tuples(small_fraction, root), max_size=max_terms)
    return terms.map(lambda ts: PowerSum(ts, unit))

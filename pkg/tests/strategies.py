"""Hypothesis strategies for diagrams."""

from hypothesis import strategies as st

from pdembed.diagram import DIAG, PersistenceDiagram

coords = st.floats(min_value=0, max_value=20, allow_nan=False, allow_infinity=False)


@st.composite
def points(draw, L=20.0, diag_weight=0.2):
    if draw(st.floats(0, 1)) < diag_weight:
        return DIAG
    b = draw(st.floats(min_value=0, max_value=L * 0.95, allow_nan=False))
    d = draw(st.floats(min_value=b, max_value=L, allow_nan=False).filter(lambda v: v > b))
    return (b, d)


def diagrams(n, L=20.0):
    return st.lists(points(L), min_size=n, max_size=n).map(PersistenceDiagram)


@st.composite
def diagram_pairs(draw, max_n=4, L=20.0):
    n = draw(st.integers(1, max_n))
    return draw(diagrams(n, L)), draw(diagrams(n, L))

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pdembed.bottleneck import (
    bottleneck_bruteforce,
    bottleneck_distance,
    bottleneck_many,
    has_perfect_matching,
    point_distance,
    point_to_diagonal,
)
from pdembed.diagram import DIAG, PersistenceDiagram as P, pad_to_arity
from strategies import diagram_pairs, diagrams


@pytest.mark.parametrize("p,expected", [((2, 6), 2.0), (DIAG, 0.0), ((0, 1), 0.5)])
def test_point_to_diagonal(p, expected):
    assert point_to_diagonal(p) == expected


@pytest.mark.parametrize("p,q,expected", [
    ((1, 3), (2, 5), 1.5),
    ((1, 3), (1, 3), 0.0),
    ((0, 10), (1, 9), 1.0),
    ((0, 10), DIAG, 5.0),
    (DIAG, DIAG, 0.0),
])
def test_point_distance(p, q, expected):
    assert point_distance(p, q) == expected
    assert point_distance(q, p) == expected


EXAMPLES = [
    (P([(0, 10), (4, 6)]), P([(1, 9), DIAG]), 1.0),
    (P([(1, 2)], 3), P.diagonal(3), 0.5),
    (P([(0, 4), (0, 12)]), P([(0, 12), (0, 4)]), 0.0),
]


@pytest.mark.parametrize("x,y,expected", EXAMPLES)
def test_examples(x, y, expected):
    assert bottleneck_bruteforce(x, y) == expected
    assert bottleneck_distance(x, y) == expected


def test_swap_matching_is_not_chosen():
    # swapping costs max(5, 3); identity costs max(1, 1)
    x, y = EXAMPLES[0][:2]
    assert bottleneck_distance(x, y) < 5


def test_arity_mismatch():
    with pytest.raises(ValueError):
        bottleneck_distance(P([(0, 1)]), P.diagonal(2))
    with pytest.raises(ValueError):
        bottleneck_bruteforce(P([(0, 1)]), P.diagonal(2))


def test_bruteforce_guard():
    x = P.diagonal(9)
    with pytest.raises(ValueError):
        bottleneck_bruteforce(x, x)


def test_perfect_matching_small_graphs():
    assert has_perfect_matching(np.array([[True, False], [False, True]]))
    assert not has_perfect_matching(np.array([[True, True], [False, False]]))
    assert has_perfect_matching(np.array([[True, True, False], [True, False, False], [False, True, True]]))


@given(diagram_pairs(max_n=5))
def test_matches_oracle(pair):
    x, y = pair
    assert bottleneck_distance(x, y) == bottleneck_bruteforce(x, y)


@given(diagram_pairs(max_n=4), st.integers(0, 3))
def test_padding_is_isometric(pair, extra):
    x, y = pair
    n = x.arity + extra
    assert bottleneck_bruteforce(pad_to_arity(x, n), pad_to_arity(y, n)) == bottleneck_bruteforce(x, y)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(diagrams(n), diagrams(n), diagrams(n))))
def test_metric_axioms(triple):
    x, y, z = triple
    dxy, dyz, dxz = bottleneck_distance(x, y), bottleneck_distance(y, z), bottleneck_distance(x, z)
    assert dxy == bottleneck_distance(y, x)
    assert bottleneck_distance(x, x) == 0
    assert (dxy == 0) == (x == y)
    assert dxz <= dxy + dyz + 1e-12


def test_many_matches_single():
    rng = np.random.default_rng(3)
    for n in (1, 3, 5, 6):
        x = P([tuple(sorted(rng.uniform(0, 10, 2))) for _ in range(n)])
        ys = [P([tuple(sorted(rng.uniform(0, 10, 2))) if rng.random() > 0.3 else DIAG for _ in range(n)])
              for _ in range(20)]
        batch = bottleneck_many(x, np.stack([y.as_array() for y in ys]))
        assert batch.tolist() == [bottleneck_distance(x, y) for y in ys]


def test_half_persistence_bound():
    x = P([(0, 3), (1, 2)])
    assert bottleneck_distance(x, P.diagonal(2)) == max(point_to_diagonal(p) for p in x) == 1.5
    assert math.isclose(bottleneck_distance(P([(0, 1)]), P([(0, 1.5)])), 0.5)

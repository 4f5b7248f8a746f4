import pickle

import numpy as np
import pytest

from pdembed.diagram import DIAG, PersistenceDiagram, is_diagonal, pad_to_arity


def test_canonical_order_and_equality():
    x = PersistenceDiagram([(2, 5), DIAG, (1, 3)])
    y = PersistenceDiagram([(1, 3), (2, 5), "diag"])
    assert x == y and hash(x) == hash(y)
    assert x.points == (DIAG, (1.0, 3.0), (2.0, 5.0))


def test_padding_fills_diagonal():
    x = PersistenceDiagram([(1, 2)], n=3)
    assert x.points == (DIAG, DIAG, (1.0, 2.0))
    assert pad_to_arity(PersistenceDiagram([(1, 2)]), 3) == x
    assert pad_to_arity(x, 3) is not None and pad_to_arity(x, 3) == x
    with pytest.raises(ValueError):
        pad_to_arity(x, 2)


@pytest.mark.parametrize("bad", [(3, 3), (4, 2), (-1, 2), (0, float("inf")), (float("nan"), 1), "x", (1, 2, 3)])
def test_rejects_invalid_points(bad):
    with pytest.raises(ValueError):
        PersistenceDiagram([bad])


def test_arity_limits():
    with pytest.raises(ValueError):
        PersistenceDiagram([], 0)
    with pytest.raises(ValueError):
        PersistenceDiagram([(0, 1), (0, 2)], 1)


def test_immutable_and_picklable():
    x = PersistenceDiagram([(0, 1), DIAG])
    with pytest.raises(AttributeError):
        x.foo = 1
    y = pickle.loads(pickle.dumps(x))
    assert y == x and is_diagonal(y.points[0])
    with pytest.raises(ValueError):
        x.as_array()[0, 0] = 1.0


def test_array_view_and_frame():
    x = PersistenceDiagram([(0.5, 4), DIAG])
    arr = x.as_array()
    assert np.isnan(arr[0]).all() and arr[1].tolist() == [0.5, 4.0]
    assert x.in_frame(4) and not x.in_frame(3.9)
    assert x.max_coordinate() == 4.0
    assert PersistenceDiagram.diagonal(2).in_frame(1e-9)

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pdembed.bottleneck import bottleneck_bruteforce
from pdembed.bounded import (
    BoundedEmbeddingSpec,
    count_landmarks,
    dense_keys,
    eligible_grid_keys,
    lambda_bruteforce,
    lambda_closed_form,
    linear_slope,
    non_injectivity_witness,
    phi3,
    phi3_distance,
    rho3_linear,
    rho3_steps,
    rho3_steps_separated,
    uniform_spec,
)
from pdembed.diagram import DIAG, PersistenceDiagram as P
from pdembed.grid import DIAG_KEY, grid_candidates, landmark_diagram
from pdembed.multiscale import step_constant
from pdembed.verify import random_frame_spec, sample_diagram


def spec_of(L, scales, n, weights=None):
    if weights is None:
        weights = [1 / math.sqrt(len(scales))] * len(scales)
    return BoundedEmbeddingSpec(L, tuple(scales), tuple(weights), n)


def test_spec_validation():
    with pytest.raises(ValueError):
        spec_of(5, [1, 6], 1)
    with pytest.raises(ValueError):
        spec_of(5, [2, 1], 1)
    with pytest.raises(ValueError):
        spec_of(5, [1, 2], 1, weights=[0.5, 0.5])
    with pytest.raises(ValueError):
        spec_of(0, [1], 1)
    with pytest.raises(ValueError):
        spec_of(5, [1], 0)


def test_count_landmarks_examples():
    L = 8.0
    assert count_landmarks(L, L, 1) == 1
    assert eligible_grid_keys(L / 8, L) == [(1, 4), (1, 6), (1, 8), (3, 6), (3, 8), (5, 8)]
    assert count_landmarks(L / 8, L, 1) == 7
    assert count_landmarks(L / 8, L, 2) == math.comb(6 + 2, 2)


@pytest.mark.parametrize("R,L", [(0.7, 5.0), (1.0, 4.0), (0.3, 2.0)])
def test_eligible_keys_are_exactly_the_frame_meeting_balls(R, L):
    # a grid ball meets the frame iff its landmark lies within 3R/2 (sup norm) of [0, L]^2
    keys = set(eligible_grid_keys(R, L))
    ref = {(m, k) for m in range(1, 200, 2) for k in range(4, 200, 2)
           if k >= m + 3 and m * R < L + 1.5 * R and k * R < L + 1.5 * R}
    assert keys == ref
    # every frame point's candidates are eligible
    rng = np.random.default_rng(1)
    for _ in range(300):
        b, d = sorted(rng.uniform(0, L, 2))
        assert grid_candidates((b, d), R) - {DIAG_KEY} <= keys


def test_dense_layout():
    keys = dense_keys(1.0, 4.0, 2)
    assert keys[0] == (DIAG_KEY, DIAG_KEY)
    assert keys == sorted(keys) and len(keys) == count_landmarks(1.0, 4.0, 2)


def test_all_diagonal_image_has_n_nonzeros():
    spec = spec_of(5, [1, 2, 4], 2)
    blocks = phi3(P.diagonal(2), spec)
    assert [dict(b.entries) for b in blocks] == [
        {(DIAG_KEY, DIAG_KEY): spec.weights[k] * 2**-2 * 1.5 * R} for k, R in enumerate(spec.scales)
    ]
    dense = phi3(P.diagonal(2), spec, dense=True)
    assert np.count_nonzero(dense) == 3 and len(dense) == spec.dense_length


def test_dense_matches_sparse():
    spec = spec_of(6, [1, 2.5], 2)
    rng = np.random.default_rng(5)
    keys = [k for R in spec.scales for k in dense_keys(R, spec.L, spec.n)]
    for _ in range(20):
        x = sample_diagram(rng, 2, 6.0, 0.2)
        dense = phi3(x, spec, dense=True)
        sparse = {}
        offset = 0
        for block, count in zip(phi3(x, spec), spec.landmark_counts):
            for key, v in block.entries.items():
                sparse[offset + keys[offset:offset + count].index(key)] = v
            offset += count
        assert {i: v for i, v in enumerate(dense) if v} == sparse


def test_dense_cap_and_frame_checks():
    spec = spec_of(6, [1, 2.5], 2)
    with pytest.raises(ValueError):
        phi3(P.diagonal(2), spec, dense=True, dense_cap=3)
    with pytest.raises(ValueError):
        phi3(P([(0, 7), DIAG]), spec)
    with pytest.raises(ValueError):
        phi3(P.diagonal(3), spec)


@given(st.integers(1, 3), st.data())
def test_phi3_one_lipschitz(n, data):
    spec = spec_of(6, [0.5, 1.5, 4], n)
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    x, y = sample_diagram(rng, n, 6.0, 0.2), sample_diagram(rng, n, 6.0, 0.2)
    assert phi3_distance(phi3(x, spec), phi3(y, spec)) <= bottleneck_bruteforce(x, y) + 1e-9


def test_rho3_basics():
    spec = spec_of(5, [1, 2, 3], 2)
    assert rho3_steps(spec, 0.5) == rho3_linear(spec, 0.5) == 0.0
    assert rho3_linear(spec, 1.0) == 0.0
    for t in np.linspace(1, 5, 401):
        assert rho3_linear(spec, t) <= rho3_steps(spec, t) * (1 + 1e-12)
    with pytest.raises(ValueError):
        rho3_steps(spec, 5.01)
    with pytest.raises(ValueError):
        rho3_linear(spec, -1)


def test_single_scale_step():
    for n in (1, 3):
        spec = BoundedEmbeddingSpec(5.0, (2.0,), (1.0,), n)
        assert rho3_steps(spec, 2.0) == rho3_steps(spec, 5.0) == step_constant(n) * 2.0


def test_frame_corner_variant_can_overshoot_the_top_step():
    spec = BoundedEmbeddingSpec(10.0, (1.0,), (1.0,), 1)
    assert rho3_linear(spec, 10.0) <= rho3_steps(spec, 10.0)
    assert rho3_linear(spec, 10.0, frame_corner=True) > rho3_steps(spec, 10.0)
    # identical when the last scale is the frame size
    tight = spec_of(5, [1, 2, 5], 1)
    assert linear_slope(tight) == linear_slope(tight, frame_corner=True)


def test_lambda_examples():
    assert lambda_closed_form(1.0, 10) == 1.0
    assert lambda_bruteforce(1.0, 10) == 1.0
    a = 0.3
    mu = math.sqrt(3 / a**2 - 3 / a + 0.5)
    f = lambda x: (a * a / 3) * x + (1 - a + a * a / 6) / x + (a - a * a / 2)
    assert min(f(math.floor(mu)), f(math.ceil(mu))) == pytest.approx(lambda_closed_form(a, 100))
    with pytest.raises(ValueError):
        lambda_closed_form(1.5, 3)


def test_lambda_closed_form_matches_bruteforce():
    rng = np.random.default_rng(7)
    for _ in range(200):
        N = int(rng.integers(1, 60))
        m = float(rng.uniform(0.1, 5))
        M = float(rng.uniform(m * (1 + 1e-3), m * (1 + N)))
        a = (M - m) / (m * N)
        assert abs(lambda_closed_form(a, N) - lambda_bruteforce(a, N)) <= 1e-12


def test_uniform_spec():
    spec, lam, slope = uniform_spec(1, 5, 4, 4)
    assert spec.scales == (1.0, 2.0, 3.0, 4.0) and spec.L == 5.0
    assert lam == 1.0
    assert slope == pytest.approx(linear_slope(spec), rel=1e-12)
    for N in (2, 7, 19):
        spec, lam, slope = uniform_spec(1, 5, N, 2)
        assert slope == pytest.approx(linear_slope(spec), rel=1e-12)
    with pytest.raises(ValueError):
        uniform_spec(2, 1, 3, 1)


def test_step_bound_counterexample():
    # d_B >= R_1 but the image gap is below the step value at R_1; the 3R-based
    # bound still holds for the same pair
    x = P([(0.847759953057437, 2.8934701642184617), (2.0884913156233513, 2.200094321229164),
           (2.4245853596815863, 4.477527702394996), DIAG])
    y = P([(0.8665841130634933, 2.9224198944686988), (2.406545434602359, 2.653907379520928),
           (3.669563490102623, 4.441430928133093), DIAG])
    spec = uniform_spec(1, 5, 4, 4)[0]
    d = bottleneck_bruteforce(x, y)
    gap = phi3_distance(phi3(x, spec), phi3(y, spec))
    assert d >= spec.scales[0]
    assert gap < rho3_steps(spec, spec.scales[0])
    assert gap >= rho3_steps_separated(spec, d)


def test_separated_steps():
    spec = spec_of(12, [1, 2, 3], 2)
    assert rho3_steps_separated(spec, 2.9) == 0.0
    assert rho3_steps_separated(spec, 3.0) == pytest.approx(2 ** -4.5 * spec.weights[0])
    assert rho3_steps_separated(spec, 9.0) == pytest.approx(
        2 ** -4.5 * math.sqrt(sum((w * R) ** 2 for w, R in zip(spec.weights, spec.scales))))


def test_witness_properties():
    rng = np.random.default_rng(9)
    for _ in range(15):
        spec = random_frame_spec(rng, 3)
        x, y = non_injectivity_witness(spec)
        assert x != y and x.in_frame(spec.L) and y.in_frame(spec.L)
        assert [b.entries for b in phi3(x, spec)] == [b.entries for b in phi3(y, spec)]
        for p in x.offdiagonal + y.offdiagonal:
            assert all(grid_candidates(p, R) == {DIAG_KEY} for R in spec.scales)
        eps = x.offdiagonal[0][1] - x.offdiagonal[0][0]
        assert eps == pytest.approx(spec.scales[0] / 10, rel=1e-12)
        assert bottleneck_bruteforce(x, y) >= eps / 2 > 0


def test_witness_for_fixed_spec():
    spec = spec_of(10, [1, 3], 2)
    x, y = non_injectivity_witness(spec)
    assert x == P([(5.0, 5.1)], 2)
    assert phi3_distance(phi3(x, spec), phi3(y, spec)) == 0.0

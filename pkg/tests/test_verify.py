import json

import numpy as np
import pytest

from pdembed.diagram import DIAG, PersistenceDiagram
from pdembed.verify import CHECKS, CheckConfig, random_frame_spec, run_checks, sample_diagram, separated_pair
from pdembed.bottleneck import bottleneck_bruteforce

SMALL = CheckConfig(n=2, samples=40, oracle_max_n=4, oracle_samples=30, separation_samples=10,
                    multiscale_samples=10, witness_specs=5, inject_samples=20)


def test_sample_diagram_contract():
    assert sample_diagram(1, 3, 5.0, 1.0) == PersistenceDiagram.diagonal(3)
    assert sample_diagram(7, 4, 5.0, 0.3) == sample_diagram(7, 4, 5.0, 0.3)
    rng = np.random.default_rng(0)
    for _ in range(10_000 // 2):
        x = sample_diagram(rng, 2, 10.0, 0.0)
        assert all(p is not DIAG and 0 <= p[0] < p[1] <= 10 for p in x)
    with pytest.raises(ValueError):
        sample_diagram(0, 1, 1.0, 1.5)


def test_separated_pair_is_separated():
    rng = np.random.default_rng(2)
    for n in (1, 3):
        x, y = separated_pair(rng, n, 0.7)
        assert bottleneck_bruteforce(x, y) >= 2.1


def test_random_frame_spec_valid():
    rng = np.random.default_rng(3)
    for _ in range(50):
        spec = random_frame_spec(rng, 3)
        assert spec.scales[-1] <= spec.L and 1 <= spec.n <= 3


def test_registered_names():
    assert {"oracle-equivalence", "lipschitz-phiR", "norm-floor", "separation", "multiplicity",
            "co-support-diameter", "phi3-lipschitz", "phi3-steps", "multiscale-lipschitz",
            "multiscale-distortion", "witness-zero", "inject-roundtrip"} <= set(CHECKS)


def test_unknown_check():
    with pytest.raises(KeyError):
        run_checks({"nope"}, SMALL)


def test_report_contract_and_determinism():
    names = [n for n in CHECKS if n != "phi3-steps"]
    a = run_checks(names, SMALL)
    b = run_checks(names, SMALL)
    assert [r.as_dict() for r in a] == [r.as_dict() for r in b]
    for r in a:
        assert r.passed == (r.worst_margin >= -r.tolerance)
        assert r.passed, r
        json.dumps(r.as_dict())


def test_examples_from_contract():
    (r,) = run_checks("oracle-equivalence", CheckConfig(oracle_max_n=6, oracle_samples=40))
    assert r.passed and r.worst_margin == 0.0
    (r,) = run_checks("lipschitz-phiR", CheckConfig(n=2, scales=(1.0,), samples=300))
    assert r.passed
    (r,) = run_checks("norm-floor", CheckConfig(n=2, samples=100))
    assert r.passed

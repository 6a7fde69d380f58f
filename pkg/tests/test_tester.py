import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabtest.quantum import DensityMatrix, depolarize
from stabtest.sampling import SamplerConfig
from stabtest.stabilizer import projector, stabilizer_fidelity, stabilizer_state_at
from stabtest.tester import (
    DEFAULT_DELTA,
    InfeasiblePlanError,
    feasibility_edge,
    plan_test,
    tolerant_test,
)


def depolarized_with_fidelity(F, index=5):
    # for n = 2, F = 1 - 3p/4
    p = 4 * (1 - F) / 3
    return depolarize(projector(stabilizer_state_at(2, index)), p)


def test_plan_example():
    plan = plan_test(0.99, 0.90, 0.1)
    assert plan.eta_high == pytest.approx(0.99**6)
    assert plan.eta_high == pytest.approx(0.9415, abs=5e-5)
    assert plan.eta_low == pytest.approx(0.925)
    assert plan.threshold == pytest.approx(0.9332, abs=5e-5)
    assert plan.shots == math.ceil(2 * math.log(20) / plan.margin**2)
    assert 8.6e4 <= plan.shots <= 9.0e4
    assert plan.soundness == "close_regime"


def test_feasibility_edge():
    assert feasibility_edge(0.99) == pytest.approx(0.92, abs=0.005)
    plan_test(0.99, 0.92)  # just inside the edge
    with pytest.raises(InfeasiblePlanError, match="gap infeasible"):
        plan_test(0.99, 0.925)


def test_custom_plan():
    plan = plan_test(1.0, 0.0, eta_low=0.5)
    assert plan.threshold == pytest.approx(0.75)
    assert plan.soundness == "custom"
    with pytest.raises(InfeasiblePlanError):
        plan_test(0.9, 0.1, eta_low=0.9)


@pytest.mark.parametrize("args", [(0.9, 0.95, 0.1), (1.2, 0.5, 0.1), (0.9, 0.5, 0.0), (0.9, 0.5, 1.0)])
def test_plan_bad_parameters(args):
    with pytest.raises(ValueError):
        plan_test(*args)


def test_default_delta():
    assert plan_test(0.99, 0.8).delta == DEFAULT_DELTA == 1 / 3


@given(st.floats(0.95, 1.0), st.floats(0.0, 0.99), st.floats(1e-4, 0.5))
def test_plan_hoeffding_bound(eps1, frac, delta):
    plan = plan_test(eps1, frac * feasibility_edge(eps1), delta)
    assert plan.failure_bound() <= delta * (1 + 1e-12)
    assert plan.eta_low < plan.threshold < plan.eta_high


def test_stabilizer_state_is_close():
    rho = projector(stabilizer_state_at(2, 11))
    v = tolerant_test(rho, plan_test(0.99, 0.90), SamplerConfig(seed=1))
    assert v.close and v.estimate.mean == 1.0


def test_maximally_mixed_is_far():
    eps1 = 0.9 ** (1 / 6)
    plan = plan_test(eps1, 0.1, eta_low=0.2)
    assert plan.eta_high == pytest.approx(0.9)
    v = tolerant_test(DensityMatrix.maximally_mixed(3), plan, SamplerConfig(seed=2))
    assert v.decision == "far"
    assert v.estimate.mean == pytest.approx(1 / 8, abs=4 * v.estimate.std_error)


def test_planted_close_instance_repeated():
    rho = depolarized_with_fidelity(0.995)
    assert stabilizer_fidelity(rho)[0] == pytest.approx(0.995)
    plan = plan_test(0.99, 0.90, 0.1)
    wins = sum(tolerant_test(rho, plan, SamplerConfig(seed=s)).close for s in range(20))
    assert wins >= 19


def test_verdict_json():
    rho = depolarized_with_fidelity(0.85)
    v = tolerant_test(rho, plan_test(0.99, 0.90, 0.2), SamplerConfig(seed=3, shards=2))
    doc = v.to_json()
    assert doc["decision"] == "far"
    assert doc["plan"]["shots"] == doc["estimate"]["shots"]
    assert set(doc["estimate"]) == {"mean", "shots", "std_error", "plus", "minus"}
    assert np.isclose(doc["plan"]["eta_low"], 0.925)

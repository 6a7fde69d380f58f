"""Tolerant stabilizer testing: turn (eps1, eps2, delta) into a threshold test on eta.

Completeness: a state with stabilizer fidelity F has eta >= F^6, so
F >= eps1 puts eta at or above ``eta_high = eps1**6``.

Soundness (close regime): eta >= g forces F >= (4g - 1)/3, so F <= eps2 keeps
eta at or below ``eta_low = (3 eps2 + 1)/4``.  The general-regime bound
F >= Omega(eta^1089) has astronomically small constants and is never used to
build a plan; pass a custom ``eta_low`` to experiment with other bounds.

The test accepts ("close") when the shot mean reaches the midpoint of
[eta_low, eta_high]; the shot count comes from the two-sided Hoeffding bound
for +-1 variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantum import DensityMatrix
from .sampling import EtaEstimate, SamplerConfig, estimate_eta

DEFAULT_DELTA = 1 / 3


class InfeasiblePlanError(ValueError):
    """The completeness and soundness bounds leave no gap to test in."""


@dataclass(frozen=True)
class TestPlan:
    __test__ = False  # not a pytest class

    eps1: float
    eps2: float
    delta: float
    eta_low: float
    eta_high: float
    threshold: float
    shots: int
    soundness: str = "close_regime"

    @property
    def margin(self) -> float:
        return (self.eta_high - self.eta_low) / 2

    def failure_bound(self) -> float:
        """Hoeffding bound on the misclassification probability, 2 exp(-shots t^2 / 2)."""
        return 2 * math.exp(-self.shots * self.margin**2 / 2)

    def to_json(self) -> dict:
        return {
            "eps1": self.eps1,
            "eps2": self.eps2,
            "delta": self.delta,
            "soundness": self.soundness,
            "eta_low": self.eta_low,
            "eta_high": self.eta_high,
            "threshold": self.threshold,
            "shots": self.shots,
        }


@dataclass(frozen=True)
class Verdict:
    decision: str
    estimate: EtaEstimate
    plan: TestPlan

    @property
    def close(self) -> bool:
        return self.decision == "close"

    def to_json(self) -> dict:
        return {
            "decision": self.decision,
            "estimate": self.estimate.to_json(),
            "plan": self.plan.to_json(),
        }


def close_regime_eta_low(eps2: float) -> float:
    return (3 * eps2 + 1) / 4


def feasibility_edge(eps1: float) -> float:
    """Largest eps2 the close-regime plan can separate from eps1: (4 eps1^6 - 1)/3."""
    return (4 * eps1**6 - 1) / 3


def hoeffding_shots(margin: float, delta: float) -> int:
    return math.ceil(2 * math.log(2 / delta) / margin**2)


def plan_test(eps1: float, eps2: float, delta: float = DEFAULT_DELTA,
              eta_low: float | None = None) -> TestPlan:
    """Build a threshold plan.

    With ``eta_low=None`` the close-regime soundness bound is used;
    otherwise ``eta_low`` is taken as a user-supplied soundness value.
    Raises InfeasiblePlanError when eps1^6 <= eta_low.
    """
    if not 0 <= eps2 < eps1 <= 1:
        raise ValueError(f"need 0 <= eps2 < eps1 <= 1, got eps1={eps1}, eps2={eps2}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    soundness = "close_regime" if eta_low is None else "custom"
    low = close_regime_eta_low(eps2) if eta_low is None else float(eta_low)
    high = eps1**6
    if high <= low:
        raise InfeasiblePlanError(
            f"gap infeasible: eps1^6 = {high:.6g} <= eta_low = {low:.6g}"
            + (f" (close regime needs eps2 < {feasibility_edge(eps1):.6g})" if eta_low is None else "")
        )
    margin = (high - low) / 2
    return TestPlan(
        eps1=eps1, eps2=eps2, delta=delta,
        eta_low=low, eta_high=high, threshold=(low + high) / 2,
        shots=hoeffding_shots(margin, delta), soundness=soundness,
    )


def tolerant_test(rho: DensityMatrix, plan: TestPlan, cfg: SamplerConfig | None = None) -> Verdict:
    est = estimate_eta(rho, cfg or SamplerConfig(), plan.shots)
    return Verdict("close" if est.mean >= plan.threshold else "far", est, plan)

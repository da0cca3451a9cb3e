"""End-to-end group decision procedure.

Consistency check and repair per expert, aggregation, consensus reaching,
priority weights of the group relation, and the final ranking.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .consensus import ConsensusOutcome, ExpertPanel, check_panel, reach_consensus
from .core import TOL, check_rung
from .exceptions import ValidationError
from .priority import PriorityResult, derive_weights
from .relations import QROHFPR, consistency_index
from .repair import repair

log = logging.getLogger(__name__)


@dataclass
class DecisionConfig:
    q: float = 3.0
    ci_bar: float = 0.1
    gci_bar: float = 0.1
    zeta: float = 0.5
    theta_max: int = 50
    expert_weights: Sequence[float] | None = None  # overrides the panel's weights when set
    compare_tol: float = TOL

    def validate(self) -> "DecisionConfig":
        self.q = check_rung(self.q)
        for name in ("ci_bar", "gci_bar"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        if not 0.0 < self.zeta < 1.0:
            raise ValidationError(f"zeta must lie in (0, 1), got {self.zeta}")
        if int(self.theta_max) != self.theta_max or self.theta_max < 1:
            raise ValidationError(f"theta_max must be a positive integer, got {self.theta_max}")
        self.theta_max = int(self.theta_max)
        if self.expert_weights is not None:
            w = [float(x) for x in self.expert_weights]
            if any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-9:
                raise ValidationError(f"expert weights must be non-negative and sum to 1, got {w}")
            self.expert_weights = w
        if self.compare_tol < 0:
            raise ValidationError("compare_tol must be non-negative")
        return self


@dataclass
class DecisionReport:
    config: DecisionConfig
    ci_before: list[float]
    ci_after: list[float]
    repair_objectives: list[float]
    repaired: list[bool]
    inputs: list[QROHFPR]
    repaired_matrices: list[QROHFPR]
    consensus: ConsensusOutcome
    group: QROHFPR
    priority: PriorityResult
    alternatives: list[str] = field(default_factory=list)
    expert_ids: list[str] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return not self.consensus.reached

    @property
    def scores(self) -> list[float]:
        return [float(x) for x in self.priority.weights.scores(self.config.q)]

    @property
    def order(self) -> list[int]:
        return self.priority.order

    def ranking_labels(self) -> list[str]:
        return [self.alternatives[i] for i in self.order]


def _labels(panel: ExpertPanel) -> tuple[list[str], list[str]]:
    alts = list(panel.alternatives) if panel.alternatives else [f"x{i + 1}" for i in range(panel.n)]
    ids = list(panel.expert_ids) if panel.expert_ids else [f"e{t + 1}" for t in range(panel.m)]
    if len(alts) != panel.n:
        raise ValidationError(f"{len(alts)} alternative names for {panel.n} alternatives")
    if len(ids) != panel.m:
        raise ValidationError(f"{len(ids)} expert ids for {panel.m} experts")
    return alts, ids


def run_pipeline(panel: ExpertPanel, config: DecisionConfig | None = None) -> DecisionReport:
    config = (config or DecisionConfig()).validate()
    q = config.q
    if config.expert_weights is not None:
        panel = ExpertPanel(panel.matrices, config.expert_weights, panel.expert_ids, panel.alternatives)
    check_panel(panel, q)
    if panel.n < 3:
        raise ValidationError("the decision procedure needs at least 3 alternatives")
    alts, ids = _labels(panel)

    ci_before, ci_after, objectives, changed, fixed = [], [], [], [], []
    for A in panel.matrices:
        r = repair(A, q, config.ci_bar)
        ci_before.append(r.original_ci)
        ci_after.append(r.achieved_ci)
        objectives.append(r.objective)
        changed.append(r.changed)
        fixed.append(r.repaired)

    outcome = reach_consensus(
        panel.with_matrices(fixed), q, config.gci_bar, config.zeta, config.theta_max, config.ci_bar
    )
    if not outcome.reached:
        log.warning("proceeding with the group relation after theta_max iterations")
    result = derive_weights(outcome.group, q, config.compare_tol)
    return DecisionReport(
        config=config,
        ci_before=ci_before,
        ci_after=ci_after,
        repair_objectives=objectives,
        repaired=changed,
        inputs=list(panel.matrices),
        repaired_matrices=fixed,
        consensus=outcome,
        group=outcome.group,
        priority=result,
        alternatives=alts,
        expert_ids=ids,
    )


def recompute_ci(report: DecisionReport) -> list[float]:
    """CI of the repaired matrices, recomputed from the report's own data."""
    return [consistency_index(A, report.config.q) for A in report.repaired_matrices]

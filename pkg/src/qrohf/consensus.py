"""Aggregation of expert relations and the automatic consensus-reaching loop.

Aggregation is a weighted power mean of grades, i.e. a weighted arithmetic
mean of their q-th powers.  Blending an expert toward the group is done in the
same q-power space, which keeps the group matrix fixed under a blend step and
shrinks every expert's q-power distance to it by exactly ``zeta``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import TOL, check_rung
from .exceptions import ValidationError
from .relations import (
    QROHFPR,
    check_qrohfpr,
    ci_from_powers,
    normalized_distance,
    upper_abs_deviation,
)
from .repair import repair

log = logging.getLogger(__name__)

WEIGHT_SUM_TOL = 1e-9


@dataclass
class ExpertPanel:
    matrices: list[QROHFPR]
    weights: list[float]
    expert_ids: list[str] | None = None
    alternatives: list[str] | None = None

    def __post_init__(self):
        self.matrices = list(self.matrices)
        self.weights = [float(w) for w in self.weights]

    @property
    def m(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].n

    @property
    def l(self) -> int:
        return self.matrices[0].l

    def with_matrices(self, matrices: Sequence[QROHFPR]) -> "ExpertPanel":
        return ExpertPanel(list(matrices), self.weights, self.expert_ids, self.alternatives)


def check_panel(panel: ExpertPanel, q: float) -> ExpertPanel:
    q = check_rung(q)
    if panel.m == 0:
        raise ValidationError("panel has no experts")
    if len(panel.weights) != panel.m:
        raise ValidationError(f"{panel.m} matrices but {len(panel.weights)} expert weights")
    if any(w < 0 or not np.isfinite(w) for w in panel.weights):
        raise ValidationError(f"expert weights must be non-negative: {panel.weights}")
    total = sum(panel.weights)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValidationError(f"expert weights must sum to 1, got {total:.12g}")
    for t, A in enumerate(panel.matrices):
        try:
            check_qrohfpr(A, q)
        except ValidationError as exc:
            raise ValidationError(f"expert {t}: {exc}", exc.report) from exc
    shapes = {(A.n, A.l) for A in panel.matrices}
    if len(shapes) != 1:
        raise ValidationError(f"experts disagree on (n, l): {sorted(shapes)}")
    return panel


def aggregate_powers(powers: Sequence[tuple[np.ndarray, np.ndarray]], weights: Sequence[float]):
    U = sum(w * P for w, (P, _) in zip(weights, powers))
    V = sum(w * Q for w, (_, Q) in zip(weights, powers))
    return U, V


def aggregate(panel: ExpertPanel, q: float) -> QROHFPR:
    """Group relation: grade-wise weighted power mean of the experts."""
    q = check_rung(q)
    check_panel(panel, q)
    U, V = aggregate_powers([A.powers(q) for A in panel.matrices], panel.weights)
    n = panel.n
    eye = np.eye(n, dtype=bool)[:, :, None]
    first = panel.matrices[0]
    # keep the neutral diagonal bit-exact instead of a re-rooted average
    G = QROHFPR.from_powers(U, V, q)
    return QROHFPR.from_arrays(np.where(eye, first.mu, G.mu), np.where(eye, first.nu, G.nu))


def gci(A_t: QROHFPR, A: QROHFPR) -> float:
    """Distance of one expert's relation from the group relation (raw grades)."""
    if A_t.n != A.n or A_t.l != A.l:
        raise ValidationError(f"shape mismatch: (n={A_t.n}, l={A_t.l}) vs (n={A.n}, l={A.l})")
    dev = upper_abs_deviation(A_t.mu, A_t.nu, A.mu, A.nu)
    return normalized_distance(dev, A.n, A.l)


def gci_power(A_t: QROHFPR, A: QROHFPR, q: float) -> float:
    """Same distance measured between q-th powers of the grades."""
    if A_t.n != A.n or A_t.l != A.l:
        raise ValidationError("shape mismatch")
    Pt, Qt = A_t.powers(q)
    P, Q = A.powers(q)
    return normalized_distance(upper_abs_deviation(Pt, Qt, P, Q), A.n, A.l)


def is_acceptable_consensus(gci_value: float, gci_bar: float) -> bool:
    return gci_value <= gci_bar + TOL


def blend(A_t: QROHFPR, A: QROHFPR, zeta: float, q: float) -> QROHFPR:
    """Move ``A_t`` toward ``A``: ``zeta * a_t**q + (1 - zeta) * a**q`` per grade."""
    Pt, Qt = A_t.powers(q)
    P, Q = A.powers(q)
    B = QROHFPR.from_powers(zeta * Pt + (1 - zeta) * P, zeta * Qt + (1 - zeta) * Q, q)
    eye = np.eye(A.n, dtype=bool)[:, :, None]
    return QROHFPR.from_arrays(np.where(eye, A_t.mu, B.mu), np.where(eye, A_t.nu, B.nu))


@dataclass
class IterationRecord:
    theta: int
    gci: list[float]
    gci_power: list[float]
    repaired: list[int] = field(default_factory=list)


@dataclass
class ConsensusOutcome:
    iterations: int
    adjusted: list[QROHFPR]
    group: QROHFPR
    gci_per_expert: list[float]
    trace: list[IterationRecord]
    reached: bool

    @property
    def repair_events(self) -> list[tuple[int, int]]:
        return [(rec.theta, t) for rec in self.trace for t in rec.repaired]


def reach_consensus(
    panel: ExpertPanel,
    q: float,
    gci_bar: float,
    zeta: float,
    theta_max: int,
    ci_bar: float,
) -> ConsensusOutcome:
    """Blend experts toward the group until every consensus index is acceptable.

    ``trace[0]`` describes the input panel.  Record ``k > 0`` describes the
    panel after ``k`` blend steps and lists experts whose blended relation
    lost acceptable consistency and was repaired in that step.
    """
    q = check_rung(q)
    check_panel(panel, q)
    if not 0.0 < zeta < 1.0:
        raise ValidationError(f"blend factor zeta must lie in (0, 1), got {zeta}")
    if int(theta_max) != theta_max or theta_max < 1:
        raise ValidationError(f"theta_max must be a positive integer, got {theta_max}")
    if not 0.0 <= gci_bar <= 1.0:
        raise ValidationError(f"consensus threshold must lie in [0, 1], got {gci_bar}")

    mats = list(panel.matrices)
    theta = 0
    repaired_now: list[int] = []
    trace: list[IterationRecord] = []
    while True:
        group = aggregate(panel.with_matrices(mats), q)
        g = [gci(A, group) for A in mats]
        gp = [gci_power(A, group, q) for A in mats]
        trace.append(IterationRecord(theta, g, gp, repaired_now))
        reached = all(is_acceptable_consensus(x, gci_bar) for x in g)
        if reached or theta >= theta_max:
            break
        repaired_now = []
        new = []
        for t, A in enumerate(mats):
            B = blend(A, group, zeta, q)
            if ci_from_powers(*B.powers(q)) > ci_bar + TOL:
                B = repair(B, q, ci_bar).repaired
                repaired_now.append(t)
            new.append(B)
        mats = new
        theta += 1
    if not reached:
        log.warning("consensus not reached after %d iterations (max GCI %.4g)", theta, max(g))
    return ConsensusOutcome(theta, mats, group, g, trace, reached)

"""scikit-learn style wrappers.

Parameters live in ``__init__`` and come back from ``get_params``; learned
state ends in an underscore.  Inputs are :class:`QROHFPR` objects (or lists of
them, or an :class:`ExpertPanel`), not numeric arrays, so these estimators do
not go through ``check_array`` and are not meant for sklearn's model
selection tools.
"""
from __future__ import annotations

from typing import Sequence

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .consensus import ExpertPanel
from .exceptions import ValidationError
from .pipeline import DecisionConfig, run_pipeline
from .priority import derive_weights
from .relations import QROHFPR, check_qrohfpr
from .repair import repair


def check_relations(X, q: float) -> list[QROHFPR]:
    """Accept one relation or a sequence of them; validate each."""
    if isinstance(X, QROHFPR):
        X = [X]
    if isinstance(X, ExpertPanel):
        X = X.matrices
    X = list(X)
    if not X:
        raise ValidationError("no relations given")
    for t, A in enumerate(X):
        try:
            check_qrohfpr(A, q)
        except ValidationError as exc:
            raise ValidationError(f"relation {t}: {exc}", exc.report) from exc
    return X


class ConsistencyRepairer(TransformerMixin, BaseEstimator):
    """Repairs relations whose consistency index exceeds ``ci_bar``."""

    def __init__(self, q: float = 3.0, ci_bar: float = 0.1, min_gap: float = 0.0):
        self.q = q
        self.ci_bar = ci_bar
        self.min_gap = min_gap

    def fit(self, X, y=None):
        check_relations(X, self.q)
        self.n_relations_in_ = 1 if isinstance(X, QROHFPR) else len(list(X))
        return self

    def transform(self, X) -> list[QROHFPR]:
        check_is_fitted(self, "n_relations_in_")
        results = [repair(A, self.q, self.ci_bar, self.min_gap) for A in check_relations(X, self.q)]
        self.results_ = results
        return [r.repaired for r in results]


class PriorityRanker(BaseEstimator):
    """Fits priority weights to one relation; ``predict`` returns the ranking."""

    def __init__(self, q: float = 3.0):
        self.q = q

    def fit(self, A: QROHFPR, y=None):
        (A,) = check_relations(A, self.q)
        res = derive_weights(A, self.q)
        self.result_ = res
        self.weights_ = res.weights
        self.objective_ = res.objective
        self.scores_ = res.weights.scores(self.q)
        self.ranking_ = res.order
        return self

    def predict(self, A: QROHFPR | None = None) -> list[int]:
        """Alternative indices, best first (refits when ``A`` is given)."""
        if A is not None:
            self.fit(A)
        check_is_fitted(self, "ranking_")
        return list(self.ranking_)


class GroupDecisionMaker(BaseEstimator):
    """The full group procedure behind a fit/predict interface."""

    def __init__(
        self,
        q: float = 3.0,
        ci_bar: float = 0.1,
        gci_bar: float = 0.1,
        zeta: float = 0.5,
        theta_max: int = 50,
        expert_weights: Sequence[float] | None = None,
    ):
        self.q = q
        self.ci_bar = ci_bar
        self.gci_bar = gci_bar
        self.zeta = zeta
        self.theta_max = theta_max
        self.expert_weights = expert_weights

    def _config(self) -> DecisionConfig:
        return DecisionConfig(self.q, self.ci_bar, self.gci_bar, self.zeta, self.theta_max, self.expert_weights)

    def fit(self, X, y=None):
        """``X``: an :class:`ExpertPanel`, or relations weighted by ``expert_weights``."""
        if isinstance(X, ExpertPanel):
            panel = X
        else:
            mats = check_relations(X, self.q)
            if self.expert_weights is None:
                raise ValidationError("expert_weights is required when fitting on bare relations")
            panel = ExpertPanel(mats, list(self.expert_weights))
        report = run_pipeline(panel, self._config())
        self.report_ = report
        self.group_ = report.group
        self.weights_ = report.priority.weights
        self.scores_ = report.scores
        self.ranking_ = report.order
        self.n_iter_ = report.consensus.iterations
        return self

    def predict(self, X=None) -> list[int]:
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "ranking_")
        return list(self.ranking_)

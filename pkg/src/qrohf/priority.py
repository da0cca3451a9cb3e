"""Priority weights of alternatives and the ranking they induce."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import QROHFN, TOL, check_rung, compare_values
from .exceptions import SolverError, ValidationError
from .lp import LinearProgram, add_abs_deviation, solve
from .relations import QROHFPR, check_qrohfpr


@dataclass
class WeightVector:
    """Per-alternative weights ``w_i = <mu[i], nu[i]>``, each of length ``l``.

    Weight grade sets are not required to be sorted.
    """

    mu: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        self.mu = np.atleast_2d(np.asarray(self.mu, dtype=float))
        self.nu = np.atleast_2d(np.asarray(self.nu, dtype=float))
        if self.mu.shape != self.nu.shape:
            raise ValidationError(f"weight grade arrays differ in shape: {self.mu.shape} vs {self.nu.shape}")

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    @property
    def l(self) -> int:
        return self.mu.shape[1]

    def __getitem__(self, i: int) -> QROHFN:
        return QROHFN(self.mu[i], self.nu[i])

    def __len__(self) -> int:
        return self.n

    def scores(self, q: float) -> np.ndarray:
        return (self.mu**q).mean(axis=1) - (self.nu**q).mean(axis=1)

    def accuracies(self, q: float) -> np.ndarray:
        return (self.mu**q).mean(axis=1) + (self.nu**q).mean(axis=1)


def weight_violations(w: WeightVector, q: float, tol: float = 1e-7) -> list[str]:
    """Broken range, rung or normalization conditions, as messages."""
    q = check_rung(q)
    out = []
    if np.any(w.mu < -tol) or np.any(w.mu > 1 + tol) or np.any(w.nu < -tol) or np.any(w.nu > 1 + tol):
        out.append("weight grades must lie in [0, 1]")
    Wu, Wv = np.clip(w.mu, 0, 1) ** q, np.clip(w.nu, 0, 1) ** q
    if np.any(Wu + Wv > 1 + tol):
        out.append("weight grades violate the rung constraint")
    n = w.n
    others_u = Wu.sum(axis=0, keepdims=True) - Wu
    others_v = Wv.sum(axis=0, keepdims=True) - Wv
    for i, s in zip(*np.nonzero(others_u > Wv + tol)):
        out.append(f"normalization: sum of other membership powers exceeds w[{i}] non-membership at grade {s}")
    for i, s in zip(*np.nonzero(others_v > Wu + n - 2 + tol)):
        out.append(f"normalization: sum of other non-membership powers too large for w[{i}] at grade {s}")
    return out


def is_normalized(w: WeightVector, q: float, tol: float = 1e-7) -> bool:
    return not weight_violations(w, q, tol)


def consistent_qrohfpr_from_weights(w: WeightVector, q: float) -> QROHFPR:
    """The fully consistent relation generated by a normalized weight vector."""
    q = check_rung(q)
    problems = weight_violations(w, q)
    if problems:
        raise ValidationError("invalid weight vector: " + "; ".join(problems))
    Wu, Wv = np.clip(w.mu, 0, 1) ** q, np.clip(w.nu, 0, 1) ** q
    n = w.n
    U = 0.5 * Wu[:, None, :] + 0.5 * Wv[None, :, :]
    V = 0.5 * Wv[:, None, :] + 0.5 * Wu[None, :, :]
    eye = np.eye(n, dtype=bool)[:, :, None]
    U = np.where(eye, 0.5, U)
    V = np.where(eye, 0.5, V)
    A = QROHFPR.from_powers(U, V, q)
    return check_qrohfpr(A, q)


@dataclass
class RankedAlternative:
    index: int
    score: float
    accuracy: float


@dataclass
class PriorityResult:
    weights: WeightVector
    objective: float
    ranking: list[RankedAlternative] = field(default_factory=list)

    @property
    def order(self) -> list[int]:
        return [r.index for r in self.ranking]


def rank(w: WeightVector, q: float, tol: float = TOL) -> list[RankedAlternative]:
    """Alternatives by decreasing score; accuracy, then index, break ties."""
    q = check_rung(q)
    s, d = w.scores(q), w.accuracies(q)
    order = list(range(w.n))
    # insertion sort on the tolerance-aware comparison keeps it deterministic
    result: list[int] = []
    for i in order:
        pos = len(result)
        for k, j in enumerate(result):
            if compare_values(s[i], d[i], s[j], d[j], tol) > 0:
                pos = k
                break
        result.insert(pos, i)
    return [RankedAlternative(i, float(s[i]), float(d[i])) for i in result]


def build_priority_program(A: QROHFPR, q: float) -> LinearProgram:
    n, l = A.n, A.l
    P, Q = A.powers(q)
    p = LinearProgram()

    def wu(i, s):
        return f"Wu[{i},{s}]"

    def wv(i, s):
        return f"Wv[{i},{s}]"

    for i in range(n):
        for s in range(l):
            p.add_variable(wu(i, s), 0.0, 1.0)
            p.add_variable(wv(i, s), 0.0, 1.0)
    for i in range(n):
        for s in range(l):
            p.add_constraint({wu(i, s): 1.0, wv(i, s): 1.0}, "<=", 1.0)
            p.add_constraint({**{wu(j, s): 1.0 for j in range(n) if j != i}, wv(i, s): -1.0}, "<=", 0.0)
            p.add_constraint({**{wv(j, s): 1.0 for j in range(n) if j != i}, wu(i, s): -1.0}, "<=", n - 2.0)
    for i in range(n):
        for j in range(i + 1, n):
            for s in range(l):
                lp_, lm = add_abs_deviation(
                    p, {wu(i, s): -0.5, wv(j, s): -0.5}, P[i, j, s], prefix=f"lam[{i},{j},{s}]"
                )
                tp, tm = add_abs_deviation(
                    p, {wv(i, s): -0.5, wu(j, s): -0.5}, Q[i, j, s], prefix=f"theta[{i},{j},{s}]"
                )
                p.add_objective({lp_: 1.0, lm: 1.0, tp: 1.0, tm: 1.0})
    return p


def derive_weights(A: QROHFPR, q: float, tol: float = TOL) -> PriorityResult:
    """Fit normalized priority weights to ``A`` by least absolute deviation.

    Deviations are measured between q-th powers, so ``objective`` is the total
    absolute gap between ``a_ij**q`` and the weight-generated relation.
    """
    q = check_rung(q)
    check_qrohfpr(A, q)
    n, l = A.n, A.l
    sol = solve(build_priority_program(A, q))
    if not sol.optimal:
        raise SolverError(f"no normalized weight vector exists for this relation (LP {sol.status.value})")
    Wu = np.array([[sol[f"Wu[{i},{s}]"] for s in range(l)] for i in range(n)])
    Wv = np.array([[sol[f"Wv[{i},{s}]"] for s in range(l)] for i in range(n)])
    w = WeightVector(np.clip(Wu, 0, 1) ** (1.0 / q), np.clip(Wv, 0, 1) ** (1.0 / q))
    obj = max(sol.objective_value, 0.0)
    return PriorityResult(w, obj, rank(w, q, tol))

"""Minimal-change repair of an inconsistent preference relation.

The program is solved over the q-th powers ``U = u**q`` and ``V = v**q`` of the
upper-triangle grades.  In that space the consistency index is a sum of
absolute values of linear forms, so both the objective (total absolute change)
and the threshold constraint linearize exactly with deviation pairs.  Grades
are recovered as q-th roots, which is monotone and therefore keeps ordering and
zero-change solutions intact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TOL, check_rung
from .exceptions import SolverError, ValidationError
from .lp import LinearProgram, add_abs_deviation, solve
from .relations import QROHFPR, check_qrohfpr, ci_from_powers, triples


@dataclass
class RepairResult:
    repaired: QROHFPR
    objective: float
    achieved_ci: float
    changed: bool
    original_ci: float = float("nan")


def _u(i, j, s):
    return f"U[{i},{j},{s}]"


def _v(i, j, s):
    return f"V[{i},{j},{s}]"


def build_repair_program(A: QROHFPR, q: float, ci_bar: float, min_gap: float = 0.0) -> LinearProgram:
    """The repair model as a :class:`LinearProgram` (useful for LP dumps)."""
    n, l = A.n, A.l
    P, Q = A.powers(q)
    p = LinearProgram()
    iu = list(zip(*np.triu_indices(n, 1)))
    for i, j in iu:
        for s in range(l):
            p.add_variable(_u(i, j, s), 0.0, 1.0)
            p.add_variable(_v(i, j, s), 0.0, 1.0)
    for i, j in iu:
        for s in range(l):
            p.add_constraint({_u(i, j, s): 1.0, _v(i, j, s): 1.0}, "<=", 1.0, f"rung[{i},{j},{s}]")
        for s in range(l - 1):
            p.add_constraint({_u(i, j, s): 1.0, _u(i, j, s + 1): -1.0}, "<=", -min_gap)
            p.add_constraint({_v(i, j, s): 1.0, _v(i, j, s + 1): -1.0}, "<=", -min_gap)

    # |phi| <= t for every triple and grade, with the t's summing under the cap
    cap = {}
    for i, j, k in triples(n):
        for s in range(l):
            phi = {
                _u(i, j, s): 1.0,
                _u(j, k, s): 1.0,
                _v(i, k, s): 1.0,
                _v(i, j, s): -1.0,
                _v(j, k, s): -1.0,
                _u(i, k, s): -1.0,
            }
            t = p.add_variable(f"t[{i},{j},{k},{s}]")
            p.add_constraint({**phi, t: -1.0}, "<=", 0.0)
            p.add_constraint({**{key: -c for key, c in phi.items()}, t: -1.0}, "<=", 0.0)
            cap[t] = 1.0
    p.add_constraint(cap, "<=", ci_bar * l * n * (n - 1) * (n - 2) / 2.0, "ci")

    for i, j in iu:
        for s in range(l):
            for name, target in ((_u(i, j, s), P[i, j, s]), (_v(i, j, s), Q[i, j, s])):
                dp, dm = add_abs_deviation(p, {name: 1.0}, -target, prefix=f"d{name}")
                p.add_objective({dp: 1.0, dm: 1.0})
    return p


def repair(A: QROHFPR, q: float, ci_bar: float, min_gap: float = 0.0) -> RepairResult:
    """Nearest acceptably consistent relation to ``A``.

    Distance is the total absolute change of q-th powers of the upper-triangle
    grades.  A relation that is already acceptable comes back unchanged.
    """
    q = check_rung(q)
    check_qrohfpr(A, q)
    if A.n < 3:
        raise ValidationError("consistency repair needs at least 3 alternatives")
    if not 0.0 <= ci_bar <= 1.0:
        raise ValidationError(f"consistency threshold must lie in [0, 1], got {ci_bar}")
    if min_gap < 0:
        raise ValidationError("min_gap must be non-negative")

    P, Q = A.powers(q)
    ci0 = ci_from_powers(P, Q)
    if ci0 <= ci_bar + TOL:
        return RepairResult(A, 0.0, ci0, False, ci0)

    sol = solve(build_repair_program(A, q, ci_bar, min_gap))
    if not sol.optimal:
        # a fully consistent relation always exists, so this is a bug
        raise SolverError(f"repair program reported {sol.status.value}")

    n, l = A.n, A.l
    U = np.array(P, copy=True)
    V = np.array(Q, copy=True)
    for i, j in zip(*np.triu_indices(n, 1)):
        for s in range(l):
            U[i, j, s] = sol[_u(i, j, s)]
            V[i, j, s] = sol[_v(i, j, s)]
            U[j, i, s] = V[i, j, s]
            V[j, i, s] = U[i, j, s]
    repaired = QROHFPR.from_powers(U, V, q)
    # the diagonal must be exactly the neutral grade, not a rounded root
    repaired = QROHFPR.from_arrays(
        np.where(np.eye(n, dtype=bool)[:, :, None], A.mu, repaired.mu),
        np.where(np.eye(n, dtype=bool)[:, :, None], A.nu, repaired.nu),
    )
    obj = max(sol.objective_value, 0.0)
    return RepairResult(repaired, obj, ci_from_powers(*repaired.powers(q)), obj > TOL, ci0)

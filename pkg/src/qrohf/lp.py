"""A small dense linear-programming solver.

Programs are built incrementally (named variables with bounds, linear
constraints, a linear objective to minimize) and solved by a two-phase tableau
simplex using Bland's rule.  Bland's rule is slow compared to steepest-edge
pricing but never cycles and makes every solve reproducible bit for bit.  The
problems built by this package have at most a few hundred columns.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import LPError

FEAS_TOL = 1e-7
OPT_TOL = 1e-9
_PIVOT_TOL = 1e-11

RELATIONS = ("<=", "=", ">=")


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class Constraint:
    coeffs: dict[str, float]
    relation: str
    rhs: float
    name: str = ""


@dataclass
class LinearProgram:
    """Minimize ``objective . x`` subject to linear constraints and bounds."""

    variables: dict[str, tuple[float, float]] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, float] = field(default_factory=dict)
    objective_constant: float = 0.0

    def add_variable(self, name: str, lower: float = 0.0, upper: float = math.inf) -> str:
        if name in self.variables:
            raise LPError(f"variable {name!r} already registered")
        lower, upper = float(lower), float(upper)
        if math.isnan(lower) or math.isnan(upper) or lower > upper:
            raise LPError(f"variable {name!r} has invalid bounds [{lower}, {upper}]")
        self.variables[name] = (lower, upper)
        return name

    def _check_expr(self, expr: Mapping[str, float]) -> dict[str, float]:
        out = {}
        for name, coef in expr.items():
            if name not in self.variables:
                raise LPError(f"unregistered variable {name!r}")
            coef = float(coef)
            if not math.isfinite(coef):
                raise LPError(f"non-finite coefficient for {name!r}")
            out[name] = out.get(name, 0.0) + coef
        return out

    def add_constraint(
        self, expr: Mapping[str, float], relation: str, rhs: float, name: str = ""
    ) -> Constraint:
        if relation not in RELATIONS:
            raise LPError(f"unknown relation {relation!r}; expected one of {RELATIONS}")
        rhs = float(rhs)
        if not math.isfinite(rhs):
            raise LPError(f"constraint {name or len(self.constraints)} has non-finite rhs")
        con = Constraint(self._check_expr(expr), relation, rhs, name)
        self.constraints.append(con)
        return con

    def add_objective(self, expr: Mapping[str, float], constant: float = 0.0) -> None:
        for var, coef in self._check_expr(expr).items():
            self.objective[var] = self.objective.get(var, 0.0) + coef
        self.objective_constant += float(constant)

    def to_lp_text(self) -> str:
        """Dump in CPLEX LP format, for cross-checking with external solvers."""
        safe = {v: f"x{i}" for i, v in enumerate(self.variables)}

        def fmt(expr: Mapping[str, float]) -> str:
            terms = [f"{c:+.17g} {safe[v]}" for v, c in expr.items() if c != 0.0]
            return " ".join(terms) if terms else "0 x0"

        lines = ["\\ variable map: " + ", ".join(f"{s}={v}" for v, s in safe.items())]
        lines += ["Minimize", " obj: " + fmt(self.objective), "Subject To"]
        for k, con in enumerate(self.constraints):
            rel = {"<=": "<=", "=": "=", ">=": ">="}[con.relation]
            lines.append(f" c{k}: {fmt(con.coeffs)} {rel} {con.rhs:.17g}")
        lines.append("Bounds")
        for v, (lo, up) in self.variables.items():
            lo_s = "-inf" if lo == -math.inf else f"{lo:.17g}"
            up_s = "+inf" if up == math.inf else f"{up:.17g}"
            lines.append(f" {lo_s} <= {safe[v]} <= {up_s}")
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass
class LpSolution:
    status: Status
    values: dict[str, float] = field(default_factory=dict)
    objective_value: float = math.nan
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def __getitem__(self, name: str) -> float:
        return self.values[name]


def add_abs_deviation(
    p: LinearProgram, expr: Mapping[str, float], constant: float = 0.0, prefix: str | None = None
) -> tuple[str, str]:
    """Register ``d+, d- >= 0`` with ``expr + constant - d+ + d- = 0``.

    At any optimum that minimizes ``d+ + d-`` their sum equals
    ``|expr + constant|``.  The caller decides how the pair enters the
    objective.
    """
    if prefix is None:
        prefix = f"dev{len(p.variables)}"
    dp = p.add_variable(prefix + "+")
    dm = p.add_variable(prefix + "-")
    coeffs = dict(p._check_expr(expr))
    coeffs[dp] = coeffs.get(dp, 0.0) - 1.0
    coeffs[dm] = coeffs.get(dm, 0.0) + 1.0
    p.add_constraint(coeffs, "=", -float(constant), name=prefix)
    return dp, dm


# --------------------------------------------------------------------------
# standard-form conversion


@dataclass
class _Column:
    # original variable = offset + sign * column   (free vars use two columns)
    var: str
    sign: float


def _standard_form(p: LinearProgram):
    """Rewrite ``p`` as  min c.y  s.t.  A y = b, y >= 0, b >= 0."""
    columns: list[_Column] = []
    offsets: dict[str, float] = {}
    var_cols: dict[str, list[int]] = {}
    rows: list[dict[int, float]] = []
    rhs: list[float] = []
    kinds: list[str] = []

    for name, (lo, up) in p.variables.items():
        if lo > -math.inf:
            offsets[name] = lo
            var_cols[name] = [len(columns)]
            columns.append(_Column(name, 1.0))
            if up < math.inf:
                rows.append({var_cols[name][0]: 1.0})
                rhs.append(up - lo)
                kinds.append("<=")
        elif up < math.inf:
            offsets[name] = up
            var_cols[name] = [len(columns)]
            columns.append(_Column(name, -1.0))
        else:
            offsets[name] = 0.0
            var_cols[name] = [len(columns), len(columns) + 1]
            columns.append(_Column(name, 1.0))
            columns.append(_Column(name, -1.0))

    for con in p.constraints:
        row: dict[int, float] = {}
        b = con.rhs
        for name, coef in con.coeffs.items():
            b -= coef * offsets[name]
            for col in var_cols[name]:
                row[col] = row.get(col, 0.0) + coef * columns[col].sign
        rows.append(row)
        rhs.append(b)
        kinds.append(con.relation)

    cost = np.zeros(len(columns))
    const = p.objective_constant
    for name, coef in p.objective.items():
        const += coef * offsets[name]
        for col in var_cols[name]:
            cost[col] += coef * columns[col].sign
    return columns, offsets, rows, rhs, kinds, cost, const


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    nz = np.nonzero(col)[0]
    if nz.size:
        T[nz] -= np.outer(col[nz], T[r])
    T[:, c] = 0.0
    T[r, c] = 1.0


def _simplex(T: np.ndarray, basis: list[int], allowed: np.ndarray, max_iter: int) -> tuple[str, int]:
    """Bland's-rule simplex on tableau ``T`` (last row = reduced costs).

    Returns ("optimal" | "unbounded", iterations).
    """
    m = len(basis)
    it = 0
    while it < max_iter:
        red = T[-1, :-1]
        cand = np.nonzero((red < -OPT_TOL) & allowed)[0]
        if cand.size == 0:
            return "optimal", it
        c = int(cand[0])
        colv = T[:m, c]
        pos = np.nonzero(colv > _PIVOT_TOL)[0]
        if pos.size == 0:
            return "unbounded", it
        ratios = T[pos, -1] / colv[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, c)
        basis[r] = c
        it += 1
    raise RuntimeError("simplex iteration limit reached")


def solve(p: LinearProgram, max_iter: int = 200_000) -> LpSolution:
    """Solve ``p`` to optimality or diagnose infeasibility / unboundedness."""
    for name, (lo, up) in p.variables.items():
        if lo > up:
            raise LPError(f"variable {name!r} has inverted bounds")
    columns, offsets, rows, rhs, kinds, cost, const = _standard_form(p)
    n_struct = len(columns)
    m = len(rows)

    # slack / surplus columns, then artificials where no slack can start basic
    n_slack = sum(1 for k in kinds if k != "=")
    A = np.zeros((m, n_struct + n_slack))
    b = np.array(rhs, dtype=float)
    slack_of: list[int | None] = []
    s = n_struct
    for i, (row, kind) in enumerate(zip(rows, kinds)):
        for col, coef in row.items():
            A[i, col] = coef
        if kind == "<=":
            A[i, s] = 1.0
            slack_of.append(s)
            s += 1
        elif kind == ">=":
            A[i, s] = -1.0
            slack_of.append(s)
            s += 1
        else:
            slack_of.append(None)
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    basis: list[int] = []
    art_rows = []
    for i in range(m):
        sc = slack_of[i]
        if sc is not None and A[i, sc] == 1.0:
            basis.append(sc)
        else:
            basis.append(-1)
            art_rows.append(i)
    n_cols = A.shape[1]
    n_art = len(art_rows)
    T = np.zeros((m + 1, n_cols + n_art + 1))
    T[:m, :n_cols] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, n_cols + k] = 1.0
        basis[i] = n_cols + k

    total_it = 0
    if n_art:
        # phase 1: minimize the sum of artificials
        T[-1, :] = 0.0
        T[-1, n_cols : n_cols + n_art] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        allowed = np.ones(n_cols + n_art, dtype=bool)
        _, it = _simplex(T, basis, allowed, max_iter)
        total_it += it
        if -T[-1, -1] > FEAS_TOL:
            return LpSolution(Status.INFEASIBLE, iterations=total_it)
        # drive remaining artificials out of the basis
        keep = []
        for i in range(m):
            if basis[i] >= n_cols:
                nz = np.nonzero(np.abs(T[i, :n_cols]) > 1e-9)[0]
                if nz.size:
                    _pivot(T, i, int(nz[0]))
                    basis[i] = int(nz[0])
                    keep.append(i)
                # otherwise the row is redundant and dropped
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        T = np.delete(T, np.s_[n_cols : n_cols + n_art], axis=1)
        basis = [basis[i] for i in keep]
        m = len(basis)

    # phase 2
    full_cost = np.zeros(n_cols)
    full_cost[:n_struct] = cost
    T[-1, :] = 0.0
    T[-1, :n_cols] = full_cost
    for i, bc in enumerate(basis):
        if full_cost[bc] != 0.0:
            T[-1] -= full_cost[bc] * T[i]
    allowed = np.ones(n_cols, dtype=bool)
    status, it = _simplex(T, basis, allowed, max_iter)
    total_it += it
    if status == "unbounded":
        return LpSolution(Status.UNBOUNDED, iterations=total_it)

    y = np.zeros(n_cols)
    for i, bc in enumerate(basis):
        y[bc] = T[i, -1]
    values = dict(offsets)
    for col, colinfo in enumerate(columns):
        values[colinfo.var] += float(colinfo.sign * y[col])
    obj = const + float(cost @ y[:n_struct])
    return LpSolution(Status.OPTIMAL, values, obj, total_it)


def max_violation(p: LinearProgram, values: Mapping[str, float]) -> float:
    """Largest constraint or bound violation of ``values`` in ``p``."""
    worst = 0.0
    for name, (lo, up) in p.variables.items():
        x = values[name]
        worst = max(worst, lo - x, x - up)
    for con in p.constraints:
        lhs = sum(c * values[v] for v, c in con.coeffs.items())
        if con.relation == "<=":
            worst = max(worst, lhs - con.rhs)
        elif con.relation == ">=":
            worst = max(worst, con.rhs - lhs)
        else:
            worst = max(worst, abs(lhs - con.rhs))
    return worst

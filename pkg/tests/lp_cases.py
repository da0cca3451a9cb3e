"""Small LPs whose answers can be checked by hand.

Each case is ``(name, build, status, objective, values)``; ``values`` lists
the variables whose optimum is unique, ``objective`` is ``None`` unless the
status is optimal.
"""
import math

from qrohf.lp import LinearProgram, Status, add_abs_deviation


def _p(variables, constraints, objective, constant=0.0):
    def build():
        p = LinearProgram()
        for name, lo, up in variables:
            p.add_variable(name, lo, up)
        for expr, rel, rhs in constraints:
            p.add_constraint(expr, rel, rhs)
        p.add_objective(objective, constant)
        return p

    return build


def _abs_target():
    # min |x - 3| + |y + 2| with x in [0, 10], y free
    p = LinearProgram()
    p.add_variable("x", 0, 10)
    p.add_variable("y", -math.inf, math.inf)
    a = add_abs_deviation(p, {"x": 1.0}, -3.0, "a")
    b = add_abs_deviation(p, {"y": 1.0}, 2.0, "b")
    p.add_objective({a[0]: 1, a[1]: 1, b[0]: 1, b[1]: 1})
    return p


def _abs_clipped():
    # min |x - 5| with x <= 2
    p = LinearProgram()
    p.add_variable("x", 0, 2)
    d = add_abs_deviation(p, {"x": 1.0}, -5.0, "d")
    p.add_objective({d[0]: 1, d[1]: 1})
    return p


def _transport():
    # two sources (supply 20, 30), two sinks (demand 25, 25), costs 1 2 / 3 1
    p = LinearProgram()
    for v in ("a", "b", "c", "d"):
        p.add_variable(v)
    p.add_constraint({"a": 1, "b": 1}, "<=", 20)
    p.add_constraint({"c": 1, "d": 1}, "<=", 30)
    p.add_constraint({"a": 1, "c": 1}, "=", 25)
    p.add_constraint({"b": 1, "d": 1}, "=", 25)
    p.add_objective({"a": 1, "b": 2, "c": 3, "d": 1})
    return p


INF = math.inf

CASES = [
    ("empty objective", _p([("x", 0, 1)], [], {}), Status.OPTIMAL, 0.0, {}),
    ("lower bound", _p([("x", 2, 5)], [], {"x": 1}), Status.OPTIMAL, 2.0, {"x": 2.0}),
    ("upper bound", _p([("x", 2, 5)], [], {"x": -1}), Status.OPTIMAL, -5.0, {"x": 5.0}),
    ("single <=", _p([("x", 0, INF)], [({"x": 1}, "<=", 4)], {"x": -1}), Status.OPTIMAL, -4.0, {"x": 4.0}),
    ("single >=", _p([("x", 0, INF)], [({"x": 1}, ">=", 3)], {"x": 1}), Status.OPTIMAL, 3.0, {"x": 3.0}),
    (
        "two-variable corner",
        _p([("x", 0, INF), ("y", 0, INF)], [({"x": 1, "y": 1}, "<=", 4), ({"x": 1, "y": 3}, "<=", 6)], {"x": -3, "y": -2}),
        Status.OPTIMAL, -12.0, {"x": 4.0, "y": 0.0},
    ),
    (
        "interior corner",
        _p([("x", 0, INF), ("y", 0, INF)], [({"x": 2, "y": 1}, "<=", 8), ({"x": 1, "y": 2}, "<=", 7)], {"x": -1, "y": -1}),
        Status.OPTIMAL, -5.0, {"x": 3.0, "y": 2.0},
    ),
    (
        "equality",
        _p([("x", 0, INF), ("y", 0, INF)], [({"x": 1, "y": 1}, "=", 10)], {"x": 2, "y": 3}),
        Status.OPTIMAL, 20.0, {"x": 10.0, "y": 0.0},
    ),
    (
        "mixed relations",
        _p([("x", 0, INF), ("y", 0, INF)], [({"x": 1, "y": 1}, ">=", 2), ({"x": 1, "y": -1}, "=", 1)], {"x": 1, "y": 1}),
        Status.OPTIMAL, 2.0, {"x": 1.5, "y": 0.5},
    ),
    ("free variable", _p([("x", -INF, INF)], [({"x": 1}, ">=", -7)], {"x": 1}), Status.OPTIMAL, -7.0, {"x": -7.0}),
    ("upper-only variable", _p([("x", -INF, 3)], [({"x": 1}, ">=", -1)], {"x": 1}), Status.OPTIMAL, -1.0, {"x": -1.0}),
    ("negative rhs", _p([("x", 0, INF), ("y", 0, INF)], [({"x": -1, "y": -1}, "<=", -3)], {"x": 1, "y": 2}), Status.OPTIMAL, 3.0, {"x": 3.0, "y": 0.0}),
    ("objective constant", _p([("x", 0, 1)], [], {"x": 1}, 2.5), Status.OPTIMAL, 2.5, {"x": 0.0}),
    ("absolute deviations", _abs_target, Status.OPTIMAL, 0.0, {"x": 3.0, "y": -2.0}),
    ("clipped deviation", _abs_clipped, Status.OPTIMAL, 3.0, {"x": 2.0}),
    ("transportation", _transport, Status.OPTIMAL, 60.0, {"a": 20.0, "b": 0.0, "c": 5.0, "d": 25.0}),
    ("infeasible bounds row", _p([("x", 0, 1)], [({"x": 1}, ">=", 2)], {"x": 1}), Status.INFEASIBLE, None, {}),
    (
        "infeasible pair",
        _p([("x", 0, INF), ("y", 0, INF)], [({"x": 1, "y": 1}, "<=", 1), ({"x": 1, "y": 1}, ">=", 3)], {"x": 1}),
        Status.INFEASIBLE, None, {},
    ),
    ("unbounded ray", _p([("x", 0, INF)], [], {"x": -1}), Status.UNBOUNDED, None, {}),
    (
        "unbounded free",
        _p([("x", -INF, INF), ("y", 0, INF)], [({"x": 1, "y": -1}, "<=", 0)], {"x": 1}),
        Status.UNBOUNDED, None, {},
    ),
]

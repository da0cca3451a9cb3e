"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line in ``RESULTS``; ``conftest.py`` prints
them in the terminal summary.  Run ``python tests/test_acceptance.py`` to get
the lines without pytest.
"""
import json
import math

import numpy as np

from conftest import example_document, random_qrohfn, random_qrohfpr, random_weights
from lp_cases import CASES
from oracles import grid_repair_min
from qrohf.consensus import ExpertPanel, aggregate, blend, gci, is_acceptable_consensus, reach_consensus
from qrohf.core import accuracy, compare, hamming_distance, hesitancy, score
from qrohf.io import parse_session
from qrohf.lp import solve
from qrohf.pipeline import run_pipeline
from qrohf.priority import consistent_qrohfpr_from_weights, derive_weights
from qrohf.relations import consistency_index, validate_qrohfpr
from qrohf.repair import repair

RESULTS: dict[int, str] = {}

EXPECTED_CI = (0.1611, 0.1250, 0.0833)
CI_TOL = 5e-3
EXPECTED_A12 = ((0.3522, 0.4217, 0.4904), (0.2930, 0.3328, 0.3760))
AGG_TOL = 2e-3
EXPECTED_GCI = (0.08, 0.10, 0.06)
GCI_TOL = 5e-3
EXPECTED_ORDER = [0, 1, 2, 3]


def record(k: int, ok: bool, detail: str) -> None:
    RESULTS[k] = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    print(RESULTS[k])


def _panel(q):
    return parse_session(example_document(), q)[0]


def test_criterion_01_consistency_index():
    def hits(q):
        vals = [consistency_index(A, q) for A in _panel(q).matrices]
        return vals, all(abs(v - t) <= CI_TOL for v, t in zip(vals, EXPECTED_CI))

    vals3, ok3 = hits(3)
    detail = f"q=3 CI={[round(v, 4) for v in vals3]}"
    ok = ok3
    if not ok3:
        recorded = example_document()["metadata"].get("ci_matching_rung")
        matching = [q for q in (1, 2) if hits(q)[1]]
        ok = bool(matching) and recorded in matching
        detail += f"; contingency rungs matching={matching}, fixture records {recorded}"
        if matching:
            detail += f", CI at q={matching[0]}: {[round(v, 4) for v in hits(matching[0])[0]]}"
    record(1, ok, detail)
    assert ok


def test_criterion_02_aggregation():
    G = aggregate(_panel(3), 3)
    got = G[0, 1]
    err = max(
        max(abs(a - b) for a, b in zip(got.mu, EXPECTED_A12[0])),
        max(abs(a - b) for a, b in zip(got.nu, EXPECTED_A12[1])),
    )
    ok = err <= AGG_TOL
    record(2, ok, f"a_12 = <{[round(x, 4) for x in got.mu]}, {[round(x, 4) for x in got.nu]}>, max grade error {err:.4g} (tol {AGG_TOL})")
    assert ok


def test_criterion_03_consensus_index():
    panel = _panel(3)
    G = aggregate(panel, 3)
    vals = [gci(A, G) for A in panel.matrices]
    values_ok = all(abs(v - t) <= GCI_TOL for v, t in zip(vals, EXPECTED_GCI))
    no_adjustment = all(is_acceptable_consensus(v, 0.1) for v in vals)
    boundary_ok = is_acceptable_consensus(0.1, 0.1)
    ok = values_ok and no_adjustment and boundary_ok
    record(3, ok, f"GCI={[round(v, 4) for v in vals]} (targets {EXPECTED_GCI}, tol {GCI_TOL}); "
                  f"no adjustment at 0.1: {no_adjustment}; boundary 0.1 accepted: {boundary_ok}")
    assert ok


def test_criterion_04_ranking():
    orders = {}
    for q in (3, 4):
        panel, config = parse_session(example_document(), q)
        orders[q] = run_pipeline(panel, config).order
    ok = all(o == EXPECTED_ORDER for o in orders.values())
    shown = {q: " > ".join(f"x{i + 1}" for i in o) for q, o in orders.items()}
    record(4, ok, f"q=3: {shown[3]}; q=4: {shown[4]} (target x1 > x2 > x3 > x4)")
    assert ok


def test_criterion_05_repair():
    rng = np.random.default_rng(505)
    bad = []
    worst_ci = -math.inf
    for k in range(200):
        n, l, q = int(rng.integers(3, 6)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        A = random_qrohfpr(rng, n, l, q)
        ci_bar = float(rng.uniform(0.01, 0.1))
        r = repair(A, q, ci_bar)
        ci = consistency_index(r.repaired, q)
        worst_ci = max(worst_ci, ci - ci_bar)
        again = repair(r.repaired, q, ci_bar)
        if ci > ci_bar + 1e-6 or not validate_qrohfpr(r.repaired, q).ok or again.objective > 1e-9:
            bad.append(k)
    grid_bad = []
    for k in range(20):
        q = int(rng.integers(1, 4))
        A = random_qrohfpr(rng, 3, 1, q)
        ci_bar = float(rng.uniform(0.01, 0.1))
        r = repair(A, q, ci_bar)
        g = grid_repair_min(*A.powers(q), ci_bar, step=0.01)
        if g < r.objective - 0.01 or r.objective > g + 1e-7:
            grid_bad.append(k)
    ok = not bad and not grid_bad
    record(5, ok, f"200 repairs, {len(bad)} failing (max CI - ci_bar {worst_ci:.2e}); "
                  f"20 grid-oracle instances, {len(grid_bad)} disagreeing")
    assert ok


def test_criterion_06_priority_round_trip():
    rng = np.random.default_rng(606)
    worst_obj = worst_grade = 0.0
    for _ in range(200):
        n, l, q = int(rng.integers(3, 6)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        A = consistent_qrohfpr_from_weights(random_weights(rng, n, l, q), q)
        res = derive_weights(A, q)
        B = consistent_qrohfpr_from_weights(res.weights, q)
        worst_obj = max(worst_obj, res.objective)
        worst_grade = max(worst_grade, float(np.abs(A.mu - B.mu).max()), float(np.abs(A.nu - B.nu).max()))
    ok = worst_obj <= 1e-6 and worst_grade <= 1e-6
    record(6, ok, f"200 round trips, max objective {worst_obj:.2e}, max grade error {worst_grade:.2e} (tol 1e-6)")
    assert ok


def _random_panel(rng):
    m, n, l, q = int(rng.integers(2, 6)), int(rng.integers(3, 6)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
    mats = [random_qrohfpr(rng, n, l, q) for _ in range(m)]
    return ExpertPanel(mats, list(rng.dirichlet(np.ones(m)))), q


def test_criterion_07_aggregation_bound():
    rng = np.random.default_rng(707)
    worst = -math.inf
    for _ in range(200):
        panel, q = _random_panel(rng)
        lhs = consistency_index(aggregate(panel, q), q)
        rhs = sum(w * consistency_index(A, q) for w, A in zip(panel.weights, panel.matrices))
        worst = max(worst, lhs - rhs)
    ok = worst <= 1e-9
    record(7, ok, f"200 panels, max CI(aggregate) - weighted CI {worst:.2e} (tol 1e-9)")
    assert ok


def test_criterion_08_contraction():
    rng = np.random.default_rng(808)
    worst_ratio = worst_fixed = 0.0
    steps = 0
    for k in range(50):
        panel, q = _random_panel(rng)
        zeta = (0.3, 0.5, 0.7)[k % 3]
        # gci_bar = 0 forces blending; ci_bar = 1 rules out repairs
        out = reach_consensus(panel, q, 0.0, zeta, 4, 1.0)
        assert not out.repair_events
        for prev, cur in zip(out.trace, out.trace[1:]):
            for a, b in zip(prev.gci_power, cur.gci_power):
                worst_ratio = max(worst_ratio, abs(b - zeta * a))
                steps += 1
        G = aggregate(panel, q)
        blended = panel.with_matrices([blend(A, G, zeta, q) for A in panel.matrices])
        G2 = aggregate(blended, q)
        worst_fixed = max(worst_fixed, float(np.abs(G.mu - G2.mu).max()), float(np.abs(G.nu - G2.nu).max()))
    ok = worst_ratio <= 1e-9 and worst_fixed <= 1e-9
    record(8, ok, f"50 panels, {steps} expert-steps, max |GCI_q' - zeta*GCI_q| {worst_ratio:.2e}, "
                  f"max group drift {worst_fixed:.2e} (tol 1e-9)")
    assert ok


def _fingerprint(sol):
    return json.dumps([sol.status.value, repr(sol.objective_value), sorted((k, repr(v)) for k, v in sol.values.items())])


def test_criterion_09_lp_solver():
    wrong, unstable = [], []
    for name, build, status, objective, values in CASES:
        s = solve(build())
        right = s.status == status
        if objective is not None:
            right = right and abs(s.objective_value - objective) <= 1e-9
        right = right and all(abs(s[v] - x) <= 1e-9 for v, x in values.items())
        if not right:
            wrong.append(name)
        if any(_fingerprint(solve(build())) != _fingerprint(s) for _ in range(3)):
            unstable.append(name)
    ok = len(CASES) == 20 and not wrong and not unstable
    record(9, ok, f"{len(CASES)} LPs, wrong={wrong}, non-deterministic={unstable}")
    assert ok


def test_criterion_10_core_algebra():
    rng = np.random.default_rng(1010)
    worst = 0.0
    broken = 0
    for _ in range(1000):
        q = float(rng.choice([1, 2, 3, 4, 5.5]))
        l = int(rng.integers(1, 5))
        x, y = random_qrohfn(rng, q, l), random_qrohfn(rng, q, l)
        s, a = score(x, q), accuracy(x, q)
        pi = hesitancy(x, q)
        ident = max(abs(u**q + v**q + p**q - 1) for u, v, p in zip(x.mu, x.nu, pi))
        d_xy, d_yx, d_xx = hamming_distance(x, y, q), hamming_distance(y, x, q), hamming_distance(x, x, q)
        worst = max(worst, ident, abs(d_xy - d_yx), d_xx)
        ok = (
            -1 - 1e-9 <= s <= 1 + 1e-9
            and -1e-9 <= a <= 1 + 1e-9
            and -1e-9 <= d_xy <= 1 + 1e-9
            and compare(x, y, q) == -compare(y, x, q)
            and compare(x, x, q) == 0
        )
        broken += not ok
    ok = broken == 0 and worst <= 1e-9
    record(10, ok, f"1000 numbers, {broken} range/comparison failures, max identity/symmetry error {worst:.2e}")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion")):
        try:
            fn()
        except AssertionError:
            pass

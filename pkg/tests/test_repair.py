import numpy as np
import pytest

from conftest import example_document, random_qrohfpr
from oracles import grid_repair_min, scipy_optimum
from qrohf.exceptions import ValidationError
from qrohf.io import parse_session
from qrohf.relations import consistency_index, deviation, validate_qrohfpr
from qrohf.repair import build_repair_program, repair


def test_acceptable_matrix_unchanged():
    panel, _ = parse_session(example_document(), 3)
    A3 = panel.matrices[2]
    r = repair(A3, 3, 0.1)
    assert not r.changed and r.objective == 0 and r.repaired is A3
    r = repair(panel.matrices[0], 3, 1.0)
    assert not r.changed


def test_example_repair_at_matching_rung():
    panel, _ = parse_session(example_document(), 1)
    for A, expected_change in zip(panel.matrices, (True, True, False)):
        r = repair(A, 1, 0.1)
        assert r.changed is expected_change
        assert r.achieved_ci <= 0.1 + 1e-9
        assert r.original_ci == pytest.approx(consistency_index(A, 1))
        assert validate_qrohfpr(r.repaired, 1).ok
        # at q = 1 the q-power change is the plain grade change
        assert deviation(A, r.repaired) == pytest.approx(r.objective, abs=1e-9)


def test_objective_matches_scipy(rng):
    for _ in range(15):
        n, l, q = int(rng.integers(3, 6)), int(rng.integers(1, 3)), float(rng.choice([1, 2, 3]))
        A = random_qrohfpr(rng, n, l, q)
        ci_bar = 0.02
        r = repair(A, q, ci_bar)
        if r.changed:
            assert r.objective == pytest.approx(scipy_optimum(build_repair_program(A, q, ci_bar)), abs=1e-7)


def test_objective_is_power_deviation(rng):
    for _ in range(10):
        A = random_qrohfpr(rng, 4, 2, 3)
        r = repair(A, 3, 0.02)
        P, Q = A.powers(3)
        P2, Q2 = r.repaired.powers(3)
        iu = np.triu_indices(4, 1)
        assert r.objective == pytest.approx(np.abs(P - P2)[iu].sum() + np.abs(Q - Q2)[iu].sum(), abs=1e-9)


def test_grid_oracle(rng):
    for _ in range(10):
        q = float(rng.choice([1, 2, 3]))
        A = random_qrohfpr(rng, 3, 1, q)
        r = repair(A, q, 0.05)
        g = grid_repair_min(*A.powers(q), 0.05)
        # the grid is a restriction of the LP, so it can never do better;
        # "not better by more than one grid step" is the weaker bound
        assert r.objective <= g + 1e-7
        assert g >= r.objective - 0.01


def test_idempotent_and_valid(rng):
    for _ in range(20):
        n, l, q = int(rng.integers(3, 6)), int(rng.integers(1, 4)), float(rng.choice([1, 2, 3]))
        r = repair(random_qrohfpr(rng, n, l, q), q, 0.03)
        assert consistency_index(r.repaired, q) <= 0.03 + 1e-6
        assert validate_qrohfpr(r.repaired, q).ok
        assert repair(r.repaired, q, 0.03).objective <= 1e-9


def test_min_gap_keeps_grades_apart(rng):
    A = random_qrohfpr(rng, 4, 3, 2)
    r = repair(A, 2, 0.0, min_gap=0.01)
    U, V = r.repaired.powers(2)
    iu = np.triu_indices(4, 1)
    assert np.all(np.diff(U[iu], axis=-1) >= 0.01 - 1e-9)
    assert np.all(np.diff(V[iu], axis=-1) >= 0.01 - 1e-9)


def test_zero_threshold_gives_full_consistency(rng):
    r = repair(random_qrohfpr(rng, 5, 2, 2), 2, 0.0)
    assert consistency_index(r.repaired, 2) <= 1e-9


def test_rejects_bad_arguments(rng):
    A = random_qrohfpr(rng, 3, 1, 2)
    with pytest.raises(ValidationError):
        repair(A, 2, 1.5)
    with pytest.raises(ValidationError):
        repair(A, 2, 0.1, min_gap=-1)
    with pytest.raises(ValidationError):
        repair(random_qrohfpr(rng, 2, 1, 2), 2, 0.1)

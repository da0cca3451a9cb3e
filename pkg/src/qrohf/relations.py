"""Preference relations whose entries are q-ROHF numbers.

Entry ``(i, j)`` states how strongly alternative ``i`` is preferred to ``j``.
Numerical routines work on ``(n, n, l)`` grade arrays; most of them only read
the upper triangle because reciprocity fixes the rest.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (
    TOL,
    QROHFN,
    ValidationReport,
    check_rung,
    compare,
    hfn_add,
    neutral,
    neutral_grade,
    validate_qrohfn,
)
from .exceptions import ValidationError

TRANSITIVITY_KINDS = (
    "triangle",
    "weak",
    "max-min",
    "max-max",
    "restricted-max-min",
    "restricted-max-max",
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class QROHFPR:
    """An ``n x n`` matrix of q-ROHF numbers.

    Build it from a grid of :class:`QROHFN` entries, from grade arrays with
    :meth:`from_arrays`, or from the upper triangle with :meth:`from_upper`.
    Nothing is validated on construction; see :func:`validate_qrohfpr`.
    """

    def __init__(self, entries: Sequence[Sequence[QROHFN]]):
        self.entries = tuple(tuple(row) for row in entries)

    @classmethod
    def from_arrays(cls, mu, nu) -> "QROHFPR":
        mu, nu = np.asarray(mu, dtype=float), np.asarray(nu, dtype=float)
        if mu.ndim != 3 or mu.shape != nu.shape or mu.shape[0] != mu.shape[1]:
            raise ValidationError(f"grade arrays must both have shape (n, n, l), got {mu.shape} and {nu.shape}")
        n = mu.shape[0]
        obj = cls([[QROHFN(mu[i, j], nu[i, j]) for j in range(n)] for i in range(n)])
        obj.__dict__["mu"] = _frozen(mu)
        obj.__dict__["nu"] = _frozen(nu)
        return obj

    @classmethod
    def from_powers(cls, U, V, q: float) -> "QROHFPR":
        """Build from q-th powers of the grades."""
        q = check_rung(q)
        U = np.clip(np.asarray(U, dtype=float), 0.0, 1.0)
        V = np.clip(np.asarray(V, dtype=float), 0.0, 1.0)
        return cls.from_arrays(U ** (1.0 / q), V ** (1.0 / q))

    @classmethod
    def from_upper(cls, upper: Mapping[tuple[int, int], QROHFN], n: int, q: float) -> "QROHFPR":
        """Complete a matrix from its strict upper triangle.

        The diagonal becomes the neutral element and ``a_ji`` swaps the grade
        sets of ``a_ij``.
        """
        q = check_rung(q)
        missing = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in upper]
        if missing:
            raise ValidationError(f"upper triangle is missing cells {missing}")
        l = upper[(0, 1)].l if n > 1 else 1
        grid: list[list[QROHFN]] = [[None] * n for _ in range(n)]  # type: ignore[list-item]
        for i in range(n):
            grid[i][i] = neutral(q, l)
        for (i, j), x in upper.items():
            grid[i][j] = x
            grid[j][i] = QROHFN(x.nu, x.mu)
        return cls(grid)

    @property
    def n(self) -> int:
        return len(self.entries)

    @cached_property
    def l(self) -> int:
        lengths = {len(x.mu) for i, row in enumerate(self.entries) for j, x in enumerate(row) if i != j}
        lengths |= {len(x.nu) for i, row in enumerate(self.entries) for j, x in enumerate(row) if i != j}
        if not lengths:
            return len(self.entries[0][0].mu) if self.entries else 0
        if len(lengths) != 1:
            raise ValidationError(f"entries have differing hesitancy lengths {sorted(lengths)}")
        return lengths.pop()

    def _grades(self, side: str) -> np.ndarray:
        n, l = self.n, self.l
        out = np.empty((n, n, l))
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise ValidationError(f"row {i} has {len(row)} entries, expected {n}")
            for j, x in enumerate(row):
                g = getattr(x, side)
                if len(g) == l:
                    out[i, j] = g
                elif i == j and len(g) == 1:
                    out[i, j] = g[0]
                else:
                    raise ValidationError(f"entry ({i}, {j}) has {len(g)} grades, expected {l}")
        return _frozen(out)

    @cached_property
    def mu(self) -> np.ndarray:
        return self._grades("mu")

    @cached_property
    def nu(self) -> np.ndarray:
        return self._grades("nu")

    def powers(self, q: float) -> tuple[np.ndarray, np.ndarray]:
        return self.mu**q, self.nu**q

    def __getitem__(self, ij: tuple[int, int]) -> QROHFN:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QROHFPR):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "QROHFPR", atol: float = 1e-9) -> bool:
        return (
            self.n == other.n
            and self.l == other.l
            and bool(np.allclose(self.mu, other.mu, rtol=0, atol=atol))
            and bool(np.allclose(self.nu, other.nu, rtol=0, atol=atol))
        )

    def upper(self) -> dict[tuple[int, int], QROHFN]:
        return {(i, j): self.entries[i][j] for i in range(self.n) for j in range(i + 1, self.n)}

    def permuted(self, order: Sequence[int]) -> "QROHFPR":
        """Relabel alternatives: new alternative ``k`` is old ``order[k]``."""
        idx = np.asarray(order)
        return QROHFPR.from_arrays(self.mu[np.ix_(idx, idx)], self.nu[np.ix_(idx, idx)])

    def __repr__(self) -> str:
        try:
            return f"QROHFPR(n={self.n}, l={self.l})"
        except ValidationError:
            return f"QROHFPR(n={self.n}, ragged)"


def validate_qrohfpr(A: QROHFPR, q: float) -> ValidationReport:
    q = check_rung(q)
    report = ValidationReport()
    n = A.n
    if n < 2:
        report.add("size", f"need at least 2 alternatives, got {n}")
        return report
    for i, row in enumerate(A.entries):
        if len(row) != n:
            report.add("size", f"row has {len(row)} entries, expected {n}", (i,))
    if not report.ok:
        return report

    lengths = {}
    for i in range(n):
        for j in range(n):
            x = A.entries[i][j]
            r = validate_qrohfn(x, q)
            report.extend(r, (i, j))
            if i != j:
                lengths[(i, j)] = len(x.mu)
    counts = list(lengths.values())
    l = max(set(counts), key=counts.count)
    for cell, ln in lengths.items():
        if ln != l:
            report.add("length", f"entry has {ln} grades but most entries have {l}", cell)

    g = neutral_grade(q)
    for i in range(n):
        x = A.entries[i][i]
        grades = x.mu + x.nu
        if len(x.mu) not in (1, l) or len(x.nu) not in (1, l) or any(abs(v - g) > TOL for v in grades):
            report.add("diagonal", f"diagonal must be the neutral grade {g:.6g}, got {x!r}", (i, i))

    for i in range(n):
        for j in range(i + 1, n):
            a, b = A.entries[i][j], A.entries[j][i]
            if len(a.mu) != len(b.nu) or len(a.nu) != len(b.mu):
                report.add("reciprocity", f"entry ({j}, {i}) does not mirror ({i}, {j})", (j, i))
                continue
            if any(abs(x - y) > TOL for x, y in zip(a.mu + a.nu, b.nu + b.mu)):
                report.add("reciprocity", f"entry ({j}, {i}) = {b!r} does not mirror ({i}, {j}) = {a!r}", (j, i))
    return report


def check_qrohfpr(A: QROHFPR, q: float) -> QROHFPR:
    """Raise :class:`ValidationError` unless ``A`` is a valid relation at rung ``q``."""
    if not isinstance(A, QROHFPR):
        raise ValidationError(f"expected a QROHFPR, got {type(A).__name__}")
    validate_qrohfpr(A, q).raise_if_failed("q-ROHFPR")
    return A


def triples(n: int) -> np.ndarray:
    """All ``i < j < k`` index triples as an ``(m, 3)`` array."""
    return np.array(list(itertools.combinations(range(n), 3)), dtype=int).reshape(-1, 3)


def triple_imbalance(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Additive-transitivity residuals per triple and grade, from q-th powers."""
    t = triples(U.shape[0])
    i, j, k = t[:, 0], t[:, 1], t[:, 2]
    return U[i, j] + U[j, k] + V[i, k] - V[i, j] - V[j, k] - U[i, k]


def ci_from_powers(U: np.ndarray, V: np.ndarray) -> float:
    n, l = U.shape[0], U.shape[2]
    if n < 3:
        raise ValidationError(f"consistency index needs n >= 3, got {n}")
    return float(np.abs(triple_imbalance(U, V)).sum() * 2.0 / (l * n * (n - 1) * (n - 2)))


def consistency_index(A: QROHFPR, q: float) -> float:
    check_qrohfpr(A, q)
    return ci_from_powers(*A.powers(q))


def is_acceptably_consistent(A: QROHFPR, q: float, ci_bar: float) -> bool:
    if not 0.0 <= ci_bar <= 1.0:
        raise ValidationError(f"consistency threshold must lie in [0, 1], got {ci_bar}")
    return consistency_index(A, q) <= ci_bar + TOL


def _shape_check(A: QROHFPR, B: QROHFPR) -> None:
    if A.n != B.n or A.l != B.l:
        raise ValidationError(f"shape mismatch: (n={A.n}, l={A.l}) vs (n={B.n}, l={B.l})")


def upper_abs_deviation(muA, nuA, muB, nuB) -> float:
    iu = np.triu_indices(muA.shape[0], 1)
    return float(np.abs(muA[iu] - muB[iu]).sum() + np.abs(nuA[iu] - nuB[iu]).sum())


def deviation(A: QROHFPR, B: QROHFPR) -> float:
    _shape_check(A, B)
    return upper_abs_deviation(A.mu, A.nu, B.mu, B.nu)


def normalized_distance(dev: float, n: int, l: int) -> float:
    # The 1/((n-1)(n-2)) factor is kept as defined even though it is not
    # 1/(number of pairs); reference consensus values depend on it.
    if n < 3:
        raise ValidationError(f"matrix distance needs n >= 3, got {n}")
    return dev / (2 * l * (n - 1) * (n - 2))


def manhattan_distance(A: QROHFPR, B: QROHFPR) -> float:
    _shape_check(A, B)
    return normalized_distance(deviation(A, B), A.n, A.l)


def _dominates(x: QROHFN, y: QROHFN, q: float) -> bool:
    return compare(x, y, q) >= 0


def check_transitivity(A: QROHFPR, q: float, kind: str) -> list[tuple[int, int, int]]:
    """Triples violating the chosen transitivity property.

    Each violation is reported as the path ``(i, k, j)``: the judgments
    ``a_ik`` and ``a_kj`` together with the direct judgment ``a_ij``.  Only
    triples of distinct alternatives are examined.  Indices are 0-based.
    """
    if kind not in TRANSITIVITY_KINDS:
        raise ValueError(f"unknown transitivity property {kind!r}; choose from {TRANSITIVITY_KINDS}")
    check_qrohfpr(A, q)
    if A.n < 3:
        raise ValidationError("transitivity needs at least 3 alternatives")
    mid = neutral(q, A.l)

    def bigger(x, y):
        return x if compare(x, y, q) >= 0 else y

    def smaller(x, y):
        return x if compare(x, y, q) <= 0 else y

    bad = []
    for i, k, j in itertools.permutations(range(A.n), 3):
        aik, akj, aij = A[i, k], A[k, j], A[i, j]
        premise = _dominates(aik, mid, q) and _dominates(akj, mid, q)
        if kind == "triangle":
            ok = _dominates(hfn_add(aik, akj, q), aij, q)
        elif kind == "weak":
            ok = not premise or _dominates(aij, mid, q)
        elif kind == "max-min":
            ok = _dominates(aij, smaller(aik, akj), q)
        elif kind == "max-max":
            ok = _dominates(aij, bigger(aik, akj), q)
        elif kind == "restricted-max-min":
            ok = not premise or _dominates(aij, smaller(aik, akj), q)
        else:
            ok = not premise or _dominates(aij, bigger(aik, akj), q)
        if not ok:
            bad.append((i, k, j))
    return bad


def entries_from_nested(cells: Iterable[Iterable[tuple[Sequence[float], Sequence[float]]]]) -> QROHFPR:
    """Convenience: ``[[(mu, nu), ...], ...]`` -> :class:`QROHFPR`."""
    return QROHFPR([[QROHFN(mu, nu) for mu, nu in row] for row in cells])

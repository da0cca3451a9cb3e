"""q-rung orthopair hesitant fuzzy numbers.

A number is a pair of grade sets ``<mu, nu>`` of equal length ``l``.  The rung
``q`` is not stored on the number: every operation takes it as an argument and
all numbers within one decision problem share it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import ValidationError

#: absolute tolerance for score/accuracy ties, grade dedup and range checks
TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    location: tuple = ()

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location else ""
        return f"{self.kind}{where}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, message: str, location: tuple = ()) -> None:
        self.violations.append(Violation(kind, message, location))

    def extend(self, other: "ValidationReport", prefix: tuple = ()) -> None:
        for v in other.violations:
            self.violations.append(Violation(v.kind, v.message, prefix + v.location))

    def raise_if_failed(self, what: str = "input") -> None:
        if not self.ok:
            lines = "; ".join(str(v) for v in self.violations[:5])
            more = len(self.violations) - 5
            if more > 0:
                lines += f"; ... ({more} more)"
            raise ValidationError(f"invalid {what}: {lines}", self)


@dataclass(frozen=True)
class QROHFN:
    """One hesitant judgment: membership grades ``mu`` and non-membership ``nu``."""

    mu: tuple[float, ...]
    nu: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        object.__setattr__(self, "nu", tuple(float(x) for x in self.nu))

    @property
    def l(self) -> int:
        return len(self.mu)

    def __repr__(self) -> str:
        mu = ", ".join(f"{x:.4f}" for x in self.mu)
        nu = ", ".join(f"{x:.4f}" for x in self.nu)
        return f"QROHFN({{{mu}}}, {{{nu}}})"


def check_rung(q: float) -> float:
    q = float(q)
    if not math.isfinite(q) or q < 1:
        raise ValidationError(f"rung q must be a finite real >= 1, got {q}")
    return q


def neutral_grade(q: float) -> float:
    return 2.0 ** (-1.0 / check_rung(q))


def neutral(q: float, l: int = 1) -> QROHFN:
    """Indifference element: ``l`` copies of ``2**(-1/q)`` on both sides."""
    if l < 1:
        raise ValidationError(f"hesitancy length must be >= 1, got {l}")
    g = neutral_grade(q)
    return QROHFN((g,) * l, (g,) * l)


def validate_qrohfn(x: QROHFN, q: float) -> ValidationReport:
    q = check_rung(q)
    report = ValidationReport()
    if len(x.mu) == 0 or len(x.nu) == 0:
        report.add("length", "grade sets must be non-empty")
        return report
    if len(x.mu) != len(x.nu):
        report.add("length", f"mu has {len(x.mu)} grades but nu has {len(x.nu)}")
    for name, grades in (("mu", x.mu), ("nu", x.nu)):
        if any(not math.isfinite(g) or g < -TOL or g > 1 + TOL for g in grades):
            report.add("range", f"{name} grades must lie in [0, 1]: {list(grades)}")
        if any(b < a - TOL for a, b in zip(grades, grades[1:])):
            report.add("ordering", f"{name} grades must be non-decreasing: {list(grades)}")
    if report.ok or report.kinds() <= {"length", "ordering"}:
        top = max(x.mu) ** q + max(x.nu) ** q
        if top > 1 + TOL:
            report.add("rung", f"max(mu)^q + max(nu)^q = {top:.6g} > 1 at q={q:g}")
    return report


def _require_valid(x: QROHFN, q: float) -> None:
    validate_qrohfn(x, q).raise_if_failed("q-ROHFN")


def score(x: QROHFN, q: float) -> float:
    _require_valid(x, q)
    return float(np.mean(np.power(x.mu, q)) - np.mean(np.power(x.nu, q)))


def accuracy(x: QROHFN, q: float) -> float:
    _require_valid(x, q)
    return float(np.mean(np.power(x.mu, q)) + np.mean(np.power(x.nu, q)))


def compare_values(s1: float, d1: float, s2: float, d2: float, tol: float = TOL) -> int:
    """Order two (score, accuracy) pairs: score first, accuracy on a tie."""
    if abs(s1 - s2) > tol:
        return 1 if s1 > s2 else -1
    if abs(d1 - d2) > tol:
        return 1 if d1 > d2 else -1
    return 0


def compare(x1: QROHFN, x2: QROHFN, q: float) -> int:
    """Return 1 if ``x1 > x2``, -1 if ``x1 < x2`` and 0 when they rank equal."""
    return compare_values(score(x1, q), accuracy(x1, q), score(x2, q), accuracy(x2, q))


def hesitancy(x: QROHFN, q: float) -> tuple[float, ...]:
    _require_valid(x, q)
    rest = 1.0 - np.power(x.mu, q) - np.power(x.nu, q)
    # grades within the rung bound can still round to a hair below zero
    return tuple(float(r) for r in np.power(np.clip(rest, 0.0, 1.0), 1.0 / q))


def hamming_distance(x1: QROHFN, x2: QROHFN, q: float) -> float:
    if x1.l != x2.l:
        raise ValidationError(f"cannot compare hesitant sets of lengths {x1.l} and {x2.l}")
    p1 = np.array(hesitancy(x1, q))
    p2 = np.array(hesitancy(x2, q))
    total = (
        np.abs(np.subtract(x1.mu, x2.mu))
        + np.abs(np.subtract(x1.nu, x2.nu))
        + np.abs(p1 - p2)
    ).sum()
    return float(total / (2 * x1.l))


def _collect(pairs: Sequence[tuple[float, float]], q: float, dedup: bool = True) -> QROHFN:
    # Deduplicate (mu, nu) pairs jointly so both sides keep the same count,
    # then sort each side ascending.
    kept: list[tuple[float, float]] = []
    for u, v in sorted(pairs):
        if not dedup or not any(abs(u - a) <= TOL and abs(v - b) <= TOL for a, b in kept):
            kept.append((u, v))
    mu = sorted(min(max(u, 0.0), 1.0) for u, _ in kept)
    nu = sorted(min(max(v, 0.0), 1.0) for _, v in kept)
    out = QROHFN(mu, nu)
    _require_valid(out, q)
    return out


def _qroot(x: float, q: float) -> float:
    return max(x, 0.0) ** (1.0 / q)


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0:
        raise ValidationError(f"multiplier must be a positive real, got {lam}")
    return lam


def hfn_add(x1: QROHFN, x2: QROHFN, q: float) -> QROHFN:
    _require_valid(x1, q)
    _require_valid(x2, q)
    pairs = []
    for (u1, v1), (u2, v2) in itertools.product(zip(x1.mu, x1.nu), zip(x2.mu, x2.nu)):
        pairs.append((_qroot(u1**q + u2**q - u1**q * u2**q, q), v1 * v2))
    return _collect(pairs, q)


def hfn_mul(x1: QROHFN, x2: QROHFN, q: float) -> QROHFN:
    _require_valid(x1, q)
    _require_valid(x2, q)
    pairs = []
    for (u1, v1), (u2, v2) in itertools.product(zip(x1.mu, x1.nu), zip(x2.mu, x2.nu)):
        pairs.append((u1 * u2, _qroot(v1**q + v2**q - v1**q * v2**q, q)))
    return _collect(pairs, q)


def hfn_scale(lam: float, x: QROHFN, q: float) -> QROHFN:
    lam = _check_lambda(lam)
    _require_valid(x, q)
    pairs = [(_qroot(1.0 - (1.0 - u**q) ** lam, q), v**lam) for u, v in zip(x.mu, x.nu)]
    return _collect(pairs, q, dedup=False)


def hfn_pow(x: QROHFN, lam: float, q: float) -> QROHFN:
    lam = _check_lambda(lam)
    _require_valid(x, q)
    pairs = [(u**lam, _qroot(1.0 - (1.0 - v**q) ** lam, q)) for u, v in zip(x.mu, x.nu)]
    return _collect(pairs, q, dedup=False)

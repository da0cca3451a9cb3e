"""Session documents (JSON) and report rendering.

A session document looks like::

    {
      "q": 3, "l": 3,
      "alternatives": ["x1", "x2", "x3", "x4"],
      "experts": [
        {"id": "e1", "weight": 0.3,
         "matrix": [["neutral", {"mu": [...], "nu": [...]}, ...], ...]},
        ...
      ],
      "thresholds": {"ci_bar": 0.1, "gci_bar": 0.1},
      "consensus": {"zeta": 0.5, "theta_max": 50}
    }

Diagonal cells may be ``"neutral"`` or ``null``.  Every off-diagonal cell must
be present.  Errors name the offending expert, cell (1-based, as in ``a_21``)
and grade.
"""
from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .consensus import ExpertPanel, check_panel
from .core import QROHFN, check_rung, neutral
from .exceptions import ValidationError
from .pipeline import DecisionConfig, DecisionReport
from .relations import QROHFPR, validate_qrohfpr

SIG_DIGITS = 6


def _fail(path: str, message: str) -> None:
    raise ValidationError(f"{path}: {message}")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        _fail(path, f"expected a finite number, got {value!r}")
    return float(value)


def _grades(value: Any, path: str, l: int) -> tuple[float, ...]:
    if not isinstance(value, list):
        _fail(path, f"expected a list of {l} grades, got {value!r}")
    if len(value) != l:
        _fail(path, f"expected {l} grades, got {len(value)}")
    out = []
    for s, g in enumerate(value):
        x = _number(g, f"{path}[{s}] (grade {s + 1})")
        if not 0.0 <= x <= 1.0:
            _fail(f"{path}[{s}] (grade {s + 1})", f"grade {x} outside [0, 1]")
        out.append(x)
    for s in range(l - 1):
        if out[s + 1] < out[s]:
            _fail(f"{path}[{s + 1}] (grade {s + 2})", f"grades must be non-decreasing: {out}")
    return tuple(out)


def _cell_path(t: int, ident: str, i: int, j: int) -> str:
    return f"expert {t} ({ident}), cell ({i + 1},{j + 1})"


def parse_matrix(rows: Any, n: int, l: int, q: float, t: int = 0, ident: str = "e1") -> QROHFPR:
    where = f"expert {t} ({ident})"
    if not isinstance(rows, list) or len(rows) != n:
        _fail(f"{where}, matrix", f"expected {n} rows")
    grid = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            _fail(f"{where}, matrix row {i + 1}", f"expected {n} cells")
        out_row = []
        for j, cell in enumerate(row):
            path = _cell_path(t, ident, i, j)
            if i == j and (cell is None or cell == "neutral"):
                out_row.append(neutral(q, l))
                continue
            if cell is None:
                _fail(path, "missing entry (reciprocity/completeness)")
            if not isinstance(cell, dict) or set(cell) != {"mu", "nu"}:
                _fail(path, f"expected an object with keys 'mu' and 'nu', got {cell!r}")
            out_row.append(QROHFN(_grades(cell["mu"], f"{path}, mu", l), _grades(cell["nu"], f"{path}, nu", l)))
        grid.append(out_row)
    A = QROHFPR(grid)
    report = validate_qrohfpr(A, q)
    if not report.ok:
        v = report.violations[0]
        loc = v.location
        path = _cell_path(t, ident, loc[0], loc[1]) if len(loc) >= 2 else where
        raise ValidationError(f"{path}: {v.kind}: {v.message}", report)
    return A


def _section(doc: dict, key: str) -> dict:
    value = doc.get(key, {})
    if not isinstance(value, dict):
        _fail(key, "expected an object")
    return value


def parse_session(text: str | bytes | dict, q: float | None = None) -> tuple[ExpertPanel, DecisionConfig]:
    """Parse and validate a session document.

    ``q`` overrides the document's rung; it must be known before the matrices
    are read because the neutral diagonal depends on it.
    """
    if isinstance(text, dict):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"document: malformed JSON ({exc})") from exc
    if not isinstance(doc, dict):
        _fail("document", "expected a JSON object")

    q = check_rung(_number(doc.get("q", 3), "q") if q is None else q)
    if "l" not in doc:
        _fail("l", "missing number of grades")
    l = doc["l"]
    if isinstance(l, bool) or not isinstance(l, int) or l < 1:
        _fail("l", f"expected a positive integer, got {l!r}")

    experts = doc.get("experts")
    if not isinstance(experts, list) or not experts:
        _fail("experts", "expected a non-empty list")

    alternatives = doc.get("alternatives")
    first = experts[0].get("matrix") if isinstance(experts[0], dict) else None
    n = len(alternatives) if isinstance(alternatives, list) else (len(first) if isinstance(first, list) else 0)
    if alternatives is not None:
        if not isinstance(alternatives, list) or not all(isinstance(a, str) for a in alternatives):
            _fail("alternatives", "expected a list of names")
        if len(set(alternatives)) != len(alternatives):
            _fail("alternatives", "names must be unique")
    if n < 2:
        _fail("alternatives", "need at least 2 alternatives")

    matrices, weights, ids = [], [], []
    for t, e in enumerate(experts):
        if not isinstance(e, dict):
            _fail(f"expert {t}", "expected an object")
        ident = str(e.get("id", f"e{t + 1}"))
        if ident in ids:
            _fail(f"expert {t} ({ident})", "duplicate id")
        if "weight" not in e:
            _fail(f"expert {t} ({ident}), weight", "missing")
        w = _number(e["weight"], f"expert {t} ({ident}), weight")
        if w < 0:
            _fail(f"expert {t} ({ident}), weight", f"must be non-negative, got {w}")
        ids.append(ident)
        weights.append(w)
        matrices.append(parse_matrix(e.get("matrix"), n, l, q, t, ident))
    total = sum(weights)
    if abs(total - 1.0) > 1e-9:
        _fail("experts[*].weight", f"expert weights must sum to 1, got {total:.12g}")

    th = _section(doc, "thresholds")
    cs = _section(doc, "consensus")
    theta_max = cs.get("theta_max", 50)
    if isinstance(theta_max, bool) or not isinstance(theta_max, int):
        _fail("consensus.theta_max", f"expected an integer, got {theta_max!r}")
    config = DecisionConfig(
        q=q,
        ci_bar=_number(th.get("ci_bar", 0.1), "thresholds.ci_bar"),
        gci_bar=_number(th.get("gci_bar", 0.1), "thresholds.gci_bar"),
        zeta=_number(cs.get("zeta", 0.5), "consensus.zeta"),
        theta_max=theta_max,
    ).validate()
    names = list(alternatives) if alternatives is not None else [f"x{i + 1}" for i in range(n)]
    panel = ExpertPanel(matrices, weights, ids, names)
    check_panel(panel, q)
    return panel, config


def load_session(path: str, q: float | None = None) -> tuple[ExpertPanel, DecisionConfig]:
    with open(path, encoding="utf-8") as fh:
        return parse_session(fh.read(), q)


def matrix_to_json(A: QROHFPR, compact_diagonal: bool = False) -> list:
    rows = []
    for i in range(A.n):
        row = []
        for j in range(A.n):
            x = A[i, j]
            row.append("neutral" if compact_diagonal and i == j else {"mu": list(x.mu), "nu": list(x.nu)})
        rows.append(row)
    return rows


def matrix_from_json(rows: list) -> QROHFPR:
    return QROHFPR([[QROHFN(c["mu"], c["nu"]) for c in row] for row in rows])


def session_document(panel: ExpertPanel, config: DecisionConfig) -> dict:
    alts = list(panel.alternatives) if panel.alternatives else [f"x{i + 1}" for i in range(panel.n)]
    ids = list(panel.expert_ids) if panel.expert_ids else [f"e{t + 1}" for t in range(panel.m)]
    return {
        "q": config.q,
        "l": panel.l,
        "alternatives": alts,
        "experts": [
            {"id": ident, "weight": w, "matrix": matrix_to_json(A, compact_diagonal=True)}
            for ident, w, A in zip(ids, panel.weights, panel.matrices)
        ],
        "thresholds": {"ci_bar": config.ci_bar, "gci_bar": config.gci_bar},
        "consensus": {"zeta": config.zeta, "theta_max": config.theta_max},
    }


def emit_session(panel: ExpertPanel, config: DecisionConfig) -> str:
    """Serialize at full precision (``repr`` floats), so parsing is exact."""
    return json.dumps(session_document(panel, config), indent=2) + "\n"


def round_sig(obj: Any, digits: int = SIG_DIGITS) -> Any:
    """Recursively round floats to ``digits`` significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(f"{float(obj):.{digits}g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_machine(payload: dict) -> str:
    return json.dumps(round_sig(payload), indent=2) + "\n"


def report_payload(r: DecisionReport) -> dict:
    c = r.config
    q = c.q
    ids, alts = r.expert_ids, r.alternatives
    w = r.priority.weights
    scores = w.scores(q)
    accs = w.accuracies(q)
    return {
        "command": "pipeline",
        "config": {"q": q, "ci_bar": c.ci_bar, "gci_bar": c.gci_bar, "zeta": c.zeta, "theta_max": c.theta_max},
        "alternatives": alts,
        "experts": ids,
        "consistency": [
            {"expert": ids[t], "ci_before": r.ci_before[t], "repaired": r.repaired[t],
             "repair_objective": r.repair_objectives[t], "ci_after": r.ci_after[t]}
            for t in range(len(ids))
        ],
        "consensus": {
            "reached": r.consensus.reached,
            "iterations": r.consensus.iterations,
            "gci": dict(zip(ids, r.consensus.gci_per_expert)),
            "trace": trace_rows(r.consensus.trace, ids),
        },
        "weights": [
            {"alternative": alts[i], "mu": list(w.mu[i]), "nu": list(w.nu[i]),
             "score": float(scores[i]), "accuracy": float(accs[i])}
            for i in range(len(alts))
        ],
        "priority_objective": r.priority.objective,
        "ranking": r.ranking_labels(),
        "matrices": {
            "repaired": dict(zip(ids, (matrix_to_json(A) for A in r.repaired_matrices))),
            "adjusted": dict(zip(ids, (matrix_to_json(A) for A in r.consensus.adjusted))),
            "group": matrix_to_json(r.group),
        },
    }


def trace_rows(trace, ids) -> list[dict]:
    """Blend iterations only; the record for the unblended input is not a row."""
    return [
        {"theta": rec.theta, "gci": dict(zip(ids, rec.gci)), "gci_power": dict(zip(ids, rec.gci_power)),
         "repaired": [ids[t] for t in rec.repaired]}
        for rec in trace[1:]
    ]


def parse_report(text: str) -> dict:
    """Read back a machine-format report; matrices stay as nested lists."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"report: malformed JSON ({exc})") from exc


# -- human format -------------------------------------------------------------


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.4f}"
    if isinstance(x, (list, tuple)):
        return "{" + ", ".join(_fmt(v) for v in x) + "}"
    return str(x)


def table(headers: list[str], rows: list[list[Any]]) -> str:
    cells = [[_fmt(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(r[k]) for r in cells]) for k, h in enumerate(headers)]
    line = "  ".join(h.ljust(wd) for h, wd in zip(headers, widths))
    out = [line, "  ".join("-" * wd for wd in widths)]
    out += ["  ".join(v.ljust(wd) for v, wd in zip(r, widths)) for r in cells]
    return "\n".join(out)


def matrix_table(rows: list, alts: list[str]) -> str:
    body = [[alts[i]] + [f"<{_fmt(c['mu'])}, {_fmt(c['nu'])}>" for c in row] for i, row in enumerate(rows)]
    return table([""] + alts, body)


def ranking_line(labels: list[str]) -> str:
    return " > ".join(labels)


def render_human(payload: dict) -> str:
    """Plain-text rendering of any command payload."""
    p = payload
    alts = p.get("alternatives", [])
    parts = []
    if "config" in p:
        parts.append("parameters: " + ", ".join(f"{k}={_fmt(v)}" for k, v in p["config"].items()))
    if "valid" in p:
        parts.append(f"valid: {_fmt(p['valid'])} (n={p['n']}, l={p['l']}, experts={len(p['experts'])})")
    if "consistency" in p:
        rows = p["consistency"]
        cols = list(rows[0].keys()) if rows else ["expert"]
        parts.append("Consistency\n" + table(cols, [[r[c] for c in cols] for r in rows]))
    if "consensus" in p:
        cs = p["consensus"]
        parts.append(f"Consensus: reached={_fmt(cs['reached'])}, iterations={cs['iterations']}")
        parts.append("Consensus index\n" + table(["expert", "gci"], [[k, v] for k, v in cs["gci"].items()]))
        ids = list(cs["gci"].keys())
        rows = [[r["theta"]] + [r["gci"][e] for e in ids] + [", ".join(r["repaired"]) or "-"] for r in cs["trace"]]
        parts.append(f"Trace ({len(rows)} rows)\n" + table(["theta"] + ids + ["repaired"], rows))
    if "weights" in p:
        rows = [[w["alternative"], w["mu"], w["nu"], w["score"], w["accuracy"]] for w in p["weights"]]
        parts.append("Weights\n" + table(["alternative", "mu", "nu", "score", "accuracy"], rows))
        if "priority_objective" in p:
            parts.append(f"priority deviation: {_fmt(p['priority_objective'])}")
    if "matrices" in p and "group" in p["matrices"]:
        parts.append("Group matrix\n" + matrix_table(p["matrices"]["group"], alts))
    if "ranking" in p:
        parts.append("Ranking: " + ranking_line(p["ranking"]))
    return "\n\n".join(parts) + "\n"


def emit_report(r: DecisionReport | dict, fmt: str = "machine") -> str:
    payload = report_payload(r) if isinstance(r, DecisionReport) else r
    if fmt == "machine":
        return dump_machine(payload)
    if fmt == "human":
        return render_human(payload)
    raise ValueError(f"unknown format {fmt!r}")

"""Command-line interface: ``qrohf <subcommand> --input session.json``.

Exit codes: 0 success, 1 validation error, 2 consensus not reached within
``theta_max`` iterations (output is still written), 3 internal error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .consensus import aggregate, gci, is_acceptable_consensus, reach_consensus
from .exceptions import ValidationError
from .io import emit_report, load_session, matrix_to_json, report_payload, trace_rows
from .pipeline import run_pipeline
from .priority import derive_weights
from .relations import consistency_index, is_acceptably_consistent
from .repair import repair

EXIT_OK, EXIT_INVALID, EXIT_NO_CONSENSUS, EXIT_INTERNAL = 0, 1, 2, 3

SUBCOMMANDS = ("validate", "ci", "repair", "aggregate", "gci", "consensus", "weights", "rank", "pipeline")


def _config_block(config) -> dict:
    return {"q": config.q, "ci_bar": config.ci_bar, "gci_bar": config.gci_bar,
            "zeta": config.zeta, "theta_max": config.theta_max}


def _weights_payload(panel, config) -> dict:
    group = aggregate(panel, config.q) if panel.m > 1 else panel.matrices[0]
    res = derive_weights(group, config.q, config.compare_tol)
    alts = panel.alternatives
    w = res.weights
    s, d = w.scores(config.q), w.accuracies(config.q)
    return {
        "alternatives": alts,
        "weights": [
            {"alternative": alts[i], "mu": list(w.mu[i]), "nu": list(w.nu[i]),
             "score": float(s[i]), "accuracy": float(d[i])}
            for i in range(len(alts))
        ],
        "priority_objective": res.objective,
        "_ranking": [alts[i] for i in res.order],
    }


def run_command(cmd: str, panel, config) -> tuple[dict, int]:
    q = config.q
    ids = panel.expert_ids
    alts = panel.alternatives
    payload: dict = {"command": cmd, "config": _config_block(config), "alternatives": alts, "experts": ids}
    status = EXIT_OK
    if cmd == "validate":
        payload.update(valid=True, n=panel.n, l=panel.l)
    elif cmd == "ci":
        payload["consistency"] = [
            {"expert": e, "ci": consistency_index(A, q), "acceptable": is_acceptably_consistent(A, q, config.ci_bar)}
            for e, A in zip(ids, panel.matrices)
        ]
    elif cmd == "repair":
        rows, mats = [], {}
        for e, A in zip(ids, panel.matrices):
            r = repair(A, q, config.ci_bar)
            rows.append({"expert": e, "ci_before": r.original_ci, "repaired": r.changed,
                         "repair_objective": r.objective, "ci_after": r.achieved_ci})
            mats[e] = matrix_to_json(r.repaired)
        payload["consistency"] = rows
        payload["matrices"] = {"repaired": mats}
    elif cmd == "aggregate":
        payload["matrices"] = {"group": matrix_to_json(aggregate(panel, q))}
    elif cmd == "gci":
        group = aggregate(panel, q)
        values = [gci(A, group) for A in panel.matrices]
        payload["consensus"] = {
            "reached": all(is_acceptable_consensus(g, config.gci_bar) for g in values),
            "iterations": 0,
            "gci": dict(zip(ids, values)),
            "trace": [],
        }
    elif cmd == "consensus":
        out = reach_consensus(panel, q, config.gci_bar, config.zeta, config.theta_max, config.ci_bar)
        payload["consensus"] = {
            "reached": out.reached,
            "iterations": out.iterations,
            "gci": dict(zip(ids, out.gci_per_expert)),
            "trace": trace_rows(out.trace, ids),
        }
        payload["matrices"] = {
            "adjusted": dict(zip(ids, (matrix_to_json(A) for A in out.adjusted))),
            "group": matrix_to_json(out.group),
        }
        if not out.reached:
            status = EXIT_NO_CONSENSUS
    elif cmd in ("weights", "rank"):
        wp = _weights_payload(panel, config)
        ranking = wp.pop("_ranking")
        payload.update(wp)
        if cmd == "rank":
            payload["ranking"] = ranking
    elif cmd == "pipeline":
        report = run_pipeline(panel, config)
        payload = report_payload(report)
        if report.exhausted:
            status = EXIT_NO_CONSENSUS
    else:  # argparse rejects unknown commands first
        raise ValueError(cmd)
    return payload, status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrohf", description="Group decisions with q-rung orthopair hesitant fuzzy preference relations.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check a session document",
        "ci": "consistency index per expert",
        "repair": "repair experts whose consistency is unacceptable",
        "aggregate": "group preference relation",
        "gci": "consensus index per expert",
        "consensus": "run the automatic consensus-reaching iteration",
        "weights": "priority weights of the group relation",
        "rank": "ranking of the alternatives from the group relation",
        "pipeline": "full procedure, from consistency repair to ranking",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--input", required=True, help="session document (JSON)")
        p.add_argument("--q", type=float, help="rung (overrides the document)")
        p.add_argument("--ci-bar", type=float, help="consistency threshold")
        p.add_argument("--gci-bar", type=float, help="consensus threshold")
        p.add_argument("--zeta", type=float, help="blend factor in (0, 1)")
        p.add_argument("--theta-max", type=int, help="maximum consensus iterations")
        p.add_argument("--format", choices=("machine", "human"), default="machine")
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _apply_overrides(args, config):
    for flag, attr in (("ci_bar", "ci_bar"), ("gci_bar", "gci_bar"), ("zeta", "zeta"), ("theta_max", "theta_max")):
        v = getattr(args, flag)
        if v is not None:
            setattr(config, attr, v)
    return config.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        panel, config = load_session(args.input, args.q)
        config = _apply_overrides(args, config)
        payload, status = run_command(args.command, panel, config)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - anything else is a bug
        logging.getLogger(__name__).debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    text = emit_report(payload, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == EXIT_NO_CONSENSUS:
        print("warning: consensus not reached within theta_max iterations", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

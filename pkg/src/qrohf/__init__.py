"""q-rung orthopair hesitant fuzzy preference relations for group decisions."""
import logging

from .consensus import ConsensusOutcome, ExpertPanel, aggregate, blend, gci, gci_power, reach_consensus
from .core import (
    QROHFN,
    accuracy,
    compare,
    hamming_distance,
    hesitancy,
    hfn_add,
    hfn_mul,
    hfn_pow,
    hfn_scale,
    neutral,
    score,
    validate_qrohfn,
)
from .exceptions import LPError, QROHFError, SolverError, ValidationError
from .io import emit_report, load_session, parse_session
from .pipeline import DecisionConfig, DecisionReport, run_pipeline
from .priority import PriorityResult, WeightVector, consistent_qrohfpr_from_weights, derive_weights, rank
from .relations import QROHFPR, consistency_index, manhattan_distance, validate_qrohfpr
from .repair import RepairResult, repair

__version__ = "0.1.0"

__all__ = [
    "ConsensusOutcome",
    "DecisionConfig",
    "DecisionReport",
    "ExpertPanel",
    "LPError",
    "PriorityResult",
    "QROHFError",
    "QROHFN",
    "QROHFPR",
    "RepairResult",
    "SolverError",
    "ValidationError",
    "WeightVector",
    "accuracy",
    "aggregate",
    "blend",
    "compare",
    "consistency_index",
    "consistent_qrohfpr_from_weights",
    "derive_weights",
    "emit_report",
    "gci",
    "gci_power",
    "hamming_distance",
    "hesitancy",
    "hfn_add",
    "hfn_mul",
    "hfn_pow",
    "hfn_scale",
    "load_session",
    "manhattan_distance",
    "neutral",
    "parse_session",
    "rank",
    "reach_consensus",
    "repair",
    "run_pipeline",
    "score",
    "validate_qrohfn",
    "validate_qrohfpr",
]

logging.getLogger(__name__).addHandler(logging.NullHandler())

from .accelerating import accelerating_force
from .build3 import build_3tree
from .common import (
    CandidateShortage,
    Condition,
    FuelExhausted,
    LabeledCondition,
    RunRecord,
    ScheduleUnrepairable,
    check_label_invariants,
    schedule,
    schedule_prefix,
)
from .surviving import diagonalize_surviving
from .traceable import initial_condition, traceable_prune
from .verify import verify_record

__all__ = [
    "CandidateShortage",
    "Condition",
    "FuelExhausted",
    "LabeledCondition",
    "RunRecord",
    "ScheduleUnrepairable",
    "accelerating_force",
    "build_3tree",
    "check_label_invariants",
    "diagonalize_surviving",
    "initial_condition",
    "schedule",
    "schedule_prefix",
    "traceable_prune",
    "verify_record",
]

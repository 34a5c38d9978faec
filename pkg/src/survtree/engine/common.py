"""Shared condition types, the task schedule, fuel metering and run records."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..io_formats import (
    json_to_tree,
    payload_digest,
    trace_to_json,
    tree_to_json,
)
from ..staged import AdversaryFamily, OracleFunctional, family_from_config
from ..traces import TraceTable
from ..trees import FiniteTree, Word, prefixes, word_key


class FuelExhausted(Exception):
    def __init__(self, stage: int, what: str = ""):
        super().__init__(f"stage {stage} could not complete within budget: {what}")
        self.stage = stage


class CandidateShortage(Exception):
    def __init__(self, detail: str):
        super().__init__(detail)


class ScheduleUnrepairable(Exception):
    def __init__(self, detail: str):
        super().__init__(detail)


def schedule(i: int) -> int:
    """Term i of 1,1,2,1,2,3,1,2,3,4,...: block m lists 1..m."""
    if i < 0:
        raise ValueError("schedule is indexed from 0")
    m = 1
    while i >= m:
        i -= m
        m += 1
    return i + 1


def schedule_prefix(n: int) -> list[int]:
    return [schedule(i) for i in range(n)]


def is_schedule_prefix(seq: list[int]) -> bool:
    return all(v == schedule(i) for i, v in enumerate(seq))


@dataclass(frozen=True)
class Condition:
    """A stem plus the tree of allowed futures, all extending the stem."""

    stem: Word
    tree: FiniteTree
    alphabet_bound: Optional[int] = None

    def __post_init__(self) -> None:
        if self.stem not in self.tree:
            raise ValueError("stem must be a node of the tree")


@dataclass(frozen=True)
class LabeledCondition:
    """A condition whose nodes carry task labels (0 = no task)."""

    stem: Word
    tree: FiniteTree
    labels: dict[Word, int] = field(compare=False)

    def __post_init__(self) -> None:
        if self.stem not in self.tree:
            raise ValueError("stem must be a node of the tree")
        missing = [w for w in self.tree.nodes if w not in self.labels]
        if missing:
            raise ValueError(f"unlabeled node {min(missing, key=word_key)}")


def check_label_invariants(c: LabeledCondition) -> Optional[str]:
    """None when the labeling is well formed, else a defect message.

    Checked: proper prefixes of the stem carry 0; along every branch the
    nonzero labels read off an initial segment of the task schedule; every
    leaf carries a task (so each branch keeps acquiring tasks to the
    working depth).
    """
    for w in prefixes(c.stem):
        if w != c.stem and c.labels[w] != 0:
            return f"proper stem prefix {w} has nonzero label {c.labels[w]}"
    for leaf in c.tree.leaves():
        seq = [
            c.labels[leaf[:i]]
            for i in range(len(leaf) + 1)
            if c.labels[leaf[:i]] != 0
        ]
        if not is_schedule_prefix(seq):
            return f"branch {leaf}: nonzero labels {seq} not a schedule prefix"
        if c.labels[leaf] == 0:
            return f"leaf {leaf} carries no task"
    return None


class FuelMeter:
    """Counts functional evaluations so stage logs can report fuel spent."""

    def __init__(self, functional: OracleFunctional, fuel: int):
        self.functional = functional
        self.fuel = fuel
        self.calls = 0

    def eval(self, sigma: Word, n: int) -> Optional[int]:
        self.calls += 1
        return self.functional.eval(sigma, n, self.fuel)

    def total_on(self, sigma: Word, upto: int) -> Optional[Word]:
        out = []
        for n in range(upto):
            v = self.eval(sigma, n)
            if v is None:
                return None
            out.append(v)
        return tuple(out)

    def converged_prefix(self, sigma: Word, cap: int) -> Word:
        out = []
        for n in range(cap):
            v = self.eval(sigma, n)
            if v is None:
                break
            out.append(v)
        return tuple(out)


@dataclass
class RunRecord:
    engine: str
    parameters: dict
    family_config: dict
    stage_log: list[dict]
    final_stem: Word
    final_tree: FiniteTree
    traces: list[tuple[int, TraceTable]]  # (functional id, table)
    certificates: list[dict]
    status: str  # "complete" | "incomplete"
    labels: Optional[dict[Word, int]] = None

    def to_payload(self) -> dict:
        payload = {
            "engine": self.engine,
            "parameters": self.parameters,
            "family": self.family_config,
            "stage_log": self.stage_log,
            "final_stem": list(self.final_stem),
            "final_tree": tree_to_json(self.final_tree),
            "traces": [
                {"functional": fid, **trace_to_json(tr)}
                for fid, tr in self.traces
            ],
            "certificates": self.certificates,
            "status": self.status,
        }
        if self.labels is not None:
            payload["labels"] = [
                [list(w), v]
                for w, v in sorted(self.labels.items(), key=lambda p: word_key(p[0]))
            ]
        payload["digest"] = payload_digest(payload)
        return payload


def family_of_payload(payload: dict) -> AdversaryFamily:
    return family_from_config(payload["family"])


def stem_of_payload(payload: dict) -> Word:
    return tuple(int(e) for e in payload["final_stem"])


def tree_of_payload(payload: dict) -> FiniteTree:
    return json_to_tree(payload["final_tree"])


def labels_of_payload(payload: dict) -> Optional[dict[Word, int]]:
    if "labels" not in payload:
        return None
    return {tuple(int(e) for e in w): int(v) for w, v in payload["labels"]}

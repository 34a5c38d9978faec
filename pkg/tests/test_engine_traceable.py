"""The labeled prune engine and its schedule bookkeeping."""

from __future__ import annotations

import pytest

from survtree.engine import (
    check_label_invariants,
    initial_condition,
    schedule,
    schedule_prefix,
    traceable_prune,
    verify_record,
)
from survtree.engine.common import LabeledCondition, labels_of_payload
from survtree.io_formats import json_to_trace
from survtree.staged import standard_library
from survtree.traces import goes_through
from survtree.trees import is_k_tree_to_depth

LIB = standard_library()


def test_schedule_first_terms():
    assert schedule_prefix(10) == [1, 1, 2, 1, 2, 3, 1, 2, 3, 4]


def test_schedule_blocks():
    assert schedule_prefix(15) == [1, 1, 2, 1, 2, 3, 1, 2, 3, 4, 1, 2, 3, 4, 5]
    assert schedule(0) == 1


def test_initial_condition_labels_by_level():
    start = initial_condition(LIB, 6, 20)
    for w in start.tree.nodes:
        assert start.labels[w] == schedule(len(w))
    assert check_label_invariants(start) is None


def test_initial_condition_reaches_depth():
    start = initial_condition(LIB, 6, 20)
    assert start.tree.depth == 6
    # every branch reaches the working depth after pruning
    for leaf in start.tree.leaves():
        assert len(leaf) == 6


def test_labeled_condition_validates():
    start = initial_condition(LIB, 4, 16)
    with pytest.raises(ValueError):
        LabeledCondition((9, 9), start.tree, start.labels)


def run(stages=4, depth=6, fuel=5000):
    start = initial_condition(LIB, depth, 2 * depth + 8)
    return traceable_prune(start, LIB, stages, depth, fuel)


def test_final_tree_is_3_tree():
    rec = run()
    assert is_k_tree_to_depth(rec.final_tree, 3, 6) is None


def test_final_labels_satisfy_invariants():
    rec = run()
    payload = rec.to_payload()
    labels = labels_of_payload(payload)
    cond = LabeledCondition(rec.final_stem, rec.final_tree, labels)
    assert check_label_invariants(cond) is None


def test_schedule_certificate_emitted_first():
    rec = run()
    assert rec.certificates[0]["kind"] == "schedule"
    assert rec.certificates[0]["terms"][:10] == schedule_prefix(10)


def test_traces_bounded_and_followed():
    rec = run()
    assert rec.traces, "prune stages must emit traces"
    for _, trace in rec.traces:
        for n, level in enumerate(trace.levels):
            assert len(level) <= 3**n


def test_trace_branch_go_through():
    rec = run()
    from survtree.engine.common import FuelMeter

    for cert in rec.certificates:
        if cert["kind"] != "trace" or cert.get("case") != "prune":
            continue
        fid = cert["functional"]
        trace = dict(rec.traces)[fid]
        meter = FuelMeter(LIB.functionals[fid], 5000)
        for leaf in rec.final_tree.leaves():
            out = meter.converged_prefix(leaf, trace.depth)
            assert goes_through(out, trace)


def test_record_verifies():
    assert verify_record(run().to_payload()) == []


def test_determinism():
    assert run().to_payload() == run().to_payload()

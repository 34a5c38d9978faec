"""The widening-splits engine: escape, value forcing, constancy, pruning."""

from __future__ import annotations

from survtree.engine import accelerating_force, verify_record
from survtree.io_formats import json_to_trace
from survtree.staged import family_from_config, standard_library
from survtree.traces import goes_through, to_tree
from survtree.trees import (
    TriState,
    is_accelerating_to_depth,
    is_k_tree_to_depth,
)

LIB = standard_library()


def run(stages=8, depth=8, fuel=10000, family=LIB):
    return accelerating_force(family, stages, depth, fuel)


def test_final_tree_is_accelerating():
    rec = run()
    assert is_accelerating_to_depth(rec.final_tree, rec.final_tree.depth) is None


def test_even_stage_exits_honest_binary_claimant():
    config = {
        "staged_trees": [
            {
                "id": 0,
                "kind": "full_subtree",
                "alphabet": [0, 1],
                "claimed_shape": ["branching", 2],
            }
        ],
        "functionals": [],
    }
    rec = run(stages=1, family=family_from_config(config))
    assert rec.final_stem[:1] == (2,)
    adv = family_from_config(config).staged_trees[0]
    assert adv.decide((2,), 100) is TriState.OUT


def test_constant_three_forces_value_at_zero():
    certs = [
        c
        for c in run().certificates
        if c["kind"] == "value_witness" and c["functional"] == 2
    ]
    assert certs and certs[0]["position"] == 0
    assert certs[0]["value"] >= 3


def test_mod_functional_yields_two_tree_trace():
    rec = run()
    certs = [c for c in rec.certificates if c["kind"] == "two_tree_trace"]
    assert any(c["functional"] == 1 for c in certs)
    trace = dict(rec.traces)[1]
    assert is_k_tree_to_depth(to_tree(trace), 2, trace.depth) is None


def test_two_tree_trace_branch_go_through():
    rec = run()
    from survtree.engine.common import FuelMeter

    trace = dict(rec.traces)[1]
    meter = FuelMeter(LIB.functionals[1], 10000)
    for leaf in rec.final_tree.leaves():
        out = meter.converged_prefix(leaf, trace.depth)
        assert goes_through(out[: trace.depth], trace)


def test_diverging_functional_presumed_divergent():
    kinds = {
        (c["kind"], c.get("functional"))
        for c in run().certificates
    }
    assert ("presumed_divergence", 3) in kinds


def test_record_verifies():
    assert verify_record(run().to_payload()) == []


def test_determinism():
    assert run().to_payload() == run().to_payload()

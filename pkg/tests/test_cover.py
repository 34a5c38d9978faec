"""Exact minimum covers of b^d by k-branching subtrees."""

from __future__ import annotations

import itertools
import math
from dataclasses import replace

import pytest

from survtree.cover import (
    CoverWitness,
    SizeGuard,
    min_cover,
    monotonicity_table,
    verify_cover,
)
from survtree.trees import FiniteTree


def test_min_cover_3_2_1():
    value, witness = min_cover(3, 2, 1)
    assert value == 2
    assert verify_cover(witness) is None


def test_min_cover_3_2_2():
    value, witness = min_cover(3, 2, 2)
    assert value == 3
    assert verify_cover(witness) is None


@pytest.mark.parametrize("b", [3, 4, 5])
def test_min_cover_one_short_alphabet(b):
    # k = b-1: a single tree misses exactly one leaf, so two suffice
    value, _ = min_cover(b, b - 1, 1)
    assert value == 2


def test_counting_lower_bound():
    for b, k, d in [(3, 2, 1), (3, 2, 2), (4, 2, 2), (4, 3, 2)]:
        value, _ = min_cover(b, k, d)
        assert value >= math.ceil(b**d / k**d)


def test_size_guard_refuses_large_instances():
    with pytest.raises(SizeGuard):
        min_cover(4, 2, 6)  # 4096 > 729


def test_verify_cover_detects_uncovered_word():
    _, witness = min_cover(3, 2, 1)
    broken = CoverWitness(
        witness.trees[:1], witness.covered, witness.parameters
    )
    defect = verify_cover(broken)
    assert defect is not None and "uncovered" in defect


def test_verify_cover_detects_wide_tree():
    _, witness = min_cover(3, 2, 1)
    wide = FiniteTree.full(3, 1)
    broken = CoverWitness(
        (wide,) + witness.trees[1:], witness.covered, witness.parameters
    )
    defect = verify_cover(broken)
    assert defect is not None and "children" in defect


def test_monotonicity_4_rows():
    rows = monotonicity_table(4, 1, range(2, 4))
    assert rows == [(2, 2), (3, 2)]


def test_monotonicity_3_2():
    assert monotonicity_table(3, 2, range(2, 3)) == [(2, 3)]


def test_min_cover_matches_brute_force_3_2_1():
    # independent exhaustive check: no single 2-branching subtree of
    # 3^{<=1} covers all three leaves
    leaf_sets = [frozenset({(i,)}) for i in range(3)] + [
        frozenset({(i,), (j,)})
        for i, j in itertools.combinations(range(3), 2)
    ]
    assert not any(len(s) == 3 for s in leaf_sets)
    assert any(
        len(a | b) == 3 for a, b in itertools.combinations(leaf_sets, 2)
    )


def test_witness_parameters_and_union():
    value, witness = min_cover(4, 2, 1)
    assert witness.parameters == (4, 2, 1)
    assert witness.covered == frozenset((i,) for i in range(4))
    assert len(witness.trees) == value

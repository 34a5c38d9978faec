"""Level-indexed trace tables: bounds, go-through, merge, round trips."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_tree
from survtree.traces import (
    BoundExceeded,
    LevelBound,
    TraceTable,
    from_tree,
    goes_through,
    merge,
    to_tree,
)
from survtree.trees import FiniteTree

POW3 = LevelBound("pow", 3)
POW2 = LevelBound("pow", 2)

BINARY3 = make_tree(
    w for n in range(4) for w in itertools.product(range(2), repeat=n)
)


def test_from_tree_binary_under_pow3():
    tr = from_tree(BINARY3, POW3)
    assert [len(tr.levels[n]) for n in range(4)] == [1, 2, 4, 8]


def test_from_tree_single_path():
    tr = from_tree(FiniteTree.comb(4), LevelBound("pow", 1))
    assert all(len(tr.levels[n]) == 1 for n in range(5))


def test_from_tree_bound_exceeded():
    # the first offending level of a full ternary tree under 2^n is level 1
    # (3 words against an allowance of 2)
    with pytest.raises(BoundExceeded) as e:
        from_tree(FiniteTree.full(3, 2), POW2)
    assert e.value.level == 1 and e.value.size == 3


def test_bound_exceeded_at_deeper_level():
    # 2 words at level 1 fit under 2^n; 9 words at level 2 do not fit
    # under a bound allowing 4
    words = [(), (0,), (1,)]
    words += [(0, i) for i in range(3)] + [(1, i) for i in range(3)]
    with pytest.raises(BoundExceeded) as e:
        from_tree(FiniteTree.from_words(words), POW2)
    assert e.value.level == 2 and e.value.size == 6 and e.value.allowed == 4


def test_goes_through_empty_prefix():
    tr = from_tree(FiniteTree.comb(2), POW3)
    assert goes_through((), tr)


def test_goes_through_binary_member():
    tr = from_tree(BINARY3, POW3)
    assert goes_through((0, 1), tr)


def test_goes_through_rejects_foreign_entry():
    tr = from_tree(BINARY3, POW3)
    assert not goes_through((2,), tr)


def test_merge_idempotent():
    tr = from_tree(BINARY3, POW3)
    assert merge(tr, tr, POW3).levels == tr.levels


def test_merge_disjoint_paths():
    t1 = from_tree(make_tree([(), (0,), (0, 0)]), POW3)
    t2 = from_tree(make_tree([(), (1,), (1, 1)]), POW3)
    out = merge(t1, t2, POW3)
    assert [len(out.levels[n]) for n in range(3)] == [1, 2, 2]


def test_merge_two_full_binaries_under_pow3():
    t1 = from_tree(
        make_tree(
            w for n in range(3) for w in itertools.product((0, 1), repeat=n)
        ),
        POW3,
    )
    t2 = from_tree(
        make_tree(
            w for n in range(3) for w in itertools.product((1, 2), repeat=n)
        ),
        POW3,
    )
    out = merge(t1, t2, POW3)
    assert all(len(out.levels[n]) <= 3**n for n in range(3))


def test_merge_requires_equal_depths():
    t1 = from_tree(FiniteTree.comb(2), POW3)
    t2 = from_tree(FiniteTree.comb(3), POW3)
    with pytest.raises(ValueError):
        merge(t1, t2, POW3)


def test_level_words_have_level_length():
    tr = from_tree(BINARY3, POW3)
    for n, words in enumerate(tr.levels):
        assert all(len(w) == n for w in words)


def test_prefix_coherence_enforced():
    with pytest.raises(ValueError):
        TraceTable(
            (frozenset({()}), frozenset({(5,)}), frozenset({(1, 1)})), POW3
        )


def test_value_sets_view():
    tr = from_tree(BINARY3, POW3)
    assert tr.value_sets(0) == {0, 1}
    assert tr.value_sets(2) == {0, 1}


# --- property tests ---------------------------------------------------------


@st.composite
def small_tree(draw):
    nodes = {()}
    frontier = [()]
    for _ in range(draw(st.integers(1, 4))):
        nxt = []
        for w in frontier:
            for e in draw(
                st.sets(st.integers(0, 2), min_size=1, max_size=3)
            ):
                nodes.add(w + (e,))
                nxt.append(w + (e,))
        frontier = nxt
    return FiniteTree(frozenset(nodes))


@settings(max_examples=80, deadline=None)
@given(small_tree())
def test_from_tree_to_tree_round_trip(t):
    tr = from_tree(t, POW3)
    assert to_tree(tr).nodes == t.nodes


@settings(max_examples=40, deadline=None)
@given(small_tree())
def test_goes_through_iff_member(t):
    tr = from_tree(t, POW3)
    for n in range(t.depth + 1):
        for w in itertools.product(range(3), repeat=n):
            assert goes_through(w, tr) == (w in t.nodes)

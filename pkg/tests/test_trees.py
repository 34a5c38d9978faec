"""Word/tree combinatorics: membership, shape predicates, pushforward."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_surjections, make_tree, subtree_nodesets
from survtree.trees import (
    FiniteTree,
    NotInTree,
    Surjection,
    TriState,
    children,
    contains,
    covered_fraction,
    embed_branching,
    is_accelerating_to_depth,
    is_k_branching_to_depth,
    is_k_tree_to_depth,
    map_path,
    pushforward_preimage,
    restrict,
    word_key,
)

FULL33 = FiniteTree.full(3, 3)
COMB5 = FiniteTree.comb(5)


# --- contains -----------------------------------------------------------


def test_contains_full_tree_member():
    assert contains(FULL33, (0, 2, 1)) is TriState.IN


def test_contains_comb_rejects_nonzero():
    assert contains(COMB5, (1,)) is TriState.OUT


def test_word_key_orders_shortest_then_lex():
    words = [(1,), (), (0, 0), (0,), (2,), (0, 1)]
    assert sorted(words, key=word_key) == [
        (),
        (0,),
        (1,),
        (2,),
        (0, 0),
        (0, 1),
    ]


# --- children ------------------------------------------------------------


def test_children_full_tree():
    assert children(FULL33, (0,), 3) == {0, 1, 2}


def test_children_comb_single():
    assert children(COMB5, (0, 0), 10) == {0}


def test_children_leaf_empty():
    path = FiniteTree.single_path((2,))
    assert children(path, (2,), 5) == set()


def test_children_of_nonmember_is_an_error():
    with pytest.raises(NotInTree):
        FULL33.children_of((7,))


# --- shape predicates -----------------------------------------------------


def test_k_tree_full_binary_subtree_ok():
    t = make_tree(
        w for n in range(4) for w in itertools.product(range(2), repeat=n)
    )
    assert is_k_tree_to_depth(t, 2, 3) is None


def test_k_tree_full_ternary_violates_k2():
    bad = is_k_tree_to_depth(FiniteTree.full(3, 2), 2, 2)
    assert bad is not None
    assert bad.node == ()
    assert bad.observed_child_count == 3


def test_k_tree_comb_ok():
    assert is_k_tree_to_depth(FiniteTree.comb(4), 2, 4) is None


def test_k_branching_full_binary_subtree_ok():
    t = make_tree(
        w for n in range(4) for w in itertools.product(range(2), repeat=n)
    )
    assert is_k_branching_to_depth(t, 2, 3) is None


def test_k_branching_two_of_three_children_violates():
    t = make_tree(
        [(), (0,), (1,), (0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    )
    bad = is_k_branching_to_depth(t, 3, 2)
    assert bad is not None and bad.node == ()
    assert bad.observed_child_count == 2


def test_k_branching_comb_ok():
    assert is_k_branching_to_depth(COMB5, 2, 5) is None


def test_accelerating_widths_grow():
    # root splits 3 ways (0 prior splits, needs > 2); the next splitting
    # node needs more than 3 children.
    nodes = {(), (0,), (1,), (2,)}
    for i in range(4):
        nodes.add((0, i))
    nodes.update({(1, 0), (2, 0), (0, 0, 0), (0, 1, 0), (0, 2, 0), (0, 3, 0)})
    t = make_tree(nodes)
    assert is_accelerating_to_depth(t, 2) is None


def test_accelerating_binary_root_violates():
    t = make_tree([(), (0,), (1,)])
    bad = is_accelerating_to_depth(t, 1)
    assert bad is not None and bad.node == ()
    assert bad.observed_child_count == 2


def test_accelerating_pure_path_ok():
    assert is_accelerating_to_depth(COMB5, 5) is None


# --- pushforward / map_path ------------------------------------------------


def test_pushforward_identity_is_identity():
    g = Surjection.identity(3)
    assert pushforward_preimage(FULL33, g).nodes == FULL33.nodes


def test_pushforward_swap_relabels():
    g = Surjection(3, 3, (0, 2, 1))
    t = make_tree([(), (0,), (0, 1)], bound=3)
    out = pushforward_preimage(t, g)
    assert out.nodes == frozenset({(), (0,), (0, 2)})


def test_pushforward_merge_is_3_tree():
    # g folds 3 onto 2; preimages of 2-trees are 3-trees, checked by an
    # independent recount of children per node.
    g = Surjection(4, 3, (0, 1, 2, 2))
    t = make_tree(
        w for n in range(4) for w in itertools.product((0, 2), repeat=n)
    )
    out = pushforward_preimage(t, g)
    assert is_k_tree_to_depth(out, 3, 3) is None
    expected = frozenset(
        w
        for n in range(4)
        for w in itertools.product(range(4), repeat=n)
        if tuple(g(i) for i in w) in t.nodes
    )
    assert out.nodes == expected


def test_map_path_identity():
    assert map_path(Surjection.identity(3), (0, 2, 1)) == (0, 2, 1)


def test_map_path_collapse():
    g = Surjection(3, 2, (0, 0, 1))
    assert map_path(g, (2, 1, 0)) == (1, 0, 0)


def test_map_path_empty():
    assert map_path(Surjection.identity(2), ()) == ()


def test_map_path_out_of_range():
    with pytest.raises(ValueError):
        map_path(Surjection.identity(2), (5,))


# --- embed_branching -------------------------------------------------------


def test_embed_same_k_is_identity():
    t = make_tree(
        w for n in range(3) for w in itertools.product(range(2), repeat=n)
    )
    assert embed_branching(t, 2, 2).nodes == t.nodes


def test_embed_comb_unchanged():
    assert embed_branching(COMB5, 3, 5).nodes == COMB5.nodes


def test_embed_binary_to_ternary():
    t = make_tree(
        w for n in range(3) for w in itertools.product(range(2), repeat=n)
    )
    out = embed_branching(t, 3, 2)
    assert is_k_branching_to_depth(out, 3, 2) is None
    assert t.nodes <= out.nodes
    assert (2,) in out.nodes and (2, 0) in out.nodes


# --- restrict / covered_fraction -------------------------------------------


def test_restrict_full_omega_to_three():
    t = FiniteTree.full(5, 2)
    assert restrict(t, 3).nodes == FiniteTree.full(3, 2).nodes


def test_restrict_high_path_to_root():
    t = FiniteTree.single_path((5, 5))
    assert restrict(t, 3).nodes == frozenset({()})


def test_covered_fraction_full():
    assert covered_fraction(FiniteTree.full(3, 2), 2) == 1


def test_covered_fraction_single_path():
    t = make_tree([(), (0,), (0, 0), (0, 0, 0)], bound=3)
    assert covered_fraction(t, 3) == Fraction(1, 27)


def test_covered_fraction_binary_in_ternary():
    t = make_tree(
        (w for n in range(3) for w in itertools.product(range(2), repeat=n)),
        bound=3,
    )
    assert covered_fraction(t, 2) == Fraction(4, 9)


# --- property tests ---------------------------------------------------------


@st.composite
def random_subtree(draw, b=3, k=2, max_depth=4):
    nodes = {()}
    frontier = [()]
    depth = draw(st.integers(1, max_depth))
    for _ in range(depth):
        nxt = []
        for w in frontier:
            count = draw(st.integers(1, k))
            entries = draw(
                st.lists(
                    st.integers(0, b - 1),
                    min_size=count,
                    max_size=count,
                    unique=True,
                )
            )
            for e in entries:
                nodes.add(w + (e,))
                nxt.append(w + (e,))
        frontier = nxt
    return FiniteTree(frozenset(nodes), alphabet_bound=b)


@settings(max_examples=60, deadline=None)
@given(random_subtree())
def test_pushforward_preserves_prefix_closure_and_shape(t):
    for table in all_surjections(4, 3):
        out = pushforward_preimage(t, Surjection(4, 3, tuple(table)))
        for w in out.nodes:
            assert not w or w[:-1] in out.nodes
        assert is_k_tree_to_depth(out, 3, t.depth) is None


@st.composite
def random_low_anchored_tree(draw, b=5, low=3, k=2, max_depth=4):
    # every node keeps at least one child with a small entry, so restricting
    # to the small alphabet never creates a dead end
    nodes = {()}
    frontier = [()]
    depth = draw(st.integers(1, max_depth))
    for _ in range(depth):
        nxt = []
        for w in frontier:
            entries = {draw(st.integers(0, low - 1))}
            if draw(st.booleans()):
                entries.add(draw(st.integers(0, b - 1)))
            for e in list(entries)[:k]:
                nodes.add(w + (e,))
                nxt.append(w + (e,))
        frontier = nxt
    return FiniteTree(frozenset(nodes), alphabet_bound=b)


@settings(max_examples=60, deadline=None)
@given(random_low_anchored_tree())
def test_restrict_preserves_k_tree(t):
    out = restrict(t, 3)
    for w in out.nodes:
        assert not w or w[:-1] in out.nodes
    assert out.depth == t.depth
    assert is_k_tree_to_depth(out, 2, t.depth) is None


def test_exhaustive_path_transfer_depth_2():
    g = Surjection(3, 2, (0, 1, 1))
    for nodes in subtree_nodesets(2, 2, 2):
        t = make_tree(nodes, bound=2)
        out = pushforward_preimage(t, g)
        for n in range(3):
            for w in itertools.product(range(3), repeat=n):
                assert (w in out.nodes) == (map_path(g, w) in t.nodes)

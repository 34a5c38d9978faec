"""Shared generators for the test suite."""

from __future__ import annotations

import itertools
from typing import Iterator

from survtree.trees import FiniteTree, Word


def subtree_nodesets(
    b: int, k: int, d: int, *, branching_only: bool = False
) -> Iterator[frozenset[Word]]:
    """All node sets of subtrees of b^{<=d} with child counts in 1..k.

    With branching_only=True child counts are restricted to {1, k}.
    """
    if branching_only:
        options = [c for r in (1, k) for c in itertools.combinations(range(b), r)]
    else:
        options = [
            c
            for r in range(1, k + 1)
            for c in itertools.combinations(range(b), r)
        ]

    def grow(node: Word, remaining: int) -> Iterator[frozenset[Word]]:
        if remaining == 0:
            yield frozenset([node])
            return
        for choice in options:
            subtrees = [list(grow(node + (i,), remaining - 1)) for i in choice]
            for combo in itertools.product(*subtrees):
                yield frozenset([node]).union(*combo)

    yield from grow((), d)


def all_surjections(domain: int, codomain: int) -> list[tuple[int, ...]]:
    return [
        table
        for table in itertools.product(range(codomain), repeat=domain)
        if set(table) == set(range(codomain))
    ]


def full_tree_words(b: int, d: int) -> frozenset[Word]:
    return frozenset(
        w for n in range(d + 1) for w in itertools.product(range(b), repeat=n)
    )


def make_tree(nodes, bound=None) -> FiniteTree:
    return FiniteTree(frozenset(nodes), alphabet_bound=bound)

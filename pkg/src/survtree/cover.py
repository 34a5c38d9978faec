"""Exact minimum covers of the depth-d full b-ary leaf set by k-branching trees.

Every depth-d k-branching subtree of b^{<=d} covers at most k^d leaves, and
among trees with a given leaf coverage the fully k-splitting ones dominate:
a k-branching tree's leaves can always be completed to the leaf set of a
tree that splits k ways at every node (b >= k leaves room for the extra
children).  So the search only branches over trees that take exactly k
children at every internal node, which keeps exact search feasible for
small parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional

from .trees import FiniteTree, Word, is_k_branching_to_depth

SIZE_LIMIT = 729  # 3 ** 6


class SizeGuard(ValueError):
    def __init__(self, b: int, d: int):
        super().__init__(
            f"b**d = {b ** d} exceeds the exact-search limit {SIZE_LIMIT}"
        )
        self.b = b
        self.d = d


@dataclass(frozen=True)
class CoverWitness:
    trees: tuple[FiniteTree, ...]
    covered: frozenset[Word]
    parameters: tuple[int, int, int]  # (b, k, d)

    @property
    def size(self) -> int:
        return len(self.trees)


def _leafsets_through(leaf: Word, b: int, k: int) -> list[frozenset[Word]]:
    """Leaf sets of all fully k-splitting depth-d trees containing leaf."""
    d = len(leaf)
    results: list[frozenset[Word]] = []

    def extend(level_nodes: list[Word], depth: int) -> None:
        if depth == d:
            results.append(frozenset(level_nodes))
            return
        choices_per_node = []
        for node in level_nodes:
            opts = []
            if leaf[:depth] == node:
                # the node on the path to `leaf` must keep leaf's next entry
                forced = leaf[depth]
                for rest in combinations(
                    [i for i in range(b) if i != forced], k - 1
                ):
                    opts.append((forced,) + rest)
            else:
                opts.extend(combinations(range(b), k))
            choices_per_node.append(opts)
        for combo in product(*choices_per_node):
            nxt = [
                node + (i,)
                for node, chosen in zip(level_nodes, combo)
                for i in chosen
            ]
            extend(nxt, depth + 1)

    extend([()], 0)
    return results


def _all_prefixes(w: Word) -> list[Word]:
    return [w[:i] for i in range(len(w) + 1)]


def min_cover(b: int, k: int, d: int) -> tuple[int, CoverWitness]:
    """Least m with m k-branching subtrees of b^{<=d} covering b^d, plus witness."""
    if b < 2 or k < 1 or k > b or d < 0:
        raise ValueError("need 2 <= b, 1 <= k <= b, 0 <= d")
    if b ** d > SIZE_LIMIT:
        raise SizeGuard(b, d)
    all_leaves = frozenset(product(range(b), repeat=d))
    best: list[frozenset[Word]] = []

    def search(covered: frozenset[Word], chosen: list[frozenset[Word]]) -> None:
        nonlocal best
        uncovered = all_leaves - covered
        if not uncovered:
            if not best or len(chosen) < len(best):
                best = list(chosen)
            return
        bound = math.ceil(len(uncovered) / (k ** d))
        if best and len(chosen) + bound >= len(best):
            return
        target = min(uncovered)
        seen_gain: set[frozenset[Word]] = set()
        options = []
        for ls in _leafsets_through(target, b, k):
            gain = ls - covered
            if gain in seen_gain:
                continue
            seen_gain.add(gain)
            options.append((len(gain), ls))
        options.sort(key=lambda p: (-p[0], sorted(p[1])))
        for _, ls in options:
            chosen.append(ls)
            search(covered | ls, chosen)
            chosen.pop()

    search(frozenset(), [])
    trees = tuple(
        FiniteTree.from_words(
            [p for leaf in ls for p in _all_prefixes(leaf)], alphabet_bound=b
        )
        for ls in best
    )
    witness = CoverWitness(trees, all_leaves, (b, k, d))
    return len(trees), witness


def verify_cover(w: CoverWitness) -> Optional[str]:
    """None when the witness holds; otherwise a message naming the defect."""
    b, k, d = w.parameters
    union: set[Word] = set()
    for i, t in enumerate(w.trees):
        bad = is_k_branching_to_depth(t, k, d)
        if bad is not None:
            return f"tree {i}: node {bad.node} has {bad.observed_child_count} children"
        if t.alphabet_bound is not None and t.alphabet_bound > b:
            return f"tree {i}: alphabet bound {t.alphabet_bound} exceeds {b}"
        if t.depth != d:
            return f"tree {i}: depth {t.depth} != {d}"
        union.update(t.level(d))
    if union != set(w.covered):
        extra = union - set(w.covered)
        if extra:
            return f"covered set omits reached word {min(extra)}"
        missed = min(set(w.covered) - union)
        return f"uncovered word {missed}"
    full = set(product(range(b), repeat=d))
    if set(w.covered) != full:
        return f"claimed cover misses {min(full - set(w.covered))}"
    return None


def monotonicity_table(b: int, d: int, k_range: range) -> list[tuple[int, int]]:
    """(k, min cover size) rows; sizes never increase as k grows."""
    rows = []
    for k in k_range:
        if not 2 <= k < b:
            raise ValueError(f"k={k} outside 2 <= k < b={b}")
        value, _ = min_cover(b, k, d)
        rows.append((k, value))
    for (_, a), (_, c) in zip(rows, rows[1:]):
        assert c <= a, "cover sizes must be non-increasing in k"
    return rows

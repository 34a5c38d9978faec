"""Finite prefix-closed trees over the naturals, with shape predicates.

Words are plain tuples of non-negative ints; the empty tuple is the root.
Trees come in two flavours throughout the package: explicit finite node
sets (this module) and staged membership oracles (``survtree.staged``).
Operations that accept both say so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

Word = tuple[int, ...]

EMPTY: Word = ()


def prefixes(w: Word) -> Iterator[Word]:
    """All prefixes of w, shortest first, including w itself."""
    for i in range(len(w) + 1):
        yield w[:i]


def is_prefix(a: Word, b: Word) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def word_key(w: Word) -> tuple[int, Word]:
    """Sort key for the canonical shortest-then-lexicographic order."""
    return (len(w), w)


class TriState(Enum):
    IN = "in"
    OUT = "out"
    UNDECIDED = "undecided"


class NotInTree(ValueError):
    """Raised when children of a non-member node are requested."""


@dataclass(frozen=True)
class ShapeViolation:
    """Witness that a node breaks a shape predicate."""

    node: Word
    observed_child_count: int
    required: str


@dataclass(frozen=True)
class Surjection:
    """An onto map {0..domain_size-1} -> {0..codomain_size-1}."""

    domain_size: int
    codomain_size: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.domain_size < self.codomain_size or self.codomain_size < 2:
            raise ValueError("need domain_size >= codomain_size >= 2")
        if len(self.table) != self.domain_size:
            raise ValueError("table length must equal domain_size")
        if set(self.table) != set(range(self.codomain_size)):
            raise ValueError("table is not onto the codomain")

    def __call__(self, i: int) -> int:
        return self.table[i]

    @classmethod
    def identity(cls, n: int) -> "Surjection":
        return cls(n, n, tuple(range(n)))


@dataclass(frozen=True)
class FiniteTree:
    """An explicit, rooted, prefix-closed finite set of words.

    Immutable after construction.  ``alphabet_bound`` of b restricts all
    entries to values < b; None means entries range over the naturals.
    """

    nodes: frozenset[Word]
    alphabet_bound: Optional[int] = None
    _children: dict = field(
        default=None, compare=False, repr=False, hash=False
    )
    _depth: Optional[int] = field(
        default=None, compare=False, repr=False, hash=False
    )

    def __post_init__(self) -> None:
        if self.nodes:
            for w in self.nodes:
                if w and w[:-1] not in self.nodes:
                    raise ValueError(f"not prefix-closed at {w}")
                if self.alphabet_bound is not None and any(
                    e >= self.alphabet_bound for e in w
                ):
                    raise ValueError(f"entry out of alphabet bound in {w}")
        object.__setattr__(self, "_children", None)
        object.__setattr__(self, "_depth", None)

    @property
    def depth(self) -> int:
        if self._depth is None:
            object.__setattr__(
                self, "_depth", max((len(w) for w in self.nodes), default=0)
            )
        return self._depth

    def __contains__(self, w: Word) -> bool:
        return w in self.nodes

    def child_map(self) -> dict[Word, tuple[int, ...]]:
        """Node -> sorted child entries, built once per tree."""
        if self._children is None:
            cm: dict[Word, list[int]] = {w: [] for w in self.nodes}
            for w in self.nodes:
                if w:
                    cm[w[:-1]].append(w[-1])
            object.__setattr__(
                self, "_children", {w: tuple(sorted(c)) for w, c in cm.items()}
            )
        return self._children

    def children_of(self, w: Word) -> tuple[int, ...]:
        try:
            return self.child_map()[w]
        except KeyError:
            raise NotInTree(f"{w} is not a member") from None

    def sorted_nodes(self) -> list[Word]:
        return sorted(self.nodes, key=word_key)

    def leaves(self) -> list[Word]:
        cm = self.child_map()
        return sorted((w for w in self.nodes if not cm[w]), key=word_key)

    def level(self, n: int) -> frozenset[Word]:
        return frozenset(w for w in self.nodes if len(w) == n)

    @classmethod
    def from_words(
        cls, words: Iterable[Word], alphabet_bound: Optional[int] = None
    ) -> "FiniteTree":
        """Prefix closure of the given words (plus the root)."""
        nodes: set[Word] = {EMPTY}
        for w in words:
            w = tuple(w)
            for p in prefixes(w):
                nodes.add(p)
        return cls(frozenset(nodes), alphabet_bound)

    @classmethod
    def full(cls, b: int, d: int) -> "FiniteTree":
        """The full b-ary tree of depth d."""
        nodes: set[Word] = {EMPTY}
        frontier: list[Word] = [EMPTY]
        for _ in range(d):
            frontier = [w + (i,) for w in frontier for i in range(b)]
            nodes.update(frontier)
        return cls(frozenset(nodes), b)

    @classmethod
    def comb(cls, d: int, entry: int = 0) -> "FiniteTree":
        """The single path entry^n for n <= d."""
        bound = entry + 1 if entry >= 0 else None
        return cls(
            frozenset(tuple([entry] * n) for n in range(d + 1)), bound
        )

    @classmethod
    def single_path(cls, w: Word, alphabet_bound: Optional[int] = None) -> "FiniteTree":
        return cls(frozenset(prefixes(tuple(w))), alphabet_bound)


def contains(t, w: Word, stage: int = 0) -> TriState:
    """Uniform membership query for finite and staged trees.

    For a FiniteTree the stage is ignored and the answer is never
    Undecided; staged trees follow their own decision contract.
    """
    if isinstance(t, FiniteTree):
        return TriState.IN if w in t.nodes else TriState.OUT
    return t.decide(w, stage)


def children(t, w: Word, bound: int, stage: int = 0) -> set[int]:
    """Entries i < bound with w+(i,) a member. Non-members are an error."""
    if contains(t, w, stage) is not TriState.IN:
        raise NotInTree(f"{w} is not a decided member")
    return {
        i for i in range(bound) if contains(t, w + (i,), stage) is TriState.IN
    }


def is_k_tree_to_depth(
    t: FiniteTree, k: int, d: int
) -> Optional[ShapeViolation]:
    """ok (None) iff every node of length < d has 1..k children."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cm = t.child_map()
    for w in t.sorted_nodes():
        if len(w) >= d:
            continue
        c = len(cm[w])
        if c == 0 or c > k:
            return ShapeViolation(w, c, f"between 1 and {k} successors")
    return None


def is_k_branching_to_depth(
    t: FiniteTree, k: int, d: int
) -> Optional[ShapeViolation]:
    """ok (None) iff every node of length < d has exactly 1 or k children."""
    if k < 2:
        raise ValueError("k must be >= 2")
    cm = t.child_map()
    for w in t.sorted_nodes():
        if len(w) >= d:
            continue
        c = len(cm[w])
        if c not in (1, k):
            return ShapeViolation(w, c, f"exactly 1 or {k} successors")
    return None


def is_accelerating_to_depth(
    t: FiniteTree, d: int
) -> Optional[ShapeViolation]:
    """Accelerating: the n-th splitting node on a branch has > n+2 children.

    n counts the splitting proper initial segments of the node.  Nodes of
    length < d must keep at least one successor; depth-d leaves are exempt.
    """
    cm = t.child_map()
    for w in t.sorted_nodes():
        if len(w) >= d:
            continue
        c = len(cm[w])
        if c == 0:
            return ShapeViolation(w, 0, "at least 1 successor below depth")
        if c >= 2:
            n = sum(
                1 for i in range(len(w)) if len(cm[w[:i]]) >= 2
            )
            if c <= n + 2:
                return ShapeViolation(
                    w, c, f"more than {n + 2} successors (split number {n})"
                )
    return None


def map_path(g: Surjection, a: Word) -> Word:
    """Entrywise image of a word under the surjection."""
    for e in a:
        if e >= g.domain_size:
            raise ValueError(f"entry {e} outside domain of size {g.domain_size}")
    return tuple(g(e) for e in a)


def pushforward_preimage(t, g: Surjection):
    """Inverse image {w over k+1 : g*(w) in T} of a tree over s+1.

    Exact on finite trees; staged trees are handled by composing the
    membership oracle (see survtree.staged.pushforward_staged).
    """
    if isinstance(t, FiniteTree):
        if t.alphabet_bound is not None and t.alphabet_bound > g.codomain_size:
            raise ValueError("tree alphabet exceeds surjection codomain")
        for w in t.nodes:
            if any(e >= g.codomain_size for e in w):
                raise ValueError("tree entry outside surjection codomain")
        nodes: set[Word] = set()
        frontier = [EMPTY] if EMPTY in t.nodes else []
        nodes.update(frontier)
        depth = t.depth
        while frontier:
            new: list[Word] = []
            for w in frontier:
                if len(w) >= depth:
                    continue
                img = map_path(g, w)
                for i in range(g.domain_size):
                    if img + (g(i),) in t.nodes:
                        new.append(w + (i,))
            nodes.update(new)
            frontier = new
        return FiniteTree(frozenset(nodes), g.domain_size)
    from .staged import pushforward_staged

    return pushforward_staged(t, g)


def embed_branching(t: FiniteTree, k: int, d: int) -> FiniteTree:
    """Pad an s-branching tree into a k-branching one, k >= s.

    At every splitting node the k-s least entries not already used become
    fresh children, each continued by an all-zeros path to depth d.  No
    branch of the input is lost.
    """
    cm = t.child_map()
    split_sizes = {len(c) for c in cm.values() if len(c) >= 2}
    if not split_sizes:
        return t
    s = max(split_sizes)
    if k < s:
        raise ValueError(f"k={k} below observed splitting size {s}")
    bad = is_k_branching_to_depth(t, s, d)
    if bad is not None:
        raise ValueError(f"input is not {s}-branching to depth {d}: {bad}")
    nodes = set(t.nodes)
    for w, cs in cm.items():
        if len(w) >= d or len(cs) != s:
            continue
        used = set(cs)
        fresh: list[int] = []
        i = 0
        while len(fresh) < k - s:
            if i not in used:
                fresh.append(i)
            i += 1
        for e in fresh:
            path = w + (e,)
            nodes.add(path)
            while len(path) < d:
                path = path + (0,)
                nodes.add(path)
    return FiniteTree(frozenset(nodes), None)


def restrict(t: FiniteTree, b: int) -> FiniteTree:
    """Members whose entries are all < b; prefix-closure is automatic."""
    return FiniteTree(
        frozenset(w for w in t.nodes if all(e < b for e in w)), b
    )


def covered_fraction(t: FiniteTree, d: int) -> Fraction:
    """Exact fraction of depth-d words of b^d present in the tree."""
    if t.alphabet_bound is None:
        raise ValueError("covered_fraction needs an alphabet-bounded tree")
    return Fraction(len(t.level(d)), t.alphabet_bound**d)


def subtree_above(t: FiniteTree, stem: Word) -> FiniteTree:
    """Nodes comparable with the stem (the restriction of a condition)."""
    if stem not in t.nodes:
        raise NotInTree(f"stem {stem} is not a member")
    return FiniteTree(
        frozenset(
            w
            for w in t.nodes
            if is_prefix(w, stem) or is_prefix(stem, w)
        ),
        t.alphabet_bound,
    )

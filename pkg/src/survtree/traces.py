"""Level-indexed word sets with explicit size bounds (computable traces).

The canonical semantics is level sets of prefixes: level n holds the
length-n words, and a function "goes through" the trace when each of its
prefixes lies in the matching level.  A positional value-set view is
provided for interoperability with the textbook traceability definition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .trees import FiniteTree, Word, word_key


class BoundExceeded(Exception):
    """A level is larger than the declared bound allows."""

    def __init__(self, level: int, size: int, allowed: int):
        self.level = level
        self.size = size
        self.allowed = allowed
        super().__init__(
            f"level {level} has {size} words, bound allows {allowed}"
        )


@dataclass(frozen=True)
class LevelBound:
    """A machine-checkable bound descriptor: n -> base**n."""

    kind: str
    base: int

    def __post_init__(self) -> None:
        if self.kind != "pow":
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.base < 1:
            raise ValueError("bound base must be >= 1")

    def __call__(self, n: int) -> int:
        return self.base**n


@dataclass(frozen=True)
class TraceTable:
    """Prefix-coherent levels of words, level n all of length n."""

    levels: tuple[frozenset[Word], ...]
    bound: LevelBound

    def __post_init__(self) -> None:
        for n, lv in enumerate(self.levels):
            for w in lv:
                if len(w) != n:
                    raise ValueError(f"word {w} in level {n} has wrong length")
                if n > 0 and w[:-1] not in self.levels[n - 1]:
                    raise ValueError(f"level {n} not prefix-coherent at {w}")
            if len(lv) > self.bound(n):
                raise BoundExceeded(n, len(lv), self.bound(n))

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def words(self) -> list[Word]:
        return sorted((w for lv in self.levels for w in lv), key=word_key)

    def value_sets(self, n: int) -> frozenset[int]:
        """Positional view: the values occurring at position n."""
        return frozenset(w[n] for w in self.levels[n + 1])


def from_tree(u: FiniteTree, bound: LevelBound) -> TraceTable:
    """Trace whose n-th level is the n-th level of the tree."""
    depth = u.depth
    levels = tuple(u.level(n) for n in range(depth + 1))
    return TraceTable(levels, bound)


def to_tree(tr: TraceTable) -> FiniteTree:
    """The tree of all words appearing in a trace."""
    return FiniteTree.from_words(tr.words())


def goes_through(prefix: Word, tr: TraceTable) -> bool:
    """True iff every initial segment of the prefix is in its level."""
    if len(prefix) > tr.depth:
        raise ValueError(
            f"prefix of length {len(prefix)} exceeds trace depth {tr.depth}"
        )
    return all(prefix[:n] in tr.levels[n] for n in range(len(prefix) + 1))


def merge(tr1: TraceTable, tr2: TraceTable, bound: LevelBound) -> TraceTable:
    """Levelwise union under a fresh bound; equal depths required."""
    if tr1.depth != tr2.depth:
        raise ValueError("traces have different depths")
    levels = tuple(
        tr1.levels[n] | tr2.levels[n] for n in range(tr1.depth + 1)
    )
    return TraceTable(levels, bound)

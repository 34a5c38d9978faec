"""Fuel-bounded, deterministic stand-ins for computable trees and functionals.

A StagedTree answers membership queries relative to a stage: decisions are
monotone in the stage, prefix-consistent, and fresh data (entries or
lengths at or above the stage, or stages below the tree's delay) stays
Undecided.  An OracleFunctional evaluates positions of phi^sigma(n) under a
fuel budget with use- and fuel-monotone convergence.

Nothing here enumerates machines; adversaries are finite families loaded
from configuration, and every member of the standard library is expressible
in that configuration format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .trees import Surjection, TriState, Word, map_path, word_key


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class StagedTree:
    """Stage-indexed membership oracle for one adversary tree.

    ``member`` must be a pure, prefix-closed predicate; the staged wrapper
    then guarantees the monotonicity, prefix and freshness contracts.
    """

    id: int
    kind: str
    member: Callable[[Word], bool] = field(compare=False)
    claimed_shape: Optional[tuple[str, int]] = None
    alphabet_bound: Optional[int] = None
    delay: int = 0

    def decide(self, w: Word, stage: int) -> TriState:
        if stage < self.delay:
            return TriState.UNDECIDED
        if len(w) >= stage or any(e >= stage for e in w):
            return TriState.UNDECIDED
        return TriState.IN if self.member(w) else TriState.OUT


@dataclass(frozen=True)
class OracleFunctional:
    """Fuel-bounded model of phi_e^sigma(n); None means not-yet."""

    id: int
    kind: str
    rule: Callable[[Word, int, int], Optional[int]] = field(compare=False)

    def eval(self, oracle_prefix: Word, n: int, fuel: int) -> Optional[int]:
        return self.rule(oracle_prefix, n, fuel)


def eval_total_on(
    t: OracleFunctional, sigma: Word, upto: int, fuel: int
) -> Optional[Word]:
    """The length-``upto`` output word, or None if any position is not yet."""
    out = []
    for n in range(upto):
        v = t.eval(sigma, n, fuel)
        if v is None:
            return None
        out.append(v)
    return tuple(out)


def converged_prefix(
    t: OracleFunctional, sigma: Word, cap: int, fuel: int
) -> Word:
    """Longest output prefix (up to cap) converged on sigma itself."""
    out = []
    for n in range(cap):
        v = t.eval(sigma, n, fuel)
        if v is None:
            break
        out.append(v)
    return tuple(out)


# ---------------------------------------------------------------------------
# Pairing of naturals with <e, k> pairs, k > 2 (Cantor pairing on (e, k-3)).


def pair_index(e: int, k: int) -> int:
    if k <= 2:
        raise ValueError("pairs require k > 2")
    j = k - 3
    return (e + j) * (e + j + 1) // 2 + j


def index_pair(i: int) -> tuple[int, int]:
    s = 0
    while (s + 1) * (s + 2) // 2 <= i:
        s += 1
    j = i - s * (s + 1) // 2
    return (s - j, j + 3)


@dataclass(frozen=True)
class AdversaryFamily:
    staged_trees: tuple[StagedTree, ...]
    functionals: tuple[OracleFunctional, ...]
    config: dict = field(compare=False, default_factory=dict)

    def pair_index(self, e: int, k: int) -> int:
        return pair_index(e, k)

    def index_pair(self, i: int) -> tuple[int, int]:
        return index_pair(i)


# ---------------------------------------------------------------------------
# Honesty inspection.

_BFS_NODE_BUDGET = 512
_BFS_DEPTH_CAP = 4


def looks_like_branching(
    t: StagedTree, k: int, root: Word, stage: int
) -> Verdict:
    """Does the decided part of t look like a k-branching tree through root?

    Explores the decided In-region below the root (bounded breadth-first
    walk).  A node whose within-horizon children are all decided must have
    1 or k of them In; a decided irreparable violation answers no, missing
    information answers undecided.
    """
    r = t.decide(root, stage)
    if r is TriState.OUT:
        return Verdict.NO
    if r is TriState.UNDECIDED:
        return Verdict.UNDECIDED
    horizon = stage if t.alphabet_bound is None else min(stage, t.alphabet_bound)
    horizon = min(horizon, _BFS_NODE_BUDGET)
    frontier = [root]
    seen = 0
    while frontier and seen < _BFS_NODE_BUDGET:
        w = frontier.pop(0)
        seen += 1
        if len(w) - len(root) >= _BFS_DEPTH_CAP:
            continue
        in_children = []
        all_decided = True
        for i in range(horizon):
            d = t.decide(w + (i,), stage)
            if d is TriState.IN:
                in_children.append(i)
            elif d is TriState.UNDECIDED:
                all_decided = False
        if len(in_children) > k:
            return Verdict.NO
        if all_decided and t.alphabet_bound is not None and horizon >= t.alphabet_bound:
            # every possible child is decided; the count is final
            if len(in_children) not in (1, k):
                return Verdict.NO
        frontier.extend(w + (i,) for i in in_children)
    return Verdict.YES


def tree_bound_violation(
    t: StagedTree, k: int, stage: int
) -> Optional[Word]:
    """A decided node with more than k decided-In children, if one exists.

    Used to recognise that an adversary is provably not a k-tree, making a
    requirement against it vacuous.
    """
    horizon = stage if t.alphabet_bound is None else min(stage, t.alphabet_bound)
    horizon = min(horizon, _BFS_NODE_BUDGET)
    if t.decide((), stage) is not TriState.IN:
        return None
    frontier: list[Word] = [()]
    seen = 0
    while frontier and seen < _BFS_NODE_BUDGET:
        w = frontier.pop(0)
        seen += 1
        if len(w) >= _BFS_DEPTH_CAP:
            continue
        in_children = [
            i for i in range(horizon) if t.decide(w + (i,), stage) is TriState.IN
        ]
        if len(in_children) > k:
            return w
        frontier.extend(w + (i,) for i in in_children)
    return None


def pushforward_staged(t: StagedTree, g: Surjection) -> StagedTree:
    """Preimage tree as a staged oracle: decide w by deciding g*(w)."""
    if t.alphabet_bound is not None and t.alphabet_bound > g.codomain_size:
        raise ValueError("tree alphabet exceeds surjection codomain")
    return StagedTree(
        id=t.id,
        kind=f"preimage({t.kind})",
        member=lambda w: t.member(map_path(g, w)),
        claimed_shape=None,
        alphabet_bound=g.domain_size,
        delay=t.delay,
    )


# ---------------------------------------------------------------------------
# Configuration: the documented standard set of adversary kinds.


class ConfigError(ValueError):
    pass


def _subtree_member(alphabet: frozenset[int]) -> Callable[[Word], bool]:
    return lambda w: all(e in alphabet for e in w)


def _subtree_plus_member(
    alphabet: frozenset[int], extra: frozenset[Word]
) -> Callable[[Word], bool]:
    base = _subtree_member(alphabet)
    return lambda w: base(w) or w in extra


def _comb_member(entry: int) -> Callable[[Word], bool]:
    return lambda w: all(e == entry for e in w)


def staged_tree_from_config(entry: dict, index: int) -> StagedTree:
    kind = entry.get("kind")
    claim = entry.get("claim")
    claimed = (claim[0], int(claim[1])) if claim else None
    delay = int(entry.get("delay", 0))
    tid = int(entry.get("id", index))
    if kind == "full_subtree":
        alphabet = frozenset(int(a) for a in entry["alphabet"])
        return StagedTree(
            tid, kind, _subtree_member(alphabet), claimed,
            alphabet_bound=max(alphabet) + 1, delay=delay,
        )
    if kind == "full_subtree_plus":
        alphabet = frozenset(int(a) for a in entry["alphabet"])
        extra = frozenset(tuple(int(e) for e in w) for w in entry["extra"])
        bound = max(max(alphabet), *(max(w) for w in extra if w)) + 1
        return StagedTree(
            tid, kind, _subtree_plus_member(alphabet, extra), claimed,
            alphabet_bound=bound, delay=delay,
        )
    if kind == "comb":
        e = int(entry.get("entry", 0))
        return StagedTree(
            tid, kind, _comb_member(e), claimed,
            alphabet_bound=e + 1, delay=delay,
        )
    raise ConfigError(f"staged tree entry {index}: unknown kind {kind!r}")


def _identity_rule(sigma: Word, n: int, fuel: int) -> Optional[int]:
    if fuel > n and n < len(sigma):
        return sigma[n]
    return None


def _mod_rule(m: int) -> Callable[[Word, int, int], Optional[int]]:
    def rule(sigma: Word, n: int, fuel: int) -> Optional[int]:
        if fuel > n and n < len(sigma):
            return sigma[n] % m
        return None

    return rule


def _const_rule(c: int) -> Callable[[Word, int, int], Optional[int]]:
    def rule(sigma: Word, n: int, fuel: int) -> Optional[int]:
        return c if fuel > n else None

    return rule


def _diverging_rule(sigma: Word, n: int, fuel: int) -> Optional[int]:
    return None


def functional_from_config(entry: dict, index: int) -> OracleFunctional:
    kind = entry.get("kind")
    fid = int(entry.get("id", index))
    if kind == "identity":
        return OracleFunctional(fid, kind, _identity_rule)
    if kind == "entry_mod":
        return OracleFunctional(fid, kind, _mod_rule(int(entry["modulus"])))
    if kind == "constant":
        return OracleFunctional(fid, kind, _const_rule(int(entry["value"])))
    if kind == "diverging":
        return OracleFunctional(fid, kind, _diverging_rule)
    raise ConfigError(f"functional entry {index}: unknown kind {kind!r}")


def family_from_config(config: dict) -> AdversaryFamily:
    trees = tuple(
        staged_tree_from_config(e, i)
        for i, e in enumerate(config.get("staged_trees", []))
    )
    funcs = tuple(
        functional_from_config(e, i)
        for i, e in enumerate(config.get("functionals", []))
    )
    ids = [t.id for t in trees]
    if len(set(ids)) != len(ids):
        raise ConfigError("duplicate staged tree ids")
    fids = [f.id for f in funcs]
    if len(set(fids)) != len(fids):
        raise ConfigError("duplicate functional ids")
    return AdversaryFamily(trees, funcs, config)


STANDARD_CONFIG: dict = {
    "staged_trees": [
        {"id": 0, "kind": "full_subtree", "alphabet": [0, 1, 2],
         "claim": ["branching", 3]},
        {"id": 1, "kind": "full_subtree", "alphabet": [0, 3, 4],
         "claim": ["branching", 3]},
        {"id": 2, "kind": "full_subtree", "alphabet": [0, 1],
         "claim": ["branching", 2]},
        {"id": 3, "kind": "full_subtree", "alphabet": [1, 2],
         "claim": ["branching", 2]},
        {"id": 4, "kind": "comb", "entry": 0, "claim": ["tree", 1]},
        {"id": 5, "kind": "full_subtree", "alphabet": [0, 1],
         "claim": ["branching", 2], "delay": 6},
        {"id": 6, "kind": "full_subtree_plus", "alphabet": [0, 1],
         "extra": [[2]], "claim": ["branching", 2]},
    ],
    "functionals": [
        {"id": 0, "kind": "identity"},
        {"id": 1, "kind": "entry_mod", "modulus": 3},
        {"id": 2, "kind": "constant", "value": 3},
        {"id": 3, "kind": "diverging"},
    ],
}

EMPTY_CONFIG: dict = {"staged_trees": [], "functionals": []}


def standard_library() -> AdversaryFamily:
    """The fixed, documented adversary family used by the test suites."""
    return family_from_config(STANDARD_CONFIG)

"""Finite, fuel-bounded combinatorics of branching trees: shape predicates,
alphabet pushforwards, staged adversary oracles, trace tables, exact leaf
covers, and four deterministic condition-building engines with verifiable
run records."""

from .cover import CoverWitness, SizeGuard, min_cover, monotonicity_table, verify_cover
from .staged import (
    AdversaryFamily,
    OracleFunctional,
    StagedTree,
    Verdict,
    family_from_config,
    index_pair,
    pair_index,
    standard_library,
)
from .traces import BoundExceeded, LevelBound, TraceTable, from_tree, goes_through, to_tree
from .trees import (
    FiniteTree,
    NotInTree,
    ShapeViolation,
    Surjection,
    TriState,
    Word,
    covered_fraction,
    embed_branching,
    is_accelerating_to_depth,
    is_k_branching_to_depth,
    is_k_tree_to_depth,
    map_path,
    pushforward_preimage,
    restrict,
    subtree_above,
    word_key,
)

__all__ = [
    "AdversaryFamily",
    "BoundExceeded",
    "CoverWitness",
    "FiniteTree",
    "LevelBound",
    "NotInTree",
    "OracleFunctional",
    "ShapeViolation",
    "SizeGuard",
    "StagedTree",
    "Surjection",
    "TraceTable",
    "TriState",
    "Verdict",
    "Word",
    "covered_fraction",
    "embed_branching",
    "family_from_config",
    "from_tree",
    "goes_through",
    "index_pair",
    "is_accelerating_to_depth",
    "is_k_branching_to_depth",
    "is_k_tree_to_depth",
    "map_path",
    "min_cover",
    "monotonicity_table",
    "pair_index",
    "pushforward_preimage",
    "restrict",
    "standard_library",
    "subtree_above",
    "to_tree",
    "verify_cover",
    "word_key",
]

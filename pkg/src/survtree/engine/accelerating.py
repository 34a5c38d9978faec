"""Forcing with accelerating trees: each successive splitting node on a
branch splits wider (the i-th split has at least i+3 successors), so there
is always room to step outside any claimed k-branching adversary, and the
majority-vote prune of Case 4 squeezes functional outputs into a 2-tree.

The working tree starts implicit (every word over the naturals up to the
working depth, above the stem) and becomes an explicit skeleton the first
time Case 4 prunes it.
"""

from __future__ import annotations

from typing import Optional

from ..staged import AdversaryFamily, TriState, tree_bound_violation
from ..traces import LevelBound, TraceTable
from ..trees import FiniteTree, Word, is_prefix, prefixes, subtree_above, word_key
from .common import FuelMeter, RunRecord

_PROBE_ENTRIES = 4
_PROBE_LEN = 3


def _probes(stem: Word, tree: Optional[FiniteTree], depth: int) -> list[Word]:
    """Depth-padded sample branches above the stem, in canonical order."""
    if tree is not None:
        return sorted(
            (L for L in tree.leaves() if is_prefix(stem, L)), key=word_key
        )
    out = []
    for length in range(_PROBE_LEN + 1):
        for suffix in _words(length):
            w = stem + suffix
            if len(w) <= depth:
                out.append(w + (0,) * (depth - len(w)))
    seen = set()
    uniq = []
    for w in sorted(out, key=word_key):
        if w not in seen:
            seen.add(w)
            uniq.append(w)
    return uniq


def _words(length: int) -> list[Word]:
    if length == 0:
        return [()]
    shorter = _words(length - 1)
    return [w + (i,) for w in shorter for i in range(_PROBE_ENTRIES)]


def _digits(j: int, count: int) -> Word:
    return tuple((j // 3 ** t) % 3 for t in range(1, count + 1))


def _case4(
    meter: FuelMeter, stem: Word, depth: int
) -> tuple[Optional[FiniteTree], Optional[TraceTable], dict]:
    """Majority-vote prune: the i-th split level keeps i+3 successors whose
    outputs disagree pairwise at staged positions, so output prefixes form
    a 2-tree."""
    split_nodes = [stem]
    all_nodes: set[Word] = set(prefixes(stem))
    log_levels = []
    shortage = None
    level = 0
    while True:
        width = level + 3  # successors required at the level-th split
        rounds = width - 1
        if split_nodes and len(split_nodes[0]) + rounds > depth:
            shortage = {
                "level": level,
                "need": rounds,
                "room": depth - len(split_nodes[0]),
            }
            break
        next_nodes = []
        failed = False
        for sigma in split_nodes:
            kept, positions = _prune_split(meter, sigma, rounds, depth)
            if kept is None:
                failed = True
                break
            next_nodes.extend(kept)
            log_levels.append(
                {"split": list(sigma), "kept": [list(w) for w in kept],
                 "positions": positions}
            )
        if failed:
            if level == 0:
                return None, None, {"case": "no-disagreement"}
            shortage = {"level": level, "reason": "no disagreement"}
            break
        for w in next_nodes:
            all_nodes.update(prefixes(w))
        split_nodes = sorted(next_nodes, key=word_key)
        level += 1
    for w in split_nodes:
        all_nodes.update(prefixes(w + (0,) * (depth - len(w))))
    tree = FiniteTree.from_words(all_nodes)
    levels: list[set[Word]] = [set() for _ in range(depth + 1)]
    levels[0].add(())
    for w in tree.nodes:
        o = meter.converged_prefix(w, depth)
        for p in prefixes(o[:depth]):
            levels[len(p)].add(p)
    trace = TraceTable(tuple(frozenset(s) for s in levels), LevelBound("pow", 2))
    log = {"case": "4", "levels": log_levels}
    if shortage is not None:
        log["shortage"] = shortage
    return tree, trace, log


def _prune_split(
    meter: FuelMeter, sigma: Word, rounds: int, depth: int
) -> tuple[Optional[list[Word]], list[int]]:
    """From 3^rounds candidate extensions of sigma, keep a survivor plus one
    dissenter per round; kept nodes take distinct first entries and their
    outputs pairwise disagree at the recorded positions."""
    n_cand = 3 ** rounds
    cands = {
        j: sigma + (j,) + _digits(j, rounds - 1) for j in range(n_cand)
    }
    outs = {j: meter.converged_prefix(w, depth) for j, w in cands.items()}
    alive = sorted(cands)
    reps: list[int] = []
    positions: list[int] = []
    m = -1
    for _ in range(rounds):
        found = None
        probe = m + 1
        while found is None:
            if any(len(outs[j]) <= probe for j in alive):
                return None, positions
            values = {outs[j][probe] for j in alive}
            if len(values) > 1:
                found = probe
            probe += 1
        m = found
        counts: dict[int, int] = {}
        for j in alive:
            counts[outs[j][m]] = counts.get(outs[j][m], 0) + 1
        best = max(counts.values())
        majority = min(v for v, c in counts.items() if c == best)
        rep = next(j for j in alive if outs[j][m] != majority)
        reps.append(rep)
        positions.append(m)
        alive = [j for j in alive if outs[j][m] == majority]
    kept = sorted({*reps, alive[0]})
    return [cands[j] for j in kept], positions


def accelerating_force(
    adversaries: AdversaryFamily,
    stages: int,
    depth: int,
    fuel: int,
) -> RunRecord:
    query = depth + stages + 32
    stem: Word = ()
    tree: Optional[FiniteTree] = None  # None: implicit full tree above stem
    stage_log: list[dict] = []
    certificates: list[dict] = []
    traces: list[tuple[int, TraceTable]] = []
    status = "complete"

    for s in range(stages):
        idx = s // 2
        if s % 2 == 0:
            e0, k0 = adversaries.index_pair(idx)
            if e0 >= len(adversaries.staged_trees):
                stage_log.append({"stage": s, "requirement": None, "case": "skip"})
                continue
            adv = adversaries.staged_trees[e0]
            witness = tree_bound_violation(adv, k0, query)
            if witness is not None:
                certificates.append(
                    {"kind": "vacuous_tree_requirement", "tree": adv.id,
                     "k": k0, "witness": list(witness), "stage": query}
                )
                stage_log.append({"stage": s, "requirement": f"R{idx}", "case": "vacuous"})
                continue
            if adv.decide(stem, query) is TriState.OUT:
                certificates.append(
                    {"kind": "avoidance", "tree": adv.id,
                     "witness": list(stem), "stage": query}
                )
                stage_log.append(
                    {"stage": s, "requirement": f"R{idx}", "case": "already-out"}
                )
                continue
            new_stem = _even_exit(adv, k0, stem, tree, query, depth)
            if new_stem is None:
                stage_log.append({"stage": s, "requirement": f"R{idx}", "case": "stuck"})
                status = "incomplete"
                break
            stem = new_stem
            if tree is not None:
                tree = subtree_above(tree, stem)
            certificates.append(
                {"kind": "avoidance", "tree": adv.id,
                 "witness": list(stem), "stage": query}
            )
            stage_log.append(
                {"stage": s, "requirement": f"R{idx}", "case": "exit",
                 "witness": list(stem)}
            )
            continue
        if idx >= len(adversaries.functionals):
            stage_log.append({"stage": s, "requirement": None, "case": "skip"})
            continue
        fn = adversaries.functionals[idx]
        meter = FuelMeter(fn, fuel)
        probes = _probes(stem, tree, depth)
        case1 = next(
            (
                n
                for n in range(depth)
                if all(meter.eval(p, n) is None for p in probes)
            ),
            None,
        )
        if case1 is not None:
            certificates.append(
                {"kind": "presumed_divergence", "functional": fn.id,
                 "node": list(stem), "position": case1, "fuel": fuel}
            )
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "case": "1",
                 "fuel_spent": meter.calls}
            )
            continue
        case2 = None
        for n in range(depth):
            for p in probes:
                v = meter.eval(p, n)
                if v is not None and v >= 3:
                    case2 = (p[: n + 1], n, v)
                    break
            if case2:
                break
        if case2 is not None:
            node, n, v = case2
            if is_prefix(stem, node):
                stem = node
                if tree is not None:
                    tree = subtree_above(tree, stem)
            certificates.append(
                {"kind": "value_witness", "functional": fn.id,
                 "node": list(node), "position": n, "value": v, "fuel": fuel}
            )
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "case": "2",
                 "position": n, "fuel_spent": meter.calls}
            )
            continue
        outs = [meter.converged_prefix(p, depth) for p in probes]
        if len({o for o in outs}) <= 1 or _pairwise_consistent(outs):
            certificates.append(
                {"kind": "constant_outputs", "functional": fn.id,
                 "probes": [list(p) for p in probes], "fuel": fuel}
            )
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "case": "3",
                 "fuel_spent": meter.calls}
            )
            continue
        if tree is not None:
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "case": "stuck",
                 "fuel_spent": meter.calls}
            )
            status = "incomplete"
            break
        new_tree, trace, log = _case4(meter, stem, depth)
        if new_tree is None:
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "fuel_spent": meter.calls, **log}
            )
            status = "incomplete"
            break
        tree = new_tree
        traces.append((fn.id, trace))
        certificates.append(
            {"kind": "two_tree_trace", "functional": fn.id,
             "trace_index": len(traces) - 1, "fuel": fuel}
        )
        stage_log.append(
            {"stage": s, "requirement": f"P{idx}", "fuel_spent": meter.calls, **log}
        )

    if tree is None:
        tree = FiniteTree.from_words(prefixes(stem + (0,) * (depth - len(stem))))
    certificates.append(
        {"kind": "shape", "predicate": "accelerating", "depth": depth}
    )
    return RunRecord(
        engine="accelerating",
        parameters={
            "depth": depth, "stages": stages, "fuel": fuel, "query_stage": query,
        },
        family_config=adversaries.config,
        stage_log=stage_log,
        final_stem=stem,
        final_tree=tree,
        traces=traces,
        certificates=certificates,
        status=status,
    )


def _even_exit(
    adv, k: int, stem: Word, tree: Optional[FiniteTree], query: int, depth: int
) -> Optional[Word]:
    """Step to a successor, at a wide-enough node, decided out of adv."""
    if tree is None:
        if len(stem) >= depth:
            return None
        for i in range(query):
            if adv.decide(stem + (i,), query) is TriState.OUT:
                return stem + (i,)
        return None
    cm = tree.child_map()
    for w in sorted(tree.nodes, key=word_key):
        if not is_prefix(stem, w) or len(cm.get(w, ())) < k + 1:
            continue
        for c in cm[w]:
            if adv.decide(w + (c,), query) is TriState.OUT:
                return w + (c,)
    return None


def _pairwise_consistent(outs: list[Word]) -> bool:
    for i, a in enumerate(outs):
        for b in outs[i + 1:]:
            n = min(len(a), len(b))
            if a[:n] != b[:n]:
                return False
    return True

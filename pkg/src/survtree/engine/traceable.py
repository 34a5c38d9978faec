"""Labeled pruning engine: a 3-tree condition whose branches escape claimed
branching trees and whose functional outputs go through 3^n-bounded traces.

Nodes carry task labels; the nonzero labels along any branch always read
off an initial segment of the task schedule 1,1,2,1,2,3,...  Even stages
descend through a node labeled r to a successor outside the r-th claimed
branching tree.  Odd stages either restrict to a divergence-forcing node or
prune: labeled nodes admit successors one at a time, each admission moving
every other leaf up to a label-matched extension whose outputs disagree
with the newcomer's at a fresh position, then repairing the newcomer's
branch so its label sequence continues the schedule.
"""

from __future__ import annotations

from typing import Optional

from ..staged import AdversaryFamily, StagedTree, tree_bound_violation
from ..traces import LevelBound, TraceTable
from ..trees import (
    FiniteTree,
    TriState,
    Word,
    is_prefix,
    prefixes,
    subtree_above,
    word_key,
)
from .build3 import build_3tree
from .common import (
    FuelMeter,
    LabeledCondition,
    RunRecord,
    schedule,
    schedule_prefix,
)


def initial_condition(
    adversaries: AdversaryFamily, depth: int, stages: int
) -> LabeledCondition:
    """Base tree grown with the schedule's level coding; level i of the
    tree carries task schedule(i)."""
    tree, _ = build_3tree(
        adversaries,
        depth,
        stages,
        level_code=lambda n: adversaries.index_pair(schedule(n) - 1),
    )
    tree = _prune_to_depth(tree, depth)
    labels = {w: schedule(len(w)) for w in tree.nodes}
    return LabeledCondition((), tree, labels)


def _prune_to_depth(tree: FiniteTree, depth: int) -> FiniteTree:
    """Keep only nodes lying on a branch that reaches the working depth."""
    keep = set()
    for leaf in tree.nodes:
        if len(leaf) == depth:
            keep.update(prefixes(leaf))
    alive = {w for w in tree.nodes if w in keep}
    return FiniteTree.from_words(alive, alphabet_bound=tree.alphabet_bound)


def _relabel(stem: Word, tree: FiniteTree) -> dict[Word, int]:
    labels = {}
    for w in tree.nodes:
        if is_prefix(w, stem) and w != stem:
            labels[w] = 0
        else:
            labels[w] = schedule(len(w) - len(stem))
    return labels


def _nodes_above(tree: FiniteTree, node: Word) -> list[Word]:
    return sorted((w for w in tree.nodes if is_prefix(node, w)), key=word_key)


def _even_stage(
    adv: StagedTree,
    k: int,
    r: int,
    stem: Word,
    tree: FiniteTree,
    labels: dict[Word, int],
    query: int,
) -> tuple[Optional[Word], dict, Optional[dict]]:
    witness = tree_bound_violation(adv, k, query)
    if witness is not None:
        cert = {
            "kind": "vacuous_tree_requirement",
            "tree": adv.id,
            "k": k,
            "witness": list(witness),
            "stage": query,
        }
        return None, {"case": "vacuous"}, cert
    if adv.decide(stem, query) is TriState.OUT:
        cert = {
            "kind": "avoidance",
            "tree": adv.id,
            "witness": list(stem),
            "stage": query,
        }
        return None, {"case": "already-out"}, cert
    cm = tree.child_map()
    for tau in _nodes_above(tree, stem):
        if labels[tau] != r:
            continue
        for c in cm.get(tau, ()):
            if adv.decide(tau + (c,), query) is TriState.OUT:
                new_stem = tau + (c,)
                cert = {
                    "kind": "avoidance",
                    "tree": adv.id,
                    "witness": list(new_stem),
                    "stage": query,
                }
                return new_stem, {"case": "exit", "witness": list(new_stem)}, cert
    return None, {"case": "stuck"}, None


def _divergence_escape(
    meter: FuelMeter, stem: Word, tree: FiniteTree, depth: int
) -> Optional[tuple[Word, int]]:
    cm = tree.child_map()
    div: dict[Word, list[bool]] = {}
    for w in sorted(tree.nodes, key=word_key, reverse=True):
        kids = cm.get(w, ())
        if not kids:
            div[w] = [meter.eval(w, n) is None for n in range(depth)]
        else:
            div[w] = [all(div[w + (i,)][n] for i in kids) for n in range(depth)]
    for t in _nodes_above(tree, stem):
        for n in range(depth):
            if div[t][n]:
                return t, n
    return None


def _prune_once(
    meter: FuelMeter,
    stem: Word,
    tree: FiniteTree,
    labels: dict[Word, int],
    depth: int,
) -> tuple[Word, FiniteTree, dict[Word, int], dict]:
    """Steps 1-8: admit labeled-node successors one at a time."""
    cm = tree.child_map()
    conv_cache: dict[Word, Word] = {}

    def conv(w: Word) -> Word:
        if w not in conv_cache:
            conv_cache[w] = meter.converged_prefix(w, depth)
        return conv_cache[w]

    p_next = next(
        (w for w in _nodes_above(tree, stem) if labels[w] == 1), stem
    )
    new_labels: dict[Word, int] = {}
    for w in prefixes(p_next):
        new_labels[w] = 0
    new_labels[p_next] = 1
    rejected: set[Word] = set()
    admitted = 0
    log_admissions: list[dict] = []

    while True:
        candidate = None
        for w in sorted(new_labels, key=word_key):
            if new_labels[w] == 0:
                continue
            for c in cm.get(w, ()):
                q = w + (c,)
                if q not in new_labels and q not in rejected:
                    candidate = q
                    break
            if candidate:
                break
        if candidate is None:
            break
        q = candidate
        plan = _admission_plan(
            conv, tree, labels, new_labels, q, depth,
            _members_leaves(new_labels, cm),
        )
        if plan is None:
            rejected.add(q)
            continue
        tau, q_prime, moves = plan
        for sigma, tau_sigma in moves:
            # splice: the path from the old leaf to its replacement enters
            # splitlessly, and the task label rides up to the far end
            for i in range(len(sigma), len(tau_sigma)):
                new_labels[tau_sigma[:i]] = 0
            new_labels[tau_sigma] = labels[tau_sigma]
        for i in range(len(q), len(q_prime)):
            new_labels[q_prime[:i]] = 0
        new_labels[q_prime] = labels[q_prime]
        admitted += 1
        log_admissions.append(
            {"candidate": list(q), "via": list(tau), "repair": list(q_prime),
             "moves": [[list(a), list(b)] for a, b in moves]}
        )

    # every branch runs to the working depth, labels continuing the schedule
    final_labels = dict(new_labels)
    for leaf in _members_leaves(final_labels, cm):
        consumed = sum(
            1 for i in range(len(leaf) + 1) if final_labels[leaf[:i]] != 0
        )
        node = leaf
        while len(node) < depth:
            nxt = node + (min(cm[node]),)
            final_labels[nxt] = schedule(consumed)
            consumed += 1
            node = nxt
    new_tree = FiniteTree.from_words(final_labels, alphabet_bound=tree.alphabet_bound)
    log = {"case": "prune", "admissions": admitted, "detail": log_admissions}
    return p_next, new_tree, final_labels, log


def _members_leaves(members: dict[Word, int], cm: dict) -> list[Word]:
    return sorted(
        (
            w
            for w in members
            if not any(w + (c,) in members for c in cm.get(w, ()))
        ),
        key=word_key,
    )


def _admission_plan(
    conv,
    tree: FiniteTree,
    labels: dict[Word, int],
    new_labels: dict[Word, int],
    q: Word,
    depth: int,
    leaves: list[Word],
) -> Optional[tuple[Word, Word, list[tuple[Word, Word]]]]:
    """A full plan for admitting q, or None.

    Returns (tau, q_prime, moves): tau extends q and disagrees with the
    label-matched extension tau_sigma of every other leaf sigma at some
    position below a common convergence length; q_prime extends tau and
    continues the branch's schedule of nonzero labels.
    """
    others = [s for s in leaves if not is_prefix(s, q)]
    consumed = sum(1 for i in range(len(q)) if new_labels[q[:i]] != 0)
    want = schedule(consumed)

    def repair(tau: Word) -> Optional[Word]:
        for qp in _nodes_above(tree, tau):
            if labels[qp] == want:
                return qp
        return None

    if not others:
        qp = repair(q)
        if qp is None:
            return None
        return q, qp, []

    for m in range(len(q) + 1, depth):
        for tau in _nodes_above(tree, q):
            o_tau = conv(tau)
            if len(o_tau) < m + 1:
                continue
            moves = []
            ok = True
            for sigma in others:
                found = None
                for ts in _nodes_above(tree, sigma):
                    if labels[ts] != new_labels[sigma]:
                        continue
                    o_ts = conv(ts)
                    if len(o_ts) < m + 1:
                        continue
                    if o_ts[:m] != o_tau[:m]:
                        found = ts
                        break
                if found is None:
                    ok = False
                    break
                moves.append((sigma, found))
            if not ok:
                continue
            qp = repair(tau)
            if qp is None:
                continue
            return tau, qp, moves
    return None


def traceable_prune(
    start: LabeledCondition,
    adversaries: AdversaryFamily,
    stages: int,
    depth: int,
    fuel: int,
) -> RunRecord:
    query = depth + stages + 32
    stem = start.stem
    tree = start.tree
    labels = dict(start.labels)
    stage_log: list[dict] = []
    certificates: list[dict] = [
        {"kind": "schedule", "terms": schedule_prefix(max(10, depth + 2))}
    ]
    traces: list[tuple[int, TraceTable]] = []
    status = "complete"

    for s in range(stages):
        idx = s // 2
        if s % 2 == 0:
            code = adversaries.index_pair(idx)
            e0, k0 = code
            if e0 >= len(adversaries.staged_trees):
                stage_log.append({"stage": s, "requirement": None, "case": "skip"})
                continue
            adv = adversaries.staged_trees[e0]
            new_stem, log, cert = _even_stage(
                adv, k0, idx + 1, stem, tree, labels, query
            )
            stage_log.append({"stage": s, "requirement": f"R{idx}", **log})
            if cert is None:
                status = "incomplete"
                break
            certificates.append(cert)
            if new_stem is not None:
                stem = new_stem
                tree = subtree_above(tree, stem)
                labels = _relabel(stem, tree)
            continue
        if idx >= len(adversaries.functionals):
            stage_log.append({"stage": s, "requirement": None, "case": "skip"})
            continue
        fn = adversaries.functionals[idx]
        meter = FuelMeter(fn, fuel)
        hit = _divergence_escape(meter, stem, tree, depth)
        if hit is not None:
            node, n = hit
            stem = node
            tree = subtree_above(tree, stem)
            labels = _relabel(stem, tree)
            certificates.append(
                {
                    "kind": "presumed_divergence",
                    "functional": fn.id,
                    "node": list(node),
                    "position": n,
                    "fuel": fuel,
                }
            )
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "case": "escape",
                 "fuel_spent": meter.calls}
            )
            continue
        stem, tree, labels, log = _prune_once(meter, stem, tree, labels, depth)
        outs = [meter.converged_prefix(w, depth) for w in tree.sorted_nodes()]
        levels: list[set[Word]] = [set() for _ in range(depth + 1)]
        levels[0].add(())
        for o in outs:
            for p in prefixes(o[:depth]):
                levels[len(p)].add(p)
        trace = TraceTable(
            tuple(frozenset(x) for x in levels), LevelBound("pow", 3)
        )
        traces.append((fn.id, trace))
        certificates.append(
            {
                "kind": "trace",
                "functional": fn.id,
                "case": "prune",
                "trace_index": len(traces) - 1,
                "fuel": fuel,
            }
        )
        stage_log.append(
            {"stage": s, "requirement": f"P{idx}", "fuel_spent": meter.calls, **log}
        )

    certificates.append({"kind": "labels"})
    certificates.append(
        {"kind": "shape", "predicate": "ktree", "k": 3, "depth": depth}
    )
    return RunRecord(
        engine="traceable",
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
        labels=labels,
    )

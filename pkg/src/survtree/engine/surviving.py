"""Diagonalization engine producing a surviving condition over (k+1)^{<=d}.

The run alternates tree requirements (exit the e-th adversary k-tree) with
functional requirements (force the e-th functional to be partial, to take
few values, or to go through a (k+1)^n-bounded trace built by simultaneous
splitting).  Everything is deterministic: ties break to the least entry and
the shortest-then-lexicographically-first node.
"""

from __future__ import annotations

from typing import Callable, Optional

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
from .common import FuelMeter, RunRecord


def _nodes_above(tree: FiniteTree, node: Word) -> list[Word]:
    return sorted(
        (w for w in tree.nodes if is_prefix(node, w)), key=word_key
    )


def _tree_stage(
    adv: StagedTree, k: int, stem: Word, tree: FiniteTree, query: int
) -> tuple[Optional[Word], FiniteTree, dict, Optional[dict]]:
    """One avoidance stage; returns (new stem or None, tree, log, cert)."""
    witness = tree_bound_violation(adv, k, query)
    if witness is not None:
        cert = {
            "kind": "vacuous_tree_requirement",
            "tree": adv.id,
            "k": k,
            "witness": list(witness),
            "stage": query,
        }
        return None, tree, {"case": "vacuous", "witness": list(witness)}, cert
    if adv.decide(stem, query) is TriState.OUT:
        cert = {
            "kind": "avoidance",
            "tree": adv.id,
            "witness": list(stem),
            "stage": query,
        }
        return None, tree, {"case": "already-out"}, cert
    cm = tree.child_map()
    for q in _nodes_above(tree, stem):
        for i in cm.get(q, ()):
            if adv.decide(q + (i,), query) is TriState.OUT:
                new_stem = q + (i,)
                cert = {
                    "kind": "avoidance",
                    "tree": adv.id,
                    "witness": list(new_stem),
                    "stage": query,
                }
                log = {"case": "exit", "witness": list(new_stem)}
                return new_stem, subtree_above(tree, new_stem), log, cert
    return None, tree, {"case": "stuck"}, None


def _case_a(
    meter: FuelMeter, stem: Word, tree: FiniteTree, depth: int
) -> Optional[tuple[Word, int]]:
    """First (node, position) past which every branch stays unconverged.

    Divergence of "all leaves above t at position n" is aggregated bottom-up
    so each leaf is evaluated once per position.
    """
    cm = tree.child_map()
    div: dict[Word, list[bool]] = {}
    for w in sorted(tree.nodes, key=word_key, reverse=True):
        kids = cm.get(w, ())
        if not kids:
            div[w] = [meter.eval(w, n) is None for n in range(depth)]
        else:
            div[w] = [
                all(div[w + (i,)][n] for i in kids) for n in range(depth)
            ]
    for t in _nodes_above(tree, stem):
        for n in range(depth):
            if div[t][n]:
                return t, n
    return None


def _case_b(
    meter: FuelMeter, k: int, stem: Word, tree: FiniteTree, depth: int
) -> Optional[Word]:
    """First non-leaf node whose branch outputs take at most k values per level.

    Per-level value sets are merged bottom-up, collapsing to an "over the
    cap" marker as soon as a level exceeds k distinct prefixes.
    """
    cm = tree.child_map()
    OVER = None  # marker: more than k values at this level
    vals: dict[Word, list] = {}
    for w in sorted(tree.nodes, key=word_key, reverse=True):
        kids = cm.get(w, ())
        if not kids:
            o = meter.converged_prefix(w, depth)
            vals[w] = [
                {o[:n]} if len(o) >= n else set() for n in range(1, depth + 1)
            ]
        else:
            merged = []
            for n in range(depth):
                acc: Optional[set] = set()
                for i in kids:
                    part = vals[w + (i,)][n]
                    if part is OVER or acc is OVER:
                        acc = OVER
                        break
                    acc = acc | part
                    if len(acc) > k:
                        acc = OVER
                        break
                merged.append(acc)
            vals[w] = merged
    for tau in _nodes_above(tree, stem):
        if len(tau) >= tree.depth:
            continue
        if all(v is not OVER for v in vals[tau]):
            return tau
    return None


def _trace_from_outputs(outs: list[Word], depth: int, base: int) -> TraceTable:
    levels: list[set[Word]] = [set() for _ in range(depth + 1)]
    for o in outs:
        o = o[:depth]
        for p in prefixes(o):
            levels[len(p)].add(p)
    levels[0].add(())
    return TraceTable(tuple(frozenset(s) for s in levels), LevelBound("pow", base))


def _descendants_map(tree: FiniteTree) -> dict[Word, list[Word]]:
    """Node -> its subtree in shortest-then-lex order, computed bottom-up."""
    cm = tree.child_map()
    desc: dict[Word, list[Word]] = {}
    for w in sorted(tree.nodes, key=word_key, reverse=True):
        bucket = [w]
        for i in cm.get(w, ()):
            bucket.extend(desc[w + (i,)])
        desc[w] = bucket
    for w, bucket in desc.items():
        bucket.sort(key=word_key)
    return desc


def _case_c(
    meter: FuelMeter, k: int, stem: Word, tree: FiniteTree, depth: int
) -> Optional[tuple[FiniteTree, TraceTable]]:
    """Simultaneous splitting: rebuild the condition so sibling subtrees
    carry pairwise distinct output prefixes, collecting those prefixes
    into a trace bounded by (k+1)^n."""
    b = k + 1
    cm = tree.child_map()
    desc = _descendants_map(tree)
    conv_cache: dict[Word, Word] = {}

    def conv(w: Word) -> Word:
        if w not in conv_cache:
            conv_cache[w] = meter.converged_prefix(w, depth)
        return conv_cache[w]

    t_map: dict[Word, Word] = {(): stem}
    u_map: dict[Word, Word] = {(): ()}
    level: list[Word] = [()]
    while True:
        additions: dict[Word, tuple[Word, Word]] = {}
        ok = True
        for sigma in level:
            # the working tree is full above the stem, so the first node
            # with a complete set of b children is the split to use
            q = None
            for cand in desc[t_map[sigma]]:
                if len(cm.get(cand, ())) == b:
                    q = cand
                    break
            if q is None:
                ok = False
                break
            assigned = _assign_distinct(
                conv, desc, q, tree.children_of(q), len(sigma), depth
            )
            if assigned is None:
                ok = False
                break
            for i, (v, out) in enumerate(assigned):
                additions[sigma + (i,)] = (v, out)
        if not ok or not additions:
            break
        for key, (v, out) in additions.items():
            t_map[key] = v
            u_map[key] = out
        level = sorted(additions, key=word_key)
    if len(t_map) == 1:
        return None
    deepest = max(len(s) for s in t_map)
    nodes = set()
    for s, w in t_map.items():
        if len(s) == deepest:
            nodes.update(prefixes(w + (0,) * (depth - len(w))))
    new_tree = FiniteTree.from_words(nodes, alphabet_bound=tree.alphabet_bound)
    trace = _trace_from_outputs(list(u_map.values()), depth, b)
    return new_tree, trace


def _assign_distinct(
    conv: Callable[[Word], Word],
    desc: dict[Word, list[Word]],
    q: Word,
    child_entries: tuple[int, ...],
    sigma_len: int,
    depth: int,
) -> Optional[list[tuple[Word, Word]]]:
    """For each child of q, a node above it whose output prefix at some
    common length n > sigma_len differs from all the siblings' prefixes."""
    per_child = [desc[q + (i,)] for i in child_entries]
    for n in range(sigma_len + 1, depth + 1):
        viable = [
            [(v, conv(v)[:n]) for v in cands if len(conv(v)) >= n]
            for cands in per_child
        ]
        if any(not v for v in viable):
            continue
        chosen = _pick_distinct(viable, [])
        if chosen is not None:
            return chosen
    return None


def _pick_distinct(
    viable: list[list[tuple[Word, Word]]], acc: list[tuple[Word, Word]]
) -> Optional[list[tuple[Word, Word]]]:
    if len(acc) == len(viable):
        return acc
    used = {o for _, o in acc}
    for v, o in viable[len(acc)]:
        if o in used:
            continue
        res = _pick_distinct(viable, acc + [(v, o)])
        if res is not None:
            return res
    return None


def diagonalize_surviving(
    k: int,
    adversaries: AdversaryFamily,
    stages: int,
    depth: int,
    fuel: int,
) -> RunRecord:
    if k < 2:
        raise ValueError("k must be >= 2")
    b = k + 1
    query = depth + stages + 32
    stem: Word = ()
    tree = FiniteTree.full(b, depth)
    stage_log: list[dict] = []
    certificates: list[dict] = []
    traces: list[tuple[int, TraceTable]] = []
    status = "complete"

    for s in range(stages):
        idx = s // 2
        if s % 2 == 0:
            if idx >= len(adversaries.staged_trees):
                stage_log.append({"stage": s, "requirement": None, "case": "skip"})
                continue
            adv = adversaries.staged_trees[idx]
            new_stem, tree, log, cert = _tree_stage(adv, k, stem, tree, query)
            stage_log.append({"stage": s, "requirement": f"R{idx}", **log})
            if cert is None:
                status = "incomplete"
                break
            if new_stem is not None:
                stem = new_stem
            certificates.append(cert)
            continue
        if idx >= len(adversaries.functionals):
            stage_log.append({"stage": s, "requirement": None, "case": "skip"})
            continue
        fn = adversaries.functionals[idx]
        meter = FuelMeter(fn, fuel)
        hit = _case_a(meter, stem, tree, depth)
        if hit is not None:
            node, n = hit
            stem = node
            tree = subtree_above(tree, stem)
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
                {"stage": s, "requirement": f"P{idx}", "case": "A",
                 "fuel_spent": meter.calls}
            )
            continue
        tau = _case_b(meter, k, stem, tree, depth)
        if tau is not None:
            stem = tau
            tree = subtree_above(tree, stem)
            outs = [
                meter.converged_prefix(L, depth)
                for L in tree.leaves()
                if is_prefix(stem, L)
            ]
            trace = _trace_from_outputs(outs, depth, b)
            traces.append((fn.id, trace))
            certificates.append(
                {
                    "kind": "trace",
                    "functional": fn.id,
                    "case": "B",
                    "trace_index": len(traces) - 1,
                    "fuel": fuel,
                }
            )
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "case": "B",
                 "fuel_spent": meter.calls}
            )
            continue
        built = _case_c(meter, k, stem, tree, depth)
        if built is None:
            status = "incomplete"
            stage_log.append(
                {"stage": s, "requirement": f"P{idx}", "case": "stuck",
                 "fuel_spent": meter.calls}
            )
            break
        tree, trace = built
        traces.append((fn.id, trace))
        certificates.append(
            {
                "kind": "trace",
                "functional": fn.id,
                "case": "C",
                "trace_index": len(traces) - 1,
                "fuel": fuel,
            }
        )
        stage_log.append(
            {"stage": s, "requirement": f"P{idx}", "case": "C",
             "fuel_spent": meter.calls}
        )

    certificates.append(
        {"kind": "shape", "predicate": "kbranching", "k": b, "depth": depth}
    )
    return RunRecord(
        engine="surviving",
        parameters={
            "k": k, "depth": depth, "stages": stages, "fuel": fuel,
            "query_stage": query,
        },
        family_config=adversaries.config,
        stage_log=stage_log,
        final_stem=stem,
        final_tree=tree,
        traces=traces,
        certificates=certificates,
        status=status,
    )

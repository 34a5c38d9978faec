"""Re-checks a run record's certificates without re-running the engine.

Every check works from the record alone: the adversary family is rebuilt
from the embedded configuration, the final tree and traces are reloaded,
and each certificate is tested against them.  The digest guards the bytes;
the semantic checks guard the content.
"""

from __future__ import annotations

from typing import Optional

from ..io_formats import json_to_trace, record_digest_ok
from ..staged import AdversaryFamily, converged_prefix
from ..traces import BoundExceeded, TraceTable, goes_through, to_tree
from ..trees import (
    FiniteTree,
    TriState,
    Word,
    is_accelerating_to_depth,
    is_k_branching_to_depth,
    is_k_tree_to_depth,
    is_prefix,
)
from .common import (
    LabeledCondition,
    check_label_invariants,
    family_of_payload,
    labels_of_payload,
    schedule_prefix,
    stem_of_payload,
    tree_of_payload,
)

_ENGINES = {"surviving", "build3", "traceable", "accelerating"}


def verify_record(payload: dict) -> list[str]:
    """All defects found in the record; an empty list means it checks out."""
    defects: list[str] = []
    if not record_digest_ok(payload):
        return ["digest mismatch"]
    if payload.get("engine") not in _ENGINES:
        return [f"unknown engine {payload.get('engine')!r}"]
    try:
        family = family_of_payload(payload)
        stem = stem_of_payload(payload)
        tree = tree_of_payload(payload)
        labels = labels_of_payload(payload)
        traces = [
            (int(t["functional"]), json_to_trace(t)) for t in payload["traces"]
        ]
    except (KeyError, ValueError, TypeError, BoundExceeded) as e:
        return [f"malformed record: {e}"]
    if stem not in tree:
        defects.append(f"final stem {stem} not in final tree")
    fuel_default = int(payload["parameters"].get("fuel", 0))
    depth = int(payload["parameters"]["depth"])
    leaves = [L for L in tree.leaves() if is_prefix(stem, L) or is_prefix(L, stem)]
    for i, cert in enumerate(payload.get("certificates", [])):
        try:
            msg = _check_certificate(
                cert, family, stem, tree, leaves, traces, labels, depth, fuel_default
            )
        except (KeyError, ValueError, TypeError, IndexError) as e:
            msg = f"malformed certificate: {e}"
        if msg is not None:
            defects.append(f"certificate {i} ({cert.get('kind')}): {msg}")
    return defects


def _staged(family: AdversaryFamily, tid: int):
    for t in family.staged_trees:
        if t.id == tid:
            return t
    return None


def _functional(family: AdversaryFamily, fid: int):
    for f in family.functionals:
        if f.id == fid:
            return f
    return None


def _check_certificate(
    cert: dict,
    family: AdversaryFamily,
    stem: Word,
    tree: FiniteTree,
    leaves: list[Word],
    traces: list[tuple[int, TraceTable]],
    labels: Optional[dict[Word, int]],
    depth: int,
    fuel_default: int,
) -> Optional[str]:
    kind = cert.get("kind")
    if kind == "avoidance":
        adv = _staged(family, int(cert["tree"]))
        if adv is None:
            return f"no staged tree with id {cert['tree']}"
        witness = tuple(int(e) for e in cert["witness"])
        if not is_prefix(witness, stem):
            return f"witness {witness} is not a prefix of the final stem"
        if adv.decide(witness, int(cert["stage"])) is not TriState.OUT:
            return f"witness {witness} is not out of tree {adv.id}"
        return None
    if kind == "vacuous_tree_requirement":
        adv = _staged(family, int(cert["tree"]))
        if adv is None:
            return f"no staged tree with id {cert['tree']}"
        w = tuple(int(e) for e in cert["witness"])
        k = int(cert["k"])
        stage = int(cert["stage"])
        shown = sum(
            1
            for i in range(min(stage, adv.alphabet_bound or stage))
            if adv.decide(w + (i,), stage) is TriState.IN
        )
        if shown <= k:
            return f"node {w} shows only {shown} successors, not more than {k}"
        return None
    if kind == "presumed_divergence":
        fn = _functional(family, int(cert["functional"]))
        if fn is None:
            return f"no functional with id {cert['functional']}"
        node = tuple(int(e) for e in cert["node"])
        n = int(cert["position"])
        fuel = int(cert.get("fuel", fuel_default))
        if not (is_prefix(node, stem) or is_prefix(stem, node)):
            return f"node {node} incomparable with the stem"
        checked = [L for L in leaves if is_prefix(node, L) or is_prefix(L, node)]
        for L in checked:
            if fn.eval(L, n, fuel) is not None:
                return f"branch {L} converges at position {n}"
        return None
    if kind == "value_witness":
        fn = _functional(family, int(cert["functional"]))
        if fn is None:
            return f"no functional with id {cert['functional']}"
        node = tuple(int(e) for e in cert["node"])
        n = int(cert["position"])
        v = int(cert["value"])
        fuel = int(cert.get("fuel", fuel_default))
        if v < 3:
            return f"claimed value {v} is below 3"
        if not is_prefix(node, stem):
            return f"witness node {node} is not a stem prefix"
        if fn.eval(node, n, fuel) != v:
            return f"functional does not output {v} at {n} on {node}"
        return None
    if kind == "constant_outputs":
        fn = _functional(family, int(cert["functional"]))
        if fn is None:
            return f"no functional with id {cert['functional']}"
        fuel = int(cert.get("fuel", fuel_default))
        outs = [
            converged_prefix(fn, tuple(int(e) for e in p), depth, fuel)
            for p in cert["probes"]
        ]
        for i, a in enumerate(outs):
            for b in outs[i + 1:]:
                n = min(len(a), len(b))
                if a[:n] != b[:n]:
                    return "recorded probes disagree"
        return None
    if kind in ("trace", "two_tree_trace"):
        fid = int(cert["functional"])
        fn = _functional(family, fid)
        if fn is None:
            return f"no functional with id {fid}"
        ti = int(cert["trace_index"])
        if not (0 <= ti < len(traces)):
            return f"trace index {ti} out of range"
        owner, table = traces[ti]
        if owner != fid:
            return f"trace {ti} belongs to functional {owner}"
        fuel = int(cert.get("fuel", fuel_default))
        if kind == "two_tree_trace":
            bad = is_k_tree_to_depth(to_tree(table), 2, table.depth)
            if bad is not None:
                return f"trace is not a 2-tree: node {bad.node}"
        for L in leaves:
            o = converged_prefix(fn, L, table.depth, fuel)
            if not goes_through(o, table):
                return f"branch {L} output {o} leaves the trace"
        return None
    if kind == "schedule":
        terms = [int(t) for t in cert["terms"]]
        if terms != schedule_prefix(len(terms)):
            return f"terms {terms} do not match the task schedule"
        return None
    if kind == "labels":
        if labels is None:
            return "record carries no labels"
        try:
            cond = LabeledCondition(stem, tree, labels)
        except ValueError as e:
            return str(e)
        msg = check_label_invariants(cond)
        return msg
    if kind == "shape":
        pred = cert.get("predicate")
        d = int(cert["depth"])
        if pred == "kbranching":
            bad = is_k_branching_to_depth(tree, int(cert["k"]), d)
        elif pred == "ktree":
            bad = is_k_tree_to_depth(tree, int(cert["k"]), d)
        elif pred == "accelerating":
            bad = is_accelerating_to_depth(tree, d)
        else:
            return f"unknown predicate {pred!r}"
        if bad is not None:
            return f"node {bad.node}: {bad.required}, saw {bad.observed_child_count}"
        return None
    return f"unknown certificate kind {kind!r}"

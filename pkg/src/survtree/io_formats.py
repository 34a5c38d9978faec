"""Plain-text and JSON interchange for trees, traces, families and run records.

Tree files are a one-line header followed by one node per line (entries
separated by spaces, the empty line after the header being the root),
sorted shortest-first then lexicographically.  Run records carry a sha256
digest of their canonical JSON payload so byte-level tampering is cheap to
detect.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Iterable, TextIO

from .traces import LevelBound, TraceTable
from .trees import FiniteTree, Word, word_key


class FormatError(ValueError):
    pass


def _word_line(w: Word) -> str:
    return " ".join(str(e) for e in w)


def _parse_word(line: str, lineno: int) -> Word:
    if line == "":
        return ()
    try:
        return tuple(int(tok) for tok in line.split())
    except ValueError:
        raise FormatError(f"line {lineno}: not a word of naturals: {line!r}")


def dump_tree(t: FiniteTree, fp: TextIO) -> None:
    b = "-" if t.alphabet_bound is None else str(t.alphabet_bound)
    fp.write(f"tree b={b} d={t.depth}\n")
    for w in t.sorted_nodes():
        fp.write(_word_line(w) + "\n")


def load_tree(fp: TextIO) -> FiniteTree:
    header = fp.readline().rstrip("\n")
    parts = header.split()
    if len(parts) != 3 or parts[0] != "tree":
        raise FormatError(f"line 1: bad tree header: {header!r}")
    fields = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
    if set(fields) != {"b", "d"}:
        raise FormatError(f"line 1: bad tree header: {header!r}")
    bound = None if fields["b"] == "-" else int(fields["b"])
    words = []
    for i, raw in enumerate(fp.read().splitlines(), start=2):
        words.append(_parse_word(raw, i))
    if not words:
        raise FormatError("tree file has no nodes")
    return FiniteTree.from_words(words, alphabet_bound=bound)


def dump_trace(tr: TraceTable, fp: TextIO) -> None:
    fp.write(f"trace bound=pow {tr.bound.base} d={tr.depth}\n")
    all_words = sorted(tr.words(), key=word_key)
    for w in all_words:
        fp.write(_word_line(w) + "\n")


def load_trace(fp: TextIO) -> TraceTable:
    header = fp.readline().rstrip("\n")
    parts = header.split()
    if len(parts) != 4 or parts[0] != "trace" or parts[1] != "bound=pow":
        raise FormatError(f"line 1: bad trace header: {header!r}")
    base = int(parts[2])
    if not parts[3].startswith("d="):
        raise FormatError(f"line 1: bad trace header: {header!r}")
    depth = int(parts[3][2:])
    words = []
    for i, raw in enumerate(fp.read().splitlines(), start=2):
        words.append(_parse_word(raw, i))
    levels = tuple(
        frozenset(w for w in words if len(w) == n) for n in range(depth + 1)
    )
    return TraceTable(levels, LevelBound("pow", base))


def tree_to_dot(t: FiniteTree, name: str = "tree") -> str:
    """Graphviz rendering with splitting nodes drawn doubled."""
    cm = t.child_map()
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    ident = {w: f"n{i}" for i, w in enumerate(t.sorted_nodes())}
    for w in t.sorted_nodes():
        label = "()" if not w else ".".join(map(str, w))
        shape = "doublecircle" if len(cm.get(w, ())) > 1 else "circle"
        lines.append(f'  {ident[w]} [label="{label}" shape={shape}];')
    for w in t.sorted_nodes():
        for i in cm.get(w, ()):
            lines.append(f'  {ident[w]} -> {ident[w + (i,)]} [label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Run records.


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def payload_digest(payload: dict) -> str:
    body = {k: v for k, v in payload.items() if k != "digest"}
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


def dump_record(payload: dict, fp: TextIO) -> None:
    payload = dict(payload)
    payload["digest"] = payload_digest(payload)
    json.dump(payload, fp, sort_keys=True, indent=2)
    fp.write("\n")


def load_record(fp: TextIO) -> dict:
    try:
        payload = json.load(fp)
    except json.JSONDecodeError as e:
        raise FormatError(f"record is not valid JSON: {e}")
    if not isinstance(payload, dict):
        raise FormatError("record is not a JSON object")
    return payload


def record_digest_ok(payload: dict) -> bool:
    return payload.get("digest") == payload_digest(payload)


# JSON-friendly encodings of words and trees used inside records.


def words_to_json(words: Iterable[Word]) -> list[list[int]]:
    return [list(w) for w in sorted(words, key=word_key)]


def json_to_words(data: Any) -> list[Word]:
    return [tuple(int(e) for e in w) for w in data]


def tree_to_json(t: FiniteTree) -> dict:
    return {
        "alphabet_bound": t.alphabet_bound,
        "nodes": words_to_json(t.nodes),
    }


def json_to_tree(data: dict) -> FiniteTree:
    return FiniteTree.from_words(
        json_to_words(data["nodes"]), alphabet_bound=data.get("alphabet_bound")
    )


def trace_to_json(tr: TraceTable) -> dict:
    return {
        "bound": {"kind": tr.bound.kind, "base": tr.bound.base},
        "depth": tr.depth,
        "words": words_to_json(tr.words()),
    }


def json_to_trace(data: dict) -> TraceTable:
    depth = int(data["depth"])
    words = json_to_words(data["words"])
    levels = tuple(
        frozenset(w for w in words if len(w) == n) for n in range(depth + 1)
    )
    return TraceTable(levels, LevelBound(data["bound"]["kind"], int(data["bound"]["base"])))

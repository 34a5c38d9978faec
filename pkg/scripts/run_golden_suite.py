#!/usr/bin/env python3
"""Run every engine on the standard family over a fixed parameter grid,
write the records, and re-verify each one.

Usage: run_golden_suite.py [OUTPUT_DIR]   (default: ./golden)
"""

from __future__ import annotations

import sys
from pathlib import Path

from survtree.engine import (
    accelerating_force,
    build_3tree,
    diagonalize_surviving,
    initial_condition,
    traceable_prune,
    verify_record,
)
from survtree.engine.common import RunRecord
from survtree.io_formats import dump_record
from survtree.staged import standard_library


def build3_record(family, depth, stages):
    tree, path = build_3tree(family, depth, stages)
    return RunRecord(
        engine="build3",
        parameters={"depth": depth, "stages": stages},
        family_config=family.config,
        stage_log=[],
        final_stem=path,
        final_tree=tree,
        traces=[],
        certificates=[
            {"kind": "shape", "predicate": "ktree", "k": 3, "depth": depth}
        ],
        status="complete",
    )


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("golden")
    out_dir.mkdir(parents=True, exist_ok=True)
    lib = standard_library()
    grid = [
        ("surviving-d6", diagonalize_surviving(2, lib, 8, 6, 4000)),
        ("surviving-d8", diagonalize_surviving(2, lib, 14, 8, 10000)),
        ("build3-d8", build3_record(lib, 8, 24)),
        ("build3-d12", build3_record(lib, 12, 36)),
        (
            "traceable-d6",
            traceable_prune(initial_condition(lib, 6, 20), lib, 4, 6, 4000),
        ),
        (
            "traceable-d8",
            traceable_prune(initial_condition(lib, 8, 24), lib, 4, 8, 10000),
        ),
        ("accelerating-d6", accelerating_force(lib, 6, 6, 4000)),
        ("accelerating-d8", accelerating_force(lib, 8, 8, 10000)),
    ]
    failed = 0
    for name, record in grid:
        payload = record.to_payload()
        path = out_dir / f"{name}.json"
        with open(path, "w") as fp:
            dump_record(payload, fp)
        defects = verify_record(payload)
        status = "ok" if not defects else f"DEFECTS: {defects}"
        print(f"{name}: {record.status}, {status} -> {path}")
        failed += bool(defects)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

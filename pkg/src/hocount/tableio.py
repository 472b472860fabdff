"""Deterministic CSV/JSON table output with an embedded parameter manifest.

Every file starts from a manifest (the full input parameter set plus the
master seed), so re-running the manifest regenerates the file byte for byte.
"""

from __future__ import annotations

import json
import os
from typing import Mapping, Sequence

FORMATS = ("csv", "json")


def _cell(value) -> str:
    if isinstance(value, float):  # incl. numpy float64: repr of the plain float
        return repr(float(value))
    return str(value)


def render_csv(manifest: Mapping, columns: Mapping[str, Sequence],
               extra_comments: Sequence[str] = ()) -> str:
    lines = ["# manifest: " + json.dumps(manifest, sort_keys=True, separators=(",", ":"))]
    lines.extend(f"# {c}" for c in extra_comments)
    names = list(columns)
    lines.append(",".join(names))
    length = len(columns[names[0]]) if names else 0
    for name in names:
        if len(columns[name]) != length:
            raise ValueError("ragged columns")
    for i in range(length):
        lines.append(",".join(_cell(columns[name][i]) for name in names))
    return "\n".join(lines) + "\n"


def render_json(manifest: Mapping, columns: Mapping[str, Sequence],
                extra_comments: Sequence[str] = ()) -> str:
    doc = {
        "manifest": dict(manifest),
        "notes": list(extra_comments),
        "columns": {k: list(v) for k, v in columns.items()},
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def render(manifest, columns, fmt: str, extra_comments=()) -> str:
    if fmt == "csv":
        return render_csv(manifest, columns, extra_comments)
    if fmt == "json":
        return render_json(manifest, columns, extra_comments)
    raise ValueError(f"unknown format {fmt!r}")


def write_atomic(path: str, text: str):
    """Write via a temp file and rename, so failures never leave partial output."""
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def read_manifest(path: str) -> dict:
    """Recover the manifest from a csv or json table file."""
    with open(path) as fh:
        first = fh.readline()
        if first.startswith("# manifest: "):
            return json.loads(first[len("# manifest: "):])
        fh.seek(0)
        doc = json.load(fh)
        return doc["manifest"]

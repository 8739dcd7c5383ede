"""Edge-list and metadata serialization; all writes are atomic (temp + rename)."""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile

import numpy as np

from .errors import EdgeListParseError
from .sampler import Graph

SCHEMA_VERSION = 1
EDGE_FORMAT_TAG = "hscm v1"


def atomic_write_text(path, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_edge_list(path, graph: Graph, seed: int):
    """Self-describing text edge list: '# hscm v1 n=<n> seed=<seed>' then 'u v' rows."""
    buf = _io.StringIO()
    buf.write(f"# {EDGE_FORMAT_TAG} n={graph.n} seed={seed}\n")
    np.savetxt(buf, graph.edges, fmt="%d %d")
    atomic_write_text(path, buf.getvalue())


def read_edge_list(path) -> Graph:
    """Read an edge list written by write_edge_list (header required for n)."""
    n = None
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                if EDGE_FORMAT_TAG in text:
                    for token in text.split():
                        if token.startswith("n="):
                            n = int(token[2:])
                continue
            parts = text.split()
            if len(parts) != 2:
                raise EdgeListParseError(path, lineno, "expected 'u v'")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise EdgeListParseError(path, lineno, "non-integer node id") from None
    if n is None:
        raise EdgeListParseError(path, 0, f"missing '# {EDGE_FORMAT_TAG}' header")
    arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    return Graph(n=n, edges=arr).validate()


def write_json(path, payload: dict):
    doc = dict(payload)
    doc.setdefault("schema_version", SCHEMA_VERSION)
    atomic_write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_csv(path, header, rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    atomic_write_text(path, buf.getvalue())

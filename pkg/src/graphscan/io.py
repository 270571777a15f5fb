"""File formats, manifests, and deterministic serialization.

Edge file: one edge per line, two whitespace-separated node ids (arbitrary
strings); '#' starts a comment. Node file: CSV with header ``node,c`` or
``node,c,b``; the node file's row order defines the dense index mapping.
Truth/detected files: one node id per line, '#' comments allowed.

JSON output is written by a small canonical serializer: floats carry 17
significant digits, keys keep insertion order, so identical runs produce
identical bytes.
"""
from __future__ import annotations

import hashlib
from datetime import datetime, timezone

import numpy as np

from .errors import DimensionError, InputError
from .graphs import Graph


def format_float(x: float) -> str:
    if not np.isfinite(x):
        raise InputError(f"cannot serialize non-finite float {x}")
    return format(float(x), ".17g")


def dumps_17g(obj) -> str:
    """Canonical JSON with 17-significant-digit floats."""
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        inner = ", ".join(dumps_17g(v) for v in obj)
        return f"[{inner}]"
    if isinstance(obj, dict):
        items = ", ".join(f"{dumps_17g(str(k))}: {dumps_17g(v)}" for k, v in obj.items())
        return "{" + items + "}"
    raise InputError(f"cannot serialize value of type {type(obj).__name__}")


def sha256_of(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def make_manifest(command: str, params: dict, input_paths: list,
                  output_paths: list, **extra) -> dict:
    manifest = {
        "command": command,
        "params": dict(params),
        "input_sha256": {p: sha256_of(p) for p in input_paths},
        "outputs": list(output_paths),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    manifest.update(extra)
    return manifest


def _strip_comment(line: str) -> str:
    if "#" in line:
        line = line[:line.index("#")]
    return line.strip()


def read_edge_file(path: str):
    """List of (id_u, id_v) string pairs."""
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = _strip_comment(raw)
            if not line:
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise InputError(
                    f"{path}:{lineno}: expected two node ids, got {len(tokens)} tokens")
            pairs.append((tokens[0], tokens[1]))
    return pairs


def read_node_file(path: str):
    """Returns (ids, counts, baselines-or-None); row order defines indices."""
    ids = []
    seen = set()
    counts = []
    baselines = []
    has_baseline = None
    with open(path, "r", encoding="utf-8") as fh:
        header = None
        for lineno, raw in enumerate(fh, start=1):
            line = _strip_comment(raw)
            if not line:
                continue
            cells = [c.strip() for c in line.split(",")]
            if header is None:
                header = cells
                if header not in (["node", "c"], ["node", "c", "b"]):
                    raise InputError(
                        f"{path}:{lineno}: header must be 'node,c' or 'node,c,b'")
                has_baseline = len(header) == 3
                continue
            expected = 3 if has_baseline else 2
            if len(cells) != expected:
                raise InputError(
                    f"{path}:{lineno}: expected {expected} columns, got {len(cells)}")
            node_id = cells[0]
            if node_id in seen:
                raise InputError(f"{path}:{lineno}: duplicate node id {node_id!r}")
            seen.add(node_id)
            try:
                counts.append(float(cells[1]))
                if has_baseline:
                    baselines.append(float(cells[2]))
            except ValueError as err:
                raise InputError(f"{path}:{lineno}: bad numeric value ({err})") from err
            ids.append(node_id)
    if header is None:
        raise InputError(f"{path}: empty node file")
    return (ids, np.asarray(counts, dtype=np.float64),
            np.asarray(baselines, dtype=np.float64) if has_baseline else None)


def read_id_file(path: str):
    """One node id per line."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = _strip_comment(raw)
            if line:
                out.append(line)
    return out


def load_instance(graph_path: str, signal_path: str):
    """Parse graph + signal files into (Graph, ids, counts, baselines).

    The node file's row order defines the dense node indices; edges that
    reference unknown ids are a dimension mismatch.
    """
    ids, counts, baselines = read_node_file(signal_path)
    index = {node_id: i for i, node_id in enumerate(ids)}
    edges = []
    for su, sv in read_edge_file(graph_path):
        if su not in index or sv not in index:
            missing = su if su not in index else sv
            raise DimensionError(
                f"edge file references node {missing!r} absent from {signal_path}")
        edges.append((index[su], index[sv]))
    return Graph(len(ids), edges), ids, counts, baselines


def write_edge_file(path: str, ids: list, graph: Graph):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# edge list: two node ids per line\n")
        for u, v in graph.edges:
            fh.write(f"{ids[u]} {ids[v]}\n")


def write_node_file(path: str, ids: list, counts: np.ndarray,
                    baselines: np.ndarray | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if baselines is None:
            fh.write("node,c\n")
            for i, node_id in enumerate(ids):
                fh.write(f"{node_id},{format_float(counts[i])}\n")
        else:
            fh.write("node,c,b\n")
            for i, node_id in enumerate(ids):
                fh.write(f"{node_id},{format_float(counts[i])},"
                         f"{format_float(baselines[i])}\n")


def write_id_file(path: str, ids_subset: list):
    with open(path, "w", encoding="utf-8") as fh:
        for node_id in ids_subset:
            fh.write(f"{node_id}\n")


def write_csv(path: str, rows: list, columns: list):
    """CSV with canonical float formatting (criterion: reproducible bytes)."""
    def cell(v):
        if isinstance(v, (float, np.floating)):
            return format_float(float(v))
        return str(v)

    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(cell(row[c]) for c in columns) + "\n")


def rows_to_csv_text(rows: list, columns: list) -> str:
    def cell(v):
        if isinstance(v, (float, np.floating)):
            return format_float(float(v))
        return str(v)

    lines = [",".join(columns)]
    lines.extend(",".join(cell(row[c]) for c in columns) for row in rows)
    return "\n".join(lines) + "\n"

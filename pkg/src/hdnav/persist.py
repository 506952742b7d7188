"""Versioned flat-file persistence for trained models.

Layout: an ASCII header (magic line, then one ``key=value`` per line)
terminated by a blank line, followed by the matrix blocks as raw
row-major float64 bytes.  The pseudo-inverse is never stored; it is
recomputed on load.  Round-trips are bit-exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .cml import Cml, CmlGraph, _pinv
from .grid import GridCml

MAGIC = "HDNAV-MODEL"
FORMAT_VERSION = 1


def _block(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype=np.float64).tobytes()


def save_cml(cml: Cml, path: str | Path) -> None:
    graph = cml.graph
    header = [
        f"{MAGIC} {FORMAT_VERSION} object",
        f"d={cml.d}",
        f"n={graph.n}",
        f"e={graph.e}",
        "labels=" + " ".join(graph.node_labels),
        "edges=" + " ".join(f"{s}>{t}" for s, t in graph.directed_edges),
        "weights=" + " ".join(repr(w) for w in graph.edge_weights),
    ]
    with open(path, "wb") as fh:
        fh.write(("\n".join(header) + "\n\n").encode("ascii"))
        fh.write(_block(cml.S))
        fh.write(_block(cml.A))
        fh.write(_block(cml.G))


def save_grid_cml(grid_cml: GridCml, path: str | Path) -> None:
    header = [
        f"{MAGIC} {FORMAT_VERSION} grid",
        f"d={grid_cml.d}",
        f"width={grid_cml.width}",
        f"height={grid_cml.height}",
    ]
    with open(path, "wb") as fh:
        fh.write(("\n".join(header) + "\n\n").encode("ascii"))
        fh.write(_block(grid_cml.P))
        fh.write(_block(grid_cml.A4))


def _read_header(fh) -> tuple[str, dict[str, str]]:
    first = fh.readline().decode("ascii").strip()
    parts = first.split()
    if len(parts) != 3 or parts[0] != MAGIC:
        raise ValueError(f"not a model file (header {first!r})")
    if int(parts[1]) != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {parts[1]}")
    kind = parts[2]
    fields: dict[str, str] = {}
    while True:
        line = fh.readline().decode("ascii").rstrip("\n")
        if line == "":
            return kind, fields
        if "=" not in line:
            raise ValueError(f"bad header line {line!r}")
        key, value = line.split("=", 1)
        fields[key] = value


def _read_block(fh, shape: tuple[int, int]) -> np.ndarray:
    count = shape[0] * shape[1]
    data = fh.read(count * 8)
    if len(data) != count * 8:
        raise ValueError("model file truncated")
    return np.frombuffer(data, dtype=np.float64).reshape(shape).copy()


def load_model(path: str | Path) -> Cml | GridCml:
    with open(path, "rb") as fh:
        kind, fields = _read_header(fh)
        if kind == "object":
            d, n, e = int(fields["d"]), int(fields["n"]), int(fields["e"])
            labels = tuple(fields["labels"].split(" "))
            if len(labels) != n:
                raise ValueError(f"expected {n} labels, got {len(labels)}")
            edges = tuple(
                (int(src), int(dst))
                for src, dst in (item.split(">") for item in fields["edges"].split(" "))
            )
            weights = tuple(float(w) for w in fields["weights"].split(" "))
            graph = CmlGraph(node_labels=labels, directed_edges=edges, edge_weights=weights)
            S = _read_block(fh, (d, n))
            A = _read_block(fh, (d, e))
            G = _read_block(fh, (e, n))
            return Cml(S=S, A=A, G=G, graph=graph, A_dagger=_pinv(A))
        if kind == "grid":
            d = int(fields["d"])
            width, height = int(fields["width"]), int(fields["height"])
            P = _read_block(fh, (d, width * height))
            A4 = _read_block(fh, (d, 4))
            return GridCml(P=P, A4=A4, width=width, height=height)
        raise ValueError(f"unknown model kind {kind!r}")

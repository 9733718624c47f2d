"""Readers and writers for graphs, labels, embeddings, fitted parameters and
selection outputs.

Edge lists are whitespace separated: a header line ``n <count>`` followed by
one ``u v`` line per edge (0-indexed, ``u < v``). Floats are written with 17
significant digits so files round-trip exactly.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ParameterError
from .gmm import ConstrainedGmmParams

log = logging.getLogger(__name__)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


# -- edge lists -----------------------------------------------------------------------


def write_edge_list(path, A) -> None:
    A = np.asarray(A)
    n = A.shape[0]
    iu, ju = np.nonzero(np.triu(A, 1))
    with open(path, "w") as fh:
        fh.write(f"n {n}\n")
        for u, v in zip(iu.tolist(), ju.tolist()):
            fh.write(f"{u} {v}\n")


@dataclass
class EdgeList:
    n: int
    edges: np.ndarray  # (m, 2), u < v, sorted, unique
    warnings: list


def read_edge_list(path) -> EdgeList:
    """Parse an edge list; duplicates and self-loops are dropped with a warning."""
    path = Path(path)
    n = None
    pairs = []
    warnings = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "n":
                if n is not None or len(parts) != 2:
                    raise ParameterError(f"{path}:{lineno}: malformed header line {line!r}")
                try:
                    n = int(parts[1])
                except ValueError:
                    raise ParameterError(f"{path}:{lineno}: malformed vertex count {parts[1]!r}") from None
                if n < 0:
                    raise ParameterError(f"{path}:{lineno}: negative vertex count")
                continue
            if len(parts) != 2:
                raise ParameterError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParameterError(f"{path}:{lineno}: non-integer vertex id in {line!r}") from None
            if u < 0 or v < 0:
                raise ParameterError(f"{path}:{lineno}: negative vertex id")
            if u == v:
                warnings.append(f"{path}:{lineno}: self-loop on vertex {u} dropped")
                continue
            pairs.append((min(u, v), max(u, v), lineno))
    if n is None:
        raise ParameterError(f"{path}: missing 'n <count>' header")
    seen = set()
    edges = []
    for u, v, lineno in pairs:
        if v >= n:
            raise ParameterError(f"{path}:{lineno}: vertex id {v} out of range for n={n}")
        if (u, v) in seen:
            warnings.append(f"{path}:{lineno}: duplicate edge ({u}, {v}) dropped")
            continue
        seen.add((u, v))
        edges.append((u, v))
    for w in warnings:
        log.warning(w)
    arr = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
    return EdgeList(n=n, edges=arr, warnings=warnings)


def edges_to_adjacency(n: int, edges) -> np.ndarray:
    A = np.zeros((n, n))
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    A[edges[:, 0], edges[:, 1]] = 1.0
    A[edges[:, 1], edges[:, 0]] = 1.0
    return A


def components(n: int, edges) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    g = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    _, comp = connected_components(g, directed=False)
    return comp


def largest_component(n: int, edges) -> tuple[np.ndarray, np.ndarray]:
    """Vertices of the largest connected component (ties: the one holding the smallest id)
    and the edges among them relabelled to ``0..n'-1``.

    Returns ``(old_ids, new_edges)``; ``old_ids[new] = old``.
    """
    comp = components(n, edges)
    sizes = np.bincount(comp)
    keep = np.flatnonzero(comp == int(np.argmax(sizes)))
    remap = np.full(n, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    inside = (remap[edges[:, 0]] >= 0) & (remap[edges[:, 1]] >= 0)
    return keep, remap[edges[inside]]


# -- labels and CSV tables -------------------------------------------------------------


def write_labels(path, labels, header=("vertex", "label")) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, lab in enumerate(np.asarray(labels).tolist()):
            w.writerow([i, lab])


def read_labels(path) -> dict[str, np.ndarray]:
    """Read a ``vertex,<truth1>,<truth2>,...`` CSV into one array per truth column.

    Vertices must be listed as ``0..n-1`` in order; label values are kept as strings.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0].strip() != "vertex" or len(rows[0]) < 2:
        raise ParameterError(f"{path}: header must be 'vertex,<truth>[,...]'")
    header = [h.strip() for h in rows[0]]
    cols = {h: [] for h in header[1:]}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParameterError(f"{path}:{lineno}: expected {len(header)} fields")
        try:
            v = int(row[0])
        except ValueError:
            raise ParameterError(f"{path}:{lineno}: bad vertex id {row[0]!r}") from None
        if v != lineno - 2:
            raise ParameterError(f"{path}:{lineno}: vertices must be listed 0..n-1 in order")
        for h, val in zip(header[1:], row[1:]):
            cols[h].append(val.strip())
    return {h: np.array(v) for h, v in cols.items()}


def write_csv(path, header, rows, append: bool = False) -> None:
    path = Path(path)
    new = not (append and path.exists())
    with open(path, "a" if append else "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if new:
            w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])


def write_embedding(path, Z) -> None:
    Z = np.asarray(Z, dtype=float)
    with open(path, "w") as fh:
        fh.write(",".join(f"z{j + 1}" for j in range(Z.shape[1])) + "\n")
        for row in Z:
            fh.write(",".join(fmt(x) for x in row) + "\n")


def read_embedding(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


# -- fitted parameters -----------------------------------------------------------------


def _json17(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json17(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json17(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    x = float(obj)
    if not math.isfinite(x):
        return json.dumps(str(x))
    return fmt(x)


def params_to_dict(p: ConstrainedGmmParams) -> dict:
    return {
        "d": p.d,
        "K": p.K,
        "D": p.D,
        "weights": p.weights.tolist(),
        "means": p.means.tolist(),
        "covariances": p.covariances.tolist(),
        "redundant_var": p.redundant_var.tolist(),
    }


def params_from_dict(data: dict) -> ConstrainedGmmParams:
    return ConstrainedGmmParams(
        weights=data["weights"],
        means=data["means"],
        covariances=data["covariances"],
        redundant_var=data.get("redundant_var", []),
        D=data["D"],
    )


def write_params(path, p: ConstrainedGmmParams, extra: dict | None = None) -> None:
    data = params_to_dict(p)
    if extra:
        data.update(extra)
    Path(path).write_text(_json17(data) + "\n")


def read_params(path) -> ConstrainedGmmParams:
    return params_from_dict(json.loads(Path(path).read_text()))


def dumps_json(obj) -> str:
    return _json17(obj)


# -- selection results -----------------------------------------------------------------


def write_selection(outdir, result, prefix: str = "") -> None:
    """``labels.csv``, ``grid.csv`` and ``summary.csv`` for one :class:`SelectionResult`."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_labels(outdir / f"{prefix}labels.csv", result.labels)
    rows = []
    if result.grid is not None:
        for (d, K), fit in sorted(result.grid.fits.items()):
            rows.append([d, K, fit.bic, fit.loglik, int(fit.converged)])
    write_csv(outdir / f"{prefix}grid.csv", ["d", "K", "bic", "loglik", "converged"], rows)
    write_csv(outdir / f"{prefix}summary.csv", ["method", "d_hat", "K_hat", "runtime_ms"],
              [[result.method, result.d_hat, result.K_hat, round(result.runtime_ms, 3)]])

"""Network spec documents, deterministic JSON reports and CSV tables."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .model import InvalidNetworkError, SpinNetwork, build_chain, build_geometric_network, CouplingKind


def network_from_spec(spec: dict) -> SpinNetwork:
    """Build a network from a spec document.

    Keys: ``kind`` (``"xx"`` or ``"heisenberg"``), ``n`` and exactly one of
    ``uniform_j`` (uniform nearest-neighbour chain), ``couplings`` (row-major,
    ``n*n`` numbers or nested rows) or ``positions`` (``[[x, y], ...]``, with
    optional ``exponent``, default 3).
    """
    if not isinstance(spec, dict):
        raise InvalidNetworkError("network spec must be a JSON object")
    kind = CouplingKind.parse(spec.get("kind", ""))
    sources = [k for k in ("uniform_j", "couplings", "positions") if k in spec]
    if len(sources) != 1:
        raise InvalidNetworkError(
            f"exactly one of uniform_j, couplings, positions is required; got {sources or 'none'}"
        )
    n = spec.get("n")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 1):
        raise InvalidNetworkError(f"n must be a positive integer, got {n!r}")
    src = sources[0]
    if src == "uniform_j":
        if n is None:
            raise InvalidNetworkError("uniform_j requires n")
        return build_chain(n, kind, float(spec["uniform_j"]))
    if src == "positions":
        pos = np.asarray(spec["positions"], dtype=float)
        if n is not None and len(pos) != n:
            raise InvalidNetworkError(f"n = {n} but {len(pos)} positions given")
        return build_geometric_network(pos, kind, float(spec.get("exponent", 3.0)))
    J = np.asarray(spec["couplings"], dtype=float)
    if n is None:
        n = int(round(math.sqrt(J.size)))
    if J.size != n * n:
        raise InvalidNetworkError(f"couplings has {J.size} entries, expected n*n = {n * n}")
    J = J.reshape(n, n)
    for i, j in zip(*np.triu_indices(n, 1)):
        if abs(J[i, j] - J[j, i]) > 1e-12:
            raise InvalidNetworkError(
                f"couplings not symmetric at ({i + 1}, {j + 1}): {J[i, j]!r} != {J[j, i]!r}"
            )
    J = 0.5 * (J + J.T)
    return SpinNetwork(kind, J)


def load_network_spec(path) -> SpinNetwork:
    try:
        spec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidNetworkError(f"{path}: not valid JSON ({exc})") from exc
    return network_from_spec(spec)


def fmt_float(x: float) -> str:
    """17 significant digits; round-trips every double exactly."""
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def dumps(obj, indent: int = 2) -> str:
    """JSON text with fixed float formatting, so equal inputs give identical bytes."""
    return _dump(obj, 0, indent) + "\n"


def _dump(obj, level, indent):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, level + 1, indent)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_dump(v, level + 1, indent) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, level + 1, indent) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v)).strip('"')
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def write_matrix_csv(path, M):
    write_csv(path, None, np.asarray(M, dtype=float))


def read_matrix_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh)], dtype=float)

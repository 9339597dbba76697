"""File formats: graphs (JSON or CSV edge list), phase states, and CSV/JSON result writers."""
from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .errors import GraphParseError, InvalidGraph
from .graph import WeightedGraph


def fmt(v) -> str:
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v) + 0.0, ".17g")


def parse_graph_text(text: str, fmt_hint: str | None = None) -> WeightedGraph:
    stripped = text.lstrip()
    kind = fmt_hint or ("json" if stripped.startswith("{") else "csv")
    try:
        if kind == "json":
            obj = json.loads(text)
            n = int(obj["n"])
            edges = tuple((int(e["i"]), int(e["j"]), float(e.get("w", 1.0))) for e in obj["edges"])
        else:
            rows = [r for r in csv.reader(_io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
            if not rows or [h.strip() for h in rows[0]] != ["i", "j", "w"]:
                raise GraphParseError('CSV edge list needs the header "i,j,w"')
            edges = tuple((int(r[0]), int(r[1]), float(r[2])) for r in rows[1:])
            if not edges:
                raise GraphParseError("CSV edge list has no edges")
            n = 1 + max(max(i, j) for i, j, _ in edges)
    except GraphParseError:
        raise
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise GraphParseError(f"malformed {kind} graph: {exc}") from exc
    try:
        return WeightedGraph(n, edges)
    except InvalidGraph as exc:
        if type(exc) is InvalidGraph:
            raise GraphParseError(str(exc)) from exc
        raise


def load_graph(path) -> WeightedGraph:
    """Read a graph file; ``.json`` or content starting with ``{`` is JSON, anything else CSV."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc}") from exc
    hint = "json" if path.suffix.lower() == ".json" else None
    return parse_graph_text(text, hint)


def graph_to_json(g: WeightedGraph) -> str:
    return json.dumps(g.to_dict(), indent=2)


def graph_to_csv(g: WeightedGraph) -> str:
    lines = ["i,j,w"] + [f"{i},{j},{fmt(w)}" for i, j, w in g.edges]
    return "\n".join(lines) + "\n"


def parse_vector_text(text: str) -> np.ndarray:
    """JSON array, or comma/whitespace separated numbers (CSV row)."""
    text = text.strip()
    if text.startswith("["):
        vals = json.loads(text)
    else:
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        vals = [float(t) for t in ",".join(lines).replace(" ", ",").split(",") if t.strip()]
    arr = np.asarray(vals, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("expected a flat list of numbers")
    return arr


def load_phase_state(path) -> np.ndarray:
    return parse_vector_text(Path(path).read_text(encoding="utf-8"))


def phase_state_to_json(x) -> str:
    return json.dumps([float(v) for v in np.asarray(x)])


def write_csv(path, header: list[str], rows, comment: str | None = None) -> None:
    """Write rows with a leading ``# comment`` line and a header row.

    ``path`` of ``None`` or ``"-"`` writes to stdout.
    """
    out = []
    if comment is not None:
        out.append("# " + comment.replace("\n", " "))
    out.append(",".join(header))
    for row in rows:
        out.append(",".join(fmt(v) for v in row))
    text = "\n".join(out) + "\n"
    _emit(path, text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True)


def write_json(path, obj) -> None:
    _emit(path, dumps_json(obj) + "\n")


def _emit(path, text: str) -> None:
    if path is None or str(path) == "-":
        import sys

        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8")

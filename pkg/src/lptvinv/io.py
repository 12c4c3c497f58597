"""JSON system files, JSON analysis reports and CSV trace files.

System document layout::

    {
      "name": "example",
      "period": 2,
      "dims": {"n": 1, "m": 1, "p": 1},
      "phases": [
        {"A": [[0.3]], "B": [[1]], "C": [[1]], "D": [[2]]},
        {"A": [[-0.2]], "B": [[0.5]], "C": [[1]], "D": [[-3]]}
      ]
    }

``D`` may be left out of any phase, meaning the p x m zero matrix.
A bare number is accepted for a 1 x 1 matrix.
"""
from __future__ import annotations

import csv
import io as _io
import json
import os
from importlib import resources

import numpy as np

from .core import InverseSystem, LptvSystem
from .errors import DimensionError, ParseError

__all__ = [
    "parse_system",
    "load_example",
    "example_names",
    "serialize_system",
    "system_to_dict",
    "inverse_to_dict",
    "complex_pairs",
    "dump_json",
    "write_trace",
    "trace_to_csv",
]


def _looks_like_text(source) -> bool:
    return isinstance(source, str) and source.lstrip().startswith("{")


def _matrix(value, rows, cols, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [[value]]
    try:
        mat = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: not a numeric matrix ({exc})") from None
    if mat.ndim != 2 or mat.shape != (rows, cols):
        raise DimensionError(
            f"{where}: expected a {rows}x{cols} matrix, got shape {mat.shape}"
        )
    return mat


def parse_system(source) -> tuple:
    """Parse a system document from a path or JSON text.

    Returns ``(system, name)``.
    """
    if _looks_like_text(source):
        text = source
        origin = "<text>"
    else:
        origin = os.fspath(source)
        try:
            with open(origin, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {origin}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{origin}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{origin}: top level must be an object")
    try:
        period = doc["period"]
        dims = doc["dims"]
        n, m, p = dims["n"], dims["m"], dims["p"]
        phases = doc["phases"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{origin}: missing field {exc}") from None
    for label, value in (("period", period), ("dims.n", n), ("dims.m", m), ("dims.p", p)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ParseError(f"{origin}: {label} must be a nonnegative integer, got {value!r}")
    if period < 1:
        raise ParseError(f"{origin}: period must be at least 1")
    if not isinstance(phases, list):
        raise ParseError(f"{origin}: phases must be an array")
    if len(phases) != period:
        raise DimensionError(f"{origin}: phases has {len(phases)} entries but period is {period}")
    A, B, C, D = [], [], [], []
    for k, phase in enumerate(phases):
        if not isinstance(phase, dict):
            raise ParseError(f"{origin}: phase {k} must be an object")
        for field in ("A", "B", "C"):
            if field not in phase:
                raise ParseError(f"{origin}: phase {k} is missing {field}")
        A.append(_matrix(phase["A"], n, n, f"phase {k} field A"))
        B.append(_matrix(phase["B"], n, m, f"phase {k} field B"))
        C.append(_matrix(phase["C"], p, n, f"phase {k} field C"))
        D.append(_matrix(phase["D"], p, m, f"phase {k} field D") if "D" in phase
                 else np.zeros((p, m)))
    name = doc.get("name", os.path.splitext(os.path.basename(origin))[0])
    return LptvSystem(A, B, C, D), str(name)


def example_names() -> list:
    files = resources.files("lptvinv").joinpath("data").iterdir()
    return sorted(f.name[:-len(".json")] for f in files if f.name.endswith(".json"))


def load_example(name: str) -> LptvSystem:
    """Bundled system by name, e.g. ``"example_4_1"``."""
    res = resources.files("lptvinv").joinpath("data", f"{name}.json")
    if not res.is_file():
        raise KeyError(f"no bundled system named {name!r}; have {example_names()}")
    return parse_system(res.read_text(encoding="utf-8"))[0]


def _listify(mat):
    return np.asarray(mat, dtype=float).tolist()


def system_to_dict(sys: LptvSystem, name: str = "system") -> dict:
    return {
        "name": name,
        "period": sys.N,
        "dims": {"n": sys.n, "m": sys.m, "p": sys.p},
        "phases": [
            {"A": _listify(sys.A[k]), "B": _listify(sys.B[k]),
             "C": _listify(sys.C[k]), "D": _listify(sys.D[k])}
            for k in range(sys.N)
        ],
    }


def serialize_system(sys: LptvSystem, name: str = "system") -> str:
    return dump_json(system_to_dict(sys, name))


def inverse_to_dict(inv: InverseSystem) -> dict:
    return {
        "delay": inv.delay,
        "period": inv.N,
        "phases": [
            {"Gamma": _listify(inv.Gamma[k]), "Lambda": _listify(inv.Lambda[k]),
             "Omega": _listify(inv.Omega[k]), "Pi": _listify(inv.Pi[k])}
            for k in range(inv.N)
        ],
    }


def complex_pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


def _render(value, indent):
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, list) and any(isinstance(v, dict) for v in value):
        items = [pad + _render(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    # numeric arrays and scalars stay on one line
    return json.dumps(value)


def dump_json(doc) -> str:
    """Indented JSON with matrices and vectors kept on single lines."""
    return _render(doc, 0) + "\n"


def _fmt(value) -> str:
    return "%.17g" % value


def trace_to_csv(trace) -> str:
    """Render a trace as CSV: k, phase, then u*, y*, uhat*, err* columns.

    Series absent from the trace are left out of the header.
    """
    series = [(prefix, data) for prefix, data in
              (("u", trace.u), ("y", trace.y), ("uhat", trace.uhat), ("err", trace.error))
              if data is not None]
    header = ["k", "phase"]
    for prefix, data in series:
        header += [f"{prefix}{i}" for i in range(data.shape[1])]
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for k in range(trace.horizon):
        row = [str(k), str(k % trace.period)]
        for _, data in series:
            row += [_fmt(v) for v in data[k]]
        writer.writerow(row)
    return buf.getvalue()


def write_trace(trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(trace_to_csv(trace))

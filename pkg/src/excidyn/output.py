"""Deterministic CSV and report writers.

Numbers are written with 12 significant digits, ``.`` radix, independent of
locale. Files are written to a temporary name and renamed into place.
"""

from __future__ import annotations

import math
import os
import tempfile
from pathlib import Path

import numpy as np
import yaml

from . import __version__

SIG_DIGITS = 12


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = format(x, f".{SIG_DIGITS}g")
    return "0" if s == "-0" else s


def rounded(x):
    """Round floats (recursively through containers) to the output precision."""
    if isinstance(x, dict):
        return {k: rounded(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [rounded(v) for v in x]
    if isinstance(x, np.ndarray):
        return rounded(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(fmt(x))
    return x


def atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def header_comment(units: str) -> str:
    return f"# excidyn {__version__}; units: {units}\n"


def csv_text(columns, rows, units: str) -> str:
    lines = [header_comment(units).rstrip("\n"), ",".join(columns)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, columns, rows, units: str):
    atomic_write(path, csv_text(columns, rows, units))


def write_report(path, doc: dict, units: str):
    body = yaml.safe_dump(rounded(doc), sort_keys=False, default_flow_style=None, width=100)
    atomic_write(path, header_comment(units) + body)


def read_csv(path):
    """Read a CSV written by :func:`write_csv` into ``(columns, float array)``."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    return columns, np.array(rows, dtype=float).reshape(len(rows), len(columns))

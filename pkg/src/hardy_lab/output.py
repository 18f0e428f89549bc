"""CSV / JSON writers with fixed formatting so reruns are byte-identical."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def fmt(value) -> str:
    """12 significant digits for reals, plain text otherwise, empty for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(f"refusing to write non-finite value {v}")
        return f"{v:.12g}"
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def _default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path: Path, config: dict, results) -> Path:
    path = Path(path)
    doc = {"schema_version": SCHEMA_VERSION, "config": config, "results": results}
    text = json.dumps(doc, indent=2, default=_default, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path

"""
Deterministic JSON serialization for reports.

Keys are sorted and every float is written with 17 significant digits so
that ``loads(dumps(x)) == x`` holds bit for bit.
"""
import json
import math
from typing import Any, List

import numpy as np

INDENT = "  "


def format_float(x: float) -> str:
    """17-significant-digit form; integral floats keep a trailing ".0"."""
    if not math.isfinite(x):
        raise ValueError(f"Cannot serialize non-finite float {x!r}")
    text = format(x, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def _normalize(obj: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into plain JSON types."""
    if isinstance(obj, np.ndarray):
        return [_normalize(x) for x in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (list, tuple)):
        return [_normalize(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    return obj


def _encode(obj: Any, level: int, out: List[str]) -> None:
    pad = INDENT * level
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad + INDENT)
            _encode(item, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj)
        for i, key in enumerate(keys):
            out.append(pad + INDENT + json.dumps(key, ensure_ascii=False) + ": ")
            _encode(obj[key], level + 1, out)
            out.append(",\n" if i < len(keys) - 1 else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"Object of type {type(obj).__name__} is not serializable")


def dumps(obj: Any) -> str:
    """Serialize to deterministic, newline-terminated JSON text."""
    out: List[str] = []
    _encode(_normalize(obj), 0, out)
    out.append("\n")
    return "".join(out)


def loads(text: str) -> Any:
    return json.loads(text)

"""Deterministic report rendering: JSON, CSV, and aligned text."""

from __future__ import annotations

import json
from typing import Any


def flatten(data: dict, prefix: str = "") -> list[tuple[str, Any]]:
    rows: list[tuple[str, Any]] = []
    for key in data:
        value = data[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(flatten(value, prefix=f"{name}."))
        elif isinstance(value, (list, tuple)):
            rows.append((name, json.dumps(value)))
        else:
            rows.append((name, value))
    return rows


def render(data: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n"
    rows = flatten(_plain(data))
    if fmt == "csv":
        lines = ["name,value"]
        for name, value in rows:
            text = str(value)
            if "," in text or '"' in text:
                text = '"' + text.replace('"', '""') + '"'
            lines.append(f"{name},{text}")
        return "\n".join(lines) + "\n"
    if fmt == "text":
        width = max((len(name) for name, _ in rows), default=0)
        return "\n".join(f"{name.ljust(width)}  {_fmt_value(v)}" for name, v in rows) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _fmt_value(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(v: Any):
    try:
        import numpy as np
        if isinstance(v, np.ndarray):
            return v.tolist()
        if isinstance(v, (np.floating, np.integer)):
            return v.item()
    except ImportError:
        pass
    return str(v)


def _plain(data: dict) -> dict:
    import numpy as np
    out: dict = {}
    for k, v in data.items():
        if isinstance(v, dict):
            out[k] = _plain(v)
        elif isinstance(v, np.ndarray):
            out[k] = v.tolist()
        elif isinstance(v, (np.floating, np.integer)):
            out[k] = v.item()
        else:
            out[k] = v
    return out

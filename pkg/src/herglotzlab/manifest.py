"""Run manifests, deterministic serialisation and atomic output."""

from __future__ import annotations

import json
import math
import os
import platform
import tempfile
from pathlib import Path
from typing import Any, Optional

import numpy as np

SCHEMA_ID = "herglotzlab.manifest/1"
RESULT_SCHEMA_ID = "herglotzlab.result/1"
ERROR_SCHEMA_ID = "herglotzlab.error/1"

__all__ = ["ERROR_SCHEMA_ID", "RESULT_SCHEMA_ID", "SCHEMA_ID", "build_manifest", "dumps",
           "threads", "to_jsonable", "write_atomic"]


def threads() -> int:
    """Worker bound from ``HERGLOTZ_THREADS`` (default 1; invalid values raise)."""
    raw = os.environ.get("HERGLOTZ_THREADS", "1").strip() or "1"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"HERGLOTZ_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"HERGLOTZ_THREADS must be a positive integer, got {raw!r}")
    return n


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays, complex numbers and non-finite floats for JSON.

    Complex numbers become ``{"re": .., "im": ..}``; ``inf``/``nan`` become
    the strings ``"inf"``, ``"-inf"``, ``"nan"`` so the output stays strict JSON.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(obj.real)), "im": to_jsonable(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation, trailing newline)."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def build_manifest(command: str, config: dict, tolerances: dict, outputs: list,
                   status: str = "ok", operations: Optional[list] = None) -> dict:
    """Manifest recording config, versions and tolerances of one run.

    Contains no timestamps or host names, so identical configurations give
    byte-identical manifests on the same software stack.
    """
    from . import __version__
    return {
        "schema": SCHEMA_ID,
        "command": command,
        "config": config,
        "tolerances": tolerances,
        "operations": operations or [],
        "outputs": outputs,
        "status": status,
        "versions": {"herglotzlab": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
        "threads": threads(),
    }


def write_atomic(path, text: str) -> Path:
    """Write ``text`` to ``path`` via a temporary file and ``os.replace``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path

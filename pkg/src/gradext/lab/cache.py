"""Disk cache for indecomposable catalogues, keyed by algebra digest.

Enabled by ``GRADEXT_CACHE_DIR``.  A cached catalogue is only trusted for
the same algebra digest and a dimension bound it covers; entries are plain
JSON action arrays and are re-validated as modules on load.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .. import decomp
from .. import linalg as la
from ..algebra import Algebra
from ..decomp import Catalogue, profile
from ..modules import Module

ENV = "GRADEXT_CACHE_DIR"


def cache_dir() -> Path | None:
    d = os.environ.get(ENV)
    return Path(d) if d else None


def _path(root: Path, a: Algebra) -> Path:
    return root / f"catalogue-{a.digest[:32]}.json"


def load_catalogue(a: Algebra) -> bool:
    """Seed the in-memory catalogue store from disk; True if something was loaded."""
    root = cache_dir()
    if root is None:
        return False
    path = _path(root, a)
    if not path.exists():
        return False
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        if data.get("digest") != a.digest:
            return False
        mods = [Module(a, _unflat(e["action"], a.dim, e["dim"])) for e in data["indecomposables"]]
    except (OSError, ValueError, KeyError, TypeError):
        return False
    cached = decomp._CATALOGUES.get(a.digest)
    if cached is None or cached.max_dim < data["max_dim"]:
        decomp._CATALOGUES[a.digest] = Catalogue(a, int(data["max_dim"]), mods,
                                                 [profile(m) for m in mods], int(data.get("work", 0)))
    return True


def store_catalogue(a: Algebra) -> bool:
    root = cache_dir()
    cat = decomp._CATALOGUES.get(a.digest)
    if root is None or cat is None:
        return False
    path = _path(root, a)
    if path.exists():
        try:
            if json.loads(path.read_text(encoding="utf-8")).get("max_dim", -1) >= cat.max_dim:
                return False
        except (OSError, ValueError):
            pass
    root.mkdir(parents=True, exist_ok=True)
    data = {"digest": a.digest, "max_dim": cat.max_dim, "work": cat.work,
            "indecomposables": [{"dim": m.dim, "action": m.action.reshape(-1).tolist()}
                                for m in cat.indecomposables]}
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True), encoding="utf-8")
    tmp.replace(path)
    return True


def _unflat(flat, k: int, n: int):
    return np.asarray(flat, dtype=la.DTYPE).reshape(k, n, n)

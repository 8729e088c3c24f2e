"""On-disk result cache: ``<root>/<engine-version>/<label>/<command-hash>.json``."""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import ENGINE_VERSION

ENV_VAR = "DDKS_CACHE_DIR"


def default_root() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "ddks"


def command_key(command: str, params: dict[str, Any]) -> str:
    blob = json.dumps({"command": command, "params": params}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def _safe(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label).strip("_") or "_"


class ResultCache:
    def __init__(self, root: str | Path | None = None, engine: str = ENGINE_VERSION) -> None:
        self.root = Path(root) if root is not None else default_root()
        self.engine = engine

    def path(self, command: str, label: str, params: dict[str, Any]) -> Path:
        return self.root / self.engine / _safe(label) / f"{command_key(command, params)}.json"

    def get(self, command: str, label: str, params: dict[str, Any]) -> dict | None:
        p = self.path(command, label, params)
        try:
            rec = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        if rec.get("engine") != self.engine or rec.get("command") != command:
            return None
        if rec.get("label") != label or rec.get("params") != params:
            return None
        return rec

    def put(self, command: str, label: str, params: dict[str, Any], result: Any, **extra) -> dict:
        rec = {"command": command, "label": label, "params": params, "engine": self.engine,
               "result": result, **extra}
        p = self.path(command, label, params)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(rec, f, sort_keys=True, indent=1)
            os.replace(tmp, p)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return rec

    def memo(self, command: str, label: str, params: dict[str, Any], fn: Callable[[], Any]) -> tuple[Any, bool]:
        """``(result, hit)``; computes and stores on a miss."""
        rec = self.get(command, label, params)
        if rec is not None:
            return rec["result"], True
        import time

        t = time.perf_counter()
        result = fn()
        self.put(command, label, params, result, wall_time=round(time.perf_counter() - t, 3))
        return result, False


class NullCache(ResultCache):
    """Cache that never stores anything."""

    def __init__(self) -> None:
        super().__init__(root=Path(os.devnull), engine=ENGINE_VERSION)

    def get(self, *a, **k):
        return None

    def put(self, command, label, params, result, **extra):
        return {"result": result}

"""Census files: one JSON document per (p, r, s) cell, written atomically."""
from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional
import json
import os
import tempfile

from .. import __version__
from ..core.errors import CensusFormatError, ParameterDomainError
from .census import CensusEntry

SCHEMA_VERSION = 1


@dataclass
class CensusFile:
    p: int
    r: int
    s: int
    entries: List[CensusEntry]
    levels: Dict[str, bool] = field(default_factory=dict)
    tool: str = f"rotary_px_maps {__version__}"
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": self.schema,
            "tool": self.tool,
            "p": self.p,
            "r": self.r,
            "s": self.s,
            "levels": dict(self.levels),
            "entries": [e.to_dict() for e in self.entries],
        }


def write_census(
    entries: List[CensusEntry],
    path: Path,
    *,
    p: Optional[int] = None,
    r: Optional[int] = None,
    s: Optional[int] = None,
    levels: Optional[Dict[str, bool]] = None,
) -> Path:
    if entries:
        p = entries[0].p if p is None else p
        r = entries[0].r if r is None else r
        s = entries[0].s if s is None else s
    if p is None or r is None or s is None:
        raise ParameterDomainError("an empty census needs explicit p, r and s")
    doc = CensusFile(int(p), int(r), int(s), list(entries), levels=dict(levels or {}))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(doc.to_dict(), f, indent=2)
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_census(path: Path) -> CensusFile:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1].strip() if 0 < exc.lineno <= len(lines) else ""
        raise CensusFormatError(
            f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg} near {context!r}"
        ) from exc
    if not isinstance(payload, dict):
        raise CensusFormatError(f"{path}: top level must be an object")
    schema = payload.get("schema")
    if schema != SCHEMA_VERSION:
        raise CensusFormatError(f"{path}: schema version {schema!r}, expected {SCHEMA_VERSION}")
    try:
        p, r, s = int(payload["p"]), int(payload["r"]), int(payload["s"])
        entries = [CensusEntry.from_dict(e, p=p, r=r, s=s) for e in payload["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CensusFormatError(f"{path}: malformed census document ({exc})") from exc
    return CensusFile(
        p=p,
        r=r,
        s=s,
        entries=entries,
        levels={k: bool(v) for k, v in (payload.get("levels") or {}).items()},
        tool=str(payload.get("tool", "")),
        schema=schema,
    )

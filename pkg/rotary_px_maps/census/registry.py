from __future__ import annotations
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Dict, Optional, List
import json
import time
import uuid

from ..utils.hashing import sha256_file

@dataclass
class RunRecord:
    run_id: str
    created_utc: str
    p: int
    r: int
    s: int
    entries: int
    levels: Dict[str, bool]
    output: Optional[str]
    sha256: Optional[str]
    tags: List[str]

class CensusRegistry:
    """Reproducibility registry for census runs.

    Stores one JSONL record per (p, r, s) cell, with the SHA-256 of the written census file.
    """

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.runs_path = self.root / "runs.jsonl"

    def log_run(
        self,
        *,
        p: int,
        r: int,
        s: int,
        entries: int,
        levels: Dict[str, bool],
        output: Optional[Path] = None,
        tags: Optional[List[str]] = None
    ) -> RunRecord:
        rid = str(uuid.uuid4())
        created = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        digest = sha256_file(Path(output)) if output is not None and Path(output).exists() else None
        rec = RunRecord(
            run_id=rid,
            created_utc=created,
            p=int(p),
            r=int(r),
            s=int(s),
            entries=int(entries),
            levels=dict(levels),
            output=str(output) if output is not None else None,
            sha256=digest,
            tags=tags or [],
        )
        with open(self.runs_path, "a", encoding="utf-8") as f:
            f.write(json.dumps(asdict(rec)) + "\n")
        return rec

    def list_runs(self, limit: int = 200) -> List[RunRecord]:
        if not self.runs_path.exists():
            return []
        rows = []
        with open(self.runs_path, "r", encoding="utf-8") as f:
            for i, line in enumerate(f):
                if i >= limit:
                    break
                line = line.strip()
                if not line:
                    continue
                rows.append(RunRecord(**json.loads(line)))
        return rows

    def find_runs(self, *, p: Optional[int] = None, r: Optional[int] = None) -> List[RunRecord]:
        out = []
        for rec in self.list_runs(limit=10_000):
            if p is not None and rec.p != p:
                continue
            if r is not None and rec.r != r:
                continue
            out.append(rec)
        return out

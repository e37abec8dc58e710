from __future__ import annotations
from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Callable

@dataclass
class CheckResult:
    name: str
    passed: bool
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

class Verifier:
    def __init__(self):
        self.checks: List[Callable[[Dict[str, Any]], CheckResult]] = []

    def add_check(self, fn: Callable[[Dict[str, Any]], CheckResult]) -> None:
        self.checks.append(fn)

    def run(self, artifact: Dict[str, Any]) -> List[CheckResult]:
        return [chk(artifact) for chk in self.checks]

def equality_check(left: str, right: str) -> Callable[[Dict[str, Any]], CheckResult]:
    def _chk(artifact: Dict[str, Any]) -> CheckResult:
        a, b = artifact.get(left), artifact.get(right)
        ok = (a is not None) and a == b
        return CheckResult(
            name=f"equal({left},{right})",
            passed=ok,
            message=f"{left}={a} matches {right}={b}" if ok else f"{left}={a} differs from {right}={b}",
        )
    return _chk

def flag_check(field: str) -> Callable[[Dict[str, Any]], CheckResult]:
    def _chk(artifact: Dict[str, Any]) -> CheckResult:
        v = artifact.get(field)
        ok = bool(v)
        return CheckResult(
            name=f"flag({field})",
            passed=ok,
            message=f"{field} holds" if ok else f"{field} failed ({v})",
        )
    return _chk

def discrepancy_report(results: List[CheckResult]) -> List[Dict[str, Any]]:
    return [r.to_dict() for r in results if not r.passed]

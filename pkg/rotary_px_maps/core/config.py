from __future__ import annotations
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class Budgets:
    max_group_order: int = 200_000
    max_graph_vertices: int = 2000
    # |G| times the number of candidate generator images tried by automorphism search.
    max_search_work: int = 200_000_000

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class CensusOptions:
    """Verification levels and budgets for one census cell.

    - verify_graphs: build every map and compare its underlying graph with C(p,r,s).
    - brute: count rotary-pair orbits of every distinct group by exhaustive search.
    - verify_decomposition: decompose every built map; None follows verify_graphs.
    - allow_large_s: run cells with s+1 > r and record graph findings instead of asserting.
    """

    verify_graphs: bool = False
    brute: bool = False
    verify_decomposition: Optional[bool] = None
    allow_large_s: bool = False
    budgets: Budgets = field(default_factory=Budgets)
    seed: int = 0
    semiregular_samples: int = 10
    max_iso_pairs: int = 50

    @property
    def decomposition_enabled(self) -> bool:
        if self.verify_decomposition is None:
            return self.verify_graphs
        return bool(self.verify_decomposition)

    def levels(self) -> Dict[str, bool]:
        return {
            "graph": bool(self.verify_graphs),
            "brute": bool(self.brute),
            "decomp": self.decomposition_enabled,
        }

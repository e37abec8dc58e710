"""Loop-free multigraphs, the Praeger-Xu family and a small isomorphism tester.

Vertex encoding of C(p, r, s): (i, x_0..x_{s-1}) -> i * p^s + sum_j x_j p^j.
"""
from __future__ import annotations
from collections import Counter
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple
import json

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ..core.errors import BudgetExceededError, ParameterDomainError, StructuralError
from ..core.params import validate_prime
from ..utils.logging_utils import get_logger

LOGGER = get_logger(__name__)


class Multigraph:
    """Undirected loop-free multigraph on vertices 0..n-1.

    Stored as a networkx Graph whose edges carry an integer 'mult' attribute.
    """

    def __init__(self, n_vertices: int) -> None:
        self.g = nx.Graph()
        self.g.add_nodes_from(range(int(n_vertices)))

    @property
    def n_vertices(self) -> int:
        return int(self.g.number_of_nodes())

    def add_edge(self, u: int, v: int, mult: int = 1) -> None:
        u, v = int(u), int(v)
        if u == v:
            raise StructuralError(f"loop at vertex {u}")
        if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
            raise StructuralError(f"edge ({u}, {v}) leaves the vertex set")
        if self.g.has_edge(u, v):
            self.g[u][v]["mult"] += int(mult)
        else:
            self.g.add_edge(u, v, mult=int(mult))

    def multiplicity(self, u: int, v: int) -> int:
        return int(self.g[u][v]["mult"]) if self.g.has_edge(u, v) else 0

    def edges(self) -> List[Tuple[int, int, int]]:
        return sorted((min(u, v), max(u, v), int(d["mult"])) for u, v, d in self.g.edges(data=True))

    def edge_count(self) -> int:
        return sum(m for _, _, m in self.edges())

    def degree_list(self) -> List[int]:
        return [int(self.g.degree(v, weight="mult")) for v in range(self.n_vertices)]

    def is_simple(self) -> bool:
        return all(m == 1 for _, _, m in self.edges())

    def relabel(self, mapping: Dict[int, int]) -> "Multigraph":
        out = Multigraph(self.n_vertices)
        for u, v, m in self.edges():
            out.add_edge(mapping[u], mapping[v], m)
        return out

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Multigraph":
        nodes = sorted(g.nodes())
        index = {v: k for k, v in enumerate(nodes)}
        out = cls(len(nodes))
        if g.is_multigraph():
            for u, v in g.edges():
                out.add_edge(index[u], index[v])
        else:
            for u, v, d in g.edges(data=True):
                out.add_edge(index[u], index[v], d.get("mult", 1))
        return out

    def to_json(self) -> Dict[str, Any]:
        return {"vertices": self.n_vertices, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "Multigraph":
        out = cls(int(payload["vertices"]))
        for u, v, m in payload.get("edges", []):
            out.add_edge(u, v, m)
        return out

    def save(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_json(), indent=2))
        return path

    @classmethod
    def load(cls, path: Path) -> "Multigraph":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_edge_list(self, header: str) -> str:
        lines = [header]
        lines += [f"{u} {v} {m}" for u, v, m in self.edges()]
        return "\n".join(lines) + "\n"

    def summarize(self) -> Dict[str, Any]:
        degrees = self.degree_list()
        return {
            "vertices": self.n_vertices,
            "edges": self.edge_count(),
            "simple": self.is_simple(),
            "degrees": dict(sorted(Counter(degrees).items())),
        }


@dataclass(frozen=True)
class PXParams:
    p: int
    r: int
    s: int
    delta: int = 1

    def __post_init__(self) -> None:
        validate_prime(self.p)
        if self.r < 3:
            raise ParameterDomainError(f"r={self.r} is smaller than 3")
        if self.s < 0:
            raise ParameterDomainError(f"s={self.s} must be non-negative")
        if self.delta not in (1, -1):
            raise ParameterDomainError(f"delta={self.delta} must be +1 or -1")

    @property
    def n_vertices(self) -> int:
        if self.s == 0 and self.delta == -1:
            return self.p * self.r
        return self.r * self.p ** self.s

    def header(self) -> str:
        return f"{self.p} {self.r} {self.s} {self.delta} {self.n_vertices}"


def vertex_code(i: int, xs: Iterable[int], p: int, s: int) -> int:
    code = i * p ** s
    for j, x in enumerate(xs):
        code += x * p ** j
    return code


def build_px(params: PXParams) -> Multigraph:
    p, r, s = params.p, params.r, params.s
    if s == 0:
        if params.delta == -1:
            out = Multigraph(p * r)
            for k in range(p * r):
                out.add_edge(k, (k + 1) % (p * r))
            return out
        out = Multigraph(r)
        for i in range(r):
            out.add_edge(i, (i + 1) % r, p)
        return out
    out = Multigraph(r * p ** s)
    for i in range(r):
        for xs in product(range(p), repeat=s + 1):
            u = vertex_code(i, xs[:s], p, s)
            v = vertex_code((i + 1) % r, xs[1:], p, s)
            out.add_edge(u, v)
    return out


def complete_bipartite(n: int) -> Multigraph:
    return Multigraph.from_networkx(nx.complete_bipartite_graph(n, n))


@dataclass
class IsoResult:
    isomorphic: bool
    witness: Optional[Dict[int, int]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def _refine(g1: Multigraph, g2: Multigraph) -> Tuple[Dict[Tuple[int, int], int], int]:
    """Colour refinement on the disjoint union; colours are comparable across both graphs."""
    graphs = (g1, g2)
    colour = {(k, v): g.g.degree(v, weight="mult") for k, g in enumerate(graphs) for v in g.g.nodes}
    n_colours = len(set(colour.values()))
    while True:
        signature = {}
        for k, g in enumerate(graphs):
            for v in g.g.nodes:
                nbrs = sorted((colour[(k, u)], d["mult"]) for u, d in g.g[v].items())
                signature[(k, v)] = (colour[(k, v)], tuple(nbrs))
        palette = {sig: idx for idx, sig in enumerate(sorted(set(signature.values())))}
        new = {key: palette[sig] for key, sig in signature.items()}
        count = len(palette)
        colour = new
        if count == n_colours:
            return colour, count
        n_colours = count


def _check_witness(g1: Multigraph, g2: Multigraph, f: Dict[int, int]) -> bool:
    if sorted(f.values()) != list(range(g2.n_vertices)):
        return False
    if g1.edge_count() != g2.edge_count():
        return False
    return all(g2.multiplicity(f[u], f[v]) == m for u, v, m in g1.edges())


def isomorphic(g1: Multigraph, g2: Multigraph, max_vertices: int = 2000) -> IsoResult:
    if max(g1.n_vertices, g2.n_vertices) > max_vertices:
        raise BudgetExceededError(
            f"graph with {max(g1.n_vertices, g2.n_vertices)} vertices exceeds max_graph_vertices = {max_vertices}"
        )
    if g1.n_vertices != g2.n_vertices:
        return IsoResult(False, reason="vertex counts differ")
    if g1.edge_count() != g2.edge_count():
        return IsoResult(False, reason="edge counts differ")
    if sorted(g1.degree_list()) != sorted(g2.degree_list()):
        return IsoResult(False, reason="degree multisets differ")
    if sorted(m for *_, m in g1.edges()) != sorted(m for *_, m in g2.edges()):
        return IsoResult(False, reason="edge multiplicities differ")
    colour, _ = _refine(g1, g2)
    hist1 = Counter(c for (k, _), c in colour.items() if k == 0)
    hist2 = Counter(c for (k, _), c in colour.items() if k == 1)
    if hist1 != hist2:
        return IsoResult(False, reason="refined colour classes differ")
    a, b = g1.g.copy(), g2.g.copy()
    nx.set_node_attributes(a, {v: colour[(0, v)] for v in a.nodes}, "colour")
    nx.set_node_attributes(b, {v: colour[(1, v)] for v in b.nodes}, "colour")
    matcher = GraphMatcher(
        a,
        b,
        node_match=lambda x, y: x["colour"] == y["colour"],
        edge_match=lambda x, y: x["mult"] == y["mult"],
    )
    if not matcher.is_isomorphic():
        return IsoResult(False, reason="no colour-preserving bijection")
    witness = {int(u): int(v) for u, v in matcher.mapping.items()}
    if not _check_witness(g1, g2, witness):
        raise StructuralError("isomorphism witness failed verification")
    return IsoResult(True, witness=witness)


def write_edge_list(graph: Multigraph, params: PXParams, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"{params.p} {params.r} {params.s} {params.delta} {graph.n_vertices}"
    path.write_text(graph.to_edge_list(header))
    return path

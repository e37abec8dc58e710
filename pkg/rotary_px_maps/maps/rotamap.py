"""Rotary maps as coset geometries of rotary pairs (rho, tau) in affine groups.

Vertices, edges and faces are the left cosets of <rho>, <tau> and <rho tau>; two of them are
incident when they intersect.
"""
from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple
import json

import numpy as np

from .. import __version__
from ..algebra import modp
from ..algebra.dihedral_irr import (
    IrrClass,
    aut_action,
    class_index,
    frame_automorphism,
    parse_signature,
)
from ..algebra.modules import invariant_complement, is_invariant, projection_along
from ..core.config import Budgets
from ..core.errors import InternalArithmeticError, ParameterDomainError, RotaryPXError, StructuralError
from ..graphs.pxgraph import Multigraph
from ..groups.affine_group import AffineGroup, GElem, RotaryPair
from ..groups.homomorphisms import AutoMap, group_homomorphism, group_isomorphism
from ..utils.logging_utils import get_logger

LOGGER = get_logger(__name__)

__all__ = [
    "RotaryPair",
    "CosetMap",
    "MapIsoWitness",
    "MapIsoResult",
    "Component",
    "build_map",
    "underlying_graph",
    "construct_rotary",
    "maps_isomorphic",
    "homomorphism_exists",
    "quotient_map",
    "direct_product",
    "decompose",
    "canonical_class",
    "euler_characteristic",
    "map_counts",
    "map_record",
    "load_map_record",
]


@dataclass(frozen=True, eq=False)
class CosetMap:
    pair: RotaryPair
    vertex_of: np.ndarray
    edge_of: np.ndarray
    face_of: np.ndarray
    n_vertices: int
    n_edges: int
    n_faces: int
    edge_ends: np.ndarray

    @property
    def valency(self) -> int:
        return self.pair.rho_order

    @property
    def face_length(self) -> int:
        return self.pair.face_length

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    def counts(self) -> Dict[str, int]:
        return {"V": self.n_vertices, "E": self.n_edges, "F": self.n_faces, "chi": self.euler_characteristic}


def _coset_labels(perm: np.ndarray, length: int) -> Tuple[np.ndarray, int]:
    """Label each element by its left coset x<g>, given the right-multiplication perm of g."""
    labels = np.arange(perm.size, dtype=np.int64)
    cur = labels.copy()
    for _ in range(length - 1):
        cur = perm[cur]
        np.minimum(labels, cur, out=labels)
    uniq, dense = np.unique(labels, return_inverse=True)
    return dense.astype(np.int64), int(uniq.size)


def map_counts(pair: RotaryPair) -> Dict[str, int]:
    """Index formulas |G|/|rho|, |G|/2, |G|/|rho tau| without enumerating G."""
    order = pair.group.order
    v = order // pair.rho_order
    e = order // 2
    f = order // pair.face_length
    return {"V": v, "E": e, "F": f, "chi": v - e + f}


def build_map(pair: RotaryPair) -> CosetMap:
    G = pair.group
    G.check_budget()
    rho_tau = G.mul(pair.rho, pair.tau)
    vertex_of, nv = _coset_labels(G.right_mult_perm(pair.rho), pair.rho_order)
    tau_perm = G.right_mult_perm(pair.tau)
    edge_of, ne = _coset_labels(tau_perm, 2)
    face_of, nf = _coset_labels(G.right_mult_perm(rho_tau), G.element_order(rho_tau))
    expected = map_counts(pair)
    if (nv, ne, nf) != (expected["V"], expected["E"], expected["F"]):
        raise InternalArithmeticError(f"coset counts {(nv, ne, nf)} differ from index formulas {expected}")
    _, first = np.unique(edge_of, return_index=True)
    ends = np.stack([vertex_of[first], vertex_of[tau_perm[first]]], axis=1)
    if np.any(ends[:, 0] == ends[:, 1]):
        raise StructuralError("an edge coset meets a single vertex coset (loop)")
    return CosetMap(pair, vertex_of, edge_of, face_of, nv, ne, nf, ends)


def underlying_graph(cmap: CosetMap) -> Multigraph:
    graph = Multigraph(cmap.n_vertices)
    for u, v in cmap.edge_ends:
        graph.add_edge(int(u), int(v))
    return graph


def euler_characteristic(cmap: CosetMap) -> int:
    chi = cmap.euler_characteristic
    if chi % 2 or chi > 2:
        raise InternalArithmeticError(f"Euler characteristic {chi} is impossible for a closed orientable surface")
    return chi


def _fixed_vector(G: AffineGroup, basis: np.ndarray, mx: np.ndarray) -> np.ndarray:
    p = G.p
    local = modp.restrict(mx, basis, p)
    fixed = modp.nullspace((local - modp.identity(local.shape[0])) % p, p)
    if fixed.shape[0]:
        return modp.matmul(fixed[:1], basis, p)[0]
    # x acts as -1 here: the gamma(-1,-1) component, seeded by its first basis vector
    return basis[0]


def construct_rotary(G: AffineGroup, x_index: int = 1, y_index: int = 0) -> RotaryPair:
    """(v x, y) with x = c^x_index b, y = c^y_index b and v a fixed vector of x.

    For a reducible multiplicity-free G the vector v is the sum over irreducible summands of
    each summand's first fixed vector, which realizes the direct product of the summand maps.
    """
    r = G.r
    frame_automorphism(x_index, y_index, r)
    mx = G.mat(x_index, 1)
    v = np.zeros(G.n, dtype=np.int64)
    for summand in G.summands:
        v = (v + _fixed_vector(G, summand.basis, mx)) % G.p
    rho = G.elem(v, x_index, 1)
    tau = G.elem((0,) * G.n, y_index, 1)
    pair = RotaryPair(G, rho, tau)
    LOGGER.debug("constructed pair on %s with |rho| = %d", G.label(), pair.rho_order)
    return pair


@dataclass(frozen=True, eq=False)
class MapIsoWitness:
    rho_image: GElem
    tau_image: GElem
    automap: AutoMap

    @property
    def bijection(self) -> np.ndarray:
        return self.automap.table


@dataclass(frozen=True)
class MapIsoResult:
    isomorphic: bool
    witness: Optional[MapIsoWitness] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def maps_isomorphic(p1: RotaryPair, p2: RotaryPair) -> MapIsoResult:
    """Decides whether rho1 -> rho2, tau1 -> tau2 extends to a group isomorphism."""
    if (p1.p, p1.r) != (p2.p, p2.r) or p1.group.order != p2.group.order:
        return MapIsoResult(False, reason="group orders differ")
    if p1.rho_order != p2.rho_order or p1.face_length != p2.face_length:
        return MapIsoResult(False, reason="vertex valency or face length differ")
    f = group_isomorphism(p1.group, [p1.rho, p1.tau], p2.group, [p2.rho, p2.tau])
    if f is None:
        return MapIsoResult(False, reason="generator assignment does not extend to an isomorphism")
    automap = AutoMap(p1.group, (p1.rho, p1.tau), p2.group, (p2.rho, p2.tau), expanded=f)
    return MapIsoResult(True, witness=MapIsoWitness(p2.rho, p2.tau, automap))


def homomorphism_exists(p1: RotaryPair, p2: RotaryPair) -> bool:
    """Whether the second map is a quotient of the first (rho1 -> rho2, tau1 -> tau2 is a homomorphism)."""
    if (p1.p, p1.r) != (p2.p, p2.r):
        return False
    return group_homomorphism(p1.group, [p1.rho, p1.tau], p2.group, [p2.rho, p2.tau]) is not None


def quotient_map(pair: RotaryPair, W, complement: Optional[np.ndarray] = None) -> RotaryPair:
    """The quotient map on G/W, realized on an invariant complement of the submodule W."""
    G = pair.group
    p, n = G.p, G.n
    gens = [G.rep.mat_c, G.rep.mat_b]
    W = modp.span(np.asarray(W, dtype=np.int64).reshape(-1, n), p, n)
    if not is_invariant(W, gens, p):
        raise StructuralError("W is not a D-invariant subspace")
    if complement is None:
        complement = invariant_complement(W, G.rep.matrices(G.r), p, G.r)
    else:
        complement = modp.span(np.asarray(complement, dtype=np.int64).reshape(-1, n), p, n)
        if not is_invariant(complement, gens, p):
            raise StructuralError("complement is not D-invariant")
    proj = projection_along(complement, W, p)
    mat_c = modp.restrict(G.rep.mat_c, complement, p)
    mat_b = modp.restrict(G.rep.mat_b, complement, p)
    Q = AffineGroup(mat_c, mat_b, p, G.r, budgets=G.budgets)

    def image(g: GElem) -> GElem:
        w = modp.matmul(proj, np.array(g.v, dtype=np.int64), p)
        coords = modp.coordinates(complement, w, p)[0] if complement.shape[0] else []
        return Q.elem(coords, g.i, g.e)

    return RotaryPair(Q, image(pair.rho), image(pair.tau))


def _reframe(pair: RotaryPair) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, Optional[List[IrrClass]]]:
    """Matrices of psi o sigma and the V-parts of rho, tau, where sigma maps (a, b) to the
    D-parts of (rho, tau)."""
    G = pair.group
    if not (pair.rho.e and pair.tau.e):
        raise StructuralError("direct products need rho and tau with reflection D-parts")
    sigma = frame_automorphism(pair.rho.i, pair.tau.i, G.r)
    mat_c = G.mat(sigma.k, 0)
    mat_b = G.mat(sigma.t, 1)
    classes = [aut_action(sigma, c) for c in G.classes]
    return mat_c, mat_b, np.array(pair.rho.v, dtype=np.int64), np.array(pair.tau.v, dtype=np.int64), classes


def _d_cocycle(G: AffineGroup, rho_v: np.ndarray, tau_v: np.ndarray) -> Dict[Tuple[int, int], np.ndarray]:
    """V-parts s(d) of elements of <rho, tau> lying over each d in D (rho over a, tau over b)."""
    r, p = G.r, G.p
    step = {(1, 1): rho_v, (0, 1): tau_v}
    s = {(0, 0): np.zeros(G.n, dtype=np.int64)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for d in frontier:
            for g, w in step.items():
                dg = ((d[0] + (-1) ** d[1] * g[0]) % r, d[1] ^ g[1])
                if dg not in s:
                    s[dg] = (s[d] + G.mat(*d) @ w) % p
                    nxt.append(dg)
        frontier = nxt
    return s


def direct_product(pairs: Sequence[RotaryPair]) -> RotaryPair:
    """Realize H = <(rho_1..rho_n), (tau_1..tau_n)> inside the outer direct product as an
    affine group Z_p^d x| D_2r."""
    if not pairs:
        raise ParameterDomainError("direct product of an empty list")
    p, r = pairs[0].p, pairs[0].r
    if any((q.p, q.r) != (p, r) for q in pairs):
        raise StructuralError("all factors must share (p, r)")
    framed = [_reframe(q) for q in pairs]
    mat_c = modp.block_diag([f[0] for f in framed])
    mat_b = modp.block_diag([f[1] for f in framed])
    rho_v = np.concatenate([f[2] for f in framed])
    tau_v = np.concatenate([f[3] for f in framed])
    classes = [c for f in framed for c in f[4]]
    budgets = pairs[0].group.budgets
    big = AffineGroup(mat_c, mat_b, p, r, classes=classes, budgets=budgets)
    n = big.n
    ma, mb = big.mat(1, 1), big.mat(0, 1)
    relators = np.stack(
        [rho_v + ma @ rho_v, tau_v + mb @ tau_v, big.rotation_sum @ (rho_v + ma @ tau_v)]
    ) % p
    W = modp.spin(relators, [mat_c, mat_b], p, n)
    if W.shape[0] == n:
        return RotaryPair(big, big.elem(rho_v, 1, 1), big.elem(tau_v, 0, 1))
    LOGGER.info("direct product collapses: H meets V in dimension %d of %d", W.shape[0], n)
    mats = big.rep.matrices(r)
    comp = invariant_complement(W, mats, p, r)
    onto_comp = projection_along(comp, W, p) if comp.shape[0] else np.zeros((n, n), dtype=np.int64)
    s = _d_cocycle(big, rho_v, tau_v)
    total = np.zeros(n, dtype=np.int64)
    for sd in s.values():
        total = (total + onto_comp @ sd) % p
    u = (-total * pow(2 * r, -1, p)) % p

    def conjugate(v: np.ndarray, i: int, e: int) -> np.ndarray:
        return (u + v - big.mat(i, e) @ u) % p

    rho_w = conjugate(rho_v, 1, 1)
    tau_w = conjugate(tau_v, 0, 1)
    sub_c = modp.restrict(mat_c, W, p)
    sub_b = modp.restrict(mat_b, W, p)
    H = AffineGroup(sub_c, sub_b, p, r, budgets=budgets)
    rho = H.elem(modp.coordinates(W, rho_w, p)[0], 1, 1)
    tau = H.elem(modp.coordinates(W, tau_w, p)[0], 0, 1)
    return RotaryPair(H, rho, tau)


def canonical_class(pair: RotaryPair) -> IrrClass:
    """Class of psi o sigma for an irreducible pair, sigma taking (a, b) to the D-parts of (rho, tau)."""
    G = pair.group
    if not G.is_irreducible:
        raise ParameterDomainError("canonical class needs an irreducible representation")
    if not (pair.rho.e and pair.tau.e):
        raise StructuralError("canonical class needs rho and tau with reflection D-parts")
    sigma = frame_automorphism(pair.rho.i, pair.tau.i, G.r)
    return aut_action(sigma, G.classes[0])


@dataclass(frozen=True, eq=False)
class Component:
    cls: IrrClass
    pair: RotaryPair


def decompose(pair: RotaryPair) -> List[Component]:
    """Irreducible factors M/U_j, U_j the sum of all irreducible summands but the j-th."""
    G = pair.group
    G.check_budget()
    summands = G.summands
    if len(summands) <= 1:
        return [Component(canonical_class(pair), pair)]
    out = []
    for j, summand in enumerate(summands):
        others = np.vstack([s.basis for k, s in enumerate(summands) if k != j])
        q = quotient_map(pair, others, complement=summand.basis)
        out.append(Component(canonical_class(q), q))
    out.sort(key=lambda c: class_index(c.cls, G.p))
    return out


def map_record(pair: RotaryPair, graph_ref: Optional[str] = None) -> Dict[str, Any]:
    G = pair.group
    return {
        "schema": 1,
        "tool": f"rotary_px_maps {__version__}",
        "group": {
            "p": G.p,
            "r": G.r,
            "classes": [c.signature for c in G.classes],
            "mat_c": G.rep.mat_c.tolist(),
            "mat_b": G.rep.mat_b.tolist(),
        },
        "rho": pair.rho.to_list(),
        "tau": pair.tau.to_list(),
        "counts": map_counts(pair),
        "graph": graph_ref,
    }


def _square(rows) -> np.ndarray:
    mat = np.array(rows, dtype=np.int64)
    if mat.size == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return mat


def _element(G: AffineGroup, values) -> GElem:
    values = [int(x) for x in values]
    if len(values) != G.n + 2:
        raise ParameterDomainError(f"group element {values} needs {G.n} vector entries plus (i, e)")
    return G.elem(values[:-2], values[-2], values[-1])


def load_map_record(payload: Dict[str, Any], budgets: Optional[Budgets] = None) -> RotaryPair:
    try:
        grp = payload["group"]
        p, r = int(grp["p"]), int(grp["r"])
        classes = [parse_signature(s, p, r) for s in grp.get("classes", [])] or None
        G = AffineGroup(
            _square(grp["mat_c"]),
            _square(grp["mat_b"]),
            p,
            r,
            classes=classes,
            budgets=budgets,
        )
        return RotaryPair(G, _element(G, payload["rho"]), _element(G, payload["tau"]))
    except RotaryPXError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterDomainError(f"malformed map record: {exc}") from exc


def write_map_record(pair: RotaryPair, path: Path, graph_ref: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(map_record(pair, graph_ref), indent=2))
    return path


def read_map_record(path: Path, budgets: Optional[Budgets] = None) -> RotaryPair:
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParameterDomainError(f"cannot read map record {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterDomainError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    return load_map_record(payload, budgets)

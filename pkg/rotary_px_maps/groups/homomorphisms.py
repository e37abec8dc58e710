"""Generator-forced homomorphisms between affine groups, automorphism search and orbit
counting on rotary pairs."""
from __future__ import annotations
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import BudgetExceededError, InternalArithmeticError, StructuralError
from ..utils.logging_utils import get_logger
from .affine_group import AffineGroup, GElem, PairArrays, rotary_pair_arrays

LOGGER = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SpanningWords:
    """Breadth-first spanning tree of the right Cayley graph of G for two generators.

    layers[k] holds the element indices first reached at distance k+1; parent and gen give,
    for each reached index, the tree parent and which generator led to it.
    """

    layers: List[np.ndarray]
    parent: np.ndarray
    gen: np.ndarray
    perms: Tuple[np.ndarray, ...]


def spanning_words(G: AffineGroup, gens: Sequence[GElem]) -> SpanningWords:
    N = G.order
    perms = tuple(G.right_mult_perm(g) for g in gens)
    parent = np.full(N, -1, dtype=np.int64)
    gen = np.full(N, -1, dtype=np.int64)
    seen = np.zeros(N, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    layers: List[np.ndarray] = []
    while frontier.size:
        reached = []
        for k, perm in enumerate(perms):
            cand = perm[frontier]
            fresh = ~seen[cand]
            nodes, first = np.unique(cand[fresh], return_index=True)
            seen[nodes] = True
            parent[nodes] = frontier[fresh][first]
            gen[nodes] = k
            reached.append(nodes)
        frontier = np.concatenate(reached)
        if frontier.size:
            layers.append(frontier)
    if not seen.all():
        raise StructuralError(f"generators reach {int(seen.sum())} of {N} elements")
    return SpanningWords(layers, parent, gen, perms)


def extend_generator_map(
    words: SpanningWords,
    G2: AffineGroup,
    images: Sequence[GElem],
    require_bijective: bool = True,
) -> Optional[np.ndarray]:
    """Extend gens -> images along the spanning tree; the map f (index array) is returned
    when it respects every Cayley edge (so it is a homomorphism), else None."""
    N1 = words.parent.size
    if require_bijective and N1 != G2.order:
        return None
    targets = [G2.right_mult_perm(h) for h in images]
    f = np.full(N1, -1, dtype=np.int64)
    f[0] = 0
    for layer in words.layers:
        par = f[words.parent[layer]]
        g = words.gen[layer]
        out = np.empty(layer.size, dtype=np.int64)
        for k, tgt in enumerate(targets):
            mask = g == k
            out[mask] = tgt[par[mask]]
        f[layer] = out
    for src, tgt in zip(words.perms, targets):
        if not np.array_equal(f[src], tgt[f]):
            return None
    if require_bijective and np.unique(f).size != N1:
        return None
    return f


def group_isomorphism(
    G1: AffineGroup, gens1: Sequence[GElem], G2: AffineGroup, gens2: Sequence[GElem]
) -> Optional[np.ndarray]:
    if G1.order != G2.order:
        return None
    G1.check_budget()
    G2.check_budget()
    words = spanning_words(G1, gens1)
    return extend_generator_map(words, G2, gens2, require_bijective=True)


def group_homomorphism(
    G1: AffineGroup, gens1: Sequence[GElem], G2: AffineGroup, gens2: Sequence[GElem]
) -> Optional[np.ndarray]:
    G1.check_budget()
    G2.check_budget()
    words = spanning_words(G1, gens1)
    return extend_generator_map(words, G2, gens2, require_bijective=False)


@dataclass(eq=False)
class AutoMap:
    """Homomorphism fixed by the images of a generating pair; the element table is
    expanded by word closure on first use."""

    source: AffineGroup
    gens: Tuple[GElem, GElem]
    target: AffineGroup
    images: Tuple[GElem, GElem]
    expanded: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def table(self) -> np.ndarray:
        if self.expanded is None:
            f = group_homomorphism(self.source, self.gens, self.target, self.images)
            if f is None:
                raise StructuralError("generator images do not extend to a homomorphism")
            self.expanded = f
        return self.expanded

    def __call__(self, g: GElem) -> GElem:
        return self.target.decode(int(self.table[self.source.encode(g)]))

    @property
    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and np.unique(self.table).size == self.table.size


@dataclass(frozen=True)
class OrbitCount:
    pairs: int
    automorphisms: int
    orbits: int
    sampled_pairs: int
    semiregular: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _search_automorphisms(G: AffineGroup, pairs: PairArrays, samples: int) -> Tuple[int, np.ndarray]:
    total = len(pairs)
    if total == 0:
        raise StructuralError(f"group {G.label()} has no rotary pair")
    work = total * G.order
    if work > G.budgets.max_search_work:
        raise BudgetExceededError(
            f"automorphism search needs {work} element steps, above max_search_work = {G.budgets.max_search_work}"
        )
    g1, g2 = G.decode(pairs.rho[0]), G.decode(pairs.tau[0])
    words = spanning_words(G, [g1, g2])
    picks = np.unique(np.linspace(0, total - 1, num=min(samples, total)).astype(np.int64))
    s_rho, s_tau = pairs.rho[picks], pairs.tau[picks]
    fixers = np.zeros(picks.size, dtype=np.int64)
    count = 0
    for k in range(total):
        h1, h2 = G.decode(pairs.rho[k]), G.decode(pairs.tau[k])
        f = extend_generator_map(words, G, [h1, h2])
        if f is None:
            continue
        count += 1
        fixers += (f[s_rho] == s_rho) & (f[s_tau] == s_tau)
        if k % 5000 == 0:
            LOGGER.debug("candidate %d/%d, %d automorphisms so far", k, total, count)
    return count, fixers


def automorphism_count(G: AffineGroup, samples: int = 10) -> int:
    pairs, _ = rotary_pair_arrays(G)
    return _search_automorphisms(G, pairs, samples)[0]


def count_orbits_on_pairs(G: AffineGroup, samples: int = 10) -> OrbitCount:
    pairs, total = rotary_pair_arrays(G)
    auts, fixers = _search_automorphisms(G, pairs, samples)
    if auts == 0 or total % auts:
        raise InternalArithmeticError(f"{total} rotary pairs is not a multiple of |Aut(G)| = {auts}")
    semiregular = bool(np.all(fixers == 1))
    if not semiregular:
        raise InternalArithmeticError(f"Aut({G.label()}) does not act semiregularly on rotary pairs")
    out = OrbitCount(
        pairs=total,
        automorphisms=auts,
        orbits=total // auts,
        sampled_pairs=int(fixers.size),
        semiregular=semiregular,
    )
    LOGGER.info("group %s: %s", G.label(), out)
    return out

"""Classification of rotary maps on C(p,r,s).

A rotary PX map corresponds to a multiplicity-free F_p-representation of D_2r of degree s+1
without the constituent gamma(-1,1); the census enumerates those subsets, builds the maps when
asked and cross-checks them against the graph, the decomposition and brute-force orbit counts.
"""
from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from itertools import combinations
from math import comb
from pathlib import Path
from random import Random
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from sympy import isprime

from ..algebra.dihedral_irr import (
    IrrClass,
    all_aut_d,
    allowed_classes,
    aut_action,
    aut_orbit,
    class_index,
    count_multiplicity_free,
    enumerate_irr,
    faithful_degree,
    multiplicity_free_reps,
    parse_signature,
)
from ..core.config import Budgets, CensusOptions
from ..core.errors import ParameterDomainError, VerificationError
from ..core.params import validate_pr, validate_s
from ..graphs.pxgraph import PXParams, build_px, isomorphic
from ..groups.affine_group import AffineGroup, RotaryPair
from ..groups.homomorphisms import count_orbits_on_pairs
from ..maps.rotamap import (
    build_map,
    construct_rotary,
    decompose,
    direct_product,
    map_counts,
    maps_isomorphic,
    underlying_graph,
)
from ..utils.logging_utils import get_logger
from ..verify.checks import CheckResult, Verifier, discrepancy_report, equality_check, flag_check

LOGGER = get_logger(__name__)

__all__ = [
    "CensusEntry",
    "ExistenceReport",
    "Cell",
    "classify",
    "classify_augmented",
    "existence",
    "formula_count",
    "worked_example_count",
    "irreducible_map_table",
    "count_irreducible_maps",
    "entries_frame",
    "run_cells",
    "realize_subset",
    "graph_delta",
]


@dataclass
class CensusEntry:
    p: int
    r: int
    s: int
    delta: int
    classes: List[str]
    group_order: int
    counts: Dict[str, int]
    verified: Dict[str, bool] = field(default_factory=lambda: {"graph": False, "brute": False, "decomp": False})
    notes: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classes": list(self.classes),
            "group_order": self.group_order,
            "delta": self.delta,
            "counts": dict(self.counts),
            "verified": dict(self.verified),
            "notes": dict(self.notes),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], *, p: int, r: int, s: int) -> "CensusEntry":
        verified = payload.get("verified", {})
        return cls(
            p=p,
            r=r,
            s=s,
            delta=int(payload.get("delta", 1)),
            classes=[str(c) for c in payload["classes"]],
            group_order=int(payload["group_order"]),
            counts={k: int(v) for k, v in payload["counts"].items()},
            verified={k: bool(verified.get(k, False)) for k in ("graph", "brute", "decomp")},
            notes=dict(payload.get("notes") or {}),
        )

    def irr_classes(self) -> List[IrrClass]:
        return [parse_signature(sig, self.p, self.r) for sig in self.classes]


@dataclass(frozen=True)
class ExistenceReport:
    p: int
    r: int
    s: int
    d: int
    zeta: int
    exists: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Cell:
    p: int
    r: int
    s: int


# Construction


def realize_subset(classes: Sequence[IrrClass], p: int, r: int, budgets: Optional[Budgets] = None) -> RotaryPair:
    """The map of a multiplicity-free subset: one constructed map per class, then their product."""
    factors = [construct_rotary(AffineGroup.from_classes([c], p, r, budgets)) for c in classes]
    if len(factors) == 1:
        return factors[0]
    return direct_product(factors)


def _counts(pair: RotaryPair) -> Dict[str, int]:
    c = map_counts(pair)
    return {"v": c["V"], "e": c["E"], "f": c["F"], "chi": c["chi"]}


def graph_delta(classes: Sequence[IrrClass], s: int) -> int:
    if s == 0 and len(classes) == 1 and classes[0].is_linear and classes[0].sign_a == -1 and classes[0].sign_b == -1:
        return -1
    return 1


def _orbit_key(subset: Sequence[IrrClass], p: int, r: int) -> Tuple[int, ...]:
    """Smallest sorted class-index tuple over the Aut(D_2r)-orbit of the subset."""
    return min(
        tuple(sorted(class_index(aut_action(sigma, c), p) for c in subset))
        for sigma in all_aut_d(r)
    )


# Verification levels


def _graph_check(
    pair: RotaryPair, px: PXParams, budgets: Budgets, label: str
) -> CheckResult:
    target = build_px(px)
    graph = underlying_graph(build_map(pair))
    res = isomorphic(graph, target, max_vertices=budgets.max_graph_vertices)
    verifier = Verifier()
    verifier.add_check(flag_check("isomorphic"))
    passed = verifier.run({"isomorphic": res.isomorphic})[0].passed
    msg = f"underlying graph of {label} vs C({px.p},{px.r},{px.s},{px.delta}): {res.reason or 'isomorphic'}"
    return CheckResult(name=f"graph[{label}]", passed=passed, message=msg)


def _decomposition_check(pair: RotaryPair, expected: List[str], label: str) -> CheckResult:
    got = [c.cls.signature for c in decompose(pair)]
    verifier = Verifier()
    verifier.add_check(equality_check("decomposed", "expected"))
    res = verifier.run({"decomposed": got, "expected": expected})[0]
    return CheckResult(name=f"decomp[{label}]", passed=res.passed, message=res.message)


def _brute_checks(
    subsets: List[Tuple[IrrClass, ...]],
    entries: List[CensusEntry],
    p: int,
    r: int,
    options: CensusOptions,
) -> List[CheckResult]:
    """Per distinct group, the number of census entries must equal the number of
    Aut(G)-orbits on rotary pairs."""
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for k, subset in enumerate(subsets):
        groups.setdefault(_orbit_key(subset, p, r), []).append(k)
    results = []
    for key, members in sorted(groups.items()):
        G = AffineGroup.from_classes(subsets[members[0]], p, r, options.budgets)
        G.check_budget()
        oc = count_orbits_on_pairs(G, samples=options.semiregular_samples)
        ok = oc.orbits == len(members)
        results.append(
            CheckResult(
                name=f"brute[{G.label()}]",
                passed=ok,
                message=f"{oc.pairs} pairs / {oc.automorphisms} automorphisms = {oc.orbits} orbits, census has {len(members)}",
            )
        )
        for k in members:
            entries[k].verified["brute"] = ok
            entries[k].notes["automorphisms"] = oc.automorphisms
    return results


def _pairwise_checks(pairs: List[RotaryPair], entries: List[CensusEntry], options: CensusOptions) -> List[CheckResult]:
    candidates = [
        (i, j)
        for i, j in combinations(range(len(pairs)), 2)
        if pairs[i].group.order == pairs[j].group.order
    ]
    if len(candidates) > options.max_iso_pairs:
        candidates = sorted(Random(options.seed).sample(candidates, options.max_iso_pairs))
    results = []
    for i, j in candidates:
        res = maps_isomorphic(pairs[i], pairs[j])
        results.append(
            CheckResult(
                name=f"distinct[{'+'.join(entries[i].classes)} | {'+'.join(entries[j].classes)}]",
                passed=not res.isomorphic,
                message=res.reason or "maps are isomorphic",
            )
        )
    return results


def _raise_on_failures(results: List[CheckResult], p: int, r: int, s: int) -> None:
    report = discrepancy_report(results)
    if report:
        names = ", ".join(x["name"] for x in report)
        raise VerificationError(f"census ({p},{r},{s}) failed {len(report)} check(s): {names}", report=report)
    LOGGER.info("census (%d,%d,%d): %d checks passed", p, r, s, len(results))


# Pipeline


def classify(p: int, r: int, s: int, options: Optional[CensusOptions] = None) -> List[CensusEntry]:
    options = options or CensusOptions()
    p, r = validate_pr(p, r)
    s = validate_s(s, r, allow_large_s=options.allow_large_s)
    large = s + 1 > r
    subsets = multiplicity_free_reps(p, r, s + 1)
    LOGGER.info("census (%d,%d,%d): %d multiplicity-free subsets", p, r, s, len(subsets))

    results: List[CheckResult] = []
    formula = Verifier()
    formula.add_check(equality_check("subsets", "formula"))
    results.extend(formula.run({"subsets": len(subsets), "formula": count_multiplicity_free(p, r, s + 1)}))

    entries: List[CensusEntry] = []
    pairs: List[RotaryPair] = []
    for subset in subsets:
        labels = [c.signature for c in subset]
        label = "+".join(labels)
        pair = realize_subset(subset, p, r, options.budgets)
        entry = CensusEntry(
            p=p, r=r, s=s, delta=1, classes=labels, group_order=pair.group.order, counts=_counts(pair)
        )
        if options.verify_graphs:
            chk = _graph_check(pair, PXParams(p, r, s), options.budgets, label)
            if large:
                entry.notes["graph_matches_px"] = chk.passed
                entry.notes["graph_finding"] = chk.message
                LOGGER.warning("large-s finding (%d,%d,%d) %s: %s", p, r, s, label, chk.message)
            else:
                entry.verified["graph"] = chk.passed
                results.append(chk)
        if options.decomposition_enabled:
            chk = _decomposition_check(pair, labels, label)
            entry.verified["decomp"] = chk.passed
            results.append(chk)
        entries.append(entry)
        pairs.append(pair)

    if options.brute and subsets:
        results.extend(_brute_checks(subsets, entries, p, r, options))
        results.extend(_pairwise_checks(pairs, entries, options))
    _raise_on_failures(results, p, r, s)
    return entries


def classify_augmented(p: int, r: int, options: Optional[CensusOptions] = None) -> List[CensusEntry]:
    """The s = 0 maps: gamma(1,1) and gamma(1,-1) give multicycles, gamma(-1,-1) the cycle of length pr."""
    options = options or CensusOptions()
    p, r = validate_pr(p, r)
    subsets = multiplicity_free_reps(p, r, 1)
    entries: List[CensusEntry] = []
    results: List[CheckResult] = []
    for subset in subsets:
        cls = subset[0]
        pair = realize_subset(subset, p, r, options.budgets)
        delta = graph_delta(subset, 0)
        entry = CensusEntry(
            p=p, r=r, s=0, delta=delta, classes=[cls.signature], group_order=pair.group.order, counts=_counts(pair)
        )
        if options.verify_graphs:
            chk = _graph_check(pair, PXParams(p, r, 0, delta), options.budgets, cls.signature)
            entry.verified["graph"] = chk.passed
            results.append(chk)
        if options.decomposition_enabled:
            chk = _decomposition_check(pair, [cls.signature], cls.signature)
            entry.verified["decomp"] = chk.passed
            results.append(chk)
        entries.append(entry)
    if options.brute:
        results.extend(_brute_checks(subsets, entries, p, r, options))
    expected = 3 if r % 2 == 0 else 2
    verifier = Verifier()
    verifier.add_check(equality_check("entries", "expected"))
    results.extend(verifier.run({"entries": len(entries), "expected": expected}))
    _raise_on_failures(results, p, r, 0)
    return entries


# Formula side


def existence(p: int, r: int, s: int) -> ExistenceReport:
    """Whether C(p,r,s) carries a rotary map, for prime r: s = -1, 0, 1 modulo zeta."""
    p = int(p)
    r, s = int(r), int(s)
    if not isprime(r):
        raise ParameterDomainError(f"r={r} must be prime for the existence criterion")
    p, r = validate_pr(p, r)
    if s < 1:
        raise ParameterDomainError(f"s={s} must be at least 1")
    if r < max(3, s + 1):
        raise ParameterDomainError(f"r={r} must be at least max(3, s+1) = {max(3, s + 1)}")
    # zeta is the degree of every faithful class when r is prime
    fd = faithful_degree(p, r)
    exists = s % fd.deg in {fd.deg - 1, 0, 1}
    return ExistenceReport(p=p, r=r, s=s, d=fd.d, zeta=fd.deg, exists=exists)


def formula_count(p: int, r: int, s: int) -> int:
    p, r = validate_pr(p, r)
    return count_multiplicity_free(p, r, int(s) + 1)


def worked_example_count(p: int, r: int, s: int) -> int:
    """Binomial count for prime r: two linear classes and (r-1)/zeta faithful classes of degree zeta."""
    rep = existence(p, r, s)
    n_faithful = (rep.r - 1) // rep.zeta
    total = 0
    for j in (0, 1, 2):
        rest = s + 1 - j
        if rest >= 0 and rest % rep.zeta == 0:
            total += comb(2, j) * comb(n_faithful, rest // rep.zeta)
    return total


def irreducible_map_table(p: int, r: int) -> pd.DataFrame:
    """One row per isomorphism class of group Z_p^d x|_psi D_2r with psi irreducible."""
    p, r = validate_pr(p, r)
    allowed = set(allowed_classes(p, r))
    seen = set()
    rows = []
    for cls in enumerate_irr(p, r):
        if cls in seen:
            continue
        orbit = aut_orbit(cls, p, r)
        seen |= orbit
        members = sorted(orbit, key=lambda c: class_index(c, p))
        d = cls.degree
        if cls.is_linear:
            dihedral = cls.sign_a == -1 and cls.sign_b == -1
            group = f"D_{2 * p * r}" if dihedral else (
                f"Z_{p} x D_{2 * r}" if cls.is_trivial else f"Z_{p} x|_{cls.gamma_name} D_{2 * r}"
            )
            graph = f"C*({p},{r},0,{-1 if dihedral else 1})"
        else:
            group = f"Z_{p}^{d} x| D_{2 * r}"
            graph = f"C({p},{r},{d - 1})"
        rows.append(
            {
                "classes": ", ".join(c.signature for c in members),
                "degree": d,
                "group": group,
                "graph": graph,
                "t": sum(1 for c in orbit if c in allowed),
            }
        )
    return pd.DataFrame(rows, columns=["classes", "degree", "group", "graph", "t"])


def count_irreducible_maps(p: int, r: int) -> int:
    p, r = validate_pr(p, r)
    return int(irreducible_map_table(p, r)["t"].sum())


def entries_frame(entries: Sequence[CensusEntry]) -> pd.DataFrame:
    cols = ["p", "r", "s", "delta", "classes", "group_order", "v", "e", "f", "chi", "graph", "brute", "decomp"]
    rows = []
    for e in entries:
        row = {"p": e.p, "r": e.r, "s": e.s, "delta": e.delta, "classes": "+".join(e.classes), "group_order": e.group_order}
        row.update({k: e.counts.get(k) for k in ("v", "e", "f", "chi")})
        row.update(e.verified)
        rows.append(row)
    return pd.DataFrame(rows, columns=cols)


# Fan-out


def _run_cell(cell: Cell, options: CensusOptions) -> List[CensusEntry]:
    if cell.s == 0:
        return classify_augmented(cell.p, cell.r, options)
    return classify(cell.p, cell.r, cell.s, options)


def run_cells(
    cells: Sequence[Cell],
    options: Optional[CensusOptions] = None,
    jobs: int = 1,
    out_dir: Optional[Path] = None,
    registry=None,
) -> Dict[Cell, List[CensusEntry]]:
    """Classify independent cells, optionally in a process pool, writing one file per cell."""
    from .store import write_census

    options = options or CensusOptions()
    cells = list(cells)
    if jobs < 1:
        raise ParameterDomainError(f"jobs={jobs} must be at least 1")
    if jobs == 1 or len(cells) <= 1:
        results = [_run_cell(c, options) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, cells, [options] * len(cells)))
    out: Dict[Cell, List[CensusEntry]] = {}
    for cell, entries in zip(cells, results):
        out[cell] = entries
        path = None
        if out_dir is not None:
            path = write_census(
                entries, Path(out_dir) / f"census_p{cell.p}_r{cell.r}_s{cell.s}.json",
                p=cell.p, r=cell.r, s=cell.s, levels=options.levels(),
            )
        if registry is not None:
            registry.log_run(p=cell.p, r=cell.r, s=cell.s, entries=len(entries), levels=options.levels(), output=path)
        LOGGER.info("cell (%d,%d,%d): %d entries", cell.p, cell.r, cell.s, len(entries))
    return out

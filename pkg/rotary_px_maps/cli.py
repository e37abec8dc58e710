from __future__ import annotations
import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from .algebra.dihedral_irr import (
    allowed_classes,
    aut_orbit,
    aut_stabilizer_size,
    class_index,
    enumerate_irr,
    parse_signature_list,
)
from .algebra.ffpoly import factor_x_r_minus_1, is_self_reciprocal
from .census.census import (
    Cell,
    CensusEntry,
    entries_frame,
    existence,
    graph_delta,
    irreducible_map_table,
    realize_subset,
    run_cells,
)
from .census.registry import CensusRegistry
from .census.store import write_census
from .core.config import Budgets, CensusOptions
from .core.errors import ParameterDomainError, RotaryPXError, VerificationError
from .core.params import validate_pr, validate_s
from .graphs.pxgraph import PXParams, write_edge_list
from .maps.rotamap import build_map, map_counts, maps_isomorphic, read_map_record, underlying_graph, write_map_record
from .utils.logging_utils import get_logger, set_level

LOGGER = get_logger(__name__)


@dataclass(frozen=True)
class CliConfig:
    """Validated parameters of one invocation."""

    subcommand: str
    p: Optional[int] = None
    r: Optional[int] = None
    s: Tuple[int, ...] = ()
    options: CensusOptions = field(default_factory=CensusOptions)
    out: Optional[Path] = None
    seed: Optional[int] = None


def _budgets(args: argparse.Namespace) -> Budgets:
    return Budgets(
        max_group_order=args.max_group_order,
        max_graph_vertices=args.max_graph_vertices,
        max_search_work=args.max_search_work,
    )


def config_from_args(args: argparse.Namespace) -> CliConfig:
    p = r = None
    if getattr(args, "p", None) is not None:
        p, r = validate_pr(args.p, args.r)
    s: Tuple[int, ...] = ()
    allow_large = bool(getattr(args, "allow_large_s", False))
    if getattr(args, "s", None) is not None:
        raw = args.s if isinstance(args.s, list) else [args.s]
        if args.cmd == "exists":
            # existence() checks s against r itself
            s = tuple(int(v) for v in raw)
        else:
            s = tuple(validate_s(v, r, allow_zero=True, allow_large_s=allow_large) for v in raw)
    options = CensusOptions(
        verify_graphs=bool(getattr(args, "verify_graphs", False)),
        brute=bool(getattr(args, "brute", False)),
        verify_decomposition=getattr(args, "verify_decomposition", None),
        allow_large_s=allow_large,
        budgets=_budgets(args),
        seed=args.seed if args.seed is not None else 0,
    )
    out = getattr(args, "out", None)
    return CliConfig(subcommand=args.cmd, p=p, r=r, s=s, options=options, out=out, seed=args.seed)


def _print_frame(df: pd.DataFrame) -> None:
    if df.empty:
        print("(no rows)")
    else:
        print(df.to_string(index=False))


# Subcommands


def cmd_factor(cfg: CliConfig) -> int:
    rows = []
    for poly, coset in factor_x_r_minus_1(cfg.p, cfg.r, seed=cfg.seed):
        rows.append(
            {
                "coset": coset.label(),
                "size": coset.size,
                "factor": poly.to_str(),
                "self_reciprocal": is_self_reciprocal(coset, cfg.r),
            }
        )
    print(f"x^{cfg.r} - 1 over F_{cfg.p}: {len(rows)} irreducible factors")
    _print_frame(pd.DataFrame(rows, columns=["coset", "size", "factor", "self_reciprocal"]))
    return 0


def cmd_irreps(cfg: CliConfig, orbits: bool, table: bool) -> int:
    p, r = cfg.p, cfg.r
    if table:
        _print_frame(irreducible_map_table(p, r))
        return 0
    allowed = set(allowed_classes(p, r))
    if orbits:
        seen = set()
        rows = []
        for cls in enumerate_irr(p, r):
            if cls in seen:
                continue
            orbit = aut_orbit(cls, p, r)
            seen |= orbit
            members = sorted(orbit, key=lambda c: class_index(c, p))
            rows.append(
                {
                    "orbit": ", ".join(c.signature for c in members),
                    "degree": cls.degree,
                    "size": len(orbit),
                    "stabilizer": aut_stabilizer_size(cls, p, r),
                }
            )
        _print_frame(pd.DataFrame(rows, columns=["orbit", "degree", "size", "stabilizer"]))
        return 0
    rows = [
        {
            "class": c.signature,
            "name": c.gamma_name,
            "degree": c.degree,
            "end_degree": c.end_degree,
            "faithful": c.is_faithful,
            "allowed": c in allowed,
        }
        for c in enumerate_irr(p, r)
    ]
    _print_frame(pd.DataFrame(rows, columns=["class", "name", "degree", "end_degree", "faithful", "allowed"]))
    return 0


def _summary(cell: Cell, entries: List[CensusEntry], levels: dict) -> str:
    ran = [k for k in ("graph", "brute", "decomp") if levels.get(k)]
    line = f"census p={cell.p} r={cell.r} s={cell.s}: {len(entries)} maps"
    if ran and entries:
        line += ", all verified [" + ", ".join(ran) + "]"
    return line


def cmd_census(cfg: CliConfig, args: argparse.Namespace) -> int:
    cells = [Cell(cfg.p, cfg.r, s) for s in cfg.s]
    registry = CensusRegistry(args.registry) if args.registry else None
    levels = cfg.options.levels()
    single_out = cfg.out is not None and len(cells) == 1
    if cfg.out is not None and not single_out:
        out_dir = cfg.out
    else:
        out_dir = None
    results = run_cells(
        cells,
        cfg.options,
        jobs=args.jobs,
        out_dir=out_dir,
        registry=None if single_out else registry,
    )
    if single_out:
        cell = cells[0]
        path = write_census(results[cell], cfg.out, p=cell.p, r=cell.r, s=cell.s, levels=levels)
        if registry is not None:
            registry.log_run(p=cell.p, r=cell.r, s=cell.s, entries=len(results[cell]), levels=levels, output=path)
    for cell in cells:
        print(_summary(cell, results[cell], levels))
    if args.csv:
        rows = [e for cell in cells for e in results[cell]]
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        entries_frame(rows).to_csv(args.csv, index=False)
    return 0


def cmd_exists(cfg: CliConfig) -> int:
    if len(cfg.s) != 1:
        raise ParameterDomainError("exists takes a single s")
    rep = existence(cfg.p, cfg.r, cfg.s[0])
    print(f"{'yes' if rep.exists else 'no'} (zeta={rep.zeta})")
    return 0


def cmd_construct(cfg: CliConfig, args: argparse.Namespace) -> int:
    p, r = cfg.p, cfg.r
    classes = parse_signature_list(args.classes, p, r)
    if len(set(classes)) != len(classes):
        raise ParameterDomainError(f"class list {args.classes!r} repeats a class; rotary maps need it multiplicity-free")
    allowed = set(allowed_classes(p, r))
    for c in classes:
        if c not in allowed:
            raise ParameterDomainError(f"{c.signature} ({c.gamma_name}) carries no rotary map in the (a, b) frame; use L(+,-)")
    order = {c: k for k, c in enumerate(enumerate_irr(p, r))}
    classes = sorted(classes, key=lambda c: order[c])
    pair = realize_subset(classes, p, r, cfg.options.budgets)
    counts = map_counts(pair)
    s = sum(c.degree for c in classes) - 1
    print(
        f"map {'+'.join(c.signature for c in classes)}: |G|={pair.group.order} "
        f"V={counts['V']} E={counts['E']} F={counts['F']} chi={counts['chi']}"
    )
    graph_ref = None
    if args.emit_graph:
        graph = underlying_graph(build_map(pair))
        params = PXParams(p, r, s, graph_delta(classes, s))
        graph_ref = str(write_edge_list(graph, params, args.emit_graph))
        print(f"graph written to {graph_ref}")
    if cfg.out is not None:
        path = write_map_record(pair, cfg.out, graph_ref=graph_ref)
        print(f"map written to {path}")
    return 0


def cmd_iso(cfg: CliConfig, args: argparse.Namespace) -> int:
    budgets = cfg.options.budgets
    first = read_map_record(args.first, budgets)
    second = read_map_record(args.second, budgets)
    res = maps_isomorphic(first, second)
    print("isomorphic" if res.isomorphic else f"not isomorphic ({res.reason})")
    return 0


# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--max-group-order", type=int, default=Budgets.max_group_order)
    common.add_argument("--max-graph-vertices", type=int, default=Budgets.max_graph_vertices)
    common.add_argument("--max-search-work", type=int, default=Budgets.max_search_work)
    common.add_argument("--seed", type=int, default=None, help="seed for the primitive-root search order")

    pr = argparse.ArgumentParser(add_help=False)
    pr.add_argument("--p", required=True, type=int)
    pr.add_argument("--r", required=True, type=int)

    ap = argparse.ArgumentParser(
        prog="rotary-px",
        description="Rotary maps on Praeger-Xu graphs C(p,r,s) from multiplicity-free representations of D_2r.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    sub.add_parser("factor", parents=[common, pr], help="irreducible factors of x^r - 1 over F_p")

    irr = sub.add_parser("irreps", parents=[common, pr], help="irreducible representations of D_2r over F_p")
    irr.add_argument("--orbits", action="store_true", help="group classes into Aut(D_2r)-orbits")
    irr.add_argument("--table", action="store_true", help="irreducible rotary augmented PX maps")

    cen = sub.add_parser("census", parents=[common, pr], help="classify rotary maps on C(p,r,s)")
    cen.add_argument("--s", required=True, type=int, nargs="+")
    cen.add_argument("--verify-graphs", action="store_true")
    cen.add_argument("--brute", action="store_true")
    cen.add_argument(
        "--verify-decomposition",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="decompose every built map (default: follows --verify-graphs)",
    )
    cen.add_argument("--allow-large-s", action="store_true")
    cen.add_argument("--out", type=Path, default=None, help="census file (one s) or directory (several)")
    cen.add_argument("--csv", type=Path, default=None)
    cen.add_argument("--jobs", type=int, default=1)
    cen.add_argument("--registry", type=Path, default=None)

    ex = sub.add_parser("exists", parents=[common, pr], help="existence criterion for prime r")
    ex.add_argument("--s", required=True, type=int)

    con = sub.add_parser("construct", parents=[common, pr], help="build the map of a class list")
    con.add_argument("--classes", required=True, type=str, help="e.g. 'L(+,+),R{1,3}'")
    con.add_argument("--out", type=Path, default=None, help="map record JSON")
    con.add_argument("--emit-graph", type=Path, default=None, help="edge list of the underlying graph")

    iso = sub.add_parser("iso", parents=[common], help="compare two exported maps")
    iso.add_argument("first", type=Path)
    iso.add_argument("second", type=Path)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    set_level(args.log_level)
    try:
        cfg = config_from_args(args)
        if cfg.subcommand == "factor":
            return cmd_factor(cfg)
        if cfg.subcommand == "irreps":
            return cmd_irreps(cfg, args.orbits, args.table)
        if cfg.subcommand == "census":
            return cmd_census(cfg, args)
        if cfg.subcommand == "exists":
            return cmd_exists(cfg)
        if cfg.subcommand == "construct":
            return cmd_construct(cfg, args)
        if cfg.subcommand == "iso":
            return cmd_iso(cfg, args)
        raise ParameterDomainError(f"unknown subcommand {cfg.subcommand}")
    except RotaryPXError as exc:
        print(exc.one_line(), file=sys.stderr)
        if isinstance(exc, VerificationError) and exc.report:
            print(json.dumps({"discrepancies": exc.report}, indent=2))
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

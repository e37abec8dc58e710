from pathlib import Path
import json
from dataclasses import asdict

from rotary_px_maps.census.census import Cell, classify, existence, irreducible_map_table, run_cells, worked_example_count
from rotary_px_maps.census.registry import CensusRegistry
from rotary_px_maps.core.config import CensusOptions

HERE = Path(__file__).resolve().parent
export_dir = HERE / "exports_worked_example"

P, R = 13, 7

print("\n=== Irreducible rotary maps (p=13, r=7) ===")
print(irreducible_map_table(P, R).to_string(index=False))

print("\n=== Existence by s ===")
print(json.dumps([existence(P, R, s).to_dict() for s in range(1, R)], indent=2))

print("\n=== Census vs closed form ===")
rows = []
for s in range(1, R):
    rows.append({"s": s, "maps": len(classify(P, R, s)), "closed_form": worked_example_count(P, R, s)})
print(json.dumps(rows, indent=2))

# Verified census of the small cells, written with a run registry
opts = CensusOptions(verify_graphs=True, brute=True)
registry = CensusRegistry(export_dir / "registry")
cells = [Cell(3, 4, 1), Cell(3, 5, 4), Cell(5, 3, 2)]
results = run_cells(cells, opts, out_dir=export_dir, registry=registry)
for cell, entries in results.items():
    print(f"{cell.p},{cell.r},{cell.s}: {[e.classes for e in entries]}")

print("\n=== Registry ===")
print(json.dumps([asdict(run) for run in registry.list_runs()], indent=2))

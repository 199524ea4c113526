"""Regenerates the fixture CSVs from the solver package (desk scale).

Run from the repository root:  python3 frontend/testdata/generate.py
"""

import dataclasses
from pathlib import Path

import magherm as mh
from magherm.harness import (
    ConvergenceTable,
    ExperimentSpec,
    run_convergence,
    run_observables,
    write_convergence_csv,
    write_observables_csv,
)

out = Path(__file__).resolve().parent
spec = ExperimentSpec(
    preset="gp-defocusing-driven",
    h_list=(0.02, 0.01, 0.005, 0.0025),
    T=0.5,
    n=256,
    out=out,
)
preset = spec.build_preset()
reference = mh.reference_solution(
    preset.model, preset.u0, spec.T, h_ref=min(spec.h_list) / 10.0
)
rows = []
for method in ("strang", "bm", "mhc", "mhbm", "mhk"):
    table = run_convergence(
        dataclasses.replace(spec, method=method), reference=reference
    )
    rows.extend(table.rows)
write_convergence_csv(ConvergenceTable(rows=rows), out / "convergence.csv")
records = run_observables(dataclasses.replace(spec, method="mhc"), h=0.0025)
write_observables_csv(records, out / "observables.csv")
write_observables_csv(records, out / "observables_deltas.csv", deltas=True)
print("fixtures written to", out)

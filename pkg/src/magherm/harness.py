"""Experiment harness: convergence studies, observable tracking, CSV output.

Every run is deterministic for a given spec and seed.  Output schemas are
pinned: ``convergence.csv`` has header ``method,h,error``; ``observables.csv``
and ``observables_deltas.csv`` have header
``t,norm,momentum,energy,energy_linear``.  All floats are printed with 17
significant digits.  Fitted slopes, tool versions and the echoed spec land in
``manifest.json``.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .backends import ExpBackend
from .grid import WaveField, l2_norm
from .observables import ObservableRecord, record
from .presets import MATRIX_PRESETS, PRESET_NAMES, Preset, make_preset
from .stepper import (
    NonFiniteStateError,
    StepConfig,
    StepFailure,
    evolve,
    reference_solution,
)

__all__ = [
    "ExperimentSpec",
    "ConvergenceRow",
    "ConvergenceTable",
    "run_convergence",
    "run_observables",
    "parse_cli",
    "run_experiment",
]

METHODS = ("strang", "bm", "mhc", "mhbm", "mhk", "dense")
_ITERATED = {"mhc": "chinchen", "mhbm": "bm", "mhk": "lanczos", "dense": "dense"}

# Figure-style default abscissae: T/N for N = 10, 32, 100, 317, 1000
DEFAULT_H_LIST = (0.1, 0.03125, 0.01, 0.0031546, 0.001)
_MATRIX_H_LIST = (0.04, 0.02, 0.01, 0.005)

# errors at or above the state norm mean the run lost every digit
_DIVERGENCE_FACTOR = 1.0


@dataclass
class ExperimentSpec:
    """Everything one experiment needs; mirrors the CLI flags one-to-one."""

    preset: str
    method: str = "mhc"
    h_list: tuple[float, ...] = ()
    T: float = 1.0
    K: int | None = None
    delta: float | None = None
    seed: int = 0
    n: int | None = None
    strang_first: bool | None = None
    lanczos_tol: float = 1e-8
    lanczos_m_max: int = 128
    out: Path = Path("runs")

    def __post_init__(self) -> None:
        if self.preset not in PRESET_NAMES:
            raise ValueError(
                f"unknown preset {self.preset!r}; available: {', '.join(PRESET_NAMES)}"
            )
        if self.method not in METHODS:
            raise ValueError(
                f"unknown method {self.method!r}; available: {', '.join(METHODS)}"
            )
        if not self.h_list:
            self.h_list = (
                _MATRIX_H_LIST if self.preset in MATRIX_PRESETS else DEFAULT_H_LIST
            )
        self.h_list = tuple(float(h) for h in self.h_list)
        if any(h <= 0 for h in self.h_list):
            raise ValueError(f"step sizes must be positive, got {self.h_list}")
        if sorted(self.h_list, reverse=True) != list(self.h_list):
            raise ValueError(f"h_list must be decreasing, got {self.h_list}")
        if not self.T > 0:
            raise ValueError(f"final time must be positive, got T={self.T}")
        self.out = Path(self.out)

    @property
    def is_matrix(self) -> bool:
        return self.preset in MATRIX_PRESETS

    def resolved_k(self) -> int:
        if self.K is not None:
            return self.K
        # without the spectral Strang initialiser a fourth pass is needed
        # for fourth order
        return 4 if self.is_matrix else 3

    def resolved_strang_first(self) -> bool:
        if self.is_matrix:
            return False
        return True if self.strang_first is None else self.strang_first

    def build_preset(self) -> Preset:
        return make_preset(self.preset, n=self.n, seed=self.seed)

    def step_config(self, h: float) -> StepConfig:
        method = self.method
        if method in ("strang", "bm"):
            raise ValueError(f"{method!r} is a direct baseline, not an iterated scheme")
        if self.is_matrix and method in ("mhc", "mhbm"):
            raise ValueError(f"{method!r} needs a spectral preset")
        backend = ExpBackend(
            _ITERATED[method], tol=self.lanczos_tol, m_max=self.lanczos_m_max
        )
        return StepConfig(
            h=h,
            K=self.resolved_k(),
            delta=self.delta,
            backend=backend,
            strang_first=self.resolved_strang_first(),
        )


@dataclass(frozen=True)
class ConvergenceRow:
    method: str
    h: float
    error: float


@dataclass
class ConvergenceTable:
    rows: list[ConvergenceRow]
    slopes: dict[str, dict[str, float]] = field(default_factory=dict)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def fit_slope(h_values: np.ndarray, errors: np.ndarray) -> float:
    """Least-squares log-log slope over the finite rows."""
    mask = np.isfinite(errors) & (errors > 0)
    if mask.sum() < 2:
        return float("nan")
    coeffs = np.polyfit(np.log10(h_values[mask]), np.log10(errors[mask]), 1)
    return float(coeffs[0])


def tail_slope(h_values: np.ndarray, errors: np.ndarray, points: int = 3) -> float:
    """Slope over the smallest valid step sizes (the asymptotic regime)."""
    mask = np.isfinite(errors) & (errors > 0)
    h_valid, e_valid = h_values[mask], errors[mask]
    if h_valid.size < 2:
        return float("nan")
    order = np.argsort(h_valid)[: min(points, h_valid.size)]
    return fit_slope(h_valid[order], e_valid[order])


def _run_method(
    preset: Preset, spec: ExperimentSpec, method: str, n_steps: int
) -> WaveField | None:
    """Final state of one run, or None when the run diverged."""
    method_spec = dataclasses.replace(spec, method=method)
    try:
        if method in ("strang", "bm"):
            from .backends import blanes_moan_step, strang_step

            step = strang_step if method == "strang" else blanes_moan_step
            h = spec.T / n_steps
            u = preset.u0
            for i in range(n_steps):
                u = step(u, i * h, h, preset.model)
            return u
        cfg = method_spec.step_config(spec.T / n_steps)
        return evolve(
            preset.u0, spec.T, n_steps, cfg, preset.model, record_observables=False
        ).final
    except (NonFiniteStateError, StepFailure, FloatingPointError, ValueError) as exc:
        if isinstance(exc, ValueError) and "needs a spectral preset" in str(exc):
            raise
        return None


def run_convergence(
    spec: ExperimentSpec, reference: WaveField | None = None
) -> ConvergenceTable:
    """Errors against the tiny-step reference for every h in the spec."""
    preset = spec.build_preset()
    if reference is None:
        h_ref = min(spec.h_list) / 10.0
        reference = reference_solution(preset.model, preset.u0, spec.T, h_ref)
    scale = l2_norm(preset.u0)
    weight = np.sqrt(preset.u0.weight)

    rows: list[ConvergenceRow] = []
    for h in spec.h_list:
        n_steps = max(1, round(spec.T / h))
        final = _run_method(preset, spec, spec.method, n_steps)
        if final is None:
            error = float("nan")
        else:
            error = float(np.linalg.norm(final.values - reference.values) * weight)
            if not np.isfinite(error) or error >= _DIVERGENCE_FACTOR * scale:
                error = float("nan")
        rows.append(ConvergenceRow(spec.method, spec.T / n_steps, error))

    h_arr = np.array([r.h for r in rows])
    e_arr = np.array([r.error for r in rows])
    slopes = {
        spec.method: {
            "all_points": fit_slope(h_arr, e_arr),
            "asymptotic": tail_slope(h_arr, e_arr),
        }
    }
    return ConvergenceTable(rows=rows, slopes=slopes)


def write_convergence_csv(table: ConvergenceTable, path: Path) -> None:
    lines = ["method,h,error"]
    for r in table.rows:
        lines.append(f"{r.method},{_fmt(r.h)},{_fmt(r.error)}")
    path.write_text("\n".join(lines) + "\n")


def run_observables(
    spec: ExperimentSpec, h: float | None = None
) -> list[ObservableRecord]:
    """Track the conserved quantities along one run at step size h."""
    preset = spec.build_preset()
    h = h if h is not None else min(spec.h_list)
    n_steps = max(1, round(spec.T / h))
    h = spec.T / n_steps
    if spec.method in ("strang", "bm"):
        from .backends import blanes_moan_step, strang_step

        step = strang_step if spec.method == "strang" else blanes_moan_step
        u = preset.u0
        records = [record(u, preset.model, 0.0)]
        for i in range(n_steps):
            u = step(u, i * h, h, preset.model)
            records.append(record(u, preset.model, (i + 1) * h))
        return records
    cfg = spec.step_config(h)
    traj = evolve(preset.u0, spec.T, n_steps, cfg, preset.model)
    return traj.observables


def write_observables_csv(
    records: list[ObservableRecord], path: Path, deltas: bool = False
) -> None:
    base = records[0]
    lines = ["t,norm,momentum,energy,energy_linear"]
    for r in records:
        if deltas:
            row = (
                r.t,
                r.norm - base.norm,
                r.momentum - base.momentum,
                r.energy - base.energy,
                r.energy_linear - base.energy_linear,
            )
        else:
            row = (r.t, r.norm, r.momentum, r.energy, r.energy_linear)
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _spec_to_json(spec: ExperimentSpec) -> dict:
    data = dataclasses.asdict(spec)
    data["out"] = str(spec.out)
    data["h_list"] = list(spec.h_list)
    return data


def run_experiment(spec: ExperimentSpec) -> dict:
    """Convergence sweep plus observable tracking; writes the CSVs and manifest."""
    spec.out.mkdir(parents=True, exist_ok=True)
    table = run_convergence(spec)
    write_convergence_csv(table, spec.out / "convergence.csv")
    records = run_observables(spec)
    write_observables_csv(records, spec.out / "observables.csv")
    write_observables_csv(records, spec.out / "observables_deltas.csv", deltas=True)
    manifest = {
        "spec": _spec_to_json(spec),
        "slopes": table.slopes,
        "versions": {
            "magherm": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
    }
    (spec.out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def parse_cli(argv: list[str]) -> ExperimentSpec:
    """Turn CLI flags into an ExperimentSpec; a JSON config supplies defaults."""
    import argparse

    parser = argparse.ArgumentParser(
        prog="magherm",
        description=(
            "Convergence and conservation experiments for the "
            "iterated-linearisation Magnus-Hermite solver."
        ),
    )
    parser.add_argument("--preset", choices=PRESET_NAMES, help="experiment setup")
    parser.add_argument("--backend", choices=METHODS, dest="method", help="time stepper")
    parser.add_argument("--h", type=float, help="single step size")
    parser.add_argument(
        "--h-list", type=str, help="comma-separated decreasing step sizes"
    )
    parser.add_argument("--steps", type=int, help="number of steps (alternative to --h)")
    parser.add_argument("--T", type=float, help="final time (default 1)")
    parser.add_argument("--K", type=int, help="linearisation iterations per step")
    parser.add_argument("--delta", type=float, help="early-exit update threshold")
    parser.add_argument("--seed", type=int, help="seed for the matrix presets")
    parser.add_argument("--n", type=int, help="grid points / matrix size")
    parser.add_argument("--out", type=str, help="output directory")
    parser.add_argument(
        "--strang-first",
        choices=("on", "off"),
        help="start each step with a nonlinear Strang iterate",
    )
    parser.add_argument("--lanczos-tol", type=float, help="Krylov accuracy")
    parser.add_argument("--config", type=str, help="JSON file mirroring these flags")
    args = parser.parse_args(argv)

    settings: dict = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text())
        known = {
            "preset", "backend", "h", "h_list", "steps", "T", "K", "delta",
            "seed", "n", "out", "strang_first", "lanczos_tol",
        }
        unknown = set(raw) - known
        if unknown:
            parser.error(f"unknown config keys: {sorted(unknown)}")
        settings.update(raw)

    for key in ("preset", "T", "K", "delta", "seed", "n", "out"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    if args.method is not None:
        settings["backend"] = args.method
    if args.h is not None:
        settings["h"] = args.h
    if args.h_list is not None:
        settings["h_list"] = [float(v) for v in args.h_list.split(",") if v]
    if args.steps is not None:
        settings["steps"] = args.steps
    if args.strang_first is not None:
        settings["strang_first"] = args.strang_first
    if args.lanczos_tol is not None:
        settings["lanczos_tol"] = args.lanczos_tol

    if "preset" not in settings:
        parser.error("--preset is required (directly or through --config)")

    T = float(settings.get("T", 1.0))
    h_list: tuple[float, ...] = ()
    if "h_list" in settings:
        h_list = tuple(float(v) for v in settings["h_list"])
    elif "h" in settings:
        h_list = (float(settings["h"]),)
    elif "steps" in settings:
        h_list = (T / int(settings["steps"]),)

    strang_first = settings.get("strang_first")
    if isinstance(strang_first, str):
        strang_first = strang_first == "on"

    try:
        return ExperimentSpec(
            preset=settings["preset"],
            method=settings.get("backend", "mhc"),
            h_list=h_list,
            T=T,
            K=settings.get("K"),
            delta=settings.get("delta"),
            seed=int(settings.get("seed", 0)),
            n=settings.get("n"),
            strang_first=strang_first,
            lanczos_tol=float(settings.get("lanczos_tol", 1e-8)),
            out=Path(settings.get("out", "runs")),
        )
    except ValueError as exc:
        parser.error(str(exc))

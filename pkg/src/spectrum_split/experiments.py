"""Parameter sweeps that regenerate the figures and comparisons as tables.

Each sweep writes a CSV table plus a JSON sidecar (``<csv>.json``) holding
the full sweep specification and seed, from which the table can be
regenerated byte for byte. Every Monte-Carlo cell uses the same master seed,
so neighbouring cells share random numbers and their differences are
low-noise.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import __version__, analytic, lattice
from .errors import InsufficientTruncationError
from .params import NetworkParams
from .simulator import FadingModel, SimConfig, solve_capacity

FIG2_COLUMNS = (
    "n",
    "util",
    "analytic_lambda",
    "mc_inf_lambda",
    "mc_inf_stderr",
    "mc_20db_lambda",
    "mc_20db_stderr",
)
FIG1_COLUMNS = ("alpha", "b_star", "density_constant")
DS_COLUMNS = ("alpha", "util", "n", "fh_lambda", "ds_lambda", "fh_over_ds")
BOUNDS_COLUMNS = (
    "alpha",
    "b_star",
    "epsilon",
    "det_upper_lambda",
    "lattice_lambda",
    "lattice_spacing",
    "random_lambda",
    "upper_over_lattice",
    "random_over_upper",
)

NOISY_SNR_DB = 20.0
MAX_N = 256
# lattice window is doubled from the default up to this half-width
MAX_TRUNCATION = 1024


class Figure(str, enum.Enum):
    FIG1 = "fig1"
    FIG2 = "fig2"
    DS_COMPARE = "ds"
    BOUNDS_COMPARE = "bounds"


@dataclass(frozen=True)
class SweepGrid:
    alphas: tuple = (4.0,)
    utils: tuple = (0.25, 0.5)
    n_min: int = 1
    n_max: int = 20
    d: float = 10.0
    epsilon: float = 0.1
    fading: str = FadingModel.PATH_LOSS_ONLY.value

    def __post_init__(self):
        if not self.alphas or not self.utils:
            raise ValueError("sweep grid must not be empty")
        if not 1 <= self.n_min <= self.n_max <= MAX_N:
            raise ValueError(f"n range must satisfy 1 <= n_min <= n_max <= {MAX_N}")
        if any(a <= 2 for a in self.alphas):
            raise ValueError("alpha must exceed 2")
        if any(u <= 0 for u in self.utils):
            raise ValueError("util must be positive")
        FadingModel(self.fading)

    @property
    def n_values(self) -> range:
        return range(self.n_min, self.n_max + 1)


@dataclass(frozen=True)
class SweepSpec:
    figure: Figure
    grid: SweepGrid = field(default_factory=SweepGrid)
    sim: SimConfig = field(default_factory=SimConfig)
    output_path: Optional[str] = None
    monte_carlo: bool = True

    def to_dict(self) -> dict:
        return {
            "figure": Figure(self.figure).value,
            "grid": asdict(self.grid),
            "sim": self.sim.to_dict(),
            "output_path": self.output_path,
            "monte_carlo": self.monte_carlo,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepSpec":
        grid = dict(raw.get("grid", {}))
        for key in ("alphas", "utils"):
            if key in grid:
                grid[key] = tuple(float(v) for v in grid[key])
        return cls(
            figure=Figure(raw["figure"]),
            grid=SweepGrid(**grid),
            sim=SimConfig(**raw.get("sim", {})),
            output_path=raw.get("output_path"),
            monte_carlo=bool(raw.get("monte_carlo", True)),
        )


def run_fig1(alpha_grid: Iterable[float]) -> list[dict]:
    """Optimal spectral efficiency and density constant versus alpha."""
    rows = []
    for alpha in alpha_grid:
        b_star = analytic.optimal_spectral_efficiency(alpha)
        rows.append(
            {
                "alpha": float(alpha),
                "b_star": b_star,
                "density_constant": analytic.efficiency_objective(b_star, alpha),
            }
        )
    return rows


def _mc_cell(params: NetworkParams, n: int, spec: SweepSpec):
    result = solve_capacity(params, n, spec.grid.epsilon, FadingModel(spec.grid.fading), spec.sim)
    return result.lam, result.stderr


def run_fig2(spec: SweepSpec) -> list[dict]:
    """Density versus band count for each utilization: the first-order
    interference-limited formula, and Monte-Carlo at infinite SNR and 20 dB.

    Monte-Carlo columns are None when ``spec.monte_carlo`` is false.
    """
    g = spec.grid
    rows = []
    for alpha in g.alphas:
        for util in g.utils:
            clean = NetworkParams.from_util(alpha=alpha, d=g.d, util=util)
            noisy = NetworkParams.from_util(alpha=alpha, d=g.d, util=util, snr_db=NOISY_SNR_DB)
            for n in g.n_values:
                row = {
                    "n": n,
                    "util": float(util),
                    "analytic_lambda": analytic.capacity_interference_limited(clean, n, g.epsilon).lam,
                    "mc_inf_lambda": None,
                    "mc_inf_stderr": None,
                    "mc_20db_lambda": None,
                    "mc_20db_stderr": None,
                }
                if spec.monte_carlo:
                    row["mc_inf_lambda"], row["mc_inf_stderr"] = _mc_cell(clean, n, spec)
                    row["mc_20db_lambda"], row["mc_20db_stderr"] = _mc_cell(noisy, n, spec)
                rows.append(row)
    return rows


def run_ds_compare(spec: SweepSpec) -> list[dict]:
    """Frequency-split versus direct-sequence densities over the band count."""
    g = spec.grid
    rows = []
    for alpha in g.alphas:
        for util in g.utils:
            params = NetworkParams.from_util(alpha=alpha, d=g.d, util=util)
            for n in g.n_values:
                fh = analytic.capacity_interference_limited(params, n, g.epsilon).lam
                ds = analytic.ds_capacity(params, n, g.epsilon).lam
                rows.append(
                    {
                        "alpha": float(alpha),
                        "util": float(util),
                        "n": n,
                        "fh_lambda": fh,
                        "ds_lambda": ds,
                        "fh_over_ds": fh / ds,
                    }
                )
    return rows


def _lattice_density(params: NetworkParams, b: float):
    cells = lattice.DEFAULT_TRUNCATION
    while True:
        try:
            return lattice.lattice_max_density(params, b, truncation_cells=cells)
        except InsufficientTruncationError:
            if cells >= MAX_TRUNCATION:
                raise
            cells *= 2


def run_bounds_compare(spec: SweepSpec) -> list[dict]:
    """Deterministic upper bound, square-lattice density and random density
    with a single band at the optimal spectral efficiency."""
    g = spec.grid
    rows = []
    for alpha in g.alphas:
        b_star = analytic.optimal_spectral_efficiency(alpha)
        params = NetworkParams(alpha=alpha, d=g.d)
        upper = lattice.det_upper_bound(params, b_star).lam
        lat = _lattice_density(params, b_star)
        ran = lattice.random_density(params, b_star, g.epsilon).lam
        rows.append(
            {
                "alpha": float(alpha),
                "b_star": b_star,
                "epsilon": g.epsilon,
                "det_upper_lambda": upper,
                "lattice_lambda": lat.lam,
                "lattice_spacing": lat.info["spacing"],
                "random_lambda": ran,
                "upper_over_lattice": upper / lat.lam,
                "random_over_upper": ran / upper,
            }
        )
    return rows


COLUMNS = {
    Figure.FIG1: FIG1_COLUMNS,
    Figure.FIG2: FIG2_COLUMNS,
    Figure.DS_COMPARE: DS_COLUMNS,
    Figure.BOUNDS_COMPARE: BOUNDS_COLUMNS,
}


def run_sweep(spec: SweepSpec) -> list[dict]:
    figure = Figure(spec.figure)
    if figure is Figure.FIG1:
        return run_fig1(spec.grid.alphas)
    if figure is Figure.FIG2:
        return run_fig2(spec)
    if figure is Figure.DS_COMPARE:
        return run_ds_compare(spec)
    return run_bounds_compare(spec)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def table_to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def sidecar(spec: SweepSpec) -> dict:
    return {
        "tool": "spectrum_split",
        "version": __version__,
        "seed": spec.sim.master_seed,
        "columns": list(COLUMNS[Figure(spec.figure)]),
        "spec": spec.to_dict(),
    }


def sidecar_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + ".json")


def write_sweep(spec: SweepSpec, rows: Sequence[dict], path=None) -> Path:
    """Write the CSV table and its JSON sidecar; returns the CSV path."""
    path = path or spec.output_path
    if path is None:
        raise ValueError("no output path given")
    path = Path(path)
    spec = replace(spec, output_path=str(path))
    path.write_text(table_to_csv(rows, COLUMNS[Figure(spec.figure)]))
    sidecar_path(path).write_text(json.dumps(sidecar(spec), indent=2, sort_keys=True) + "\n")
    return path


def load_sidecar(path) -> SweepSpec:
    raw = json.loads(Path(path).read_text())
    return SweepSpec.from_dict(raw["spec"] if "spec" in raw else raw)


def argmax_n(rows: Sequence[dict], column: str, util: float) -> int:
    """Band count maximizing ``column`` among rows with the given utilization."""
    best = max(
        (r for r in rows if math.isclose(r["util"], util) and r[column] is not None),
        key=lambda r: r[column],
    )
    return best["n"]

"""Entanglement dynamics under damping: scenario runner, onset detection and output."""
from __future__ import annotations

import csv
import dataclasses
import enum
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .damping import damp_array
from .measures import fill_pure, gmc_x, is_x_form
from .roof import (
    BoundKind,
    RoofOptions,
    excitation_phase,
    fill_mixed,
    ghz_w_symmetry_generators,
    qubit_permutation,
)
from .states import Kind, StateFamily, ghz_w_mixture, make_state
from .tensor import DensityMatrix, PureState

OUTLIER_FRACTION = 0.2
DEFAULT_ZERO_TOL = 1e-4
PURITY_TOL = 1e-12
BISECTION_T_MAX = 10.0
BISECTION_TOL = 1e-10

CSV_HEADER = ["t_over_tau", "value", "bound_kind", "converged_fraction"]


class Measure(enum.Enum):
    FILL_ROOF = "fill-roof"
    GMC_X_AUTO = "gmc-x-auto"


def default_time_grid(t_max: float = 3.0, dt: float = 0.05) -> List[float]:
    n = int(round(t_max / dt))
    return [round(i * dt, 12) for i in range(n + 1)]


@dataclass
class Scenario:
    family: StateFamily
    time_grid: List[float] = field(default_factory=default_time_grid)
    measure: Measure = Measure.FILL_ROOF
    roof: RoofOptions = field(default_factory=RoofOptions)
    # twirl witnesses over the family's permutation and phase symmetries
    use_symmetry: bool = True
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None

    def __post_init__(self):
        grid = list(self.time_grid)
        if not grid:
            raise ValueError("time grid is empty")
        if any(t < 0 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("time grid must be non-negative and strictly ascending")
        self.time_grid = grid
        self.measure = Measure(self.measure)

    @property
    def theta(self) -> float:
        return self.family.theta


@dataclass(frozen=True)
class DynamicsRecord:
    t_over_tau: float
    value: float
    bound_kind: BoundKind
    converged_fraction: float

    @property
    def outlier(self) -> bool:
        return self.converged_fraction < OUTLIER_FRACTION


@dataclass(frozen=True)
class Onset:
    """First time after which the measure stays at zero; ``None`` if never."""

    t_over_tau: Optional[float]
    bound_kind: BoundKind

    @property
    def exists(self) -> bool:
        return self.t_over_tau is not None


def family_symmetry_generators(kind: Kind) -> List[np.ndarray]:
    """Permutation and local-phase unitaries leaving the family's initial
    state invariant. Local damping commutes with all of them, so they stay
    symmetries of the evolved state."""
    swap12 = qubit_permutation([0, 2, 1])
    swap01 = qubit_permutation([1, 0, 2])
    if kind is Kind.GHZ or kind is Kind.W:
        return ghz_w_symmetry_generators()
    if kind is Kind.G_THETA:
        s, si = np.diag([1, 1j]), np.diag([1, -1j])
        return [swap01, swap12, excitation_phase(3, 3), np.kron(np.kron(s, si), np.eye(2))]
    if kind in (Kind.W_THETA, Kind.WBAR_THETA):
        return [swap12, excitation_phase(3, 4)]
    if kind is Kind.SIGMA_THETA:
        return [swap01, swap12, excitation_phase(3, 2)]
    raise ValueError(f"no symmetry table for {kind}")


def _grid_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def evolve(psi0: PureState, t_over_tau: float) -> np.ndarray:
    rho0 = np.outer(psi0.amplitudes, psi0.amplitudes.conj())
    return damp_array(rho0, t_over_tau)


def evaluate_point(scenario: Scenario, rho: np.ndarray, index: int) -> DynamicsRecord:
    t = scenario.time_grid[index]
    if scenario.measure is Measure.GMC_X_AUTO:
        if not is_x_form(rho):
            raise ValueError(
                f"state of family {scenario.family.kind.value} is not X-form at t/tau={t}; "
                "use the fill-roof measure"
            )
        return DynamicsRecord(t, gmc_x(rho), BoundKind.EXACT_ANALYTIC, 1.0)
    purity = float(np.einsum("ij,ji->", rho, rho).real)
    if purity > 1 - PURITY_TOL:
        w, v = np.linalg.eigh(rho)
        return DynamicsRecord(t, fill_pure(PureState.from_vector(v[:, -1])), BoundKind.EXACT_ANALYTIC, 1.0)
    opts = dataclasses.replace(scenario.roof, seed=_grid_seed(scenario.roof.seed, index))
    if scenario.use_symmetry and opts.symmetry_generators is None:
        opts.symmetry_generators = family_symmetry_generators(scenario.family.kind)
    res = fill_mixed(DensityMatrix(rho), opts)
    return DynamicsRecord(t, res.value, res.bound_kind, res.converged_fraction)


def run_dynamics(scenario: Scenario) -> List[DynamicsRecord]:
    """Evolve the family's initial state over the grid and evaluate the measure at each time."""
    psi0 = make_state(scenario.family)
    records = []
    for i, t in enumerate(scenario.time_grid):
        records.append(evaluate_point(scenario, evolve(psi0, t), i))
    if scenario.csv_path:
        write_csv(records, scenario.csv_path)
    if scenario.svg_path:
        write_svg_plot(records, scenario.svg_path)
    return records


def _gmc_at(psi0: PureState, t: float) -> float:
    rho = evolve(psi0, t)
    if not is_x_form(rho):
        raise ValueError("state is not X-form; use the fill-roof measure")
    return gmc_x(rho)


def find_esd_onset(
    scenario: Scenario,
    zero_tol: float = DEFAULT_ZERO_TOL,
    records: Optional[Sequence[DynamicsRecord]] = None,
) -> Onset:
    """Locate entanglement sudden death.

    GMC path: bisection on ``t/tau`` in [0, 10] for the first exact zero.
    Fill path: the first grid time from which every value is below
    ``zero_tol``. A lower bound cannot certify zero, so that answer is
    HEURISTIC. ``records`` may be passed to reuse an existing run.
    """
    if scenario.measure is Measure.GMC_X_AUTO:
        psi0 = make_state(scenario.family)
        if _gmc_at(psi0, BISECTION_T_MAX) > 0:
            return Onset(None, BoundKind.EXACT_ANALYTIC)
        if _gmc_at(psi0, 0.0) == 0:
            return Onset(0.0, BoundKind.EXACT_ANALYTIC)
        lo, hi = 0.0, BISECTION_T_MAX
        while hi - lo > BISECTION_TOL:
            mid = 0.5 * (lo + hi)
            if _gmc_at(psi0, mid) > 0:
                lo = mid
            else:
                hi = mid
        return Onset(0.5 * (lo + hi), BoundKind.EXACT_ANALYTIC)

    records = run_dynamics(scenario) if records is None else list(records)
    if records[-1].value > zero_tol:
        return Onset(None, BoundKind.HEURISTIC)
    onset = records[-1].t_over_tau
    for rec in reversed(records):
        if rec.value >= zero_tol:
            break
        onset = rec.t_over_tau
    return Onset(onset, BoundKind.HEURISTIC)


def analytic_ghz_w_fill(s: float) -> float:
    return (5 * s * s - 4 * s + 8) / 9


def ghz_w_scan(s_grid: Sequence[float], roof: Optional[RoofOptions] = None):
    """Numeric Fill of ``s|G><G| + (1-s)|W><W|`` next to ``(5s^2 - 4s + 8)/9``.

    Returns a list of ``(s, numeric, analytic)``.
    """
    roof = RoofOptions() if roof is None else roof
    out = []
    for s in s_grid:
        if not 0.0 <= s <= 1.0:
            raise ValueError("s must lie in [0, 1]")
        res = fill_mixed(ghz_w_mixture(s), roof)
        out.append((float(s), res.value, analytic_ghz_w_fill(s)))
    return out


# -- output -------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_csv(records: Sequence[DynamicsRecord], path) -> None:
    """Write records with a fixed header, 12 significant digits and LF endings."""
    if not records:
        raise ValueError("no records to write")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([_fmt(r.t_over_tau), _fmt(r.value), r.bound_kind.value, _fmt(r.converged_fraction)])


def read_csv(path) -> List[DynamicsRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        DynamicsRecord(
            float(r["t_over_tau"]),
            float(r["value"]),
            BoundKind(r["bound_kind"]),
            float(r["converged_fraction"]),
        )
        for r in rows
    ]


def plot_points(records: Sequence[DynamicsRecord], y_scale: str = "linear"):
    """``(t, value, outlier)`` triples that a plot on ``y_scale`` can show."""
    return [(r.t_over_tau, r.value, r.outlier) for r in records
            if y_scale == "linear" or r.value > 0]


def write_svg_plot(records, path, y_scale: str = "linear", labels=None, title=None) -> None:
    """Line plot of one or more record series.

    ``records`` is either a list of records or a list of such lists (one per
    series). On a log scale non-positive values are dropped, which renders
    sudden death as the curve ending. Low-agreement points are drawn hollow.
    """
    if y_scale not in ("linear", "log"):
        raise ValueError("y_scale must be 'linear' or 'log'")
    if not records:
        raise ValueError("no records to plot")
    series = [records] if isinstance(records[0], DynamicsRecord) else list(records)
    if any(not s for s in series):
        raise ValueError("empty series")
    labels = labels or [None] * len(series)

    import matplotlib

    matplotlib.use("agg")
    import matplotlib.pyplot as plt

    # labels stay <text> elements and ids are stable, so the file is reproducible
    style = {"svg.fonttype": "none", "svg.hashsalt": "tripartite-esd"}
    with matplotlib.rc_context(style):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        for recs, label in zip(series, labels):
            pts = plot_points(recs, y_scale)
            if not pts:
                continue
            line, = ax.plot([p[0] for p in pts], [p[1] for p in pts], "-", label=label)
            bad = [(p[0], p[1]) for p in pts if p[2]]
            if bad:
                ax.plot(*zip(*bad), "o", mfc="none", color=line.get_color())
        ax.set_yscale(y_scale)
        ax.set_xlabel("t/tau")
        ax.set_ylabel("entanglement")
        if title:
            ax.set_title(title)
        if any(labels):
            ax.legend()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

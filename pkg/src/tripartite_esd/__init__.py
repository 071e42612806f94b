"""Genuine tripartite entanglement of three qubits under local amplitude damping.

Modules: ``tensor`` (state types and linear algebra), ``states`` (initial
families), ``damping`` (the channel), ``measures`` (closed-form Fill, GMC and
two-qubit concurrence), ``roof`` (convex-roof Fill of mixed states) and
``experiments`` (dynamics, sudden-death onset, CSV/SVG output).
"""
from .tensor import (
    DensityMatrix,
    HermitianOperator,
    NumericalConsistencyError,
    PureState,
    partial_trace,
    tensor_product,
)
from .states import Kind, StateFamily, ghz_w_mixture, make_state, mix
from .damping import DampingParams, apply_amplitude_damping, purified_evolution
from .measures import (
    esd_onset_g_theta,
    fill_pure,
    gmc_g_theta,
    gmc_x,
    is_x_form,
    wootters_concurrence,
)
from .roof import BoundKind, MeasureResult, RoofOptions, decomposition_upper_bound, fill_mixed, twirl
from .experiments import (
    DynamicsRecord,
    Measure,
    Scenario,
    find_esd_onset,
    ghz_w_scan,
    run_dynamics,
    write_csv,
    write_svg_plot,
)

__all__ = [
    "BoundKind",
    "DampingParams",
    "DensityMatrix",
    "DynamicsRecord",
    "HermitianOperator",
    "Kind",
    "Measure",
    "MeasureResult",
    "NumericalConsistencyError",
    "PureState",
    "RoofOptions",
    "Scenario",
    "StateFamily",
    "apply_amplitude_damping",
    "decomposition_upper_bound",
    "esd_onset_g_theta",
    "fill_mixed",
    "fill_pure",
    "find_esd_onset",
    "ghz_w_mixture",
    "ghz_w_scan",
    "gmc_g_theta",
    "gmc_x",
    "is_x_form",
    "make_state",
    "mix",
    "partial_trace",
    "purified_evolution",
    "run_dynamics",
    "tensor_product",
    "twirl",
    "wootters_concurrence",
    "write_csv",
    "write_svg_plot",
]

__version__ = "0.1.0"

"""Initial three-qubit states and finite mixtures."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .tensor import PureState, DensityMatrix

WEIGHT_TOL = 1e-12


class Kind(enum.Enum):
    G_THETA = "g-theta"
    W_THETA = "w-theta"
    WBAR_THETA = "wbar-theta"
    SIGMA_THETA = "sigma-theta"
    GHZ = "ghz"
    W = "w"


@dataclass(frozen=True)
class StateFamily:
    kind: Kind
    theta: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")


def _ket(*terms: Tuple[complex, str]) -> np.ndarray:
    vec = np.zeros(8, dtype=complex)
    for amp, bits in terms:
        vec[int(bits, 2)] += amp
    return vec


def make_state(family: StateFamily) -> PureState:
    """Amplitude vector of the requested family member.

    ``G_THETA`` is ``cos|111> + sin|000>``; ``W_THETA`` puts weight ``cos`` on
    the first qubit's excitation; ``WBAR_THETA`` is its spin-flipped partner;
    ``SIGMA_THETA`` superposes ``|111>`` with the symmetric W state.
    """
    c, s = math.cos(family.theta), math.sin(family.theta)
    r2, r3 = math.sqrt(2.0), math.sqrt(3.0)
    kind = family.kind
    if kind is Kind.GHZ:
        vec = _ket((1 / r2, "000"), (1 / r2, "111"))
    elif kind is Kind.W:
        vec = _ket((1 / r3, "100"), (1 / r3, "010"), (1 / r3, "001"))
    elif kind is Kind.G_THETA:
        vec = _ket((c, "111"), (s, "000"))
    elif kind is Kind.W_THETA:
        vec = _ket((c, "100"), (s / r2, "010"), (s / r2, "001"))
    elif kind is Kind.WBAR_THETA:
        vec = _ket((c, "011"), (s / r2, "101"), (s / r2, "110"))
    elif kind is Kind.SIGMA_THETA:
        vec = _ket((c, "111"), (s / r3, "100"), (s / r3, "010"), (s / r3, "001"))
    else:  # pragma: no cover
        raise ValueError(f"unknown family {kind}")
    # renormalize away the last ulp so the strict norm check never trips
    return PureState(vec / np.linalg.norm(vec))


def mix(components: Iterable[Tuple[float, PureState]]) -> DensityMatrix:
    """Density matrix ``sum_i p_i |psi_i><psi_i|`` of a finite ensemble."""
    components = list(components)
    if not components:
        raise ValueError("mixture needs at least one component")
    weights = np.array([w for w, _ in components], dtype=float)
    if np.any(weights < 0):
        raise ValueError("mixture weights must be non-negative")
    if abs(weights.sum() - 1.0) > WEIGHT_TOL:
        raise ValueError(f"mixture weights sum to {weights.sum()!r}, expected 1")
    n = {psi.n_qubits for _, psi in components}
    if len(n) != 1:
        raise ValueError("all mixture components must have the same number of qubits")
    dim = components[0][1].amplitudes.size
    m = np.zeros((dim, dim), dtype=complex)
    for w, psi in components:
        m += w * np.outer(psi.amplitudes, psi.amplitudes.conj())
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


def ghz_w_mixture(s: float) -> DensityMatrix:
    """``s|G><G| + (1-s)|W><W|``."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    return mix([(s, make_state(StateFamily(Kind.GHZ))), (1.0 - s, make_state(StateFamily(Kind.W)))])

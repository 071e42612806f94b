"""Independent zero-temperature amplitude damping on every qubit.

The production path is the two-element Kraus map. ``purified_evolution``
builds the joint system+cavity state explicitly and traces the cavities out;
it exists to cross-check the Kraus path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensor import DensityMatrix, PureState, partial_trace_array, _n_qubits


@dataclass(frozen=True)
class DampingParams:
    t: float
    tau: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ValueError(f"t must be finite and >= 0, got {self.t!r}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be finite and > 0, got {self.tau!r}")

    @property
    def t_over_tau(self) -> float:
        return self.t / self.tau


def coefficients_from_ratio(t_over_tau: float) -> tuple[float, float]:
    if t_over_tau < 0:
        raise ValueError("t/tau must be >= 0")
    decay = math.exp(-t_over_tau)
    # -expm1 keeps q accurate for tiny t
    return math.sqrt(decay), math.sqrt(-math.expm1(-t_over_tau))


def ad_coefficients(params: DampingParams) -> tuple[float, float]:
    """Survival and decay amplitudes ``(p, q)`` with ``p**2 + q**2 == 1``."""
    return coefficients_from_ratio(params.t_over_tau)


def kraus_operators(p: float, q: float) -> tuple[np.ndarray, np.ndarray]:
    k0 = np.array([[1.0, 0.0], [0.0, p]], dtype=complex)
    k1 = np.array([[0.0, q], [0.0, 0.0]], dtype=complex)
    return k0, k1


def damp_array(m: np.ndarray, t_over_tau: float) -> np.ndarray:
    """Apply the single-qubit channel to every qubit of ``m`` (raw array)."""
    n = _n_qubits(m.shape[0])
    p, q = coefficients_from_ratio(t_over_tau)
    k0, k1 = kraus_operators(p, q)
    t = np.asarray(m, dtype=complex).reshape((2,) * (2 * n))
    for k in range(n):
        out = np.zeros_like(t)
        for kr in (k0, k1):
            # act with kr on row axis k and kr^dagger on column axis n+k
            x = np.moveaxis(np.tensordot(kr, t, axes=([1], [k])), 0, k)
            x = np.moveaxis(np.tensordot(kr.conj(), x, axes=([1], [n + k])), 0, n + k)
            out = out + x
        t = out
    res = t.reshape(2**n, 2**n)
    return (res + res.conj().T) / 2


def apply_amplitude_damping(rho: DensityMatrix, params: DampingParams) -> DensityMatrix:
    """Evolve ``rho`` for time ``params.t`` under local amplitude damping."""
    if not isinstance(rho, DensityMatrix):
        raise ValueError("rho must be a DensityMatrix")
    return DensityMatrix(damp_array(rho.matrix, params.t_over_tau))


def _pair_unitary(p: float, q: float) -> np.ndarray:
    # basis |system, cavity>: |00>->|00>, |10>->p|10>+q|01>, completed unitarily
    u = np.eye(4, dtype=complex)
    u[0b10, 0b10], u[0b01, 0b10] = p, q
    u[0b10, 0b01], u[0b01, 0b01] = -q, p
    return u


def purified_evolution(psi0: PureState, params: DampingParams) -> DensityMatrix:
    """Evolve system qubits coupled pairwise to fresh cavity qubits, then trace the cavities.

    Qubits ``0..n-1`` of the joint state are the system, ``n..2n-1`` the
    cavities, all cavities starting in ``|0>``.
    """
    if not isinstance(psi0, PureState):
        raise ValueError("psi0 must be a PureState")
    n = psi0.n_qubits
    p, q = ad_coefficients(params)
    u = _pair_unitary(p, q).reshape(2, 2, 2, 2)
    cav = np.zeros(2**n, dtype=complex)
    cav[0] = 1.0
    joint = np.kron(psi0.amplitudes, cav).reshape((2,) * (2 * n))
    for k in range(n):
        joint = np.tensordot(u, joint, axes=([2, 3], [k, n + k]))
        joint = np.moveaxis(joint, [0, 1], [k, n + k])
    vec = joint.reshape(-1)
    full = np.outer(vec, vec.conj())
    red = partial_trace_array(full, list(range(n)))
    return DensityMatrix((red + red.conj().T) / 2)

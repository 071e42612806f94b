"""Dense linear algebra for few-qubit states and operators.

Basis convention: qubit 0 is the most significant bit of the basis index,
so ``|b0 b1 ... b_{n-1}>`` sits at ``sum_i b_i * 2**(n-1-i)``. ``|1>`` is the
excited level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
MAX_QUBITS = 8


class NumericalConsistencyError(ArithmeticError):
    """Raised when a computed quantity violates an identity it must satisfy."""


def _n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return n


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector on ``n_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a 1-d vector")
        _n_qubits(amps.size)
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec) -> "PureState":
        """Build a state from an arbitrary nonzero vector, normalizing it."""
        vec = np.asarray(vec, dtype=complex)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(vec / norm)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        """Computational basis state from a bit string such as ``"101"``."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"invalid bit string {bits!r}")
        vec = np.zeros(2 ** len(bits), dtype=complex)
        vec[int(bits, 2)] = 1.0
        return cls(vec)

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.amplitudes.size)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        _n_qubits(m.shape[0])
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm_err:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3g})")
        object.__setattr__(self, "matrix", m)

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix, e.g. a witness in the convex-roof dual."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > HERMITIAN_TOL * scale:
            raise ValueError(f"operator is not Hermitian (max deviation {herm_err:.3g})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def zeros(cls, dim: int) -> "HermitianOperator":
        return cls(np.zeros((dim, dim), dtype=complex))


def tensor_product(a, b):
    """Kronecker product of two states or two operators.

    Operands must be of the same kind: two ``PureState``, two
    ``DensityMatrix``, two ``HermitianOperator`` or two square ndarrays.
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix))
    if isinstance(a, HermitianOperator) and isinstance(b, HermitianOperator):
        return HermitianOperator(np.kron(a.matrix, b.matrix))
    if (
        type(a) is np.ndarray
        and type(b) is np.ndarray
        and a.ndim == 2
        and b.ndim == 2
    ):
        return np.kron(a, b)
    raise TypeError(
        f"tensor_product needs two states or two matrices of the same kind, "
        f"got {type(a).__name__} and {type(b).__name__}"
    )


def partial_trace_array(m: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduce a ``2**n x 2**n`` array to the qubits in ``keep`` (in that order)."""
    n = _n_qubits(m.shape[0])
    keep = list(keep)
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if len(set(keep)) != len(keep) or any(not 0 <= k < n for k in keep):
        raise ValueError(f"invalid keep set {keep} for {n} qubits")
    traced = [k for k in range(n) if k not in keep]
    t = np.asarray(m).reshape((2,) * (2 * n))
    # move kept row axes, traced row axes, kept col axes, traced col axes
    order = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    t = t.transpose(order)
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on the qubits listed in ``keep``."""
    return DensityMatrix(partial_trace_array(rho.matrix, keep))


def hermitian_eigenvalues(h) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian operator or array."""
    m = h.matrix if isinstance(h, (HermitianOperator, DensityMatrix)) else np.asarray(h)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)


def random_pure_state(n_qubits: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state from normalized complex Gaussian amplitudes."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    dim = 2**n_qubits
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(vec / np.linalg.norm(vec))


def random_density_matrix(n_qubits: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state drawn as ``G G^dagger / Tr`` with Gaussian ``G``."""
    dim = 2**n_qubits
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)

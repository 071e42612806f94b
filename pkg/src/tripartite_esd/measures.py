"""Closed-form entanglement quantifiers for three (and two) qubits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .damping import coefficients_from_ratio
from .tensor import (
    DensityMatrix,
    NumericalConsistencyError,
    PureState,
)

HERON_CLAMP = 1e-12
SIDE_TOL = 1e-10
X_FORM_TOL = 1e-10
NORM_CHECK_TOL = 1e-10
RANK_TOL = 1e-13

_PAIR_I, _PAIR_J = np.triu_indices(4, 1)
_SIGMA_Y2 = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class TriangleSides:
    """Squared one-to-other concurrences ``C^2_{A(BC)}, C^2_{B(CA)}, C^2_{C(AB)}``."""

    c2_a: float
    c2_b: float
    c2_c: float

    def __post_init__(self):
        sides = (self.c2_a, self.c2_b, self.c2_c)
        if any(s < -SIDE_TOL or s > 1 + SIDE_TOL for s in sides):
            raise NumericalConsistencyError(f"concurrence side out of range: {sides}")
        for i in range(3):
            others = sum(sides) - sides[i]
            if sides[i] > others + SIDE_TOL:
                raise NumericalConsistencyError(f"triangle inequality violated: {sides}")

    @property
    def q_half(self) -> float:
        return (self.c2_a + self.c2_b + self.c2_c) / 2


def _check_three_qubit_pure(psi: PureState) -> np.ndarray:
    amps = psi.amplitudes
    if amps.size != 8:
        raise ValueError("expected a three-qubit pure state")
    if abs(np.linalg.norm(amps) - 1) > NORM_CHECK_TOL:
        raise ValueError("state is not normalized")
    return amps


def marginal_concurrence_squared(psi: PureState, i: int) -> float:
    """``C^2_{i(jk)} = 4 det(rho_i)`` for the single-qubit marginal ``rho_i``."""
    amps = _check_three_qubit_pure(psi)
    if i not in (0, 1, 2):
        raise ValueError("qubit index must be 0, 1 or 2")
    t = np.moveaxis(amps.reshape(2, 2, 2), i, 0).reshape(1, 2, 4)
    return float(min(_det_gram(t)[0], 0.25) * 4)


def _det_gram(m: np.ndarray) -> np.ndarray:
    """``det(M M^dagger)`` for a stack of 2x4 matrices, as a sum of squared minors."""
    minors = m[:, 0, _PAIR_I] * m[:, 1, _PAIR_J] - m[:, 0, _PAIR_J] * m[:, 1, _PAIR_I]
    return np.sum(minors.real**2 + minors.imag**2, axis=1)


def triangle_sides(psi: PureState) -> TriangleSides:
    return TriangleSides(*(marginal_concurrence_squared(psi, i) for i in range(3)))


def _heron(a, b, c):
    # (16/3) Q(Q-a)(Q-b)(Q-c) in factored form, which keeps relative accuracy
    # when the triangle is nearly degenerate; F^4 equals this
    return (a + b + c) * (b + c - a) * (a - b + c) * (a + b - c) / 3


def fill_from_sides(sides: TriangleSides) -> float:
    h = _heron(sides.c2_a, sides.c2_b, sides.c2_c)
    if h < -HERON_CLAMP:
        raise NumericalConsistencyError(f"negative Heron product {h!r} for sides {sides}")
    return float(max(h, 0.0) ** 0.25)


def fill_pure(psi: PureState) -> float:
    """Concurrence Fill of a three-qubit pure state.

    The fourth root of ``(16/3) Q (Q-a)(Q-b)(Q-c)`` where ``a, b, c`` are the
    squared one-to-other concurrences and ``Q`` their semi-perimeter. It is
    1 for GHZ, 8/9 for W and 0 on biseparable states.
    """
    return fill_from_sides(triangle_sides(psi))


# -- batched kernels used by the convex-roof optimizer -----------------------

def _marginal_blocks(t: np.ndarray):
    """Per-qubit 2x2 marginals and the matching 2x4 reshapes of ``t`` (R,2,2,2)."""
    r = t.shape[0]
    mats = [
        t.reshape(r, 2, 4),
        t.transpose(0, 2, 1, 3).reshape(r, 2, 4),
        t.transpose(0, 3, 1, 2).reshape(r, 2, 4),
    ]
    rhos = [np.einsum("rij,rkj->rik", m, m.conj()) for m in mats]
    return mats, rhos


def fill_batch(psis: np.ndarray) -> np.ndarray:
    """Fill of each row of ``psis`` (shape (R, 8), rows normalized)."""
    t = psis.reshape(-1, 2, 2, 2)
    mats, _ = _marginal_blocks(t)
    sides = [4 * _det_gram(m) for m in mats]
    h = _heron(*sides)
    return np.maximum(h, 0.0) ** 0.25


def fill_and_grad_batch(psis: np.ndarray):
    """Fill values and their Wirtinger gradients ``2 dF/d(conj psi)``.

    The returned gradient is the real-coordinate gradient packed as a complex
    vector (real part = d/dRe, imaginary part = d/dIm). Rows where the Heron
    product vanishes get a zero gradient.
    """
    r = psis.shape[0]
    t = psis.reshape(r, 2, 2, 2)
    mats, rhos = _marginal_blocks(t)
    sides, dsides = [], []
    for m, rho in zip(mats, rhos):
        sides.append(4 * _det_gram(m))
        adj = np.empty_like(rho)
        adj[:, 0, 0], adj[:, 1, 1] = rho[:, 1, 1], rho[:, 0, 0]
        adj[:, 0, 1], adj[:, 1, 0] = -rho[:, 0, 1], -rho[:, 1, 0]
        # d det(M M^dag) / d conj(M) = adj(M M^dag) M
        dsides.append(4 * np.einsum("rik,rkj->rij", adj, m))
    a, b, c = sides
    h = _heron(a, b, c)
    pos = h > 0
    f = np.where(pos, np.maximum(h, 0.0) ** 0.25, 0.0)
    coef = np.where(pos, 0.25 * np.where(pos, h, 1.0) ** -0.75, 0.0)
    dh = [4 * a * (b * b + c * c - a * a) / 3,
          4 * b * (c * c + a * a - b * b) / 3,
          4 * c * (a * a + b * b - c * c) / 3]
    g_a = dsides[0].reshape(r, 2, 2, 2)
    g_b = dsides[1].reshape(r, 2, 2, 2).transpose(0, 2, 1, 3)
    g_c = dsides[2].reshape(r, 2, 2, 2).transpose(0, 2, 3, 1)
    grad = (dh[0][:, None, None, None] * g_a
            + dh[1][:, None, None, None] * g_b
            + dh[2][:, None, None, None] * g_c)
    grad = 2 * coef[:, None] * grad.reshape(r, 8)
    return f, grad


# -- X-form states and GMC ----------------------------------------------------

def is_x_form(rho, tol: float = X_FORM_TOL) -> bool:
    """True iff every entry off both diagonals has modulus <= ``tol``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    d = m.shape[0]
    mask = np.ones((d, d), dtype=bool)
    idx = np.arange(d)
    mask[idx, idx] = False
    mask[idx, d - 1 - idx] = False
    return bool(np.all(np.abs(m[mask]) <= tol))


def gmc_x(rho: DensityMatrix) -> float:
    """Genuine multipartite concurrence of a three-qubit X-form state.

    ``2 max(0, max_j [|rho_{j,7-j}| - sum_{k != j} sqrt(rho_kk rho_{7-k,7-k})])``
    over the four anti-diagonal pairs (0-based).
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if m.shape != (8, 8):
        raise ValueError("gmc_x expects a three-qubit density matrix")
    if not is_x_form(m):
        raise ValueError("state is not X-form; use the convex-roof fill_mixed instead")
    diag = np.clip(np.diag(m).real, 0.0, None)
    coh = np.abs(m[np.arange(4), 7 - np.arange(4)])
    pair = np.sqrt(diag[:4] * diag[7 - np.arange(4)])
    vals = coh - (pair.sum() - pair)
    return float(2 * max(0.0, vals.max()))


def gmc_g_theta(theta: float, t_over_tau: float) -> float:
    """GMC of the damped ``cos|111> + sin|000>`` state, in closed form."""
    p, q = coefficients_from_ratio(t_over_tau)
    val = abs(math.sin(2 * theta)) * p**3 - 6 * math.cos(theta) ** 2 * p**3 * q**3
    return max(0.0, val)


def esd_onset_g_theta(theta: float) -> Optional[float]:
    """Time ``t*/tau`` at which GMC of the damped G(theta) state first vanishes.

    Returns ``None`` when ``|tan theta| >= 3`` (the onset equation has no
    root). The pure ``|111>`` limit gives 0, the pure ``|000>`` limit None.
    """
    s, c = abs(math.sin(theta)), abs(math.cos(theta))
    if s >= 3 * c:
        return None
    ratio = (s / (3 * c)) ** (2.0 / 3.0)
    return -math.log1p(-ratio)


# -- two qubits ----------------------------------------------------------------

def wootters_concurrence(rho) -> float:
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)``. They are computed as the singular values
    of ``B^T (sy x sy) B`` for ``rho = B B^dagger``, which keeps the small
    ones accurate near pure states.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError("wootters_concurrence expects a two-qubit state")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    # eigenvalues at rounding level carry no information but their square roots would
    keep = w > RANK_TOL * max(w[-1], 0.0)
    b = v[:, keep] * np.sqrt(w[keep])
    lam = np.zeros(4)
    sv = np.linalg.svd(b.T @ _SIGMA_Y2 @ b, compute_uv=False)
    lam[: sv.size] = sv
    return float(max(0.0, lam[0] - lam[1:].sum()))

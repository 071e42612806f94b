"""Mixed-state concurrence Fill through the Legendre dual of the convex roof.

``F(rho) = sup_X inf_psi { Tr[X (rho - |psi><psi|)] + F(psi) }``.

The inner infimum is a multistart L-BFGS search on the unit sphere; the
outer supremum is a proximal bundle ascent (or, optionally, a plain
subgradient ascent) over Hermitian witnesses ``X``. Any witness gives a lower bound on ``F(rho)`` provided the inner
minimum is global, so the reported value is the running maximum of those
bounds and is labelled with how much the restarts agreed.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .measures import fill_and_grad_batch, fill_batch, fill_pure
from .tensor import DensityMatrix, HermitianOperator, PureState

AGREEMENT_TOL = 1e-6
ZERO_REPORT_TOL = 1e-4
GROUP_CAP = 1000
SYMMETRY_TOL = 1e-10
ARMIJO_C = 1e-4
SUPPORT_TOL = 1e-12
WINDOW = 10
MAX_HALVINGS = 20
PROX_MIN = 1e-4
PROX_MAX = 1e4


class BoundKind(enum.Enum):
    EXACT_ANALYTIC = "exact-analytic"
    CERTIFIED_LOWER_BOUND = "certified-lower-bound"
    HEURISTIC = "heuristic"


@dataclass
class RoofOptions:
    inner_restarts: int = 50
    inner_max_iters: int = 500
    inner_tol: float = 1e-9
    outer_iters: int = 400
    step0: float = 0.5
    seed: int = 0
    symmetry_generators: Optional[List[np.ndarray]] = None
    # reuse the previous outer step's minimizers as extra inner starts
    warm_start: bool = True
    # "bundle" (proximal bundle on the witness) or "subgradient"
    method: str = "bundle"
    outer_tol: float = 1e-7
    outer_gtol: float = 1e-5
    cuts_per_step: int = 5
    max_cuts: int = 200
    # weight of -P_perp (projector off the support of rho) added to every witness
    support_penalty: float = 1e3

    def __post_init__(self):
        for name in ("inner_restarts", "inner_max_iters", "outer_iters"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive")
        if not self.step0 > 0:
            raise ValueError("step0 must be > 0")
        for name in ("inner_tol", "outer_tol", "outer_gtol", "support_penalty"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if int(self.cuts_per_step) < 1 or int(self.max_cuts) < 1:
            raise ValueError("cut counts must be positive")
        if self.method not in ("bundle", "subgradient"):
            raise ValueError(f"unknown outer method {self.method!r}")


@dataclass
class RoofDiagnostics:
    converged_fractions: List[float] = field(default_factory=list)
    history: List[float] = field(default_factory=list)
    best_iteration: int = 0
    twirled: bool = False


@dataclass
class MeasureResult:
    value: float
    bound_kind: BoundKind
    best_witness: Optional[HermitianOperator] = None
    inner_minimizer: Optional[PureState] = None
    diagnostics: RoofDiagnostics = field(default_factory=RoofDiagnostics)

    @property
    def converged_fraction(self) -> float:
        d = self.diagnostics
        if not d.converged_fractions:
            return 1.0
        return d.converged_fractions[d.best_iteration]

    @property
    def consistent_with_zero(self) -> bool:
        # a small lower bound never proves that the entanglement vanishes
        return self.bound_kind is BoundKind.CERTIFIED_LOWER_BOUND and self.value < ZERO_REPORT_TOL


def _matrix(x) -> np.ndarray:
    if isinstance(x, (HermitianOperator, DensityMatrix)):
        return x.matrix
    return np.asarray(x, dtype=complex)


def _amps(psi) -> np.ndarray:
    return psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi, dtype=complex)


def inner_objective(X, psi, rho) -> float:
    """``Tr[X rho] - <psi|X|psi> + F(psi)``."""
    x, r, v = _matrix(X), _matrix(rho), _amps(psi)
    if not (x.shape == r.shape == (v.size, v.size)):
        raise ValueError(f"dimension mismatch: X {x.shape}, rho {r.shape}, psi {v.shape}")
    if not isinstance(psi, PureState):
        psi = PureState(v)
    trace_term = np.trace(x @ r).real - np.vdot(v, x @ v).real
    return float(trace_term + fill_pure(psi))


def _real_dot(a, b):
    return np.einsum("...i,...i->...", a.conj(), b).real


def _descend(x: np.ndarray, psis: np.ndarray, max_iters: int, tol: float, memory: int = 8):
    """Batched L-BFGS of ``F(psi) - <psi|X|psi>`` on the unit sphere.

    Rows are independent local searches. Steps are retracted by normalization
    and accepted by an Armijo backtracking test; curvature pairs are stored
    after projecting onto the tangent space at the new point. A row stops
    when its decrease stays below ``tol`` for two accepted steps, when it
    gains less than ``10 tol`` per step over a window of iterations, or when
    backtracking fails from a steepest-descent direction.
    """
    r, n = psis.shape
    psis = psis / np.linalg.norm(psis, axis=1, keepdims=True)

    def evaluate(ps):
        f, g = fill_and_grad_batch(ps)
        xp = ps @ x.T
        val = f - _real_dot(ps, xp)
        g = g - 2 * xp
        g = g - _real_dot(ps, g)[:, None] * ps
        return val, g

    vals, grads = evaluate(psis)
    s_hist = np.zeros((r, memory, n), dtype=complex)
    y_hist = np.zeros((r, memory, n), dtype=complex)
    inv_sy = np.zeros((r, memory))
    count = np.zeros(r, dtype=int)
    active = np.ones(r, dtype=bool)
    stall = np.zeros(r, dtype=int)
    slots = np.arange(memory)[None, :]
    window_ref = vals.copy()
    for it in range(max_iters):
        if it and it % WINDOW == 0:
            # rows creeping along the cusp where a Schmidt rank drops make
            # tiny steady progress; the biseparable polish takes over there
            active &= window_ref - vals > WINDOW * 10 * tol
            window_ref = vals.copy()
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        g = grads[idx]
        s_i, y_i, r_i = s_hist[idx], y_hist[idx], inv_sy[idx]
        valid = slots < np.minimum(count[idx], memory)[:, None]
        # two-loop recursion, slot 0 is the most recent pair
        q = g.copy()
        alpha = np.zeros((idx.size, memory))
        for j in range(memory):
            alpha[:, j] = np.where(valid[:, j], r_i[:, j] * _real_dot(s_i[:, j], q), 0.0)
            q -= alpha[:, j, None] * y_i[:, j]
        has = count[idx] > 0
        yy = _real_dot(y_i[:, 0], y_i[:, 0])
        gnorm = np.sqrt(_real_dot(g, g))
        gamma = np.where(has, 1.0 / np.where(has, r_i[:, 0] * yy, 1.0),
                         np.minimum(0.05, 0.05 / np.maximum(gnorm, 1e-300)))
        d = gamma[:, None] * q
        for j in reversed(range(memory)):
            beta = np.where(valid[:, j], r_i[:, j] * _real_dot(y_i[:, j], d), 0.0)
            d += (alpha[:, j] - beta)[:, None] * s_i[:, j]
        d = -d
        slope = _real_dot(g, d)
        uphill = slope >= 0
        d[uphill] = -g[uphill]
        slope[uphill] = -gnorm[uphill] ** 2

        t = np.ones(idx.size)
        new, new_v, new_g = np.empty_like(g), np.empty(idx.size), np.empty_like(g)
        pending = np.arange(idx.size)
        for _ in range(MAX_HALVINGS):
            trial = psis[idx[pending]] + t[pending, None] * d[pending]
            trial /= np.linalg.norm(trial, axis=1, keepdims=True)
            tv, tg = evaluate(trial)
            ok = tv <= vals[idx[pending]] + ARMIJO_C * t[pending] * slope[pending]
            done = pending[ok]
            new[done], new_v[done], new_g[done] = trial[ok], tv[ok], tg[ok]
            pending = pending[~ok]
            if pending.size == 0:
                break
            t[pending] *= 0.5
        failed = np.zeros(idx.size, dtype=bool)
        failed[pending] = True

        ok = ~failed
        acc = idx[ok]
        step = new[ok] - psis[acc]
        step -= _real_dot(new[ok], step)[:, None] * new[ok]
        old_g = grads[acc] - _real_dot(new[ok], grads[acc])[:, None] * new[ok]
        ydiff = new_g[ok] - old_g
        sy = _real_dot(step, ydiff)
        decrease = vals[acc] - new_v[ok]
        psis[acc], vals[acc], grads[acc] = new[ok], new_v[ok], new_g[ok]
        upd = acc[sy > 1e-16]
        if upd.size:
            s_hist[upd] = np.roll(s_hist[upd], 1, axis=1)
            y_hist[upd] = np.roll(y_hist[upd], 1, axis=1)
            inv_sy[upd] = np.roll(inv_sy[upd], 1, axis=1)
            s_hist[upd, 0] = step[sy > 1e-16]
            y_hist[upd, 0] = ydiff[sy > 1e-16]
            inv_sy[upd, 0] = 1.0 / sy[sy > 1e-16]
            count[upd] += 1
        stall[acc] = np.where(decrease < tol, stall[acc] + 1, 0)
        active[acc[stall[acc] >= 2]] = False
        # a failed search with memory gets one retry along the gradient
        fail_idx = idx[failed]
        active[fail_idx[count[fail_idx] == 0]] = False
        count[fail_idx] = 0
        active[idx[gnorm < 1e-12]] = False
    return psis, vals


def _top_eigvecs(m: np.ndarray) -> np.ndarray:
    _, v = np.linalg.eigh((m + np.conj(np.swapaxes(m, -1, -2))) / 2)
    return v[..., -1]


def _biseparable_polish(x: np.ndarray, psis: np.ndarray, sweeps: int = 40):
    """Best biseparable state near each row of ``psis``.

    On biseparable states Fill vanishes, so the inner objective reduces to
    ``-<psi|X|psi>`` over ``psi = a (x) b`` for one of the three cuts. Each
    row is seeded with its leading Schmidt vectors across every cut and
    improved by alternating top-eigenvector updates. Returns the states and
    their exact objective values (minimum over the cuts).
    """
    r = psis.shape[0]
    best_v = np.full(r, np.inf)
    best_psi = np.empty_like(psis)
    for k in range(3):
        order = [k] + [j for j in range(3) if j != k]
        xt = x.reshape((2,) * 6).transpose(order + [3 + j for j in order]).reshape(2, 4, 2, 4)
        m = np.moveaxis(psis.reshape(r, 2, 2, 2), k + 1, 1).reshape(r, 2, 4)
        u, _, vh = np.linalg.svd(m)
        a, b = u[:, :, 0], vh[:, 0, :]
        for _ in range(sweeps):
            mb = np.einsum("ri,ijkl,rk->rjl", a.conj(), xt, a)
            b = _top_eigvecs(mb)
            ma = np.einsum("rj,ijkl,rl->rik", b.conj(), xt, b)
            a = _top_eigvecs(ma)
        prod = np.einsum("ri,rj->rij", a, b).reshape(r, 2, 2, 2)
        # undo the qubit reordering
        vec = np.moveaxis(prod, 1, k + 1).reshape(r, 8)
        val = -_real_dot(vec, vec @ x.T)
        better = val < best_v
        best_v[better], best_psi[better] = val[better], vec[better]
    return best_psi, best_v


def _inner_search(X, rho, opts, rng, warm_starts=None):
    x, r = _matrix(X), _matrix(rho)
    dim = r.shape[0]
    if x.shape != r.shape:
        raise ValueError("X and rho must have the same shape")
    n = opts.inner_restarts
    starts = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    if warm_starts is not None and len(warm_starts):
        starts = np.vstack([starts, np.asarray(warm_starts, dtype=complex)])
    psis, vals = _descend(x, starts, opts.inner_max_iters, opts.inner_tol)
    # minima on the biseparable set sit at a cusp of Fill; resolve them exactly
    bpsis, bvals = _biseparable_polish(x, psis)
    use = bvals < vals
    psis[use], vals[use] = bpsis[use], bvals[use]
    best = int(np.argmin(vals))
    best_val = vals[best]
    frac = float(np.mean(vals[:n] <= best_val + AGREEMENT_TOL))
    trace_term = float(np.trace(x @ r).real)
    psi_star = PureState(psis[best] / np.linalg.norm(psis[best]))
    return psi_star, trace_term + float(best_val), frac, psis, vals


def inner_minimize(X, rho, opts: RoofOptions, rng: np.random.Generator):
    """Multistart minimization of the inner objective over pure states.

    Returns ``(psi_star, value, converged_fraction)`` where ``value`` is the
    full objective ``Tr[X rho] + min_psi (F(psi) - <psi|X|psi>)`` and
    ``converged_fraction`` is the share of Haar-random restarts that ended
    within ``AGREEMENT_TOL`` of the best value found.
    """
    psi, val, frac, _, _ = _inner_search(X, rho, opts, rng)
    return psi, val, frac


# -- symmetry -------------------------------------------------------------------

def _group_key(u: np.ndarray) -> bytes:
    flat = u.reshape(-1)
    k = int(np.argmax(np.abs(flat) > 0.5 * np.abs(flat).max()))
    v = u * (abs(flat[k]) / flat[k])
    key = np.round(np.concatenate([v.real.ravel(), v.imag.ravel()]), 8)
    return (key + 0.0).tobytes()  # + 0.0 maps -0.0 to 0.0


def group_closure(generators: Sequence[np.ndarray], cap: int = GROUP_CAP) -> List[np.ndarray]:
    """All products of the generators, identified up to a global phase."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    dim = gens[0].shape[0]
    elements = [np.eye(dim, dtype=complex)]
    seen = {_group_key(elements[0])}
    frontier = list(elements)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                prod = g @ a
                key = _group_key(prod)
                if key in seen:
                    continue
                seen.add(key)
                elements.append(prod)
                new.append(prod)
                if len(elements) > cap:
                    raise ValueError(f"group generated by the symmetries exceeds {cap} elements")
        frontier = new
    return elements


def twirl(X, generators: Sequence[np.ndarray], group: Optional[List[np.ndarray]] = None) -> HermitianOperator:
    """Average ``U X U^dagger`` over the finite group generated by ``generators``."""
    x = _matrix(X)
    group = group_closure(generators) if group is None else group
    acc = np.zeros_like(x, dtype=complex)
    for u in group:
        acc += u @ x @ u.conj().T
    acc /= len(group)
    return HermitianOperator((acc + acc.conj().T) / 2)


def qubit_permutation(perm: Sequence[int]) -> np.ndarray:
    """Unitary sending qubit ``i`` to position ``perm[i]``."""
    n = len(perm)
    dim = 2**n
    u = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        bits = [(b >> (n - 1 - i)) & 1 for i in range(n)]
        out = [0] * n
        for i, bit in enumerate(bits):
            out[perm[i]] = bit
        u[int("".join(map(str, out)), 2), b] = 1.0
    return u


def excitation_phase(n_qubits: int, order: int) -> np.ndarray:
    """Local unitary ``diag(1, w)^{x n}`` with ``w = exp(2 pi i / order)``."""
    w = np.exp(2j * np.pi / order)
    return np.diag([w ** bin(b).count("1") for b in range(2**n_qubits)])


def ghz_w_symmetry_generators() -> List[np.ndarray]:
    """Symmetries of ``s|G><G| + (1-s)|W><W|``: qubit permutations and the
    excitation-number phase of order 3. Their commutant among Hermitian
    8x8 matrices is 8-dimensional."""
    return [
        qubit_permutation([1, 0, 2]),
        qubit_permutation([0, 2, 1]),
        excitation_phase(3, 3),
    ]


def check_symmetries(rho, generators: Sequence[np.ndarray], tol: float = SYMMETRY_TOL) -> None:
    r = _matrix(rho)
    for u in generators:
        if np.max(np.abs(u @ r @ u.conj().T - r)) > tol:
            raise ValueError("a supplied generator is not a symmetry of rho")


# -- outer ascent -----------------------------------------------------------------

def hermitian_basis(dim: int, group: Optional[List[np.ndarray]] = None) -> np.ndarray:
    """Orthonormal real basis (rows, in the ``[Re, Im]`` flattening) of the
    Hermitian ``dim x dim`` matrices, restricted to the commutant of ``group``."""
    mats = []
    for i in range(dim):
        for j in range(i, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = e[j, i] = 1.0
            mats.append(e)
            if i != j:
                e = np.zeros((dim, dim), dtype=complex)
                e[i, j], e[j, i] = 1j, -1j
                mats.append(e)
    if group is not None:
        mats = [twirl(m, (), group).matrix for m in mats]
    vecs = np.array([_flatten(m) for m in mats])
    _, sv, vt = np.linalg.svd(vecs, full_matrices=False)
    rank = int(np.sum(sv > 1e-9 * sv[0]))
    return vt[:rank]


def _flatten(m: np.ndarray) -> np.ndarray:
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def _unflatten(v: np.ndarray, dim: int) -> np.ndarray:
    m = (v[: dim * dim] + 1j * v[dim * dim:]).reshape(dim, dim)
    return (m + m.conj().T) / 2


def witness_dimension(generators: Sequence[np.ndarray], dim: int = 8) -> int:
    """Real dimension of the Hermitian witnesses invariant under ``generators``."""
    group = group_closure(generators) if generators else None
    return hermitian_basis(dim, group).shape[0]


def _solve_master(gmat: np.ndarray, cvec: np.ndarray, center: np.ndarray, prox: float):
    """Maximize ``min_j (c_j + g_j . y) - prox/2 |y - center|^2``.

    Returns the maximizer, the cut model value there and the multipliers of
    the cuts.
    """
    from cvxopt import matrix, solvers

    m, d = gmat.shape
    p = np.zeros((d + 1, d + 1))
    p[:d, :d] = prox * np.eye(d)
    q = np.concatenate([-prox * center, [-1.0]])
    # t - g_j . y <= c_j
    g = np.hstack([-gmat, np.ones((m, 1))])
    sol = solvers.qp(
        matrix(p), matrix(q), matrix(g), matrix(cvec.astype(float)),
        options={"show_progress": False, "abstol": 1e-12, "reltol": 1e-10, "feastol": 1e-12},
    )
    v = np.array(sol["x"]).ravel()
    y = v[:d]
    model = float(np.min(cvec + gmat @ y))
    return y, model, np.array(sol["z"]).ravel()


class _Tracker:
    """Evaluates ``h`` at witnesses and keeps diagnostics and an archive of inner minimizers.

    Every pure state the inner search ends on is archived. A witness whose
    own restarts all missed the global inner minimum reports too large a
    value; ``finish`` rescores the evaluated witnesses against the whole
    archive so such a miss cannot survive into the returned bound.
    """

    def __init__(self, rho, opts, rng):
        self.rho, self.opts, self.rng = rho, opts, rng
        self.diag = RoofDiagnostics()
        self.warm = None
        self.archive_psi, self.archive_f = [], []
        # (value, iteration, witness) for every evaluation
        self.evaluated = []

    def evaluate(self, x):
        psi, val, frac, psis, vals = _inner_search(
            x, self.rho, self.opts, self.rng, self.warm if self.opts.warm_start else None)
        self.warm = psis[np.argsort(vals)[:4]]
        a = psis / np.linalg.norm(psis, axis=1, keepdims=True)
        self.archive_psi.append(a)
        self.archive_f.append(fill_batch(a))
        k = len(self.diag.history)
        self.diag.history.append(val)
        self.diag.converged_fractions.append(frac)
        self.evaluated.append((val, k, x))
        return psi, val, psis, vals

    def finish(self):
        """Rescore the witnesses; returns ``(value, witness, minimizer)``."""
        psis = np.concatenate(self.archive_psi)
        fs = np.concatenate(self.archive_f)
        best = (-math.inf, 0, None, None)
        # rescoring only lowers a value, so stop once the raw values cannot win
        for val, k, x in sorted(self.evaluated, key=lambda e: -e[0]):
            if val <= best[0]:
                break
            inner = fs - _real_dot(psis, psis @ x.T)
            j = int(np.argmin(inner))
            val = min(val, float(np.trace(x @ self.rho).real) + float(inner[j]))
            if val > best[0]:
                best = (val, k, x, psis[j])
        val, k, x, a = best
        self.diag.best_iteration = k
        return val, x, PureState(a / np.linalg.norm(a))


def _subgradient_ascent(tr: _Tracker, group) -> None:
    opts, r = tr.opts, tr.rho
    x = np.zeros_like(r)
    for k in range(opts.outer_iters + 1):
        psi, _, _, _ = tr.evaluate(x)
        if k == opts.outer_iters:
            break
        a = psi.amplitudes
        x = x + opts.step0 / math.sqrt(k + 1) * (r - np.outer(a, a.conj()))
        x = twirl(x, (), group).matrix if group is not None else (x + x.conj().T) / 2


def _bundle_ascent(tr: _Tracker, group) -> None:
    opts, r = tr.opts, tr.rho
    dim = r.shape[0]
    basis = hermitian_basis(dim, group)
    rho_c = basis @ _flatten(r)

    # h(X - L P_perp) >= h(X) for L >= 0, so the off-support penalty is pre-applied
    w, v = np.linalg.eigh(r)
    off = v[:, w < SUPPORT_TOL]
    penalty = opts.support_penalty * (off @ off.conj().T)

    def model_x(y):
        return _unflatten(basis.T @ y, dim)

    def to_x(y):
        return model_x(y) - penalty

    cut_g, cut_c = [], []

    def add_cuts(psis, vals, y):
        # every pure state psi gives the global cut F(psi) + <rho - psi psi^dag, X>
        added = 0
        for i in np.argsort(vals)[: opts.cuts_per_step]:
            a = psis[i] / np.linalg.norm(psis[i])
            g = rho_c - basis @ _flatten(np.outer(a, a.conj()))
            f = vals[i] + np.vdot(a, model_x(y) @ a).real
            if cut_g and np.min(np.linalg.norm(np.array(cut_g) - g, axis=1)
                                + np.abs(np.array(cut_c) - f)) < 1e-9:
                continue
            cut_g.append(g)
            cut_c.append(f)
            added += 1
        return added

    center = np.zeros(basis.shape[0])
    _, h_center, psis, vals = tr.evaluate(to_x(center))
    add_cuts(psis, vals, center)
    prox = opts.step0
    for _ in range(opts.outer_iters):
        gmat, cvec = np.array(cut_g), np.array(cut_c)
        cand, model, duals = _solve_master(gmat, cvec, center, prox)
        predicted = model - h_center
        # aggregate subgradient and linearization error: together they bound
        # h(X) <= h_center + err + <agg, X - center> for every witness X, so
        # the test does not depend on how large the prox weight has grown
        agg = prox * (cand - center)
        err = predicted - float(agg @ (cand - center))
        if err < opts.outer_tol and np.linalg.norm(agg) < opts.outer_gtol:
            break
        _, h_cand, psis, vals = tr.evaluate(to_x(cand))
        added = add_cuts(psis, vals, cand)
        # a new cut below the center's value shows its inner search missed
        h_center = min(h_center, float(np.min(np.array(cut_c) + np.array(cut_g) @ center)))
        if h_cand - h_center >= 0.1 * predicted:
            center, h_center = cand, h_cand
            prox = max(prox / 2, PROX_MIN)
        elif added == 0 and prox >= PROX_MAX:
            # null step with nothing new for the model: the next master
            # problem would be identical, so the ascent has stalled
            break
        else:
            prox = min(prox * 2, PROX_MAX)
        if len(cut_g) > opts.max_cuts:
            # drop the oldest cuts that were inactive in the last master problem
            n_old = len(duals)
            inactive = [i for i in range(n_old) if duals[i] < 1e-10]
            drop = set(inactive[: len(cut_g) - opts.max_cuts])
            cut_g = [g for i, g in enumerate(cut_g) if i not in drop]
            cut_c = [c for i, c in enumerate(cut_c) if i not in drop]


def fill_mixed(rho: DensityMatrix, opts: Optional[RoofOptions] = None) -> MeasureResult:
    """Lower bound on the convex-roof Fill of a three-qubit mixed state.

    Maximizes the concave ``h(X) = Tr[X rho] + min_psi (F(psi) - <psi|X|psi>)``
    starting from ``X = 0``. Every evaluation of ``h`` is a lower bound on
    ``F(rho)`` when the inner minimum is global. Each witness is rescored
    against every inner minimizer found during the run and the best rescored
    value is returned. It is tagged CERTIFIED_LOWER_BOUND when at least half
    the restarts agreed on the inner minimum at that step, HEURISTIC otherwise.
    """
    opts = RoofOptions() if opts is None else opts
    r = _matrix(rho)
    if r.shape != (8, 8):
        raise ValueError("fill_mixed expects a three-qubit density matrix")
    rng = np.random.default_rng(opts.seed)
    group = None
    if opts.symmetry_generators:
        check_symmetries(r, opts.symmetry_generators)
        group = group_closure(opts.symmetry_generators)

    tr = _Tracker(r, opts, rng)
    if opts.method == "subgradient":
        _subgradient_ascent(tr, group)
    else:
        _bundle_ascent(tr, group)
    tr.diag.twirled = group is not None
    best_val, best_x, best_psi = tr.finish()

    frac = tr.diag.converged_fractions[tr.diag.best_iteration]
    kind = BoundKind.CERTIFIED_LOWER_BOUND if frac >= 0.5 else BoundKind.HEURISTIC
    return MeasureResult(
        value=min(max(0.0, best_val), 1.0 + 1e-8),
        bound_kind=kind,
        best_witness=HermitianOperator(best_x),
        inner_minimizer=best_psi,
        diagnostics=tr.diag,
    )


def decomposition_upper_bound(rho, ensemble: Sequence[Tuple[float, PureState]], tol: float = 1e-8) -> float:
    """``sum_i p_i F(psi_i)`` for an ensemble that reproduces ``rho``."""
    r = _matrix(rho)
    recon = np.zeros_like(r, dtype=complex)
    total = 0.0
    for w, psi in ensemble:
        if w < 0:
            raise ValueError("ensemble weights must be non-negative")
        a = psi.amplitudes
        recon += w * np.outer(a, a.conj())
        total += w * fill_pure(psi)
    if np.max(np.abs(recon - r)) > tol:
        raise ValueError("ensemble does not reconstruct rho")
    return float(total)

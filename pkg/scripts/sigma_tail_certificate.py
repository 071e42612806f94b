"""Upper bound on the convex-roof Fill of a damped Sigma(theta) state from an explicit ensemble.

    python3 scripts/sigma_tail_certificate.py [--cos2 0.1] [--t 3.0] [--out results/sigma_tail.npz]

Any ensemble that reproduces rho bounds Fill from above. The search writes
rho = B B^dag and takes the ensemble vectors as rows of U[:, :8] B^T for a
unitary U, descending on sum_i |v_i|^2 F(v_i / |v_i|). Fill has a cusp where
the Heron product vanishes, so the descent runs on (h + eps)^(1/4) - eps^(1/4)
with eps lowered to zero in stages. The final ensemble is re-unitarized and
checked with decomposition_upper_bound at 1e-12.
"""
import argparse
import math
import pathlib

import numpy as np

from tripartite_esd.experiments import evolve
from tripartite_esd.measures import fill_and_grad_batch
from tripartite_esd.roof import decomposition_upper_bound
from tripartite_esd.states import Kind, StateFamily, make_state
from tripartite_esd.tensor import PureState

EPS_STAGES = (1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14, 1e-16, 1e-18, 1e-20, 0.0)


def smoothed_cost(v, eps):
    """Sum of |v|^2 F_eps(v/|v|) over rows and its gradient 2 d/d(conj v)."""
    n2 = np.einsum("ij,ij->i", v.conj(), v).real
    n = np.sqrt(np.maximum(n2, 1e-300))
    psi = v / n[:, None]
    f, g = fill_and_grad_batch(psi)
    h = f ** 4
    fe = (h + eps) ** 0.25 - eps ** 0.25
    ge = ((h + eps) ** -0.75 * f ** 3)[:, None] * g
    ge = ge - np.einsum("ij,ij->i", psi.conj(), ge).real[:, None] * psi
    return float(np.sum(n2 * fe)), 2 * v * fe[:, None] + n[:, None] * ge


def expm_skew(s):
    w, q = np.linalg.eigh(-1j * s)
    return (q * np.exp(1j * w)) @ q.conj().T


def descend(b, u, eps, iters):
    """Armijo descent on the unitary group, retracting with the exponential map."""
    k, d = u.shape[0], b.shape[1]
    val, gv = smoothed_cost(u[:, :d] @ b.T, eps)
    eta = 1.0
    for _ in range(iters):
        gu = np.zeros((k, k), dtype=complex)
        gu[:, :d] = gv @ b.conj()
        om = gu @ u.conj().T
        s = -(om - om.conj().T) / 2
        gn2 = np.vdot(s, s).real
        if gn2 < 1e-28:
            break
        while eta > 1e-16:
            un = expm_skew(eta * s) @ u
            vn, gvn = smoothed_cost(un[:, :d] @ b.T, eps)
            if vn <= val - 1e-4 * eta * gn2:
                u, val, gv = un, vn, gvn
                eta *= 2
                break
            eta /= 2
        else:
            break
    return u


def search(rho, members, iters, rng):
    w, q = np.linalg.eigh(rho)
    b = q * np.sqrt(np.maximum(w, 0.0))
    u = np.linalg.qr(rng.standard_normal((members, members))
                     + 1j * rng.standard_normal((members, members)))[0]
    for eps in EPS_STAGES:
        u = descend(b, u, eps, iters)
        print(f"eps={eps:.0e}  cost={smoothed_cost(u[:, :8] @ b.T, 0.0)[0]:.4e}", flush=True)
    # undo the rounding drift of many exponential-map steps
    su, _, svh = np.linalg.svd(u)
    v = (su @ svh)[:, :8] @ b.T
    weights = np.einsum("ij,ij->i", v.conj(), v).real
    keep = weights > 0
    return weights[keep], v[keep] / np.sqrt(weights[keep])[:, None]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cos2", type=float, default=0.1, help="cos^2 theta of the initial Sigma state")
    ap.add_argument("--t", type=float, default=3.0, help="t/tau")
    ap.add_argument("--members", type=int, default=24)
    ap.add_argument("--iters", type=int, default=20000, help="descent steps per smoothing stage")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="results/sigma_tail.npz")
    args = ap.parse_args()

    rho = evolve(make_state(StateFamily(Kind.SIGMA_THETA, math.acos(math.sqrt(args.cos2)))), args.t)
    weights, states = search(rho, args.members, args.iters, np.random.default_rng(args.seed))
    ensemble = [(float(p), PureState(a)) for p, a in zip(weights, states)]
    bound = decomposition_upper_bound(rho, ensemble, tol=1e-12)
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    np.savez(out, weights=weights, states=states, rho=rho)
    print(f"Sigma(cos^2={args.cos2}) at t/tau={args.t}: Fill <= {bound:.4e} "
          f"({len(ensemble)} members, saved to {out})")


if __name__ == "__main__":
    main()

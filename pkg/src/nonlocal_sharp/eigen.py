"""Leading eigenpairs of the discretized compact inverse operator.

Power iteration with deflation in the quadrature-weighted inner product
<u, v>_w = sum_i w_i u_i v_i, which is the discrete L^2 pairing on the
grid.  The first eigenvector is the Perron direction of the entrywise
nonnegative operator matrix; the deterministic all-ones start has nonzero
overlap with it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Grid
from .operators import GreenOperator


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class EigenPair:
    index: int          # 1-based
    mu: float           # eigenvalue of the inverse operator; lambda = 1/mu
    phi: np.ndarray     # node values, unit norm in the quadrature L^2
    residual: float     # ||A phi - mu phi||_w


def leading_eigenpairs(op: GreenOperator, n_eigs: int = 1, tol: float = 1e-10,
                       max_iter: int = 10_000) -> list[EigenPair]:
    """Largest n_eigs eigenpairs by power iteration with deflation.

    Convergence requires both relative eigenvalue stagnation and a residual
    below tol * mu_1; eigenvalue stagnation alone is unreliable under
    clustering.
    """
    if not 1 <= n_eigs <= 20:
        raise ValueError("n_eigs must lie in 1..20")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    A = op.A
    w = op.grid.weights

    def dot_w(a, b):
        return float(np.sum(w * a * b))

    pairs: list[EigenPair] = []
    B = A.copy()
    mu_1 = None
    for k in range(n_eigs):
        if k == 0:
            # the ones vector has positive overlap with the Perron direction
            v = np.ones(op.grid.n)
        else:
            # deflated modes may be odd about the midpoint, orthogonal to any
            # symmetric start; a seeded random start overlaps every mode
            v = np.random.default_rng(k).standard_normal(op.grid.n)
        v /= np.sqrt(dot_w(v, v))
        mu_old = np.inf
        resid = np.inf
        def project(u):
            # restrict to the complement of the converged invariant subspace;
            # without this, the finite accuracy of earlier pairs leaks their
            # (larger) eigenvalues back and floors the attainable residual
            for prev in pairs:
                u -= dot_w(prev.phi, u) * prev.phi
            return u

        for _ in range(max_iter):
            u = project(B @ v)
            norm = np.sqrt(dot_w(u, u))
            if norm == 0.0:
                raise ConvergenceError("iterate annihilated; operator rank too low", np.inf)
            v = u / norm
            Bv = project(B @ v)
            mu = dot_w(v, Bv)
            resid = np.sqrt(max(dot_w(Bv - mu * v, Bv - mu * v), 0.0))
            ref = mu_1 if mu_1 is not None else abs(mu)
            if abs(mu - mu_old) <= tol * abs(mu) and resid <= tol * ref:
                break
            mu_old = mu
        else:
            raise ConvergenceError(
                f"eigenpair {k + 1} did not converge in {max_iter} iterations", resid)
        v = _fix_sign(v, w)
        if mu_1 is None:
            mu_1 = mu
        pairs.append(EigenPair(index=k + 1, mu=mu, phi=v, residual=resid))
        B = B - mu * np.outer(v, w * v)  # deflation in the w-inner product
    return pairs


def _fix_sign(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    mean = float(np.sum(w * v))
    if abs(mean) > 1e-8:
        return v if mean >= 0 else -v
    return v if v[np.argmax(np.abs(v))] >= 0 else -v


@dataclass(frozen=True)
class BoundaryRatio:
    index: int
    sup_ratio: float            # sup |phi| / delta^gamma over the window
    inf_ratio: float | None     # inf phi / delta^gamma, first pair only


def eigenfunction_boundary_report(pairs: list[EigenPair], grid: Grid, gamma: float,
                                  delta_max: float = 0.2,
                                  exclude_nearest: int = 3) -> list[BoundaryRatio]:
    """sup |phi_n|/delta^gamma (and inf phi_1/delta^gamma) near the boundary.

    The window is delta in (0, delta_max], excluding the nodes closest to
    each endpoint where the diagonal quadrature pollutes node values.
    """
    d = grid.delta
    mask = d <= delta_max
    mask[:exclude_nearest] = False
    mask[grid.n - exclude_nearest:] = False
    if not np.any(mask):
        raise ValueError("empty boundary window")
    prof = d[mask] ** gamma
    out = []
    for pair in pairs:
        vals = pair.phi[mask]
        sup_ratio = float(np.max(np.abs(vals) / prof))
        inf_ratio = float(np.min(vals / prof)) if pair.index == 1 else None
        out.append(BoundaryRatio(index=pair.index, sup_ratio=sup_ratio, inf_ratio=inf_ratio))
    return out

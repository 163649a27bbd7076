"""Semilinear fixed-point solver u = G[u^p] by bracketed monotone iteration.

The map T(u) = G[u^p] is monotone and p-homogeneous, so iterating from an
entrywise supersolution gives a nonincreasing sequence and from a
subsolution a nondecreasing one; both converge to the unique positive
fixed point, giving a two-sided certificate.  The bracket is built from
the constant supersolution c* 1 and a small multiple of the Perron
eigenvector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import ConvergenceError, leading_eigenpairs
from .exponents import ExponentPrediction
from .grids import Grid
from .operators import GreenOperator, apply


class BracketError(RuntimeError):
    """Automatic sub/supersolution construction failed."""


@dataclass(frozen=True)
class SolverConfig:
    p: float
    tol: float = 1e-10
    max_iter: int = 1000
    bracket: tuple[np.ndarray, np.ndarray] | None = None  # None: auto

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError("solver handles 0 < p < 1; p = 1 is the eigenvalue problem")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class SemilinearSolution:
    u: np.ndarray
    residual: float       # sup |u - T(u)| / sup u
    iterations: int
    bracket_gap: float    # final sup(u_hi - u_lo) / sup u_hi


def solve_linear(op: GreenOperator, f: np.ndarray) -> np.ndarray:
    """u = G[f] for nonnegative data f."""
    f = np.asarray(f, dtype=float)
    if np.any(f < 0.0):
        raise ValueError("linear theory assumes nonnegative data")
    return apply(op, f)


def picard_map(op: GreenOperator, p: float, u: np.ndarray) -> np.ndarray:
    """T(u) = G[u^p]; monotone and p-homogeneous on nonnegative inputs."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0):
        raise ValueError("fixed-point map defined for nonnegative inputs")
    return apply(op, u ** p)


def auto_bracket(op: GreenOperator, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Entrywise sub/supersolution pair (u_lo, u_hi) for T(u) = G[u^p].

    u_hi = c* 1 with c* = (sup G[1])^{1/(1-p)}; u_lo = eps * Phi_1 with eps
    chosen so T(u_lo) >= u_lo holds with equality at the binding node.
    """
    ones = np.ones(op.grid.n)
    g1 = apply(op, ones)
    c_star = float(np.max(g1)) ** (1.0 / (1.0 - p))
    u_hi = c_star * ones

    phi = leading_eigenpairs(op, n_eigs=1, tol=1e-8)[0].phi
    phi = np.maximum(phi, 0.0)
    if np.any(phi[1:-1] <= 0.0):
        raise BracketError("Perron eigenvector not strictly positive in the interior")
    r = float(np.min(apply(op, phi ** p) / phi))
    if r <= 0.0:
        raise BracketError("operator is not irreducible: lower bracket ratio vanished")
    eps = r ** (1.0 / (1.0 - p))
    eps = min(eps, c_star / float(np.max(phi)))  # keep u_lo <= u_hi
    u_lo = eps * phi
    return u_lo, u_hi


def picard_solve(op: GreenOperator, config: SolverConfig) -> SemilinearSolution:
    """Monotone two-sided Picard iteration for the unique fixed point.

    Stops when both bracket sequences move by less than the relative
    tolerance and the recomputed midpoint residual is below it.
    """
    p, tol = config.p, config.tol
    if config.bracket is None:
        lo, hi = auto_bracket(op, p)
    else:
        lo, hi = (np.asarray(v, dtype=float) for v in config.bracket)
        _check_bracket(op, p, lo, hi)

    slack = 1e-12
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        new_lo = picard_map(op, p, lo)
        new_hi = picard_map(op, p, hi)
        scale = float(np.max(new_hi))
        if np.any(new_lo < lo - slack * scale) or np.any(new_hi > hi + slack * scale):
            raise RuntimeError("bracket monotonicity broken: operator assembly is inconsistent")
        inc_lo = float(np.max(np.abs(new_lo - lo))) / max(float(np.max(new_lo)), 1e-300)
        inc_hi = float(np.max(np.abs(new_hi - hi))) / max(scale, 1e-300)
        lo, hi = new_lo, new_hi
        if inc_lo < tol and inc_hi < tol:
            u = 0.5 * (lo + hi)
            residual = float(np.max(np.abs(u - picard_map(op, p, u)))) / float(np.max(u))
            if residual <= tol:
                gap = float(np.max(hi - lo)) / float(np.max(hi))
                return SemilinearSolution(u=u, residual=residual,
                                          iterations=iterations, bracket_gap=gap)
    u = 0.5 * (lo + hi)
    residual = float(np.max(np.abs(u - picard_map(op, p, u)))) / float(np.max(u))
    raise ConvergenceError(
        f"Picard iteration did not reach tol={tol} in {config.max_iter} iterations",
        residual)


def _check_bracket(op: GreenOperator, p: float, lo: np.ndarray, hi: np.ndarray) -> None:
    slack = 1e-12 * float(np.max(hi))
    if np.any(lo > hi + slack):
        raise BracketError("lower bracket exceeds upper bracket")
    if np.any(picard_map(op, p, lo) < lo - slack):
        raise BracketError("u_lo is not a subsolution")
    if np.any(picard_map(op, p, hi) > hi + slack):
        raise BracketError("u_hi is not a supersolution")


@dataclass(frozen=True)
class HarnackReport:
    global_ratio: float     # (sup u/w) / (inf u/w) over the boundary window
    local_ratio: float      # sup u / inf u over the interior ball
    sup_ratio: float
    inf_ratio: float


def harnack_report(u: np.ndarray, grid: Grid, prediction: ExponentPrediction,
                   center: float = 0.5, radius: float = 0.1,
                   delta_max: float = 0.1, exclude_nearest: int = 3) -> HarnackReport:
    """Two-sided comparability of u with the predicted boundary profile.

    global: sup and inf of u / w over delta < delta_max, with w the profile
    delta^mu (or its logarithmic refinement in the critical regime);
    local: sup/inf of u over the interior ball B_radius(center).
    """
    u = np.asarray(u, dtype=float)
    d = grid.delta
    mask = d < delta_max
    if exclude_nearest > 0:
        mask[:exclude_nearest] = False
        mask[grid.n - exclude_nearest:] = False
    profile = prediction.profile(d[mask])
    ratios = u[mask] / profile
    sup_ratio = float(np.max(ratios))
    inf_ratio = float(np.min(ratios))

    ball = np.abs(grid.nodes - center) <= radius
    local = float(np.max(u[ball]) / np.min(u[ball]))
    return HarnackReport(global_ratio=sup_ratio / inf_ratio, local_ratio=local,
                         sup_ratio=sup_ratio, inf_ratio=inf_ratio)

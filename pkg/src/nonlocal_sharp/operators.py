"""Discretized Green operator: dense assembly, application, and q-norms.

The integral operator u -> int G(., y) u(y) dy is collocated at grid nodes
with cell quadrature: A_ij ~ int_{cell_j} G(x_i, y) dy.  Off-diagonal cells
use the midpoint rule; the singular diagonal cell is integrated in closed
form through the |x - y|^{2s-1} envelope.  The spectral backend is built
directly from the eigendecomposition of the second-difference Dirichlet
Laplacian (matrix transfer), so it is spectrally exact on its grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .grids import Grid
from .kernels import GreenKernel, ProblemParams


@dataclass(frozen=True)
class GreenOperator:
    """Dense nonnegative matrix acting on node values.

    A_ij approximates int_{cell_j} G(x_i, y) dy, i.e. A includes the
    quadrature weights; the underlying kernel values A_ij / w_j form a
    symmetric matrix, so A is self-adjoint in the quadrature inner product
    <u, v>_w = sum_i w_i u_i v_i (the discrete L^2 pairing).
    """

    grid: Grid
    A: np.ndarray
    provenance: str
    params: ProblemParams

    def __post_init__(self):
        if self.A.shape != (self.grid.n, self.grid.n):
            raise ValueError("matrix shape does not match grid")


def assemble(kernel: GreenKernel, grid: Grid) -> GreenOperator:
    """Assemble the dense operator for a pointwise kernel backend.

    Off-diagonal entries are w_j G(x_i, x_j), upgraded to Gauss-Legendre
    cell integrals near the diagonal where the integrable singularity makes
    the midpoint rule first-order; in-band values are symmetrized at the
    kernel level, Ghat_ij = (I_ij/w_j + I_ji/w_i)/2, which keeps every row
    a consistent quadrature (entrywise averaging (A+A^T)/2 would inject an
    O(h) bulk bias on graded meshes where w_i != w_j).  The diagonal cell
    integral uses the closed form int |x_i - y|^{2s-1} dy with min-factors
    1, valid while the cell half-width does not exceed delta(x_i) (always
    true for midpoint grids; a guard splits the cell otherwise).
    """
    if kernel.backend != "SyntheticK5":
        raise ValueError("assemble() requires a pointwise kernel backend")
    x = grid.nodes
    w = grid.weights
    s, g = kernel.params.s, kernel.params.gamma
    d = grid.delta

    r = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(r, 1.0)  # placeholder, overwritten below
    rg = r ** g
    G = (r ** (2.0 * s - 1.0)
         * np.minimum((d ** g)[:, None] / rg, 1.0)
         * np.minimum((d ** g)[None, :] / rg, 1.0))
    _refine_near_diagonal(G, kernel, grid)
    A = kernel.amplitude * G * w[None, :]

    left = x - grid.boundaries[:-1]
    right = grid.boundaries[1:] - x
    diag = (left ** (2.0 * s) + right ** (2.0 * s)) / (2.0 * s)
    half_width = 0.5 * w
    # rounding of 1 - t near the right endpoint perturbs delta by ~1e-6
    # relative; only genuinely oversized cells need the quadrature fallback
    bad = half_width > d * (1.0 + 1e-3)
    for i in np.flatnonzero(bad):
        diag[i] = _diagonal_cell_quad(kernel, x[i], grid.boundaries[i], grid.boundaries[i + 1])
    np.fill_diagonal(A, kernel.amplitude * diag)

    return GreenOperator(grid=grid, A=A, provenance=kernel.backend, params=kernel.params)


_NEAR_BAND = 8        # off-diagonal band refined by Gauss quadrature
_GAUSS_NODES = 8

def _refine_near_diagonal(G: np.ndarray, kernel: GreenKernel, grid: Grid) -> None:
    """Replace pointwise kernel values by Gauss cell averages near the diagonal.

    Within a few cells of the singularity the kernel's curvature makes the
    midpoint rule only first-order accurate, which dominates the global
    assembly error; an 8-point Gauss rule on those cells removes it.  The
    two one-sided cell averages are combined symmetrically so the kernel
    matrix G stays exactly symmetric.
    """
    gx, gw = np.polynomial.legendre.leggauss(_GAUSS_NODES)
    x = grid.nodes
    w = grid.weights
    lo_all = grid.boundaries[:-1]
    hi_all = grid.boundaries[1:]
    n = grid.n
    amp = kernel.amplitude

    def cell_average(i0, j0):
        # (1/w_j) int_{cell_j} G(x_i, y) dy at unit amplitude
        lo, hi = lo_all[j0], hi_all[j0]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        y = mid[:, None] + half[:, None] * gx[None, :]
        vals = kernel(np.broadcast_to(x[i0][:, None], y.shape), y)
        return half * (vals @ gw) / (amp * w[j0])

    for off in range(1, _NEAR_BAND + 1):
        if off >= n:
            break
        i0, j0 = np.arange(0, n - off), np.arange(off, n)
        avg = 0.5 * (cell_average(i0, j0) + cell_average(j0, i0))
        G[i0, j0] = avg
        G[j0, i0] = avg


def _diagonal_cell_quad(kernel: GreenKernel, xi: float, lo: float, hi: float) -> float:
    """Integrate the kernel over the cell containing its singular point.

    Works in the distance variable r = |x_i - y| so the integrand is
    evaluated without the catastrophic cancellation of reconstructing y
    near x_i; boundary distances along the cell are expressed through r.
    """
    s, g = kernel.params.s, kernel.params.gamma
    dxi = min(xi, 1.0 - xi)
    toward = -1.0 if xi <= 0.5 else 1.0  # direction of decreasing delta

    def side(r_max: float, sgn: float) -> float:
        if r_max <= 0.0:
            return 0.0

        def integrand(r):
            dy = dxi - r if sgn == toward else dxi + r
            dy = max(dy, 0.0)
            val = r ** (2.0 * s - 1.0)
            val *= min((dxi / r) ** g, 1.0)
            val *= min((dy / r) ** g, 1.0) if dy < r else 1.0
            return val

        return quad(integrand, 0.0, r_max, limit=200)[0]

    return kernel.amplitude * (side(xi - lo, -1.0) + side(hi - xi, 1.0))


def apply(op: GreenOperator, v: np.ndarray) -> np.ndarray:
    """Apply the discretized integral operator to node values."""
    v = np.asarray(v, dtype=float)
    if v.shape != (op.grid.n,):
        raise ValueError("vector length does not match grid")
    return op.A @ v


def spectral_mt_operator(s: float, grid: Grid) -> GreenOperator:
    """Matrix-transfer realization of the inverse spectral fractional operator.

    The -s power of the second-difference Dirichlet Laplacian on a uniform
    midpoint grid: eigenvalues lambda_k(h)^{-s} with
    lambda_k(h) = (4/h^2) sin^2(k pi h / 2) and discrete sine eigenvectors,
    which are exact for this stencil under antisymmetric ghost reflection.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError("fractional order s must lie in (0, 1]")
    if not grid.is_uniform:
        raise ValueError("matrix transfer is defined on uniform grids only")
    n = grid.n
    h = 1.0 / n
    k = np.arange(1, n + 1, dtype=float)
    lam = (4.0 / h ** 2) * np.sin(k * np.pi * h / 2.0) ** 2
    V = np.sin(np.outer(k * np.pi, grid.nodes))  # modes in rows
    norms = np.sqrt(h * np.sum(V ** 2, axis=1))
    V /= norms[:, None]
    A = h * (V.T * lam ** (-s)) @ V
    A = 0.5 * (A + A.T)
    params = ProblemParams(s=s, gamma=1.0, N=1)
    return GreenOperator(grid=grid, A=A, provenance="SpectralMT", params=params)


def green_q_norm(kernel: GreenKernel, grid: Grid, x0_index: int, q: float) -> float:
    """(int_Omega G^q(x, x0) dx)^{1/q} for a grid node x0.

    Valid for 0 < q < N/(N-2s); the diagonal cell is integrated through the
    envelope |x0 - y|^{q(2s-1)} in closed form.
    """
    s = kernel.params.s
    q_high = 1.0 / (1.0 - 2.0 * s)
    if not 0.0 < q < q_high:
        raise ValueError(f"q must lie in (0, {q_high}); the integral diverges otherwise")
    x = grid.nodes
    x0 = x[x0_index]
    mask = np.arange(grid.n) != x0_index
    vals = kernel(x[mask], np.full(mask.sum(), x0)) ** q
    total = float(np.sum(vals * grid.weights[mask]))
    a = 1.0 - q * (1.0 - 2.0 * s)  # > 0 inside the admissible q range
    lo, hi = grid.boundaries[x0_index], grid.boundaries[x0_index + 1]
    total += kernel.amplitude ** q * ((x0 - lo) ** a + (hi - x0) ** a) / a
    return total ** (1.0 / q)


def green_q_norm_profile(kernel: GreenKernel, grid: Grid, q: float,
                         delta_max: float | None = None, exclude_nearest: int = 3):
    """q-norms centred at left-boundary-layer nodes, with their distances.

    Returns (delta, norms) for nodes with delta <= delta_max, skipping the
    nodes nearest the endpoint (diagonal-cell pollution).  The default cap
    adapts to the mesh -- at most four decades above the smallest eligible
    distance, never beyond 0.05 -- keeping the profile in the asymptotic
    range where subleading corrections have died out.
    """
    d = grid.delta
    if delta_max is None:
        floor = float(np.min(d[exclude_nearest:grid.n // 2]))
        delta_max = min(0.05, floor * 1e4)
    idx = [i for i in range(exclude_nearest, grid.n // 2) if d[i] <= delta_max]
    norms = np.array([green_q_norm(kernel, grid, i, q) for i in idx])
    return d[np.array(idx)], norms

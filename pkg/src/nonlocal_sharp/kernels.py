"""Green-kernel backends and empirical two-sided bound checks.

The synthetic backend takes the matching two-sided envelope

    G(x, y) = |x-y|^{2s-N} (delta(x)^gamma / |x-y|^gamma ^ 1)
                            (delta(y)^gamma / |x-y|^gamma ^ 1)

as the kernel itself, with constants 1 and the eigenfunction profile
replaced by delta^gamma.  All boundary-behaviour theory consumes only the
envelope bounds, so this one backend probes every (s, gamma) regime:
gamma = s (restricted), gamma = s - 1/2 (censored-like), gamma = 1
(spectral).  The spectral backend never evaluates a pointwise kernel; it is
realized as a matrix power in the operators module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import boundary_distance


@dataclass(frozen=True)
class ProblemParams:
    """Parameter tuple (N, s, gamma, p); m = 1/p is derived."""

    s: float
    gamma: float
    p: float = 0.5
    N: int = 1

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("dimension N must be a positive integer")
        if not 0.0 < self.s <= 1.0:
            raise ValueError("fractional order s must lie in (0, 1]")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("boundary exponent gamma must lie in (0, 1]")
        if not 0.0 < self.p <= 1.0:
            raise ValueError("nonlinearity power p must lie in (0, 1]")

    @property
    def m(self) -> float:
        return 1.0 / self.p


class DiagonalSingularityError(ValueError):
    """Pointwise evaluation requested on the diagonal x = y."""


@dataclass(frozen=True)
class GreenKernel:
    """Evaluatable symmetric kernel with backend tag and singularity data.

    amplitude rescales the kernel (used by the bound checker's linearity
    tests); physical backends use amplitude 1.
    """

    backend: str
    params: ProblemParams
    amplitude: float = 1.0

    @property
    def singular_exponent(self) -> float:
        return 2.0 * self.params.s - self.params.N

    def __call__(self, x, y):
        if self.backend != "SyntheticK5":
            raise ValueError(f"backend {self.backend!r} has no pointwise kernel")
        return self.amplitude * eval_synthetic_k5(self.params, x, y)

    def scaled(self, c: float) -> "GreenKernel":
        return GreenKernel(self.backend, self.params, self.amplitude * c)


def synthetic_k5(params: ProblemParams) -> GreenKernel:
    """Envelope-exact kernel backend; requires N = 1 and s < 1/2."""
    if params.N != 1:
        raise ValueError("synthetic backend computes on the unit interval (N = 1)")
    if not params.s < 0.5:
        raise ValueError("synthetic backend requires s < 1/2 (integrable 1-D singularity)")
    return GreenKernel("SyntheticK5", params)


def eval_synthetic_k5(params: ProblemParams, x, y):
    """|x-y|^{2s-1} min(delta(x)^g/|x-y|^g, 1) min(delta(y)^g/|x-y|^g, 1).

    Vectorized over x, y; the diagonal x = y is singular and must be
    handled by cell-integrated quadrature instead.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.abs(x - y)
    if np.any(r == 0.0):
        raise DiagonalSingularityError("kernel is singular on the diagonal x = y")
    s, g = params.s, params.gamma
    dx = boundary_distance(x)
    dy = boundary_distance(y)
    rg = r ** g
    val = r ** (2.0 * s - 1.0) * np.minimum(dx ** g / rg, 1.0) * np.minimum(dy ** g / rg, 1.0)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class BoundReport:
    """Empirical envelope constants from sampled kernel values.

    c1_hat -- max of G |x-y|^{N-2s} / (min-factor product), the upper form
    c0_hat -- min of G / (phi(x) phi(y)), the lower form
    violations -- samples where the lower bound with constant 1 fails
    n_samples -- number of (x, y) pairs inspected
    """

    c0_hat: float
    c1_hat: float
    violations: int
    n_samples: int


def check_kernel_bounds(kernel_or_op, n_samples: int = 10_000, seed: int = 0) -> BoundReport:
    """Sample kernel values and report envelope constants.

    Accepts either a pointwise GreenKernel (pairs drawn uniformly in the
    square) or an assembled GreenOperator, whose entries divided by the
    quadrature weights estimate kernel values at node pairs.
    """
    if n_samples < 100:
        raise ValueError("need at least 100 sample pairs")
    rng = np.random.default_rng(seed)

    if hasattr(kernel_or_op, "A"):  # assembled operator
        op = kernel_or_op
        params = op.params
        amplitude = 1.0
        n = op.grid.n
        i = rng.integers(0, n, size=2 * n_samples)
        j = rng.integers(0, n, size=2 * n_samples)
        keep = i != j
        i, j = i[keep][:n_samples], j[keep][:n_samples]
        x, y = op.grid.nodes[i], op.grid.nodes[j]
        # entries are w_j times a symmetric kernel-value matrix
        g = op.A[i, j] / op.grid.weights[j]
    else:
        kernel = kernel_or_op
        params = kernel.params
        amplitude = kernel.amplitude
        x = rng.uniform(0.0, 1.0, size=n_samples)
        y = rng.uniform(0.0, 1.0, size=n_samples)
        coincide = x == y
        y[coincide] = np.nextafter(y[coincide], 1.0)
        g = np.asarray(kernel(x, y))

    s, gamma = params.s, params.gamma
    r = np.abs(x - y)
    rg = r ** gamma
    dx = np.minimum(x, 1.0 - x)
    dy = np.minimum(y, 1.0 - y)
    envelope = (r ** (2.0 * s - 1.0)
                * np.minimum(dx ** gamma / rg, 1.0)
                * np.minimum(dy ** gamma / rg, 1.0))
    phi_prod = dx ** gamma * dy ** gamma

    c1_hat = float(np.max(g / envelope))
    ratios_lower = g / phi_prod
    c0_hat = float(np.min(ratios_lower))
    violations = int(np.count_nonzero(g < amplitude * phi_prod * (1.0 - 1e-12)))
    return BoundReport(c0_hat=c0_hat, c1_hat=c1_hat,
                       violations=violations, n_samples=int(x.size))

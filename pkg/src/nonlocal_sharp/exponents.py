"""Closed-form boundary-decay exponents and regime classification.

Everything here is arithmetic on the parameter tuple (N, s, gamma, p) with
m = 1/p.  These formulas are the ground truth the numerical fits are
checked against:

* mu = min(gamma, 2s/(1-p)) is the decay exponent of the semilinear
  solution, sigma = mu/gamma the same exponent measured against the first
  eigenfunction; at gamma = 2s/(1-p) the profile picks up the factor
  (1 + |log delta|^{1/(1-p)}).
* The three-regime envelope B_q (linear / log / power) governs L^q norms of
  the Green function centred near the boundary.
* The nu-recursion nu_k = nu_{k-1}/m + 2s/(m gamma) is the bootstrap that
  produces sigma; running it case by case gives an independent oracle for
  the (mu, sigma) formulas.
* The HLS ladder p_{k+1} = N p_k / (N - 2 s p_k) is the smoothing bootstrap
  used to bound eigenfunctions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class EigenvalueProblemSignal(ValueError):
    """Raised when p = 1 is requested: that is the eigenvalue problem."""


def _close(a: float, b: float, rel_tol: float = 1e-12) -> bool:
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=0.0)


@dataclass(frozen=True)
class ExponentPrediction:
    mu: float
    sigma: float
    regime: str  # "eigen-dominated" | "scaling-dominated" | "critical"
    log_exponent: float | None = None
    forced_critical: bool = False

    def profile(self, delta):
        """Predicted boundary profile evaluated at distances delta."""
        import numpy as np

        delta = np.asarray(delta, dtype=float)
        if self.regime == "critical":
            gamma = self.mu
            return delta ** gamma * (1.0 + np.abs(np.log(delta)) ** self.log_exponent)
        return delta ** self.mu


def predict_mu(s: float, gamma: float, p: float,
               force_critical: bool = False) -> ExponentPrediction:
    """Sharp boundary exponent mu = min(gamma, 2s/(1-p)) and sigma = mu/gamma.

    The critical threshold gamma = 2s/(1-p) is detected with relative
    tolerance 1e-12; pass force_critical=True to pin it for parameters that
    are critical by construction.
    """
    _validate_sgp(s, gamma, p)
    if p == 1.0:
        raise EigenvalueProblemSignal("p = 1 is the eigenvalue problem; use the spectral module")
    scaling = 2.0 * s / (1.0 - p)
    critical = force_critical or _close(gamma, scaling)
    if critical:
        return ExponentPrediction(
            mu=gamma, sigma=1.0, regime="critical",
            log_exponent=1.0 / (1.0 - p), forced_critical=force_critical,
        )
    if gamma < scaling:
        return ExponentPrediction(mu=gamma, sigma=1.0, regime="eigen-dominated")
    return ExponentPrediction(mu=scaling, sigma=scaling / gamma, regime="scaling-dominated")


@dataclass(frozen=True)
class BqClassification:
    regime: str  # "linear" | "log" | "power"
    phi_exponent: float
    log_exponent: float | None
    q_low: float
    q_high: float


def classify_bq(N: int, s: float, gamma: float, q: float) -> BqClassification:
    """Regime of the envelope B_q as a function of q.

    B_q(t) = t for q < N/(N-2s+gamma), t(1+|log t|^{1/q}) at the threshold,
    and t^{(N-q(N-2s))/(q gamma)} for larger q (up to the integrability
    limit N/(N-2s)).
    """
    if not (0 < s <= 1 and 0 < gamma <= 1 and N >= 1):
        raise ValueError("invalid parameters")
    q_high = N / (N - 2.0 * s) if N > 2.0 * s else math.inf
    q_low = N / (N - 2.0 * s + gamma)
    if not (0.0 < q < q_high):
        raise ValueError(f"q must lie in (0, {q_high}); the q-norm diverges otherwise")
    if _close(q, q_low):
        return BqClassification("log", 1.0, 1.0 / q, q_low, q_high)
    if q < q_low:
        return BqClassification("linear", 1.0, None, q_low, q_high)
    return BqClassification("power", (N - q * (N - 2.0 * s)) / (q * gamma), None, q_low, q_high)


@dataclass(frozen=True)
class HlsLadder:
    sequence: tuple
    k_star: int


def hls_ladder(N: int, s: float, p0: float = 2.0) -> HlsLadder:
    """Smoothing bootstrap p_{k+1} = N p_k / (N - 2 s p_k), from p0 = 2.

    Stops at the first exponent above N/(2s); a nonpositive denominator
    means the next exponent exceeds every bound, terminating immediately.
    """
    if p0 < 1.0:
        raise ValueError("ladder must start at p0 >= 1")
    target = N / (2.0 * s)
    seq = [float(p0)]
    k = 0
    while seq[-1] <= target:
        denom = N - 2.0 * s * seq[-1]
        if denom <= 0.0:
            break
        seq.append(N * seq[-1] / denom)
        k += 1
        if k > 10_000:  # unreachable for 2s < N; guards degenerate input
            raise RuntimeError("ladder failed to terminate")
    return HlsLadder(sequence=tuple(seq), k_star=k if seq[-1] > target else 0)


@dataclass(frozen=True)
class CaseLabel:
    label: str  # DIRECT | I | II.A.1 | II.A.2 | II.B | III | IV
    sigma_out: float
    log_flag: bool
    log_power: float | None = None
    nu_1: float | None = None
    nu_infinity: float | None = None


def nu_case_machine(s: float, gamma: float, m: float,
                    force_critical: bool = False) -> CaseLabel:
    """Case analysis of the exponent-improving iteration, for m = 1/p > 1.

    The iteration starts from nu_1 = 2s/(m gamma) and either reaches the
    eigenfunction exponent (sigma = 1) in finitely many steps, converges to
    sigma = 2 s m / (gamma (m-1)) < 1, or hits the critical threshold where
    the logarithmic factor |log|^{m/(m-1)} appears.
    """
    if m <= 1.0:
        raise ValueError("case machine requires m > 1")
    if not (0 < s <= 1 and 0 < gamma <= 1):
        raise ValueError("invalid parameters")
    two_s = 2.0 * s
    t_case1 = two_s * (m + 1.0) / m          # upper edge of Case I
    t_crit = two_s * m / (m - 1.0)           # critical threshold
    nu_1 = two_s / (m * gamma)
    nu_inf = two_s / (gamma * (m - 1.0))

    if not force_critical:
        if _close(gamma, two_s):
            return CaseLabel("IV", sigma_out=1.0, log_flag=False)
        if gamma < two_s:
            return CaseLabel("DIRECT", sigma_out=1.0, log_flag=False)
        if _close(gamma, t_case1):
            return CaseLabel("III", sigma_out=1.0, log_flag=False, nu_1=nu_1)
        if gamma < t_case1:
            return CaseLabel("I", sigma_out=1.0, log_flag=False)
    if force_critical or _close(gamma, t_crit):
        return CaseLabel("II.A.2", sigma_out=1.0, log_flag=True,
                         log_power=m / (m - 1.0), nu_1=nu_1, nu_infinity=nu_inf)
    if gamma < t_crit:
        return CaseLabel("II.B", sigma_out=1.0, log_flag=False,
                         nu_1=nu_1, nu_infinity=nu_inf)
    return CaseLabel("II.A.1", sigma_out=two_s * m / (gamma * (m - 1.0)),
                     log_flag=False, nu_1=nu_1, nu_infinity=nu_inf)


def nu_sequence(s: float, gamma: float, m: float, k_max: int):
    """First k_max terms of nu_k = nu_{k-1}/m + 2s/(m gamma).

    Monotone increasing with limit 2s/(gamma (m-1)).
    """
    if m <= 1.0:
        raise ValueError("requires m > 1")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    step = 2.0 * s / (m * gamma)
    seq = [step]
    for _ in range(k_max - 1):
        seq.append(seq[-1] / m + step)
    return seq


def _validate_sgp(s: float, gamma: float, p: float) -> None:
    if not 0.0 < s <= 1.0:
        raise ValueError("fractional order s must lie in (0, 1]")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("boundary exponent gamma must lie in (0, 1]")
    if not 0.0 < p <= 1.0:
        raise ValueError("nonlinearity power p must lie in (0, 1]")

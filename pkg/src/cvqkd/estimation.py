"""Parameter estimation: SNU calibration, AWGN estimators, worst-case shifts.

Conventions for the simulated channel ``y = sqrt(T)·x + z``:

* ``x`` has per-quadrature variance ``V_A/μ``;
* ``z`` has variance ``shot + ξ/μ`` where ``shot`` is 1 (vacuum noise in SNU)
  or 0 for the idealised noise-only channel.

so ``Var(y)`` reproduces Bob's per-quadrature variance ``T V_A/μ + 1 + ξ/μ``.
The regression slope estimates ``sqrt(T)``; ``t_hat`` is its square.  The
noise estimate is the mean squared residual (a variance), not the plain mean
of residuals.

Random numbers come from counter-based Philox streams keyed by
``(seed, stream...)``; nothing touches global RNG state.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import DomainError, EstimationError, InfeasibleError

# Confidence factors as tabulated for the two attack columns.
TABULATED_CONFIDENCE = {"collective": 6.34, "coherent": 14.07}
APPROX_THRESHOLD = 1e-17


class ConfidenceDiscrepancyWarning(UserWarning):
    """A tabulated confidence factor disagrees with the value computed from ε_pe."""


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


# ---------------------------------------------------------------- calibration

@dataclass(frozen=True)
class CalibrationRecord:
    phi: float
    n_rec: float
    v_u_lo_on: float
    v_u_lo_off: float

    @property
    def voltage_scale(self) -> float:
        """Divide measured voltages by this to express them in SNU."""
        return math.sqrt(self.phi)

    def to_snu(self, voltages):
        return np.asarray(voltages) / self.voltage_scale


def voltage_variance(u) -> float:
    u = np.asarray(u, dtype=float)
    return float(np.mean(u**2) - np.mean(u) ** 2)


def calibrate_phi(v_u_lo_on: float, v_u_lo_off: float) -> CalibrationRecord:
    """SNU conversion from two vacuum measurements: LO on, then LO off."""
    if v_u_lo_off < 0:
        raise EstimationError("voltage variance cannot be negative")
    phi = v_u_lo_on - v_u_lo_off
    if phi < 0:
        raise EstimationError("LO-on variance below LO-off variance: measurements swapped?")
    return CalibrationRecord(phi=phi, n_rec=v_u_lo_off, v_u_lo_on=v_u_lo_on, v_u_lo_off=v_u_lo_off)


def approximate_phi(p_lo: float, rho: float, g: float, b_bd: float, h: float, f: float) -> float:
    """Rough a-priori value ``P_LO ρ² g² B_BD h f`` (V²/SNU)."""
    return p_lo * rho**2 * g**2 * b_bd * h * f


def simulate_calibration(
    phi: float, xi_rec: float, mu: int, n: int, seed: int, stream: int = 0
) -> tuple[float, float]:
    """Synthetic detector: returns (V(U) with LO on, V(U) with LO off)."""
    rng = make_rng(seed, 1, stream)
    n_rec = phi * xi_rec / mu
    lo_on = rng.normal(0.0, math.sqrt(phi + n_rec), size=n)
    lo_off = rng.normal(0.0, math.sqrt(n_rec), size=n)
    return voltage_variance(lo_on), voltage_variance(lo_off)


# ------------------------------------------------------------ AWGN estimation

@dataclass(frozen=True)
class EstimationSample:
    x: np.ndarray
    y: np.ndarray
    mu: int = 2
    shot: float = 1.0

    def __post_init__(self):
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise EstimationError("x and y must be 1-d arrays of equal length")
        if len(self.x) < 2:
            raise EstimationError("need more than one pair")


@dataclass(frozen=True)
class ParameterEstimate:
    t_hat: float
    xi_hat: float  # mean squared residual: per-quadrature noise variance
    slope: float
    mu: int
    shot: float

    @property
    def excess_noise(self) -> float:
        """Bob-referred excess noise implied by ``xi_hat``."""
        return self.mu * (self.xi_hat - self.shot)


def noise_variance(xi: float, mu: int, shot: float = 1.0) -> float:
    return shot + xi / mu


def simulate_awgn_sample(
    t_true: float,
    xi_true: float,
    v_a: float,
    mu: int,
    n_pe: int,
    seed: int,
    shot_noise: bool = True,
    stream: int = 0,
) -> EstimationSample:
    if not 0.0 < t_true <= 1.0:
        raise DomainError("t_true must lie in (0, 1]")
    if xi_true < 0:
        raise DomainError("xi_true must be >= 0")
    m = int(mu * n_pe)
    rng = make_rng(seed, 0, stream)
    x = rng.standard_normal(m) * math.sqrt(v_a / mu)
    shot = 1.0 if shot_noise else 0.0
    var_z = noise_variance(xi_true, mu, shot)
    y = math.sqrt(t_true) * x
    if var_z > 0:
        y = y + rng.standard_normal(m) * math.sqrt(var_z)
    return EstimationSample(x=x, y=y, mu=mu, shot=shot)


def estimate_t_xi(sample: EstimationSample) -> ParameterEstimate:
    x, y = sample.x, sample.y
    sxx = float(np.dot(x, x))
    if sxx <= 0:
        raise EstimationError("all-zero reference data: slope undefined")
    slope = float(np.dot(x, y)) / sxx
    resid = y - slope * x
    return ParameterEstimate(
        t_hat=slope * slope,
        xi_hat=float(np.dot(resid, resid)) / len(x),
        slope=slope,
        mu=sample.mu,
        shot=sample.shot,
    )


# --------------------------------------------------------------- confidence

def confidence_factor(eps_pe: float, form: str = "auto") -> float:
    """Confidence factor ``w`` for a failure probability ``eps_pe``.

    ``exact`` is the two-sided Gaussian tail inverse ``sqrt(2)·erfinv(1-2ε)``;
    ``approx`` is ``sqrt(2 ln(1/ε))``; ``auto`` uses the approximation only
    for ``eps_pe <= 1e-17``.
    """
    if not 0.0 < eps_pe <= 0.5:
        raise DomainError("eps_pe must lie in (0, 0.5]")
    if form == "auto":
        form = "approx" if eps_pe <= APPROX_THRESHOLD else "exact"
    if form == "approx":
        return math.sqrt(2.0 * math.log(1.0 / eps_pe))
    if form == "exact":
        # isf(ε) == sqrt(2) erfinv(1 - 2ε) without the cancellation in 1 - 2ε
        return float(max(norm.isf(eps_pe), 0.0))
    raise ValueError(f"unknown form {form!r}")


def check_tabulated_confidence(eps_pe: float, tabulated: float, tol: float = 0.01) -> float:
    """Compare a tabulated ``w`` with the approximate form; warn on mismatch."""
    computed = confidence_factor(eps_pe, "approx")
    if abs(computed - tabulated) > tol:
        warnings.warn(
            f"tabulated confidence factor {tabulated} differs from sqrt(2 ln(1/eps_pe)) = "
            f"{computed:.4f} at eps_pe = {eps_pe:g} (exact form gives "
            f"{confidence_factor(eps_pe, 'exact'):.4f})",
            ConfidenceDiscrepancyWarning,
            stacklevel=2,
        )
    return computed


# ---------------------------------------------------------- worst-case shift

def corr_xi(xi_j: float, mu: int, n_pe: float, w: float) -> float:
    return w * (xi_j + mu) / math.sqrt(2.0 * mu * n_pe)


def corr_t(t_j: float, xi_j: float, v_a: float, mu: int, n_pe: float, w: float,
           optimistic: bool = False) -> float:
    if optimistic:
        return 2.0 * w * xi_j / v_a * math.sqrt(t_j / (mu * n_pe))
    return 2.0 * w * math.sqrt((2.0 * t_j**2 + t_j * (xi_j + mu) / v_a) / (mu * n_pe))


@dataclass(frozen=True)
class WorstCaseShift:
    corr_t_full: float
    corr_t_ch: float
    corr_xi_ch: float
    w: float
    t_det_prime: float
    t_ch: float
    xi_ch: float


def worst_case_shift(
    t_ch: float,
    xi_ch: float,
    t_total: float,
    xi_total: float,
    t_det_prime: float,
    v_a: float,
    mu: int,
    n_pe: float,
    w: float,
    optimistic: bool = False,
) -> WorstCaseShift:
    """Move estimated parameters to the edge of their confidence region.

    Trusted receiver loss is taken at its best case (LO-arm transmittance up),
    the channel at its worst (transmittance down, excess noise up).
    """
    if not n_pe > 0:
        raise DomainError("n_pe must be > 0")
    c_full = corr_t(t_total, xi_total, v_a, mu, n_pe, w, optimistic)
    c_t = corr_t(t_ch, xi_ch, v_a, mu, n_pe, w, optimistic)
    c_xi = corr_xi(xi_ch, mu, n_pe, w)
    t_ch_shifted = min(t_ch - c_t, 1.0)
    if not t_ch_shifted > 0:
        raise InfeasibleError("worst-case channel transmittance is not positive")
    return WorstCaseShift(
        corr_t_full=c_full,
        corr_t_ch=c_t,
        corr_xi_ch=c_xi,
        w=w,
        t_det_prime=min(t_det_prime + c_full, 1.0),
        t_ch=t_ch_shifted,
        xi_ch=xi_ch + c_xi,
    )


# ------------------------------------------------------- Monte Carlo trials

@dataclass(frozen=True)
class TrialResult:
    trial: int
    t_hat: float
    xi_hat: float
    covered_t: bool
    covered_xi: bool


def run_estimation_trials(
    t_true: float,
    xi_true: float,
    v_a: float,
    mu: int,
    n_pe: int,
    trials: int,
    w: float,
    seed: int,
) -> list[TrialResult]:
    """Repeat estimation on independent samples and check interval coverage.

    The transmittance interval is ``±Corr_T``; the ξ-correction bounds the
    per-quadrature noise variance that ``xi_hat`` estimates.
    """
    half_t = corr_t(t_true, xi_true, v_a, mu, n_pe, w)
    half_xi = corr_xi(xi_true, mu, n_pe, w)
    var_true = noise_variance(xi_true, mu)
    out = []
    for k in range(trials):
        est = estimate_t_xi(simulate_awgn_sample(t_true, xi_true, v_a, mu, n_pe, seed, stream=k))
        out.append(TrialResult(
            trial=k,
            t_hat=est.t_hat,
            xi_hat=est.xi_hat,
            covered_t=abs(est.t_hat - t_true) <= half_t,
            covered_xi=abs(est.xi_hat - var_true) <= half_xi,
        ))
    return out

"""Shot-noise-unit conventions and Gaussian-modulation statistics.

Everything here is dimensionless and expressed in shot-noise units (SNU):
vacuum quadrature variance is 1, Alice's total variance is ``V = V_A + 1``
and the classical per-quadrature variance ``Ṽ_A`` relates to the operator
variance by ``V_A = 4 Ṽ_A``.  Public functions take ``V_A``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ModulationStats:
    v_tilde_a: float
    v_a: float
    v_total: float
    mean_photon_number: float


@dataclass(frozen=True)
class ChannelObservables:
    t_ch: float
    t_det: float
    t: float
    xi: float
    v_b: float


def modulation_stats_from_va(v_a: float) -> ModulationStats:
    """Moments of a Gaussian ensemble with operator modulation variance ``v_a``."""
    if not v_a >= 0:
        raise DomainError(f"modulation variance must be >= 0, got {v_a!r}")
    return ModulationStats(
        v_tilde_a=v_a / 4,
        v_a=v_a,
        v_total=v_a + 1,
        mean_photon_number=v_a / 2,
    )


def modulation_stats_from_classical(v_tilde_a: float) -> ModulationStats:
    if not v_tilde_a >= 0:
        raise DomainError(f"classical modulation variance must be >= 0, got {v_tilde_a!r}")
    return modulation_stats_from_va(4 * v_tilde_a)


def _check_transmittance(name: str, t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {t!r}")


def db_to_transmittance(loss_db: float) -> float:
    return 10.0 ** (-loss_db / 10.0)


def transmittance_to_db(t: float) -> float:
    if not t > 0:
        raise DomainError("transmittance must be > 0 to express as dB loss")
    return -10.0 * math.log10(t)


def bob_variance(stats: ModulationStats, t_ch: float, t_det: float, xi_total: float) -> float:
    """Bob's quadrature variance ``V_B = T V_A + 1 + ξ`` with ``T = T_ch T_det``."""
    _check_transmittance("t_ch", t_ch)
    _check_transmittance("t_det", t_det)
    if not xi_total >= 0:
        raise DomainError(f"excess noise must be >= 0, got {xi_total!r}")
    return t_ch * t_det * stats.v_a + 1.0 + xi_total


def channel_observables(
    stats: ModulationStats, t_ch: float, t_det: float, xi_total: float
) -> ChannelObservables:
    v_b = bob_variance(stats, t_ch, t_det, xi_total)
    return ChannelObservables(t_ch=t_ch, t_det=t_det, t=t_ch * t_det, xi=xi_total, v_b=v_b)


# Input-referred line noises.  The rest of the package works with the
# Bob-referred excess noise; these exist for parity with the textbook form.

def channel_line_noise(t_ch: float, xi_a: float) -> float:
    """``Ξ_ch = (1 - T_ch)/T_ch + ξ_A`` referred to the channel input."""
    if not t_ch > 0:
        raise DomainError("t_ch must be > 0")
    return (1.0 - t_ch) / t_ch + xi_a


def detector_line_noise(t_det: float, v_el: float) -> float:
    """``Ξ_det = (1 - T_det)/T_det + v_el/T_det``."""
    if not t_det > 0:
        raise DomainError("t_det must be > 0")
    return (1.0 - t_det) / t_det + v_el / t_det


def total_line_noise(t_ch: float, t_det: float, xi_a: float, v_el: float) -> float:
    return channel_line_noise(t_ch, xi_a) + detector_line_noise(t_det, v_el) / t_ch


def bob_variance_line_form(
    stats: ModulationStats, t_ch: float, t_det: float, xi_a: float, v_el: float
) -> float:
    """``V_B = T_ch T_det (V + Ξ)``, the input-referred long form."""
    return t_ch * t_det * (stats.v_total + total_line_noise(t_ch, t_det, xi_a, v_el))

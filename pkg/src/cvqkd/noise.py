"""Composite transmittances and the component-level excess-noise budget.

The budget is split into three trusted/untrusted partitions:

* ``pr``  -- Alice's module (laser RIN, DAC quantisation), trusted
* ``ch``  -- the channel (residual phase noise after pilot correction)
* ``rec`` -- Bob's receiver (detector electronics, CMRR, ADC), trusted

and referred to Bob as ``ξ = T ξ_pr + T_det ξ_ch + ξ_rec``.

Physical units (W, V, Hz, s) only appear in :class:`HardwareParams`; every
returned noise is in SNU.  CMRR is converted from dB as an amplitude ratio,
``10**(dB/20)``: reading it as a power ratio changes ξ_CMRR by orders of
magnitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError
from .units import ModulationStats

PARTITIONS = ("pr", "ch", "rec")

# component name -> partition
COMPONENT_PARTITION = {
    "xi_rin_sig": "pr",
    "xi_rin_lo": "pr",
    "xi_dac": "pr",
    "xi_pr_phase": "ch",
    "xi_det": "rec",
    "xi_cmrr": "rec",
    "xi_adc": "rec",
}

# Reference hardware defaults.  The detector reference point is the LO power
# left after 13.7 dB total loss (5 dB channel + 8.7 dB LO arm) from 2 mW.
_P_LO_ALICE = 2e-3
_P_LO_REF = _P_LO_ALICE * 10.0 ** (-13.7 / 10.0)


@dataclass(frozen=True)
class FiberChannel:
    attenuation_db_per_km: float = 0.2
    length_km: float = 25.0

    def __post_init__(self):
        if self.attenuation_db_per_km < 0 or self.length_km < 0:
            raise DomainError("fiber attenuation and length must be >= 0")

    @property
    def loss_db(self) -> float:
        return self.attenuation_db_per_km * self.length_km


@dataclass(frozen=True)
class ReceiverChain:
    signal_arm_loss_db: float = 7.25
    lo_arm_loss_db: float = 8.7
    # 10**-0.02 turns the 7.25 / 8.7 dB arm losses into 10**-0.745 / 10**-0.89.
    eta_det: float = 10.0 ** -0.02

    def __post_init__(self):
        if self.signal_arm_loss_db < 0 or self.lo_arm_loss_db < 0:
            raise DomainError("arm losses must be >= 0 dB")
        if not 0.0 <= self.eta_det <= 1.0:
            raise DomainError("eta_det must lie in [0, 1]")


@dataclass(frozen=True)
class HardwareParams:
    rin: float = 10.0 ** -14.5
    b_laser: float = 1e4
    v_pi: float = 5.0
    dac_gain: float = 8.0
    v_fs: float = 1.0
    n_res: int = 16
    v_pt: float = 1.2
    n_pt: float = 3e8
    mean_pilot_photons: float = 600.0
    p_lo_alice: float = _P_LO_ALICE
    tau: float = 3e-9
    f_opt: float = 1.934e14
    h_planck: float = 6.63e-34
    g_gain: float = 1e5
    rho_resp: float = 0.85
    cmrr_db: float = 30.0
    p_lo_ref: float = _P_LO_REF
    xi_det_ref: float = 0.093

    def __post_init__(self):
        if int(self.n_res) != self.n_res or self.n_res < 1:
            raise DomainError("n_res must be an integer >= 1")
        if self.cmrr_db < 0:
            raise DomainError("cmrr_db must be >= 0")
        for name in ("v_pi", "tau", "f_opt", "h_planck", "g_gain", "rho_resp", "p_lo_ref"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0")
        for name in ("rin", "b_laser", "dac_gain", "v_fs", "v_pt", "p_lo_alice", "xi_det_ref"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")

    @property
    def cmrr_linear(self) -> float:
        return 10.0 ** (self.cmrr_db / 20.0)

    @property
    def photon_energy(self) -> float:
        return self.h_planck * self.f_opt


@dataclass(frozen=True)
class NoiseBudget:
    """Partitioned excess noise; ``components`` maps name -> (partition, SNU value)."""

    components: Mapping[str, tuple[str, float]]
    t: float
    t_det: float
    xi_pr: float = field(init=False)
    xi_ch: float = field(init=False)
    xi_rec: float = field(init=False)

    def __post_init__(self):
        sums = dict.fromkeys(PARTITIONS, 0.0)
        for name, (part, value) in self.components.items():
            if part not in sums:
                raise DomainError(f"unknown partition {part!r} for {name}")
            if not value >= 0:
                raise DomainError(f"negative noise component {name} = {value!r}")
            sums[part] += value
        object.__setattr__(self, "xi_pr", sums["pr"])
        object.__setattr__(self, "xi_ch", sums["ch"])
        object.__setattr__(self, "xi_rec", sums["rec"])

    @property
    def weights(self) -> dict[str, float]:
        return {"pr": self.t, "ch": self.t_det, "rec": 1.0}

    @property
    def total(self) -> float:
        """Bob-referred excess noise."""
        return self.t * self.xi_pr + self.t_det * self.xi_ch + self.xi_rec

    def rows(self) -> list[tuple[str, str, float, float]]:
        """(component, partition, value, Bob-referred contribution) per component."""
        w = self.weights
        return [(name, part, v, w[part] * v) for name, (part, v) in self.components.items()]


def channel_transmittance(ch: FiberChannel) -> float:
    return 10.0 ** (-ch.attenuation_db_per_km * ch.length_km / 10.0)


def arm_transmittances(rc: ReceiverChain) -> tuple[float, float]:
    """(T_det, T'_det) for the signal and LO arms, detector efficiency included."""
    t_det = rc.eta_det * 10.0 ** (-rc.signal_arm_loss_db / 10.0)
    t_det_prime = rc.eta_det * 10.0 ** (-rc.lo_arm_loss_db / 10.0)
    return t_det, t_det_prime


def lo_power_at_bob(hw: HardwareParams, t_ch: float, t_det_prime: float) -> float:
    """LO power reaching the detector.  The LO travels with the signal, so it
    sees the channel loss as well as the LO-arm loss."""
    return hw.p_lo_alice * t_ch * t_det_prime


def xi_rin(hw: HardwareParams, stats: ModulationStats) -> tuple[float, float]:
    """Signal and LO laser-intensity-noise terms (same laser, shared RIN and B)."""
    rin_b = hw.rin * hw.b_laser
    return stats.v_a * math.sqrt(rin_b), 0.25 * rin_b * stats.v_total


def dac_quantization_variance(hw: HardwareParams) -> float:
    """``LSB²/12`` in V² for an ``n_res``-bit converter spanning ``v_fs``."""
    return hw.v_fs**2 / (12.0 * 4.0 ** int(hw.n_res))


def xi_dac(hw: HardwareParams, stats: ModulationStats) -> float:
    # Worst-case value of the modulator-voltage bound.
    v_q = dac_quantization_variance(hw)
    k = math.pi * hw.dac_gain / hw.v_pi
    return stats.v_a * (k * math.sqrt(v_q) + 0.5 * k**2 * v_q) ** 2


def xi_phase_ref(hw: HardwareParams, stats: ModulationStats) -> float:
    if not (hw.n_pt > 0 and hw.mean_pilot_photons > 0):
        raise DomainError("pilot count and pilot photon number must be > 0")
    return 0.5 * stats.v_a * hw.v_pt / (hw.n_pt * hw.mean_pilot_photons)


def xi_detector(p_lo: float, hw: HardwareParams) -> float:
    """Balanced-detector electronic noise ``μ/(C - 1)``.

    Clearance minus one scales with the shot-noise variance, i.e. linearly with
    LO power, so the noise falls as ``1/P_LO`` from the calibration point
    ``(p_lo_ref, xi_det_ref)``.  The reference value already carries μ.
    """
    if not p_lo > 0:
        raise DomainError(f"LO power must be > 0, got {p_lo!r}")
    return hw.xi_det_ref * hw.p_lo_ref / p_lo


def clearance(p_lo: float, hw: HardwareParams, mu: int = 2) -> float:
    xi = xi_detector(p_lo, hw)
    return math.inf if xi == 0 else 1.0 + mu / xi


def xi_cmrr(hw: HardwareParams, stats: ModulationStats, p_lo: float, mu: int = 2) -> float:
    if not p_lo > 0:
        raise DomainError(f"LO power must be > 0, got {p_lo!r}")
    rin_b = hw.rin * hw.b_laser
    hf = hw.photon_energy
    signal_term = hf * stats.v_a**2 * rin_b / (4.0 * hw.tau * p_lo)
    lo_term = hw.tau / hf * p_lo * rin_b
    return mu / (4.0 * hw.cmrr_linear**2) * (signal_term + lo_term)


def xi_adc(hw: HardwareParams, p_lo: float, mu: int = 2) -> float:
    if not p_lo > 0:
        raise DomainError(f"LO power must be > 0, got {p_lo!r}")
    v_q = dac_quantization_variance(hw)
    return mu * hw.tau * v_q / (hw.photon_energy * hw.g_gain**2 * hw.rho_resp**2 * p_lo)


def assemble_budget(components: Mapping[str, float], t: float, t_det: float) -> NoiseBudget:
    unknown = set(components) - set(COMPONENT_PARTITION)
    if unknown:
        raise DomainError(f"unknown noise components: {sorted(unknown)}")
    tagged = {name: (COMPONENT_PARTITION[name], float(components[name])) for name in COMPONENT_PARTITION
              if name in components}
    return NoiseBudget(components=tagged, t=t, t_det=t_det)


def compute_budget(
    hw: HardwareParams,
    stats: ModulationStats,
    t_ch: float,
    rc: ReceiverChain,
    mu: int = 2,
    t_det_prime: float | None = None,
) -> NoiseBudget:
    """Full budget at channel transmittance ``t_ch``.

    ``t_det_prime`` overrides the LO-arm transmittance (used by the
    best-case shift of parameter estimation).
    """
    t_det, t_lo = arm_transmittances(rc)
    if t_det_prime is not None:
        t_lo = t_det_prime
    p_lo = lo_power_at_bob(hw, t_ch, t_lo)
    rin_sig, rin_lo = xi_rin(hw, stats)
    components = {
        "xi_rin_sig": rin_sig,
        "xi_rin_lo": rin_lo,
        "xi_dac": xi_dac(hw, stats),
        "xi_pr_phase": xi_phase_ref(hw, stats),
        "xi_det": xi_detector(p_lo, hw),
        "xi_cmrr": xi_cmrr(hw, stats, p_lo, mu),
        "xi_adc": xi_adc(hw, p_lo, mu),
    }
    return assemble_budget(components, t=t_ch * t_det, t_det=t_det)

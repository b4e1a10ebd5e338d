"""SNR, mutual information and secure-key-rate bounds.

Rates are in bits per transmitted state (signal and pilot pulses both count
towards ``n_states``).  Raw bounds may be negative; callers clamp for the
headline rate and keep the raw value for diagnostics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import DomainError, InfeasibleError


@dataclass(frozen=True)
class SecurityParams:
    n_states: float = 6e8
    n_pe: float = 6e7
    n_pt: float = 3e8
    beta: float = 0.95
    fer: float = 0.03
    d: float = 1e4
    eps_s: float = 1e-10
    eps_h: float = 1e-10
    eps_cor: float = 5.206e-9
    eps_pe: float = 1e-10
    f_et: float = 0.0
    d_et: float | None = None  # None -> V_A / 2
    f_sym: float = 50e6
    w: float | None = None  # None -> derived from eps_pe

    def __post_init__(self):
        for name in ("eps_s", "eps_h", "eps_cor", "eps_pe"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise DomainError(f"{name} must lie in (0, 1)")
        if self.n_pe + self.n_pt > self.n_states:
            raise DomainError("n_pe + n_pt exceeds n_states")
        if self.d < 2:
            raise DomainError("effective alphabet size d must be >= 2")
        if not 0.0 <= self.beta <= 1.0 or not 0.0 <= self.fer <= 1.0:
            raise DomainError("beta and fer must lie in [0, 1]")
        if not 0.0 <= self.f_et < 1.0:
            raise DomainError("f_et must lie in [0, 1)")

    @classmethod
    def collective(cls, **overrides) -> "SecurityParams":
        return replace(cls(), **overrides)

    @classmethod
    def coherent(cls, **overrides) -> "SecurityParams":
        base = cls(eps_s=1e-43, eps_h=1e-43, eps_pe=1e-43, eps_cor=1.3e-9, f_et=0.2)
        return replace(base, **overrides)

    @property
    def n(self) -> float:
        """Symbols left for key generation after pilots and parameter estimation."""
        return self.n_states - (self.n_pt + self.n_pe)


@dataclass(frozen=True)
class CoherentTerms:
    rate: float
    eps_prime: float
    phi_n: int
    k_n: float
    theta_param: float
    n_tilde: float
    n_et: float


@dataclass(frozen=True)
class RateReport:
    snr: float
    i_ab: float
    chi: float
    r_asympt: float
    r_finite_collective: float
    r_finite_coherent: float
    key_rate_bps: float
    epsilon_total: float
    epsilon_prime_coherent: float
    diagnostics: dict = field(default_factory=dict)


def snr(t: float, v_a: float, xi: float, mu: int = 2) -> float:
    denom = 1.0 + xi / mu
    if not denom > 0:
        raise DomainError("noise term must keep the SNR denominator positive")
    return (t * v_a / mu) / denom


def mutual_information(snr_value: float, mu: int = 2) -> float:
    if not snr_value >= 0:
        raise DomainError(f"SNR must be >= 0, got {snr_value!r}")
    return 0.5 * mu * math.log2(1.0 + snr_value)


def code_rate_relation(beta: float, i_ab: float, q_alphabet: float) -> float:
    """Code rate ``R`` with ``R log2 q = β I_AB``."""
    if q_alphabet < 2:
        raise DomainError("alphabet size must be >= 2")
    return beta * i_ab / math.log2(q_alphabet)


def asymptotic_rate(i_ab: float, chi: float, beta: float, fer: float) -> float:
    return (1.0 - fer) * (beta * i_ab - chi)


def delta_aep(d: float, fer: float, eps_s: float, refined: bool = True) -> float:
    if d < 2 or not 0.0 < eps_s < 1.0 or not 0.0 <= fer < 1.0:
        raise DomainError("delta_aep needs d >= 2, eps_s in (0,1), fer in [0,1)")
    # log space: eps_s**4 underflows for eps_s below ~1e-77
    inner = math.log2(18.0) - 2.0 * math.log2(1.0 - fer) - 4.0 * math.log2(eps_s)
    base = math.sqrt(d) + 2.0 if refined else 2.0 * math.sqrt(d) + 1.0
    return 4.0 * math.log2(base) * math.sqrt(inner)


def theta_correction(fer: float, eps_s: float, eps_h: float) -> float:
    if fer >= 1.0:
        raise DomainError("FER = 1 leaves no blocks to correct")
    return math.log2((1.0 - fer) * (1.0 - eps_s**2 / 3.0)) + 2.0 * math.log2(math.sqrt(2.0) * eps_h)


def epsilon_total(sec: SecurityParams) -> float:
    return 2.0 * (1.0 - sec.fer) * sec.eps_pe + sec.eps_cor + sec.eps_s + sec.eps_h


def finite_rate_collective(i_ab: float, chi: float, sec: SecurityParams) -> float:
    """Composable finite-size bound; ``i_ab``/``chi`` at worst-case parameters."""
    n = sec.n
    if not n > 0:
        raise DomainError("no symbols left after pilots and parameter estimation")
    d_aep = delta_aep(sec.d, sec.fer, sec.eps_s)
    theta = theta_correction(sec.fer, sec.eps_s, sec.eps_h)
    return n * (1.0 - sec.fer) / sec.n_states * (
        sec.beta * i_ab - chi - d_aep / math.sqrt(n) + theta / n
    )


def phi_n(k_n: float) -> int:
    """``2 ceil(log2 C(K+4, 4))`` in exact integer arithmetic (K rounded up)."""
    k = max(1, math.ceil(k_n))
    c = math.comb(k + 4, 4)
    return 2 * (c - 1).bit_length()


def coherent_extension(
    i_ab: float, chi: float, sec: SecurityParams, v_a: float, eps: float | None = None
) -> CoherentTerms:
    """Finite-size rate against coherent attacks via energy tests.

    ``eps`` is the collective-attack security of the underlying protocol
    (defaults to :func:`epsilon_total`).  The energy test is assumed passed.
    """
    if not sec.f_et > 0:
        raise InfeasibleError("coherent-attack security needs a positive energy-test fraction f_et")
    eps = epsilon_total(sec) if eps is None else eps
    n = sec.n
    if not n > 0:
        raise DomainError("no symbols left after pilots and parameter estimation")
    n_et = sec.f_et * n
    n_tilde = sec.n_states - (sec.n_pt + sec.n_pe + n_et)
    d_et = v_a / 2.0 if sec.d_et is None else sec.d_et
    theta_param = math.log(8.0 / eps) / (2.0 * n_tilde)
    denom = 1.0 - 2.0 * math.sqrt(theta_param / sec.f_et)
    if not denom > 0:
        raise InfeasibleError("energy test too small: 1 - 2 sqrt(theta/f_et) <= 0")
    k_n = max(1.0, 2.0 * n_tilde * d_et * (1.0 + 2.0 * math.sqrt(theta_param) + 2.0 * theta_param) / denom)
    phi = phi_n(k_n)
    d_aep = delta_aep(sec.d, sec.fer, sec.eps_s)
    theta = theta_correction(sec.fer, sec.eps_s, sec.eps_h)
    rate = n_tilde * (1.0 - sec.fer) / sec.n_states * (
        sec.beta * i_ab - chi - d_aep / math.sqrt(n) + (theta - phi) / n
    )
    return CoherentTerms(
        rate=rate,
        eps_prime=k_n**4 * eps / 50.0,
        phi_n=phi,
        k_n=k_n,
        theta_param=theta_param,
        n_tilde=n_tilde,
        n_et=n_et,
    )

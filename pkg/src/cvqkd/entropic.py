"""Trusted-noise Gaussian entropies and the Holevo bound.

All states handled here are two-mode Gaussian states in standard form

    [[a·1, c·σz],
     [c·σz, b·1]]

so every symplectic spectrum has a closed form and the hot path never builds
a matrix.  Entropies are in bits.

Eve holds the two modes of an entangling cloner in the channel.  Alice's
trusted noise enters through ``V -> V + ξ_pr`` on every quantity Eve sees;
Bob's trusted noise (``T_det``, ``ξ_rec``) only affects Eve's state after
Bob's heterodyne measurement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonPhysicalStateError, SingularScenarioError

# g(ν) is taken as 0 on [1, 1 + PURE_TOL] to avoid log(0).
PURE_TOL = 1e-12
# Slack on ν >= 1 for physicality checks.
EIGEN_TOL = 1e-9


@dataclass(frozen=True)
class TwoModeCov:
    a: float
    b: float
    c: float

    @property
    def z(self) -> float:
        disc = (self.a + self.b) ** 2 - 4.0 * self.c**2
        if disc < 0:
            # rounding on (near-)pure states can push this marginally negative
            if disc > -1e-12 * (self.a + self.b) ** 2:
                return 0.0
            raise NonPhysicalStateError(f"(a+b)^2 - 4c^2 = {disc!r} < 0 for {self}")
        return math.sqrt(disc)

    def matrix(self) -> np.ndarray:
        one = np.eye(2)
        sz = np.diag([1.0, -1.0])
        return np.block([[self.a * one, self.c * sz], [self.c * sz, self.b * one]])

    def scaled(self, k: float) -> "TwoModeCov":
        return TwoModeCov(self.a * k, self.b * k, self.c * k)


@dataclass(frozen=True)
class TrustedNoiseScenario:
    """Channel seen by Eve plus the trusted devices around it.

    ``v`` is Alice's total variance ``V_A + 1``; ``t_det`` is the full receiver
    transmittance ``T_rec·η_det``.
    """

    v: float
    t_ch: float
    t_det: float
    xi_pr: float = 0.0
    xi_ch: float = 0.0
    xi_rec: float = 0.0

    def __post_init__(self):
        if not self.v >= 1.0:
            raise DomainError(f"V must be >= 1, got {self.v!r}")
        for name in ("t_ch", "t_det"):
            t = getattr(self, name)
            if not 0.0 <= t <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {t!r}")
        for name in ("xi_pr", "xi_ch", "xi_rec"):
            if not getattr(self, name) >= 0.0:
                raise DomainError(f"{name} must be >= 0")

    @property
    def v_eve(self) -> float:
        """Alice's variance as far as Eve is concerned."""
        return self.v + self.xi_pr

    @property
    def w_ch(self) -> float:
        if self.t_ch == 1.0:
            if self.xi_ch > 0.0:
                raise SingularScenarioError("T_ch = 1 with channel excess noise has no cloner model")
            return 1.0
        return self.xi_ch / (1.0 - self.t_ch) + 1.0

    @property
    def w_rec(self) -> float:
        if self.t_det == 1.0:
            return math.inf if self.xi_rec > 0.0 else 1.0
        return self.xi_rec / (1.0 - self.t_det) + 1.0

    @property
    def rec_noise(self) -> float:
        """``(1 - T_det)·W_rec``, finite even as ``T_det -> 1``."""
        return self.xi_rec + 1.0 - self.t_det

    @property
    def t(self) -> float:
        return self.t_ch * self.t_det

    @property
    def xi_bob(self) -> float:
        return self.t * self.xi_pr + self.t_det * self.xi_ch + self.xi_rec

    @property
    def v_b(self) -> float:
        return self.t * (self.v_eve - 1.0) + 1.0 + self.t_det * self.xi_ch + self.xi_rec


@dataclass(frozen=True)
class HolevoResult:
    s_e: float
    s_e_given_b: float
    chi: float
    eigenvalues: tuple[float, float, float, float]


def symplectic_eigenvalues(m: TwoModeCov) -> tuple[float, float]:
    """Closed-form spectrum ``(z ± (b - a))/2``, larger value first."""
    z = m.z
    v1 = 0.5 * (z + (m.b - m.a))
    v2 = 0.5 * (z - (m.b - m.a))
    return (v1, v2) if v1 >= v2 else (v2, v1)


def gaussian_entropy(nu: float) -> float:
    """Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue ``nu``."""
    if nu < 1.0 - EIGEN_TOL:
        raise DomainError(f"symplectic eigenvalue {nu!r} < 1 is unphysical")
    if nu <= 1.0 + PURE_TOL:
        return 0.0
    p = 0.5 * (nu + 1.0)
    q = 0.5 * (nu - 1.0)
    return p * math.log2(p) - q * math.log2(q)


def entropy(m: TwoModeCov) -> float:
    return sum(gaussian_entropy(nu) for nu in symplectic_eigenvalues(m))


def sigma_ab_trusted(s: TrustedNoiseScenario, include_alice_noise: bool = False) -> TwoModeCov:
    """Alice-Bob state at the channel output, before the trusted receiver.

    With ``include_alice_noise`` the variance is replaced by ``V + ξ_pr``,
    the purification Eve effectively holds; that is the form whose entropy
    equals Eve's.
    """
    v = s.v_eve if include_alice_noise else s.v
    return TwoModeCov(
        a=v,
        b=s.t_ch * (v - 1.0) + 1.0 + s.xi_ch,
        c=math.sqrt(s.t_ch * (v * v - 1.0)),
    )


def sigma_e(s: TrustedNoiseScenario) -> TwoModeCov:
    w = s.w_ch
    return TwoModeCov(
        a=(1.0 - s.t_ch) * s.v_eve + s.t_ch * w,
        b=w,
        c=math.sqrt(s.t_ch * (w * w - 1.0)),
    )


def conditional_coefficients(s: TrustedNoiseScenario) -> tuple[float, float, float]:
    """``(e1, e2, e3)`` of Eve's state after Bob's heterodyne, before scaling by ``1/(V_B + 1)``."""
    v = s.v_eve
    w = s.w_ch
    t_ch = s.t_ch
    t_r = s.t_det
    n_rec = s.rec_noise
    e1 = v * (n_rec + t_r * w + 1.0) + t_ch * (w - v) * (1.0 + n_rec)
    e2 = math.sqrt(t_ch * (w * w - 1.0)) * (t_r * v + n_rec + 1.0)
    e3 = n_rec * w + t_r * t_ch * (v * w - 1.0) + t_r + w
    return e1, e2, e3


def sigma_e_given_b(s: TrustedNoiseScenario) -> TwoModeCov:
    e1, e2, e3 = conditional_coefficients(s)
    return TwoModeCov(e1, e3, e2).scaled(1.0 / (s.v_b + 1.0))


def conditional_eigenvalues(s: TrustedNoiseScenario) -> tuple[float, float]:
    """``v3, v4`` straight from ``e1..e3``; the divisor is ``V_B + 1`` (heterodyne)."""
    e1, e2, e3 = conditional_coefficients(s)
    disc = (e1 + e3) ** 2 - 4.0 * e2**2
    if disc < 0:
        raise NonPhysicalStateError(f"negative discriminant {disc!r} in conditional state")
    z = math.sqrt(disc)
    k = 2.0 * (s.v_b + 1.0)
    v3 = (z + (e3 - e1)) / k
    v4 = (z - (e3 - e1)) / k
    return (v3, v4) if v3 >= v4 else (v4, v3)


def holevo_bound(s: TrustedNoiseScenario) -> HolevoResult:
    v1, v2 = symplectic_eigenvalues(sigma_e(s))
    v3, v4 = conditional_eigenvalues(s)
    s_e = gaussian_entropy(v1) + gaussian_entropy(v2)
    s_eb = gaussian_entropy(v3) + gaussian_entropy(v4)
    return HolevoResult(s_e=s_e, s_e_given_b=s_eb, chi=s_e - s_eb, eigenvalues=(v1, v2, v3, v4))

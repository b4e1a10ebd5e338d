"""Point evaluation, loss sweeps, V_A optimisation and budget reports.

Pipeline for one channel loss and one attack mode:

1. nominal noise budget from the hardware model;
2. (finite modes) worst-case shift of the estimated parameters: LO-arm
   transmittance up, which lowers the receiver noise; channel transmittance
   down; channel excess noise up;
3. trusted-noise Holevo bound and mutual information at those parameters;
4. the mode's rate bound.

The asymptotic mode skips step 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import noise, rates
from .config import RunConfig
from .entropic import HolevoResult, TrustedNoiseScenario, holevo_bound
from .errors import DomainError, InfeasibleError
from .estimation import WorstCaseShift, confidence_factor, worst_case_shift
from .units import db_to_transmittance, modulation_stats_from_va

STATUS_OK = "ok"
STATUS_ABORT = "abort"  # negative bound: the protocol aborts
STATUS_INFEASIBLE = "infeasible"  # the mode cannot be evaluated at all

# A lossless channel with excess noise has no cloner model; χ is continuous as
# T_ch -> 1 (about 4e-8 bits at this cap), so unit transmittance is nudged here.
T_CH_MAX = 1.0 - 1e-9


@dataclass(frozen=True)
class ModeResult:
    mode: str
    status: str
    rate: float  # raw bound, nan when infeasible
    t_ch: float = math.nan
    xi_total: float = math.nan
    snr: float = math.nan
    i_ab: float = math.nan
    chi: float = math.nan
    holevo: HolevoResult | None = None
    shift: WorstCaseShift | None = None
    coherent: rates.CoherentTerms | None = None
    message: str = ""

    @property
    def clamped(self) -> float:
        return self.rate if self.status == STATUS_OK else 0.0


def _confidence(sec: rates.SecurityParams) -> float:
    return sec.w if sec.w is not None else confidence_factor(sec.eps_pe)


def _evaluate(cfg: RunConfig, t_ch: float, budget: noise.NoiseBudget, v_a: float):
    """SNR, I_AB and the Holevo bound for a (possibly shifted) budget."""
    if budget.xi_ch > 0:
        t_ch = min(t_ch, T_CH_MAX)
    scen = TrustedNoiseScenario(
        v=v_a + 1.0, t_ch=t_ch, t_det=budget.t_det,
        xi_pr=budget.xi_pr, xi_ch=budget.xi_ch, xi_rec=budget.xi_rec,
    )
    mu = cfg.protocol.mu
    xi = scen.xi_bob
    s = rates.snr(scen.t, v_a, xi, mu)
    return xi, s, rates.mutual_information(s, mu), holevo_bound(scen)


def nominal_budget(cfg: RunConfig, loss_db: float, v_a: float | None = None) -> noise.NoiseBudget:
    v_a = cfg.protocol.v_a if v_a is None else v_a
    stats = modulation_stats_from_va(v_a)
    return noise.compute_budget(cfg.hardware, stats, db_to_transmittance(loss_db), cfg.receiver,
                                cfg.protocol.mu)


def shifted_budget(cfg: RunConfig, loss_db: float, sec: rates.SecurityParams, v_a: float):
    """Budget and channel transmittance at the edge of the estimation confidence region."""
    t_ch = db_to_transmittance(loss_db)
    stats = modulation_stats_from_va(v_a)
    nominal = noise.compute_budget(cfg.hardware, stats, t_ch, cfg.receiver, cfg.protocol.mu)
    _, t_lo = noise.arm_transmittances(cfg.receiver)
    sh = worst_case_shift(
        t_ch=t_ch, xi_ch=nominal.xi_ch, t_total=nominal.t, xi_total=nominal.total,
        t_det_prime=t_lo, v_a=v_a, mu=cfg.protocol.mu, n_pe=sec.n_pe, w=_confidence(sec),
    )
    # receiver noise at the optimistic LO power; the LO is measured, so the
    # nominal channel transmittance sets its power
    rec = noise.compute_budget(cfg.hardware, stats, t_ch, cfg.receiver, cfg.protocol.mu,
                               t_det_prime=sh.t_det_prime)
    comps = {name: v for name, (_, v) in rec.components.items()}
    comps["xi_pr_phase"] = sh.xi_ch
    budget = noise.assemble_budget(comps, t=sh.t_ch * rec.t_det, t_det=rec.t_det)
    return sh, budget


def evaluate_mode(cfg: RunConfig, loss_db: float, mode: str, v_a: float | None = None) -> ModeResult:
    v_a = cfg.protocol.v_a if v_a is None else v_a
    if mode == "asymptotic":
        sec = cfg.security("collective")
        t_ch = db_to_transmittance(loss_db)
        budget = nominal_budget(cfg, loss_db, v_a)
        xi, s, i_ab, hol = _evaluate(cfg, t_ch, budget, v_a)
        r = rates.asymptotic_rate(i_ab, hol.chi, sec.beta, sec.fer)
        return ModeResult(mode, STATUS_OK if r > 0 else STATUS_ABORT, r, t_ch, xi, s, i_ab, hol.chi, hol)

    sec = cfg.security(mode)
    try:
        if mode == "coherent" and not sec.f_et > 0:
            raise InfeasibleError("coherent-attack security needs a positive energy-test fraction f_et")
        sh, budget = shifted_budget(cfg, loss_db, sec, v_a)
        xi, s, i_ab, hol = _evaluate(cfg, sh.t_ch, budget, v_a)
        coh = None
        if mode == "coherent":
            coh = rates.coherent_extension(i_ab, hol.chi, sec, v_a, eps=rates.epsilon_total(sec))
            r = coh.rate
        else:
            r = rates.finite_rate_collective(i_ab, hol.chi, sec)
    except (InfeasibleError, DomainError) as exc:
        return ModeResult(mode, STATUS_INFEASIBLE, math.nan, message=str(exc))
    return ModeResult(mode, STATUS_OK if r > 0 else STATUS_ABORT, r, sh.t_ch, xi, s, i_ab, hol.chi,
                      hol, sh, coh)


def evaluate_point(cfg: RunConfig, loss_db: float, v_a: float | None = None) -> rates.RateReport:
    """All three bounds at one loss; SNR, I_AB and χ are those of ``cfg.run.mode``."""
    res = {m: evaluate_mode(cfg, loss_db, m, v_a) for m in ("asymptotic", "collective", "coherent")}
    head = res[cfg.run.mode]
    sec = cfg.security(cfg.run.mode)
    coh = res["coherent"].coherent
    diag = {
        "status": head.status,
        "message": head.message,
        "delta_aep": rates.delta_aep(sec.d, sec.fer, sec.eps_s),
        "theta": rates.theta_correction(sec.fer, sec.eps_s, sec.eps_h),
        "n": sec.n,
        "w": _confidence(sec),
        "holevo": head.holevo,
        "shift": head.shift,
        "raw": {m: r.rate for m, r in res.items()},
    }
    if coh is not None:
        diag.update(phi_n=coh.phi_n, k_n=coh.k_n, theta_param=coh.theta_param, n_tilde=coh.n_tilde)
    return rates.RateReport(
        snr=head.snr,
        i_ab=head.i_ab,
        chi=head.chi,
        r_asympt=res["asymptotic"].rate,
        r_finite_collective=res["collective"].rate,
        r_finite_coherent=res["coherent"].rate,
        key_rate_bps=sec.f_sym * head.clamped,
        epsilon_total=rates.epsilon_total(sec),
        epsilon_prime_coherent=coh.eps_prime if coh is not None else math.nan,
        diagnostics=diag,
    )


# ------------------------------------------------------------------- sweeps

SWEEP_COLUMNS = ("loss_db", "t_ch", "xi_total", "snr", "i_ab", "chi",
                 "r_asympt", "r_collective", "r_coherent", "key_rate_bps", "status")


@dataclass(frozen=True)
class SweepRow:
    loss_db: float
    t_ch: float
    xi_total: float
    snr: float
    i_ab: float
    chi: float
    r_asympt: float
    r_collective: float
    r_coherent: float
    key_rate_bps: float
    status: str

    def values(self) -> tuple:
        return tuple(getattr(self, c) for c in SWEEP_COLUMNS)


def sweep_row(cfg: RunConfig, loss_db: float, raw: bool = False) -> SweepRow:
    res = {m: evaluate_mode(cfg, loss_db, m) for m in ("asymptotic", "collective", "coherent")}
    head = res[cfg.run.mode]
    pick = (lambda r: r.rate) if raw else (lambda r: r.clamped)
    sec = cfg.security(cfg.run.mode)
    return SweepRow(
        loss_db=loss_db,
        t_ch=head.t_ch,
        xi_total=head.xi_total,
        snr=head.snr,
        i_ab=head.i_ab,
        chi=head.chi,
        r_asympt=pick(res["asymptotic"]),
        r_collective=pick(res["collective"]),
        r_coherent=pick(res["coherent"]),
        key_rate_bps=sec.f_sym * head.clamped,
        status=head.status,
    )


def run_sweep(cfg: RunConfig, raw: bool = False) -> list[SweepRow]:
    # each grid point is independent, so sequential evaluation is already deterministic
    return [sweep_row(cfg, loss, raw) for loss in cfg.sweep.points()]


def cutoff_loss(rows: list[SweepRow], column: str) -> float | None:
    """Largest loss with a strictly positive rate in ``column``."""
    pos = [r.loss_db for r in rows if getattr(r, column) > 0]
    return max(pos) if pos else None


# ------------------------------------------------------------- V_A search

def _rate_at(cfg: RunConfig, loss_db: float, v_a: float) -> float:
    r = evaluate_mode(cfg, loss_db, cfg.run.mode, v_a).rate
    return -math.inf if math.isnan(r) else r


def optimize_va(cfg: RunConfig, target_loss_db: float, coarse_step: float = 0.1,
                xtol: float = 1e-3) -> tuple[float, float]:
    """Maximise the rate of ``cfg.run.mode`` over V_A.

    A coarse grid brackets the maximum, then golden-section search refines it
    below 0.01 SNU.  The rate is assumed unimodal in V_A inside the bracket.
    """
    lo, hi = cfg.optimize.va_lo, cfg.optimize.va_hi
    grid = np.arange(lo, hi + 0.5 * coarse_step, coarse_step)
    vals = np.array([_rate_at(cfg, target_loss_db, v) for v in grid])
    k = int(np.argmax(vals))
    if not vals[k] > 0:
        raise InfeasibleError(f"no V_A in [{lo}, {hi}] gives a positive rate at {target_loss_db} dB")
    if 0 < k < len(grid) - 1:
        res = minimize_scalar(lambda v: -_rate_at(cfg, target_loss_db, v), method="golden",
                              bracket=(grid[k - 1], grid[k], grid[k + 1]), options={"xtol": xtol})
        if -res.fun >= vals[k]:
            return float(res.x), float(-res.fun)
    return float(grid[k]), float(vals[k])


# ----------------------------------------------------------- budget report

BUDGET_COLUMNS = ("component", "partition", "snu_value", "bob_referred")


def report_budget(cfg: RunConfig, loss_db: float) -> list[tuple[str, str, float, float]]:
    """Per-component rows, then per-partition subtotals and the Bob-referred total."""
    b = nominal_budget(cfg, loss_db)
    rows = list(b.rows())
    for part, value in (("pr", b.xi_pr), ("ch", b.xi_ch), ("rec", b.xi_rec)):
        rows.append((f"total_{part}", part, value, b.weights[part] * value))
    rows.append(("total", "all", b.total, b.total))
    return rows

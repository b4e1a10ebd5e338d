"""Command-line entry point.  Every subcommand writes CSV (stdout or ``--out``).

Exit status: 0 on success (aborted-rate rows included), 1 when an
optimisation finds no feasible point, 2 on configuration or I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from pathlib import Path

from . import analysis
from .config import MODES, RunConfig, load_config, serialize_config
from .errors import ConfigError, InfeasibleError
from .estimation import confidence_factor, run_estimation_trials


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--mode", choices=MODES, help="attack mode (overrides run.mode)")
    common.add_argument("--out", help="write CSV here instead of stdout")
    common.add_argument("--seed", type=int, help="RNG seed (overrides run.seed)")
    common.add_argument("--raw", action="store_true", help="emit unclamped rate bounds")

    p = argparse.ArgumentParser(prog="cvqkd", description="Trusted-noise CV-QKD key-rate analysis")
    sub = p.add_subparsers(dest="command", required=True)

    kr = sub.add_parser("keyrate", parents=[common], help="rates at a single channel loss")
    kr.add_argument("--loss-db", type=float, help="channel loss (default: from the channel section)")
    kr.add_argument("--v-a", type=float, help="modulation variance in SNU")

    sub.add_parser("sweep", parents=[common], help="rates over the configured loss grid")

    op = sub.add_parser("optimize-va", parents=[common], help="maximise the rate over V_A")
    op.add_argument("--loss-db", type=float, default=5.0)

    nb = sub.add_parser("noise-budget", parents=[common], help="component-level excess noise")
    nb.add_argument("--loss-db", type=float)

    es = sub.add_parser("estimate", parents=[common], help="Monte Carlo check of the estimators")
    es.add_argument("--t", type=float, default=0.1, help="true total transmittance")
    es.add_argument("--xi", type=float, default=0.05, help="true Bob-referred excess noise")
    es.add_argument("--n-pe", type=int, default=10_000)
    es.add_argument("--mu", type=int, choices=(1, 2), default=2)
    es.add_argument("--v-a", type=float, help="modulation variance (default: protocol.v_a)")
    es.add_argument("--trials", type=int, default=1000)
    es.add_argument("--eps-pe", type=float, default=1e-2)

    sub.add_parser("defaults", parents=[common], help="print the effective configuration")
    return p


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    run = cfg.run
    if args.mode:
        run = replace(run, mode=args.mode)
    if args.out:
        run = replace(run, out=args.out)
    if args.seed is not None:
        run = replace(run, seed=args.seed)
    return replace(cfg, run=run)


def _keyrate(cfg: RunConfig, args) -> str:
    loss = cfg.channel.effective_loss_db if args.loss_db is None else args.loss_db
    if args.v_a is not None:
        cfg = cfg.with_v_a(args.v_a)
    row = analysis.sweep_row(cfg, loss, raw=args.raw)
    rep = analysis.evaluate_point(cfg, loss)
    header = analysis.SWEEP_COLUMNS + ("epsilon_total", "epsilon_prime_coherent")
    return _csv(header, [row.values() + (rep.epsilon_total, rep.epsilon_prime_coherent)])


def _sweep(cfg: RunConfig, args) -> str:
    return _csv(analysis.SWEEP_COLUMNS, (r.values() for r in analysis.run_sweep(cfg, raw=args.raw)))


def _optimize(cfg: RunConfig, args) -> str:
    v_a, r = analysis.optimize_va(cfg, args.loss_db)
    return _csv(("loss_db", "mode", "v_a_opt", "rate"), [(args.loss_db, cfg.run.mode, v_a, r)])


def _budget(cfg: RunConfig, args) -> str:
    loss = cfg.channel.effective_loss_db if args.loss_db is None else args.loss_db
    return _csv(analysis.BUDGET_COLUMNS, analysis.report_budget(cfg, loss))


def _estimate(cfg: RunConfig, args) -> str:
    v_a = cfg.protocol.v_a if args.v_a is None else args.v_a
    trials = run_estimation_trials(
        t_true=args.t, xi_true=args.xi, v_a=v_a, mu=args.mu, n_pe=args.n_pe,
        trials=args.trials, w=confidence_factor(args.eps_pe), seed=cfg.run.seed,
    )
    return _csv(("trial", "t_hat", "xi_hat", "covered_t", "covered_xi"),
                ((t.trial, t.t_hat, t.xi_hat, t.covered_t, t.covered_xi) for t in trials))


_COMMANDS = {
    "keyrate": _keyrate,
    "sweep": _sweep,
    "optimize-va": _optimize,
    "noise-budget": _budget,
    "estimate": _estimate,
    "defaults": lambda cfg, args: serialize_config(cfg),
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        text = _COMMANDS[args.command](cfg, args)
        if cfg.run.out and args.command != "defaults":
            Path(cfg.run.out).write_text(text)
        else:
            sys.stdout.write(text)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # out-of-domain CLI arguments (e.g. --t 2) are configuration errors too
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

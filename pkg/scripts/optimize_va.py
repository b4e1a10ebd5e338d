"""Rate versus modulation variance at a fixed loss, with the optimiser's answer.

    python3 scripts/optimize_va.py --loss-db 5 [--mode collective]
"""
import argparse

import numpy as np

from cvqkd import analysis
from cvqkd.config import load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config")
    ap.add_argument("--loss-db", type=float, default=5.0)
    ap.add_argument("--mode", default="collective", choices=("collective", "coherent", "asymptotic"))
    args = ap.parse_args()

    cfg = load_config(args.config).with_mode(args.mode)
    v_opt, r_opt = analysis.optimize_va(cfg, args.loss_db)
    print(f"optimum V_A = {v_opt:.3f} SNU, rate = {r_opt:.6g} bit/state")
    for v in np.arange(2.0, 12.01, 1.0):
        r = analysis.evaluate_mode(cfg, args.loss_db, args.mode, v).rate
        print(f"  V_A = {v:5.2f}  r = {r:.6g}  ({r / r_opt:6.1%} of optimum)")


if __name__ == "__main__":
    main()

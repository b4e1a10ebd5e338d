"""Monte Carlo coverage of the confidence intervals and the n_pe^-1/2 scaling.

    python3 scripts/estimator_coverage.py [--trials 10000] [--eps-pe 1e-2]
"""
import argparse
import math

import numpy as np

from cvqkd.estimation import confidence_factor, estimate_t_xi, run_estimation_trials, simulate_awgn_sample


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=float, default=10**-1.245)
    ap.add_argument("--xi", type=float, default=0.0974)
    ap.add_argument("--v-a", type=float, default=6.77)
    ap.add_argument("--n-pe", type=int, default=10_000)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--eps-pe", type=float, default=1e-2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    w = confidence_factor(args.eps_pe)
    res = run_estimation_trials(args.t, args.xi, args.v_a, 2, args.n_pe, args.trials, w, args.seed)
    print(f"w = {w:.4f}")
    print(f"coverage T  = {np.mean([r.covered_t for r in res]):.4f}")
    print(f"coverage xi = {np.mean([r.covered_xi for r in res]):.4f}")

    var_true = 1 + args.xi / 2
    ns, et, ex = [], [], []
    for n_pe, reps in ((10**3, 400), (10**4, 200), (10**5, 100), (10**6, 40)):
        est = [estimate_t_xi(simulate_awgn_sample(args.t, args.xi, args.v_a, 2, n_pe, args.seed, stream=k))
               for k in range(reps)]
        ns.append(n_pe)
        et.append(math.sqrt(np.mean([(e.t_hat - args.t) ** 2 for e in est])))
        ex.append(math.sqrt(np.mean([(e.xi_hat - var_true) ** 2 for e in est])))
        print(f"n_pe = {n_pe:>8d}  rms(T) = {et[-1]:.3e}  rms(xi) = {ex[-1]:.3e}")
    for name, err in (("T", et), ("xi", ex)):
        print(f"log-log slope {name}: {np.polyfit(np.log10(ns), np.log10(err), 1)[0]:.3f}")


if __name__ == "__main__":
    main()

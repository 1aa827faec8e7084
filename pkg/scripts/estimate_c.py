"""t* sweeps over N for several eps and thresholds; prints the fitted C for each."""

import argparse

from eplab.dynamics import tstar_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20, 40, 80])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.2, 0.4])
    ap.add_argument("--delta", type=float, nargs="+", default=[0.01, 0.05, 0.1, 0.2])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    print(f"{'eps':>6} {'delta':>6} {'C':>8} {'r2':>9}  t*")
    for eps in args.eps:
        for delta in args.delta:
            s = tstar_scan(args.n, eps, delta, jobs=args.jobs)
            ts = " ".join(f"{t:.3f}" for t in s.t_star)
            print(f"{eps:6.3f} {delta:6.3f} {s.C:8.4f} {s.fit.r_squared:9.6f}  {ts}")


if __name__ == "__main__":
    main()

"""Norm curves for N = 10 and N = 20 at eps = 0.2, as CSV and SVG."""

import argparse
from pathlib import Path

import numpy as np

from eplab.dynamics import norm_trajectory, tstar_for
from eplab.report import svg_polyline, to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--outdir", default="results/norm")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    plateaus = {}
    for N in (10, 20):
        t_max = 3 * N / args.eps / 2.5
        grid = np.linspace(0, t_max, 601)
        traj = norm_trajectory(N, args.eps, grid)
        rows = list(zip(traj.times, traj.norms, traj.norm_squared))
        (out / f"norm_N{N}.csv").write_text(to_csv(("t", "norm", "norm_squared"), rows))
        (out / f"norm_N{N}.svg").write_text(svg_polyline(traj.times, traj.norms, f"N = {N}, ε = {args.eps:g}"))
        plateaus[N] = tstar_for(N, args.eps, 0.01).t_star
        print(f"N={N}: 1% plateau ends at t={plateaus[N]:.4f}, t*(10%)={tstar_for(N, args.eps).t_star:.4f}")
    print(f"plateau ratio N=20/N=10: {plateaus[20] / plateaus[10]:.4f}")


if __name__ == "__main__":
    main()

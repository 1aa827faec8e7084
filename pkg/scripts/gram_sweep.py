"""Gram determinants of the discretized eps-family and their decay with M."""

import argparse
import math

from eplab.crypto import fit_decay, gram_logdet_sweep, reconstruct_hamiltonian
from eplab.numerics import PrecisionContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=10)
    ap.add_argument("--bits", type=int, default=53)
    ap.add_argument("--h-max", type=int, default=5, help="largest M for the reconstructed Hamiltonian")
    args = ap.parse_args()
    ctx = PrecisionContext(mantissa_bits=args.bits, escalation_limit=max(1024, args.bits))
    sweep = gram_logdet_sweep(args.m_max, ctx)
    print(f"{'M':>3} {'Delta_M':>14} {'ln Delta_M':>14} {'bits':>5} converged")
    for M, r in sweep:
        print(f"{M:3d} {math.exp(r.log_det):14.6e} {r.log_det:14.6f} {r.mantissa_bits_used:5d} {r.converged}")
    for hi in range(3, args.m_max + 1):
        f = fit_decay(sweep[:hi])
        f10 = fit_decay(sweep[:hi], base=10)
        print(f"M=1..{hi}: ln slope {f.slope:.4f}, log10 slope {f10.slope:.4f}, r2 {f.r_squared:.6f}")
    print(f"{'M':>3} {'max|H|':>10} {'max|V^-1|':>12} {'rel resid':>10}")
    for M in range(1, args.h_max + 1):
        H = reconstruct_hamiltonian(M, ctx)
        rel = max(H.eigen_residuals) / H.frobenius_norm
        print(f"{M:3d} {H.max_abs_entry:10.4f} {H.max_abs_hermitizer_entry:12.4e} {rel:10.1e}")


if __name__ == "__main__":
    main()

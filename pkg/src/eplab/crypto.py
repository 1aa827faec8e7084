"""Finite crypto-Hermitian approximants built on a discretized eps-basis.

For N = 2M+1 the grid eps_n = n/(M+1), n = -M..M, gives unit vectors whose
pairwise inner products are the continuum overlap kernel.  Their Gram
determinant collapses super-exponentially in M, which is what makes the
N -> infinity limit of the approximants singular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp
import numpy as np

from .numerics import (
    CholeskyFailure,
    FitResult,
    LogDetResult,
    PrecisionContext,
    cholesky_at,
    cholesky_logdet,
    linear_fit,
)
from .spectral import overlap


class DegenerateFamily(ArithmeticError):
    """The discretized family is numerically linearly dependent at every allowed precision."""


@dataclass(frozen=True)
class DiscretizedFamily:
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")

    @property
    def dimension(self) -> int:
        return 2 * self.M + 1

    @property
    def eps_grid(self) -> tuple:
        return tuple(Fraction(n, self.M + 1) for n in range(-self.M, self.M + 1))

    def gram_rows(self, bits: int) -> list[list]:
        """Kernel entries evaluated in ``bits`` of precision (unit diagonal exact)."""
        with mp.workprec(bits):
            e = [mp.mpf(f.numerator) / f.denominator for f in self.eps_grid]
            n = len(e)
            rows = [[mp.mpf(1)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    v = mp.sqrt((1 - e[i] ** 2) * (1 - e[j] ** 2)) / (1 - e[i] * e[j])
                    rows[i][j] = rows[j][i] = v
        return rows


@dataclass(frozen=True)
class GramMatrix:
    M: int
    entries: np.ndarray

    @property
    def family(self) -> DiscretizedFamily:
        return DiscretizedFamily(self.M)


@dataclass(frozen=True)
class EmbeddedFamily:
    M: int
    vectors: np.ndarray  # row n is the vector for eps_n
    mantissa_bits: int
    factor: tuple = ()  # high-precision Cholesky rows

    def component_det(self) -> float:
        with mp.workprec(self.mantissa_bits):
            return float(mp.fprod(self.factor[i][i] for i in range(len(self.factor))))


@dataclass(frozen=True)
class ApproximantHamiltonian:
    M: int
    matrix: np.ndarray
    max_abs_entry: float
    eigen_residuals: tuple  # ||H v_n - eps_n v_n|| per vector
    frobenius_norm: float
    # largest entry of V^-1, the similarity that makes H Hermitian (diagonal)
    max_abs_hermitizer_entry: float
    mantissa_bits: int
    exact: tuple = ()  # H at mantissa_bits precision


def gram_matrix(M: int) -> GramMatrix:
    e = [float(f) for f in DiscretizedFamily(M).eps_grid]
    return GramMatrix(M, np.array([[overlap(a, b) for b in e] for a in e]))


def m1_vectors() -> np.ndarray:
    """The hand-picked M=1 triple, rows ordered |->, |0>, |+>."""
    s3, s20, s5 = math.sqrt(3) / 2, 1 / math.sqrt(20), 1 / math.sqrt(5)
    return np.array([[s3, s20, -s5], [1.0, 0.0, 0.0], [s3, s20, s5]])


def gram_logdet(M: int, ctx: PrecisionContext = PrecisionContext()) -> LogDetResult:
    return cholesky_logdet(DiscretizedFamily(M).gram_rows, ctx)


def gram_logdet_sweep(M_max: int, ctx: PrecisionContext = PrecisionContext(), jobs: int = 1) -> list:
    """[(M, LogDetResult)] for M = 1..M_max."""
    if M_max < 1:
        raise ValueError("M_max must be >= 1")
    Ms = list(range(1, M_max + 1))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            res = list(pool.map(gram_logdet, Ms, [ctx] * len(Ms)))
    else:
        res = [gram_logdet(M, ctx) for M in Ms]
    return list(zip(Ms, res))


def fit_decay(sweep, base: float = math.e) -> FitResult:
    """log_base(Delta_M) against M^2. The slope is the decay exponent."""
    bad = [M for M, r in sweep if not r.converged]
    if bad:
        raise DegenerateFamily(f"log-determinant did not converge for M={bad}")
    if len(sweep) < 3:
        raise ValueError("need at least 3 converged entries")
    scale = 1.0 / math.log(base)
    return linear_fit([(M * M, r.log_det * scale) for M, r in sweep])


def _embedding_bits(M: int, ctx: PrecisionContext) -> int:
    res = gram_logdet(M, ctx)
    if not res.converged:
        raise DegenerateFamily(
            f"Gram matrix for M={M} not certified positive definite up to {ctx.escalation_limit} bits"
        )
    return res.mantissa_bits_used


def embed_vectors(M: int, ctx: PrecisionContext = PrecisionContext()) -> EmbeddedFamily:
    """Unit vectors realizing the Gram matrix: the rows of its Cholesky factor."""
    bits = _embedding_bits(M, ctx)
    try:
        L = cholesky_at(DiscretizedFamily(M).gram_rows, bits)
    except CholeskyFailure as exc:  # pragma: no cover - certified above
        raise DegenerateFamily(str(exc)) from exc
    vecs = np.array([[float(v) for v in row] for row in L])
    return EmbeddedFamily(M, vecs, bits, tuple(tuple(r) for r in L))


def reconstruct_hamiltonian(M: int, ctx: PrecisionContext = PrecisionContext()) -> ApproximantHamiltonian:
    """H = V diag(eps) V^-1 with V's columns the embedded vectors.

    V = L^T is upper triangular, so H^T = L^-1 (D L) is a forward substitution.
    """
    emb = embed_vectors(M, ctx)
    bits = emb.mantissa_bits
    fam = DiscretizedFamily(M)
    n = fam.dimension
    with mp.workprec(bits):
        L = [list(r) for r in emb.factor]
        eps = [mp.mpf(f.numerator) / f.denominator for f in fam.eps_grid]
        DL = [[eps[i] * L[i][j] for j in range(n)] for i in range(n)]
        # Y = L^-1 DL, column by column
        Y = [[mp.mpf(0)] * n for _ in range(n)]
        Linv = [[mp.mpf(0)] * n for _ in range(n)]
        for col in range(n):
            for i in range(n):
                s = DL[i][col] - mp.fsum(L[i][k] * Y[k][col] for k in range(i))
                Y[i][col] = s / L[i][i]
                e = (1 if i == col else 0) - mp.fsum(L[i][k] * Linv[k][col] for k in range(i))
                Linv[i][col] = e / L[i][i]
        H = [[Y[j][i] for j in range(n)] for i in range(n)]
        residuals = []
        for m in range(n):
            v = L[m]
            r = [mp.fsum(H[i][k] * v[k] for k in range(n)) - eps[m] * v[i] for i in range(n)]
            residuals.append(float(mp.sqrt(mp.fsum(x * x for x in r))))
        frob = float(mp.sqrt(mp.fsum(x * x for row in H for x in row)))
        # V^-1 = L^-T
        herm = float(max(abs(x) for row in Linv for x in row))
        Hf = np.array([[float(x) for x in row] for row in H])
    return ApproximantHamiltonian(
        M, Hf, float(np.max(np.abs(Hf))), tuple(residuals), frob, herm, bits, tuple(tuple(r) for r in H)
    )


def hamiltonian_eigenvalues(H: ApproximantHamiltonian, bits: Optional[int] = None) -> np.ndarray:
    """Eigenvalues of the reconstructed matrix, sorted, in extended precision."""
    with mp.workprec(bits or H.mantissa_bits):
        ev = mp.eig(mp.matrix([list(r) for r in H.exact]), left=False, right=False)
        return np.sort(np.array([float(mp.re(v)) for v in ev]))

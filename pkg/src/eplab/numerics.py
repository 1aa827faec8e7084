"""Scalar and small-matrix kernels with controllable precision.

Everything here is a pure function.  High-precision work goes through
:mod:`mpmath` with an explicit working precision (``mp.workprec``) so that no
global state leaks between callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import mpmath as mp
import numpy as np

DOUBLE_BITS = 53

MatrixLike = Union[Sequence[Sequence[float]], np.ndarray]
# A matrix builder receives the working precision in bits and returns rows of
# numbers (mpf, float, int, Fraction) valid at that precision.
MatrixBuilder = Callable[[int], Sequence[Sequence[object]]]


@dataclass(frozen=True)
class PrecisionContext:
    mantissa_bits: int = DOUBLE_BITS
    escalation_limit: int = 1024
    rel_tol: float = 1e-6

    def __post_init__(self):
        if self.mantissa_bits < DOUBLE_BITS:
            raise ValueError(f"mantissa_bits must be >= {DOUBLE_BITS}, got {self.mantissa_bits}")
        if self.escalation_limit < self.mantissa_bits:
            raise ValueError("escalation_limit must be >= mantissa_bits")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")

    def levels(self) -> list[int]:
        """Doubling precision ladder, capped at ``escalation_limit``."""
        out = [self.mantissa_bits]
        while out[-1] < self.escalation_limit:
            out.append(min(2 * out[-1], self.escalation_limit))
        return out


@dataclass(frozen=True)
class LogDetResult:
    log_det: float
    mantissa_bits_used: int
    converged: bool
    spd_violation_index: Optional[int] = None
    # (bits, log_det or None on pivot failure) for every level attempted
    history: tuple = ()

    @property
    def det(self) -> float:
        return math.exp(self.log_det)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float


class CholeskyFailure(ArithmeticError):
    """Raised when a pivot is not strictly positive."""

    def __init__(self, index: int):
        super().__init__(f"non-positive pivot at index {index}")
        self.index = index


# ---------------------------------------------------------------------------
# Legendre polynomials and quadrature


def legendre_eval(n: int, x):
    """P_n(x) by the Bonnet recurrence. Works for real or complex ``x``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return x * 0 + 1
    p_prev, p = 1, x
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


def legendre_all(n_max: int, x) -> np.ndarray:
    """Values P_0(x) .. P_{n_max}(x); ``x`` may be an array."""
    x = np.asarray(x)
    out = np.empty((n_max + 1,) + x.shape, dtype=np.result_type(x, float))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def gauss_legendre_nodes(k: int) -> list[tuple[float, float]]:
    """k-point Gauss-Legendre rule on (-1, 1) as (node, weight) pairs."""
    if k < 1:
        raise ValueError("k must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(k)
    return list(zip(nodes.tolist(), weights.tolist()))


def gauss_legendre_arrays(k: int) -> tuple[np.ndarray, np.ndarray]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return np.polynomial.legendre.leggauss(k)


# ---------------------------------------------------------------------------
# Cholesky with precision escalation


def _to_mp_rows(A, bits: int):
    if callable(A):
        rows = A(bits)
    else:
        rows = A
    return [[mp.mpf(v) if not isinstance(v, mp.mpf) else +v for v in row] for row in rows]


def cholesky_factor(rows) -> list[list]:
    """Lower-triangular L with rows*rows^T = A at the ambient mpmath precision.

    ``rows`` must already hold mpf values. Raises :class:`CholeskyFailure`.
    """
    n = len(rows)
    L = [[mp.mpf(0)] * n for _ in range(n)]
    for j in range(n):
        s = rows[j][j] - mp.fsum(L[j][k] ** 2 for k in range(j))
        if not s > 0:
            raise CholeskyFailure(j)
        d = mp.sqrt(s)
        L[j][j] = d
        for i in range(j + 1, n):
            L[i][j] = (rows[i][j] - mp.fsum(L[i][k] * L[j][k] for k in range(j))) / d
    return L


def cholesky_at(A, bits: int) -> list[list]:
    """Cholesky factor of ``A`` (matrix or builder) computed with ``bits`` of mantissa."""
    with mp.workprec(bits):
        return cholesky_factor(_to_mp_rows(A, bits))


def cholesky_logdet(A: Union[MatrixLike, MatrixBuilder], ctx: PrecisionContext = PrecisionContext()) -> LogDetResult:
    """ln det A for symmetric positive definite ``A`` with a convergence certificate.

    ``A`` is either a fixed matrix (entries taken exactly as given) or a
    builder ``A(bits)`` that recomputes the entries at each working precision.
    Precision doubles from ``ctx.mantissa_bits`` until two successive levels
    agree to ``ctx.rel_tol`` or ``ctx.escalation_limit`` is reached.
    """
    prev = None
    history = []
    violation = None
    for bits in ctx.levels():
        try:
            L = cholesky_at(A, bits)
        except CholeskyFailure as exc:
            violation = exc.index
            history.append((bits, None))
            prev = None
            continue
        with mp.workprec(bits):
            ld = 2 * mp.fsum(mp.log(L[i][i]) for i in range(len(L)))
        ld = float(ld)
        history.append((bits, ld))
        violation = None
        if prev is not None and abs(ld - prev) <= ctx.rel_tol * abs(ld):
            return LogDetResult(ld, bits, True, None, tuple(history))
        prev = ld
    last_bits = history[-1][0]
    if prev is None:
        return LogDetResult(float("nan"), last_bits, False, violation, tuple(history))
    return LogDetResult(prev, last_bits, False, violation, tuple(history))


# ---------------------------------------------------------------------------
# Least squares


def linear_fit(points: Sequence[tuple[float, float]]) -> FitResult:
    """Ordinary least squares for y = slope*x + intercept."""
    xy = np.asarray(points, dtype=float)
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise ValueError("points must be a sequence of (x, y) pairs")
    x, y = xy[:, 0], xy[:, 1]
    if len(np.unique(x)) < 2:
        raise ValueError("need at least 2 distinct abscissae")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    return FitResult(slope, intercept, _r_squared(y, slope * x + intercept))


def fit_through_origin(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least squares for y = slope*x; r^2 is still measured about the mean of y."""
    xy = np.asarray(points, dtype=float)
    x, y = xy[:, 0], xy[:, 1]
    if not np.any(x != 0):
        raise ValueError("need a nonzero abscissa")
    slope = float(x @ y / (x @ x))
    return FitResult(slope, 0.0, _r_squared(y, slope * x))


def _r_squared(y: np.ndarray, yhat: np.ndarray) -> float:
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum((y - yhat) ** 2))
    if ss_tot == 0.0:
        return 1.0
    return min(1.0, max(0.0, 1.0 - ss_res / ss_tot))

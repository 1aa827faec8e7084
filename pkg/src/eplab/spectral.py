"""Real-energy basis of the infinite Jordan block and weight functions over it.

A weight function f on (-1, 1) is stored as Legendre coefficients; the
superposition with geometric states eps^j has components
``a_j = int f(eps) eps^j d eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .numerics import gauss_legendre_arrays, legendre_all


def overlap(eps: float, mu: float) -> float:
    """<eps|mu> for the normalized states sqrt(1-eps^2) eps^j."""
    if abs(eps) >= 1 or abs(mu) >= 1:
        raise ValueError("need |eps| < 1 and |mu| < 1")
    return math.sqrt((1 - eps * eps) * (1 - mu * mu)) / (1 - eps * mu)


def overlap_series(eps: float, mu: float, terms: int) -> float:
    """Same overlap from the component sum sqrt((1-eps^2)(1-mu^2)) * sum_{j<terms} (eps mu)^j."""
    x = eps * mu
    return math.sqrt((1 - eps * eps) * (1 - mu * mu)) * math.fsum(x**j for j in range(terms))


def basis_gram(eps_list: Sequence[float]) -> np.ndarray:
    e = [float(v) for v in eps_list]
    return np.array([[overlap(a, b) for b in e] for a in e])


@dataclass(frozen=True)
class LegendreSeries:
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) == 0:
            raise ValueError("need at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        c = np.asarray(self.coefficients)
        return np.tensordot(c, legendre_all(self.order, x), axes=1)

    def moments(self, J: int, k: int | None = None) -> np.ndarray:
        """int_{-1}^{1} f(eps) eps^j d eps for j = 0..J by Gauss-Legendre quadrature.

        The default rule is exact for the polynomial integrand.
        """
        if k is None:
            k = (self.order + J) // 2 + 2
        x, w = gauss_legendre_arrays(k)
        fx = self(x)
        return np.array([np.sum(w * fx * x**j) for j in range(J + 1)])


@lru_cache(maxsize=None)
def power_in_legendre(j: int) -> tuple:
    """Exact coefficients c_n with eps^j = sum_n c_n P_n(eps)."""
    # x P_n = ((n+1) P_{n+1} + n P_{n-1}) / (2n+1), applied j times to P_0
    c = [Fraction(1)]
    for _ in range(j):
        nxt = [Fraction(0)] * (len(c) + 1)
        for n, cn in enumerate(c):
            if cn == 0:
                continue
            nxt[n + 1] += cn * Fraction(n + 1, 2 * n + 1)
            if n > 0:
                nxt[n - 1] += cn * Fraction(n, 2 * n + 1)
        c = nxt
    return tuple(c)


def moment_matrix(J: int) -> list[list[Fraction]]:
    """Lower-triangular T with int P_n eps^j = T[j][n] (exact)."""
    T = [[Fraction(0)] * (J + 1) for _ in range(J + 1)]
    for j in range(J + 1):
        for n, c in enumerate(power_in_legendre(j)):
            T[j][n] = c * Fraction(2, 2 * n + 1)
    return T


def moment_match(a: Sequence[float]) -> LegendreSeries:
    """Degree-J weight f with int f eps^j d eps = a_j for j = 0..J."""
    if len(a) == 0:
        raise ValueError("need at least one moment")
    J = len(a) - 1
    T = moment_matrix(J)
    rhs = [Fraction(v) for v in a]
    f = [Fraction(0)] * (J + 1)
    for j in range(J + 1):
        s = rhs[j] - sum((T[j][n] * f[n] for n in range(j)), Fraction(0))
        f[j] = s / T[j][j]
    return LegendreSeries(tuple(float(v) for v in f))


def coherent_weight(alpha: complex, K: int) -> LegendreSeries:
    """Partial sum through n = K of f = 1/2 sum (2n+1) P_n(eps) P_n(alpha)."""
    if abs(alpha) >= 1:
        raise ValueError("need |alpha| < 1")
    if K < 0:
        raise ValueError("K must be >= 0")
    P = legendre_all(K, complex(alpha))
    c = [(2 * n + 1) / 2 * P[n] for n in range(K + 1)]
    if complex(alpha).imag == 0:
        c = [v.real for v in c]
    return LegendreSeries(tuple(complex(v) if isinstance(v, complex) else float(v) for v in c))


def coherent_moment_residual(alpha: complex, K: int, J: int) -> float:
    """max_j<=J |int f eps^j - alpha^j| for the truncated coherent weight."""
    f = coherent_weight(alpha, K)
    m = f.moments(J)
    return float(np.max(np.abs(m - complex(alpha) ** np.arange(J + 1))))

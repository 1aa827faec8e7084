"""Evolution under the order-N Jordan block and the norm of geometric states.

The Hamiltonian is the nilpotent shift ``(H v)_i = v_{i+1}`` (ones on the
superdiagonal).  States evolve by ``i dpsi/dt = H psi``, so the propagator
``exp(-iHt)`` is a polynomial in ``t`` of degree N-1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp
import numpy as np

from .numerics import FitResult, fit_through_origin, linear_fit


class ThresholdNotCrossed(RuntimeError):
    """The norm deviation never reached the requested threshold on the grid."""


@dataclass(frozen=True)
class JordanHamiltonian:
    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def matrix(self) -> np.ndarray:
        return np.eye(self.dimension, k=1)

    def apply(self, v) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[0] != self.dimension:
            raise ValueError(f"vector of length {v.shape[0]} does not match N={self.dimension}")
        out = np.zeros_like(v)
        out[:-1] = v[1:]
        return out


@dataclass(frozen=True)
class NormTrajectory:
    times: np.ndarray
    norms: np.ndarray
    epsilon: float
    dimension: int

    def __post_init__(self):
        t = self.times
        if len(t) == 0 or t[0] != 0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must start at 0 and be strictly increasing")

    @property
    def norm_squared(self) -> np.ndarray:
        return self.norms**2

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.norms.tolist()))

    def relative_deviation(self) -> np.ndarray:
        return np.abs(self.norms / self.norms[0] - 1.0)


@dataclass(frozen=True)
class CharacteristicTimeEstimate:
    t_star: float
    delta: float
    N: int
    epsilon: float


@dataclass(frozen=True)
class TstarScan:
    """Result of a t* sweep over N at fixed epsilon."""

    N: tuple
    t_star: tuple
    epsilon: float
    delta: float
    C: float
    fit: FitResult  # through the origin, t* against N
    affine: FitResult  # diagnostic only


# ---------------------------------------------------------------------------
# truncated exponentials


def truncated_exp(j: int, z: complex) -> complex:
    """E_j(z) = sum_{k<j} z^k / k!, accumulated in ascending k with exact rounding."""
    if j < 1:
        raise ValueError("j must be >= 1")
    z = complex(z)
    re, im = [], []
    term = 1 + 0j
    for k in range(j):
        re.append(term.real)
        im.append(term.imag)
        term = term * z / (k + 1)
    return complex(math.fsum(re), math.fsum(im))


def truncated_exp_prefixes(n: int, z: complex, guard_bits: int = 64) -> list[complex]:
    """[E_1(z), ..., E_n(z)].

    The partial sums cancel heavily once |z| is large, so they are formed in
    extended precision with enough extra bits to absorb the largest term.
    """
    z = complex(z)
    extra = int(abs(z) * math.log2(math.e)) + guard_bits
    out = []
    with mp.workprec(53 + extra):
        zz = mp.mpc(z.real, z.imag)
        s = mp.mpc(0)
        term = mp.mpc(1)
        for k in range(n):
            s += term
            out.append(complex(s))
            term = term * zz / (k + 1)
    return out


# ---------------------------------------------------------------------------
# evolution


def _as_state(psi0) -> np.ndarray:
    a = np.asarray(psi0, dtype=complex)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("state must be a nonempty 1-d vector")
    return a


def evolve_closed_form(psi0, t: float) -> np.ndarray:
    """psi_i(t) = sum_k (-it)^k/k! a_{i+k}."""
    a = _as_state(psi0)
    n = a.size
    out = np.zeros(n, dtype=complex)
    c = 1 + 0j
    for k in range(n):
        out[: n - k] += c * a[k:]
        c = c * (-1j * t) / (k + 1)
    return out


def evolve_oracle(psi0, t: float, steps: int = 1) -> np.ndarray:
    """exp(-iHt) psi0 via the terminating matrix series, applied ``steps`` times at t/steps."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    v = _as_state(psi0)
    H = JordanHamiltonian(v.size)
    tau = t / steps
    for _ in range(steps):
        acc = v.copy()
        term = v.copy()
        for k in range(1, v.size):
            term = (-1j * tau / k) * H.apply(term)
            acc = acc + term
        v = acc
    return v


def geometric_state(N: int, eps: complex, normalized: bool = False) -> np.ndarray:
    """a_j = eps^j for j < N, optionally scaled by sqrt(1 - |eps|^2)."""
    if abs(eps) >= 1:
        raise ValueError(f"|eps| must be < 1, got {abs(eps)}")
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise ValueError("N must be a finite positive integer for a vector realization")
    a = np.asarray(eps, dtype=complex) ** np.arange(N)
    a[0] = 1.0
    if normalized:
        a = a * math.sqrt(1 - abs(eps) ** 2)
    return a


def geometric_norm_squared(N, eps: complex) -> float:
    """sum_{j<N} |eps|^(2j); ``N = math.inf`` gives the limit 1/(1 - |eps|^2)."""
    r = abs(eps) ** 2
    if r >= 1:
        raise ValueError("|eps| must be < 1")
    if N == math.inf:
        return 1.0 / (1.0 - r)
    return math.fsum(r**j for j in range(int(N)))


def norm_squared_at(N: int, eps: float, t: float) -> float:
    """sum_{j=1}^{N} eps^(2(N-j)) |E_j(-i eps t)|^2."""
    E = truncated_exp_prefixes(N, -1j * eps * t)
    return math.fsum(eps ** (2 * (N - j)) * abs(E[j - 1]) ** 2 for j in range(1, N + 1))


def norm_trajectory(N: int, eps: float, t_grid: Sequence[float]) -> NormTrajectory:
    if not 0 <= abs(eps) < 1:
        raise ValueError("need |eps| < 1")
    t = np.asarray(t_grid, dtype=float)
    norms = np.sqrt([norm_squared_at(N, eps, ti) for ti in t])
    return NormTrajectory(t, norms, float(eps), int(N))


def tstar_grid(N: int, eps: float, step_frac: float = 0.05, span: float = 3.0) -> np.ndarray:
    """Uniform scan grid, step 0.05*N/eps up to 3*N/eps."""
    scale = N / abs(eps)
    n = int(round(span / step_frac))
    return np.linspace(0.0, span * scale, n + 1)


def estimate_tstar(traj: NormTrajectory, delta: float = 0.1, rtol: float = 1e-6) -> CharacteristicTimeEstimate:
    """First time the relative norm deviation reaches ``delta``, refined by bisection."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    dev = traj.relative_deviation()
    hits = np.nonzero(dev >= delta)[0]
    if hits.size == 0:
        raise ThresholdNotCrossed(
            f"deviation stays below {delta} up to t={traj.times[-1]:g} (N={traj.dimension}, eps={traj.epsilon})"
        )
    i = int(hits[0])
    if i == 0:
        return CharacteristicTimeEstimate(0.0, delta, traj.dimension, traj.epsilon)
    lo, hi = float(traj.times[i - 1]), float(traj.times[i])
    n0 = traj.norms[0]

    def crossed(t):
        return abs(math.sqrt(norm_squared_at(traj.dimension, traj.epsilon, t)) / n0 - 1.0) >= delta

    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if crossed(mid):
            hi = mid
        else:
            lo = mid
    return CharacteristicTimeEstimate(hi, delta, traj.dimension, traj.epsilon)


def tstar_for(N: int, eps: float, delta: float = 0.1) -> CharacteristicTimeEstimate:
    return estimate_tstar(norm_trajectory(N, eps, tstar_grid(N, eps)), delta)


def _tstar_job(args):
    N, eps, delta = args
    return tstar_for(N, eps, delta).t_star


def tstar_scan(N_list: Sequence[int], eps: float, delta: float = 0.1, jobs: int = 1) -> TstarScan:
    """t*(N) over ``N_list`` and C from the through-origin fit t* = N/(C eps)."""
    Ns = [int(n) for n in N_list]
    if len(set(Ns)) < 3:
        raise ValueError("need at least 3 distinct N values")
    work = [(n, eps, delta) for n in Ns]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            ts = list(pool.map(_tstar_job, work))
    else:
        ts = [_tstar_job(w) for w in work]
    pts = list(zip(Ns, ts))
    fit = fit_through_origin(pts)
    return TstarScan(
        tuple(Ns), tuple(ts), float(eps), float(delta), 1.0 / (fit.slope * abs(eps)), fit, linear_fit(pts)
    )


def estimate_C(N_list: Sequence[int], eps: float, delta: float = 0.1) -> float:
    return tstar_scan(N_list, eps, delta).C


def similarity_to_annihilation(N: int) -> np.ndarray:
    """d_k = 1/sqrt(k!) so that diag(d) H diag(d)^-1 has superdiagonal sqrt(1), ..., sqrt(N-1)."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return np.array([1.0 / math.sqrt(math.factorial(k)) for k in range(N)])


def complex_energy_factor(alpha: complex, t: float) -> complex:
    """e^{-i alpha t}; its modulus e^{Im(alpha) t} grows when Im(alpha) > 0."""
    return cmath.exp(-1j * alpha * t)

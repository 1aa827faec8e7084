import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eplab.dynamics import evolve_closed_form, tstar_for
from eplab.numerics import legendre_eval
from eplab.spectral import (
    LegendreSeries,
    basis_gram,
    coherent_moment_residual,
    coherent_weight,
    moment_match,
    overlap,
    overlap_series,
    power_in_legendre,
)

open_interval = st.floats(-0.95, 0.95)


def test_overlap_examples():
    assert overlap(0.3, 0.3) == pytest.approx(1.0, abs=1e-15)
    assert overlap(0.0, 0.6) == pytest.approx(math.sqrt(1 - 0.36), abs=1e-15)
    # series oracle, summed well past convergence
    assert overlap(0.2, -0.2) == pytest.approx(overlap_series(0.2, -0.2, 200), abs=1e-15)
    assert overlap(0.2, -0.2) == pytest.approx(0.96 / 1.04, abs=1e-15)


def test_overlap_rejects_boundary():
    with pytest.raises(ValueError):
        overlap(1.0, 0.0)


@settings(max_examples=50)
@given(open_interval, open_interval)
def test_overlap_kernel_properties(e, m):
    v = overlap(e, m)
    assert v == overlap(m, e)
    assert 0 < v <= 1 + 1e-15
    assert abs(v - overlap_series(e, m, 2000)) <= 1e-12
    if e != m:
        assert v > 0


def test_series_converges_to_kernel():
    e, m = 0.9, 0.85
    errs = [abs(overlap(e, m) - overlap_series(e, m, J)) for J in (5, 20, 60, 400)]
    assert all(b < a for a, b in zip(errs[:3], errs[1:3]))
    assert errs[-1] < 1e-12


def test_power_in_legendre_known_expansions():
    # x^2 = (1/3) P0 + (2/3) P2 ; x^3 = (3/5) P1 + (2/5) P3
    assert power_in_legendre(2) == (Fraction(1, 3), 0, Fraction(2, 3))
    assert power_in_legendre(3) == (0, Fraction(3, 5), 0, Fraction(2, 5))
    for j in range(9):
        c = power_in_legendre(j)
        for x in (-0.7, 0.1, 0.9):
            assert math.fsum(float(cn) * legendre_eval(n, x) for n, cn in enumerate(c)) == pytest.approx(x**j)


def test_moment_match_small_cases():
    assert moment_match([1.0]).coefficients == (0.5,)
    f = moment_match([0.0, 1.0])
    # f = (3/2) eps = (3/2) P1
    assert f.coefficients == pytest.approx((0.0, 1.5))


def test_moment_match_geometric_moments():
    a = [0.5**j for j in range(11)]
    f = moment_match(a)
    assert np.max(np.abs(f.moments(10) - a)) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=13))
def test_moment_match_is_left_inverse(a):
    f = moment_match(a)
    assert np.max(np.abs(f.moments(len(a) - 1) - np.asarray(a))) <= 1e-10


def test_legendre_series_eval():
    s = LegendreSeries((1.0, 2.0, 3.0))
    x = 0.4
    assert s(x) == pytest.approx(1 + 2 * x + 3 * (3 * x * x - 1) / 2)
    assert np.isfinite(s(np.array([-1.0, 1.0]))).all()


def test_coherent_weight_at_zero():
    f = coherent_weight(0.0, 30)
    m = f.moments(8)
    assert m[0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(m[1:])) < 1e-12


def test_coherent_weight_real_alpha():
    assert coherent_moment_residual(0.5, 40, 8) <= 1e-6


def test_coherent_weight_complex_alpha():
    f = coherent_weight(0.3 + 0.2j, 60)
    assert f.coefficients[3] == pytest.approx(3.5 * legendre_eval(3, 0.3 + 0.2j))
    assert coherent_moment_residual(0.3 + 0.2j, 60, 6) <= 1e-4


def test_coherent_weight_rejects_outside_disk():
    with pytest.raises(ValueError):
        coherent_weight(0.8 + 0.8j, 10)


def test_basis_gram():
    assert basis_gram([0.4]).tolist() == [[1.0]]
    G = basis_gram([-0.5, 0.0, 0.5])
    s = math.sqrt(3) / 2
    assert G == pytest.approx(np.array([[1, s, 0.6], [s, 1, s], [0.6, s, 1]]), abs=1e-15)


@settings(max_examples=30)
@given(st.lists(open_interval, min_size=1, max_size=8))
def test_basis_gram_is_psd(eps):
    G = basis_gram(eps)
    assert np.allclose(G, G.T)
    assert np.linalg.eigvalsh(G).min() > -1e-10


def test_superposition_norm_depends_on_time():
    eps, mu, N = 0.2, 0.4, 80
    a = np.array([eps**j + mu**j for j in range(N)], dtype=complex)
    n0 = np.linalg.norm(a)
    t_end = 2 * tstar_for(N, min(eps, mu)).t_star
    grid = np.linspace(0, t_end, 60)[1:]
    dev = [abs(np.linalg.norm(evolve_closed_form(a, t)) / n0 - 1) for t in grid]
    assert max(dev) > 1e-3

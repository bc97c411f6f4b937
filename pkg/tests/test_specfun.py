import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from herglotzlab.quad import sphere_grid
from herglotzlab.specfun import (HarmonicIndex, bessel_j, bessel_j_ladder, gamma_fn, gammaln,
                                 gauss_legendre, harmonic_indices, harmonic_matrix,
                                 multiplicity, n_harmonics, sph_harmonic)
from oracles import BESSEL_J, LOG_GAMMA


# --- Bessel -----------------------------------------------------------------

def test_bessel_examples():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(0.5, 2.0) == pytest.approx(math.sin(2) / math.sqrt(math.pi), rel=1e-14)
    assert bessel_j(1, 1.0) == pytest.approx(0.4400505857, abs=1e-10)


@pytest.mark.parametrize("nu,x,ref", BESSEL_J)
def test_bessel_against_reference(nu, x, ref):
    assert abs(bessel_j(nu, x) - ref) <= 1e-13 * max(abs(ref), 1e-300) + 1e-15 * (x <= 50) \
        + 1e-13 * (x > 50)


def test_bessel_ladder_matches_single_orders():
    x = np.linspace(0.0, 80.0, 161)
    L = bessel_j_ladder(0.5, 30, x)
    for k in (0, 7, 30):
        np.testing.assert_allclose(L[:, k], bessel_j(0.5 + k, x), rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("nu,x,ref", [t for t in BESSEL_J if t[0] >= 1])
def test_bessel_ladder_with_high_starting_order(nu, x, ref):
    # the ladder may start at any order, not only below 1
    got = bessel_j_ladder(nu, 2, x)[0]
    assert abs(got - ref) <= 1e-13 * max(abs(ref), 1e-300) + 1e-15 * math.sqrt(2 / (math.pi * x))


def test_bessel_rejects_negative_argument():
    with pytest.raises(ValueError):
        bessel_j(1.0, -1.0)
    with pytest.raises(ValueError):
        bessel_j_ladder(-0.5, 3, 1.0)


@given(st.floats(1.0, 20.0), st.floats(0.05, 20.0))
def test_bessel_three_term_recurrence(nu, x):
    lhs = bessel_j(nu - 1, x) + bessel_j(nu + 1, x)
    rhs = 2 * nu / x * bessel_j(nu, x)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(bessel_j(nu, x)))


@given(st.floats(0.0, 40.0))
def test_neumann_sum_rule(x):
    # J_0^2 + 2 sum_k J_k^2 = 1
    L = bessel_j_ladder(0.0, 120, x)
    assert abs(L[0] ** 2 + 2 * np.sum(L[1:] ** 2) - 1.0) < 1e-12


# --- Gamma ------------------------------------------------------------------

def test_gamma_examples():
    assert gamma_fn(5) == 24.0
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_fn(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)


@pytest.mark.parametrize("x,ref", LOG_GAMMA)
def test_log_gamma_reference(x, ref):
    assert gammaln(x) == pytest.approx(ref, rel=1e-13, abs=1e-14)


def test_gamma_domain_errors():
    with pytest.raises(ValueError):
        gamma_fn(0.0)
    with pytest.raises(OverflowError):
        gamma_fn(200.0)


@given(st.floats(0.1, 60.0))
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-12)


# --- Gauss-Legendre -----------------------------------------------------------

def test_gauss_legendre_small_rules():
    x, w = gauss_legendre(1)
    assert x.tolist() == [0.0] and w.tolist() == [2.0]
    x, w = gauss_legendre(2)
    np.testing.assert_allclose(np.sort(x), [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    np.testing.assert_allclose(w, [1.0, 1.0], rtol=1e-15)
    x, w = gauss_legendre(3)
    assert np.sum(w * x ** 4) == pytest.approx(0.4, rel=1e-15)


@given(st.integers(1, 200))
def test_gauss_legendre_exactness(n):
    x, w = gauss_legendre(n)
    assert np.all(w > 0)
    assert np.sum(w) == pytest.approx(2.0, rel=1e-13)
    k = 2 * n - 2   # even monomial of top exact degree
    assert np.sum(w * x ** k) == pytest.approx(2.0 / (k + 1), rel=1e-11)


def test_gauss_legendre_bounds():
    with pytest.raises(ValueError):
        gauss_legendre(0)


# --- harmonics ---------------------------------------------------------------

def test_harmonic_examples():
    xi2 = np.array([math.cos(0.3), math.sin(0.3)])
    assert sph_harmonic(HarmonicIndex(2, 0, 1), xi2) == pytest.approx(1 / math.sqrt(2 * math.pi))
    xi3 = np.array([0.0, 0.6, 0.8])
    assert sph_harmonic(HarmonicIndex(3, 0, 1), xi3) == pytest.approx(1 / math.sqrt(4 * math.pi))
    assert sph_harmonic(HarmonicIndex(2, 3, 1), np.array([1.0, 0.0])) == \
        pytest.approx(1 / math.sqrt(math.pi))


def test_multiplicity_examples():
    assert multiplicity(2, 0) == multiplicity(3, 0) == 1
    assert multiplicity(2, 5) == 2
    assert multiplicity(3, 2) == 5
    for d in (2, 3):
        assert sum(multiplicity(d, n) for n in range(9)) == n_harmonics(d, 8)


def test_harmonic_index_validation():
    with pytest.raises(ValueError):
        HarmonicIndex(2, 1, 3)
    with pytest.raises(ValueError):
        HarmonicIndex(4, 0, 1)


@pytest.mark.parametrize("d,res", [(2, 32), (3, 16)])
def test_orthonormality(d, res):
    g = sphere_grid(d, res)
    Y = harmonic_matrix(d, 8, g.points)
    G = Y.T @ (Y * g.weights[:, None])
    np.testing.assert_allclose(G, np.eye(n_harmonics(d, 8)), atol=1e-10)


@given(st.floats(-1, 1), st.floats(0, 2 * math.pi), st.floats(-1, 1), st.floats(0, 2 * math.pi))
def test_addition_theorem_d3(c1, p1, c2, p2):
    # sum_j Y_nj(x) Y_nj(y) = (2n+1)/(4 pi) P_n(x.y)
    def unit(c, p):
        s = math.sqrt(max(0.0, 1 - c * c))
        return np.array([s * math.cos(p), s * math.sin(p), c])
    x, y = unit(c1, p1), unit(c2, p2)
    n = 5
    Yx = harmonic_matrix(3, n, x[None])[0]
    Yy = harmonic_matrix(3, n, y[None])[0]
    sel = [i.flat for i in harmonic_indices(3, n) if i.n == n]
    lhs = float(np.sum(Yx[sel] * Yy[sel]))
    rhs = (2 * n + 1) / (4 * math.pi) * np.polynomial.legendre.legval(float(x @ y), [0] * n + [1])
    assert abs(lhs - rhs) < 1e-12

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from herglotzlab.herglotz import HerglotzField
from herglotzlab.quad import (TailPolicy, ball_average, gl_panels, integrate_semiaxis,
                              integrate_tail, smooth_step, sphere_grid)
from herglotzlab.specfun import bessel_j, harmonic_matrix
from herglotzlab.spherefn import SphereFunction
from oracles import GAMMA_CHIRP_D3


def test_exponential():
    res = integrate_semiaxis(lambda r: np.exp(-r))
    assert abs(res.value - 1.0) <= res.error + 1e-15
    assert res.error < 1e-10


def test_bessel_squared_over_r():
    res = integrate_semiaxis(lambda r: bessel_j(0.5, r) ** 2 / r, TailPolicy(tol=1e-8))
    assert res.converged
    assert abs(res.value - 1.0) < 1e-10
    assert abs(res.value - 1.0) <= res.error


def test_chirp_integrand_smooth_cutoff():
    pol = TailPolicy(acceleration="smooth-cutoff")
    res = integrate_semiaxis(lambda r: np.sin(r * r / 4) * bessel_j(0.5, r) ** 2 * r, pol)
    ref = GAMMA_CHIRP_D3[0][1] / math.pi
    assert abs(res.value - ref) < 1e-6
    assert abs(res.value - ref) <= res.error


def test_policy_validation():
    with pytest.raises(ValueError):
        TailPolicy(acceleration="magic")
    with pytest.raises(ValueError):
        TailPolicy(blocks=2)


def test_finite_support_vector_valued():
    res = integrate_semiaxis(lambda r: np.stack([r, r * r], axis=-1), support=2.0)
    np.testing.assert_allclose(res.value, [2.0, 8.0 / 3.0], rtol=1e-14)


def test_integrate_tail_oscillatory():
    # \int_10^inf sin(r)/r^2 dr
    res = integrate_tail(lambda r: np.sin(r) / r ** 2, 10.0)
    ref = -0.00894567808448161  # sin(10)/10 - Ci(10)
    assert abs(res.value - ref) < 1e-12


def test_smooth_step_shape():
    t = np.linspace(-1, 2, 301)
    s = smooth_step(t)
    assert s[0] == 0.0 and s[-1] == 1.0
    assert np.all(np.diff(s) >= 0)
    assert smooth_step(0.5) == pytest.approx(0.5)


@given(st.integers(2, 30))
def test_gl_panels_polynomial(m):
    edges = np.linspace(0.0, 3.0, m + 1)
    assert gl_panels(lambda r: r ** 7, edges, 4) == pytest.approx(3.0 ** 8 / 8, rel=1e-13)


def test_sphere_grid_weights():
    assert sphere_grid(2, 64).weights.sum() == pytest.approx(2 * math.pi, rel=1e-14)
    g = sphere_grid(3, 32)
    assert g.weights.sum() == pytest.approx(4 * math.pi, rel=1e-14)
    np.testing.assert_allclose(np.linalg.norm(g.points, axis=1), 1.0, rtol=1e-15)
    Y = harmonic_matrix(3, 2, g.points)
    assert np.sum(g.weights * Y[:, 4] ** 2) == pytest.approx(1.0, rel=1e-13)


def test_sphere_grid_rejects():
    with pytest.raises(ValueError):
        sphere_grid(4, 16)
    with pytest.raises(ValueError):
        sphere_grid(2, 2)


def test_ball_average_examples():
    g = sphere_grid(2, 16)
    assert ball_average(lambda p: np.ones(p.shape[0]), 2.0, g) == pytest.approx(2 * math.pi)
    assert ball_average(lambda p: np.zeros(p.shape[0]), 5.0, g) == 0.0
    u = HerglotzField(SphereFunction.basis(2, 0, 1))
    val = ball_average(lambda p: np.abs(u(p)) ** 2, 500.0, sphere_grid(2, 8))
    assert abs(val - 1.0) <= 0.02


def test_ball_average_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        ball_average(lambda p: np.ones(p.shape[0]), 0.0, sphere_grid(2, 8))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_ball_average_cesaro_rate(n):
    # deviation of the B* average of |I Y_n|^2 from 1 at 2R is <= 0.7x that at R (R >= 200)
    u = HerglotzField(SphereFunction.basis(2, n, 1))
    g = sphere_grid(2, 16)
    dev = [abs(ball_average(lambda p: np.abs(u(p)) ** 2, R, g) - 1.0) for R in (400.0, 800.0)]
    assert dev[1] <= 0.7 * dev[0]

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from herglotzlab.hconv import (SphereSymbol, algebra_checks, hconvolve, kernel_field,
                               mult_toeplitz_apply, mult_toeplitz_matrix, nodal_multiplier,
                               sphere_symbol, verify_factorization)
from herglotzlab.herglotz import HerglotzField
from herglotzlab.quad import sphere_grid
from herglotzlab.specfun import HarmonicIndex
from herglotzlab.spherefn import SphereFunction

SF = SphereFunction
H = HerglotzField


def product_target(phi, psi):
    d = phi.d
    deg = phi.max_degree + psi.max_degree
    g = sphere_grid(d, 4 * deg + 8 if d == 2 else 2 * deg + 8)
    return SF.project(d, deg, phi(g.points) * psi(g.points), g)


# ---------------------------------------------------------------------------
# symbols and multiplication operators
# ---------------------------------------------------------------------------

def test_symbol_dsl():
    assert sphere_symbol("cos").sup_abs == 1.0
    assert sphere_symbol("2+sin").sup_abs == 3.0
    assert sphere_symbol("const:c=-2").sup_abs == 2.0
    assert sphere_symbol("indicator", 3).indicator
    for bad in ("tan", "const:q=1", "const:c"):
        with pytest.raises(ValueError):
            sphere_symbol(bad)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("spec", ["cos", "sin", "indicator", "2+sin"])
def test_symbol_bounded_on_grid(d, spec):
    assert sphere_symbol(spec, d).check(sphere_grid(d, 32))


def test_identity_and_constant_symbols():
    phi = SF.basis(2, 3, 2, 0.5) + SF.basis(2, 1, 1, -1j)
    out = mult_toeplitz_apply(sphere_symbol("const:c=1"), phi)
    assert (out - phi).norm() < 1e-13
    out = mult_toeplitz_apply(sphere_symbol("const:c=2.5"), phi)
    assert (out - phi.scale(2.5)).norm() < 1e-13
    np.testing.assert_allclose(mult_toeplitz_matrix(sphere_symbol("const:c=1"), 3, 4).entries,
                               np.eye(25), atol=1e-13)


def test_indicator_times_constant_harmonic():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        out = mult_toeplitz_apply(sphere_symbol("indicator"), SF.basis(2, 0))
    assert out.coeffs[HarmonicIndex(2, 0, 1)] == pytest.approx(0.5, abs=1e-12)


def test_aliasing_warning():
    # the product of an indicator with anything has an infinite expansion
    with pytest.warns(RuntimeWarning, match="aliasing"):
        mult_toeplitz_apply(sphere_symbol("indicator"), SF.basis(2, 0), sphere_grid(2, 32))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        mult_toeplitz_apply(sphere_symbol("cos"), SF.basis(2, 2))


def test_cos_product_rule():
    # cos(t) * cos(2t)/sqrt(pi) = (cos t + cos 3t)/(2 sqrt(pi))
    out = mult_toeplitz_apply(sphere_symbol("cos"), SF.basis(2, 2, 1))
    target = SF.basis(2, 1, 1, 0.5) + SF.basis(2, 3, 1, 0.5)
    assert (out - target).norm() < 1e-13


@pytest.mark.parametrize("d", [2, 3])
def test_matrix_hermitian_iff_real_symbol(d):
    assert mult_toeplitz_matrix(sphere_symbol("cos", d), d, 6).hermitian
    polar = 0 if d == 2 else 2
    c = SphereSymbol(lambda p: np.exp(1j * p[:, polar]), 1.0, "exp(i cos)", real=False)
    M = mult_toeplitz_matrix(c, d, 6)
    assert not M.hermitian
    assert np.max(np.abs(M.entries - M.entries.conj().T)) > 1e-3


def test_real_symbol_gives_real_symmetric_matrix():
    M = mult_toeplitz_matrix(sphere_symbol("2+sin"), 2, 8).entries
    assert np.isrealobj(M)
    assert np.max(np.abs(M - M.T)) == 0.0


def test_matrix_matches_apply():
    a = sphere_symbol("2+sin")
    M = mult_toeplitz_matrix(a, 2, 6).entries
    phi = SF.basis(2, 2, 2)
    out = mult_toeplitz_apply(a, phi, nmax_out=6)
    np.testing.assert_allclose(out.dense(6), M @ phi.dense(6), atol=1e-13)


def test_nodal_indicator_is_idempotent():
    A = nodal_multiplier(sphere_symbol("indicator"), sphere_grid(2, 64)).entries
    assert np.max(np.abs(A @ A - A)) == 0.0


def test_kernel_field_density():
    K = kernel_field(sphere_symbol("cos"), 2, 4)
    target = SF.basis(2, 1, 1, math.sqrt(math.pi))
    assert (K.source - target).norm() < 1e-13


def test_coarse_grid_rejected():
    with pytest.raises(ValueError):
        mult_toeplitz_matrix(sphere_symbol("cos"), 2, 16, sphere_grid(2, 16))


# ---------------------------------------------------------------------------
# h-convolution
# ---------------------------------------------------------------------------

def test_hconvolve_with_unit_density_is_identity():
    # psi = 1 on the circle is sqrt(2 pi) Y_0
    u = H(SF.basis(2, 2, 1) + SF.basis(2, 1, 2, 0.5j))
    one = H(SF.basis(2, 0, 1, math.sqrt(2 * math.pi)))
    r = hconvolve(u, one, (200.0, 400.0), method="radial")
    assert r.converged
    assert (r.density - u.source).norm() < 1e-3 * u.source.norm()


def test_hconvolve_product_of_harmonics():
    u = H(SF.basis(2, 1, 1))
    r = hconvolve(u, u, (200.0, 400.0))
    target = product_target(u.source, u.source)
    assert target.coeffs[HarmonicIndex(2, 0, 1)] == pytest.approx(1 / math.sqrt(2 * math.pi))
    assert target.coeffs[HarmonicIndex(2, 2, 1)] == pytest.approx(1 / (2 * math.sqrt(math.pi)))
    assert (r.density - target).norm() <= 0.05 * target.norm()
    assert r.method == "spatial"


def test_hconvolve_commutes_in_the_limit():
    # a finite ball average is not symmetric in (u, v); the gap closes as R grows
    u = H(SF.basis(2, 1, 1) + SF.basis(2, 0))
    v = H(SF.basis(2, 2, 2, 1j))
    gaps = []
    for ladder in ((100.0, 200.0), (200.0, 400.0)):
        a = hconvolve(u, v, ladder, method="radial")
        b = hconvolve(v, u, ladder, method="radial")
        gaps.append((a.density - b.density).norm() / a.density.norm())
    assert gaps[0] < 0.02
    assert gaps[1] < 0.5 * gaps[0]


def test_hconvolve_two_realisations_agree():
    u = H(SF.basis(2, 1, 2))
    v = H(SF.basis(2, 2, 1))
    a = hconvolve(u, v, (60.0, 120.0), method="spatial")
    b = hconvolve(u, v, (60.0, 120.0), method="radial")
    assert (a.density - b.density).norm() < 1e-9


def test_hconvolve_zero_and_errors():
    z = hconvolve(H(SF.zero(2)), H(SF.basis(2, 1)), (100.0, 200.0))
    assert z.density.norm() == 0.0 and z.converged
    with pytest.raises(ValueError):
        hconvolve(H(SF.basis(2, 0)), H(SF.basis(3, 0)))
    with pytest.raises(ValueError):
        hconvolve(H(SF.basis(2, 0)), H(SF.basis(2, 0)), (0.0, 10.0))
    with pytest.raises(ValueError):
        hconvolve(H(SF.basis(2, 0)), H(SF.basis(2, 0)), method="fft")


def test_single_rung_is_flagged_non_convergent():
    r = hconvolve(H(SF.basis(2, 0)), H(SF.basis(2, 0)), (50.0,), method="radial")
    assert not r.converged and math.isinf(r.residual)


def test_hconvolve_d3():
    u = H(SF.basis(3, 1, 1))
    v = H(SF.basis(3, 1, 3))
    r = hconvolve(u, v, (200.0, 400.0))
    target = product_target(u.source, v.source)
    assert r.method == "radial"
    assert (r.density - target).norm() <= 0.01 * target.norm()


def test_factorization_zero():
    f = verify_factorization(H(SF.zero(2)), H(SF.basis(2, 0)), (400.0, 800.0))
    assert f.residuals == [0.0, 0.0]


def test_factorization_rate_d2():
    f = verify_factorization(H(SF.basis(2, 0)), H(SF.basis(2, 0)), (400.0, 800.0),
                             method="radial")
    assert f.residuals[0] <= 0.05
    assert 0.3 <= f.ratios[0] <= 0.7


def test_factorization_rate_d3():
    u = H(SF.basis(3, 2, 1) + SF.basis(3, 1, 2))
    v = H(SF.basis(3, 1, 1) + SF.basis(3, 0))
    f = verify_factorization(u, v, (300.0, 600.0))
    assert f.residuals[0] <= 0.05
    assert 0.3 <= f.ratios[0] <= 0.7


def test_factorization_fixed_radius_is_small_but_not_monotone_guaranteed():
    f = verify_factorization(H(SF.basis(2, 0)), H(SF.basis(2, 0)), (400.0,), window=False,
                             method="radial")
    assert f.residuals[0] <= 0.05 and not f.window


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def test_algebra_cos_vs_shifted_sin():
    rep = algebra_checks(sphere_symbol("cos"), sphere_symbol("2+sin"))
    assert rep.nodal_commutator <= 1e-12
    assert rep.nodal_product_error <= 1e-12
    ladder = [rep.norm_ladder[n] for n in (8, 16, 32)]
    assert ladder[0] < ladder[1] < ladder[2] <= 1.0 + 1e-10
    assert 1.0 - ladder[2] < 1.0 - ladder[0]
    assert max(rep.harmonic_commutators.values()) <= 1e-12
    assert all(rep.hermitian.values())
    assert max(rep.hull_distance.values()) <= 1e-10
    assert max(rep.spectrum_distance.values()) <= 1e-10


@pytest.mark.parametrize("spec,sup", [("indicator", 1.0), ("2+sin", 3.0), ("cos", 1.0)])
def test_norm_sandwich(spec, sup):
    rep = algebra_checks(sphere_symbol(spec), sphere_symbol("cos"), nmax_list=(8, 16, 32))
    gaps = [sup - rep.norm_ladder[n] for n in (8, 16, 32)]
    assert all(g >= -1e-10 for g in gaps)
    assert gaps[2] <= gaps[0]


def test_indicator_idempotent_and_spectrum_in_hull():
    rep = algebra_checks(sphere_symbol("indicator"), sphere_symbol("2+sin"))
    assert rep.nodal_idempotence_error <= 1e-12
    assert max(rep.hull_distance.values()) <= 1e-10
    d = rep.to_dict()
    assert set(d) >= {"commutator_norms", "norm_ladder", "spectrum_points"}


def test_algebra_d3():
    rep = algebra_checks(sphere_symbol("cos", 3), sphere_symbol("indicator", 3), d=3,
                         nmax_list=(4, 8))
    assert rep.nodal_commutator <= 1e-12
    assert rep.harmonic_commutators[4] <= 1e-12
    assert rep.norm_ladder[4] < rep.norm_ladder[8] <= 1.0 + 1e-10


@given(st.lists(st.floats(-2, 2), min_size=4, max_size=4),
       st.lists(st.floats(-2, 2), min_size=4, max_size=4))
def test_nodal_algebra_property(ca, cb):
    def sym(c):
        return SphereSymbol(lambda p: c[0] + c[1] * p[:, 0] + c[2] * p[:, 1] + c[3] * p[:, 0] ** 2,
                            sum(abs(x) for x in c))
    g = sphere_grid(2, 24)
    a, b = sym(ca), sym(cb)
    A, B = nodal_multiplier(a, g).entries, nodal_multiplier(b, g).entries
    AB = nodal_multiplier(SphereSymbol(lambda p: a(p) * b(p), 1.0), g).entries
    assert np.max(np.abs(A @ B - B @ A)) == 0.0
    assert np.max(np.abs(A @ B - AB)) <= 1e-12 * max(1.0, np.max(np.abs(AB)))


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_harmonic_matrix_linear_in_symbol(c):
    def sym(k):
        return SphereSymbol(lambda p: k * p[:, 0] + p[:, 1] ** 2, abs(k) + 1)
    M0 = mult_toeplitz_matrix(sym(c[0]), 2, 5).entries
    M1 = mult_toeplitz_matrix(sym(c[1]), 2, 5).entries
    Cos = mult_toeplitz_matrix(sphere_symbol("cos"), 2, 5).entries
    np.testing.assert_allclose(M1 - M0, (c[1] - c[0]) * Cos, atol=1e-13)

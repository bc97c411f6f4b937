import math

import numpy as np
import pytest

from herglotzlab.herglotz import HerglotzField
from herglotzlab.quad import sphere_grid
from herglotzlab.radial_toeplitz import gamma_sequence
from herglotzlab.sphere_op import (SymbolTransform, build_nodal, eigen_hermitian, hankel_transform,
                                   operator_norm, prefactor, transform_of)
from herglotzlab.spherefn import SphereFunction
from herglotzlab.symbol_lab import (CutoffWindow, argf_check, boundedness_constant,
                                    compactness_probe, cutoff_part, degenerate_part,
                                    form_quadrature, hd_check, power_transform)
from herglotzlab.symbols import (exp_symbol, from_spec, gauss_symbol, indicator_symbol,
                                 power_symbol, zero_symbol)


def field(d, n, j=1):
    return HerglotzField(SphereFunction.basis(d, n, j))


def test_window():
    w = CutoffWindow(3.0)
    np.testing.assert_array_equal(w([0.0, 1.0, 2.0]), 1.0)
    assert w(3.0) == 0.0 and w(10.0) == 0.0
    assert 0 < w(2.5) < 1
    assert CutoffWindow(math.inf)(50.0) == 1.0
    with pytest.raises(ValueError):
        CutoffWindow(1.5)


def test_trivial_degenerate_parts():
    assert degenerate_part(gauss_symbol(), CutoffWindow(math.inf)).is_zero
    assert degenerate_part(zero_symbol()).is_zero
    with pytest.raises(ValueError):
        degenerate_part(exp_symbol())   # algebraic decay of a_hat is rejected


def test_degenerate_transform_vanishes_on_ball():
    deg = degenerate_part(gauss_symbol(1.0), CutoffWindow(3.0), 2)
    assert np.all(deg.fourier(np.linspace(0, 2, 21), 2) == 0.0)
    with pytest.raises(ValueError):
        deg.fourier(1.0, 3)
    # spatially it is far from zero
    assert abs(deg(np.array([0.0]))[0]) > 1e-2
    # evaluation far out is cheap and zero beyond the numerical extent
    assert deg(np.array([1e8]))[0] == 0.0


@pytest.mark.parametrize("d", [2, 3])
def test_cutoff_part_two_paths(d):
    a, w = gauss_symbol(1.0), CutoffWindow(3.0)
    cut = cutoff_part(a, w, d)
    for r in (0.0, 0.7, 2.0, 6.0, 15.0):
        direct = hankel_transform(lambda rho: a.fourier(rho, d) * w(rho), d, r, support=3.0).value
        assert abs(cut(np.array([r]))[0] - direct) < 1e-10


def test_degenerate_forms_vanish():
    a = gauss_symbol(1.0)
    deg = degenerate_part(a, CutoffWindow(3.0), 2)
    l1 = a.l1_norm(2)
    fs = {n: field(2, n) for n in (0, 1, 2)}
    worst, best = 0.0, 0.0
    for p in fs:
        for q in fs:
            worst = max(worst, abs(form_quadrature(deg, fs[p], fs[q], 60.0).value) / l1)
            best = max(best, abs(form_quadrature(a, fs[p], fs[q], 60.0).value) / l1)
    assert worst <= 1e-4
    assert best >= 1e-2


def test_form_matches_gamma():
    a = gauss_symbol(1.0)
    for d in (2, 3):
        g = gamma_sequence(a, d, 2).gammas
        for n in range(3):
            f = form_quadrature(a, field(d, n), field(d, n), 30.0)
            assert f.tail_ok
            assert abs(f.value - g[n]) < 1e-10
        assert abs(form_quadrature(a, field(d, 0), field(d, 1), 30.0).value) < 1e-12


def test_form_tail_flag_for_slow_symbol():
    f = form_quadrature(from_spec("power:mu=0.5"), field(2, 0), field(2, 0), 20.0)
    assert not f.tail_ok


def test_form_zero_field():
    assert form_quadrature(gauss_symbol(), HerglotzField(SphereFunction.zero(2)),
                           field(2, 0)).value == 0


def test_symbol_cutoff_equivalence_spectra():
    a = gauss_symbol(1.0)
    cut = cutoff_part(a, CutoffWindow(3.0), 2)
    g = sphere_grid(2, 96)
    ea = eigen_hermitian(build_nodal(transform_of(a, 2), g)).values[:10]
    ec = eigen_hermitian(build_nodal(transform_of(cut, 2), g)).values[:10]
    np.testing.assert_allclose(ec, ea, rtol=1e-6)


def test_non_degeneracy():
    # a symbol whose transform does not vanish on the ball gives a nonzero operator
    for sym in (gauss_symbol(1.0), indicator_symbol(1.0)):
        for d in (2, 3):
            assert np.max(np.abs(gamma_sequence(sym, d, 4).gammas)) > 1e-3


def test_boundedness_constant_examples():
    b = boundedness_constant(power_transform(1.0, 3))
    assert b.constant == pytest.approx(4 * math.pi, rel=1e-10)
    assert b.prefactored == pytest.approx(4 * math.pi * prefactor(3), rel=1e-10)
    assert boundedness_constant(power_transform(2.0, 3)).divergent
    assert boundedness_constant(power_transform(1.0, 2)).divergent
    one = boundedness_constant(SymbolTransform(2, profile=lambda s: np.ones_like(s)))
    assert one.constant == pytest.approx(2 * math.pi)


def test_norm_bound_dominates_nodal_norm():
    T = power_transform(1.0, 3)
    M = build_nodal(T, sphere_grid(3, 12))
    assert operator_norm(M) <= boundedness_constant(T).prefactored * 1.001


@pytest.mark.parametrize("lam", [-1.5, -2.0, -2.5])
def test_power_symbol_bounded_sequence_and_norm(lam):
    a = power_symbol(-lam)
    seq = gamma_sequence(a, 3, 16)
    assert np.all(np.diff(seq.gammas) < 0)   # sup attained at n = 0
    assert hd_check(a, lam, 3).bounded_operator
    T = transform_of(a, 3)
    assert seq.gammas[0] <= boundedness_constant(T).prefactored * (1 + 1e-9)


def test_hd_check():
    assert hd_check(power_symbol(2.0), -2.0, 3).bounded
    assert not hd_check(power_symbol(1.5), -2.0, 3).bounded
    r = hd_check(power_symbol(2.0), -0.5, 3)
    assert r.bounded and not r.lam_in_range and not r.bounded_operator


def test_argf_check():
    ok = argf_check(gauss_symbol(1.0), 3, levels=20)
    assert ok.admissible and math.isfinite(ok.integral)
    bad = argf_check(power_symbol(2.0), 3, levels=20)   # phi_hat ~ 1/rho: 2 pi int rho/rho diverges? no: finite
    assert bad.admissible
    worse = argf_check(power_symbol(1.0), 3, levels=20)  # phi_hat ~ rho^-2: log divergent disk integral
    assert not worse.admissible


def test_compactness_probe():
    rep = compactness_probe(indicator_symbol(1.0), 2, 32)
    assert rep.superpolynomial
    assert rep.schatten_traces[0.5] < math.inf
    with pytest.raises(ValueError):
        compactness_probe(gauss_symbol(), 2, 8)

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from herglotzlab.quad import sphere_grid
from herglotzlab.radial_toeplitz import gamma_sequence
from herglotzlab.specfun import multiplicity
from herglotzlab.sphere_op import (KernelReachError, OperatorMatrix, SingularDiagonalError,
                                   SymbolTransform, build_harmonic, build_nodal, circle_eigs,
                                   eigen_hermitian, operator_norm, point_mass_transform,
                                   prefactor, transform_of)
from herglotzlab.symbols import exp_symbol, gauss_symbol, indicator_symbol, power_symbol


def with_multiplicity(g, d):
    out = np.concatenate([np.full(multiplicity(d, n), v) for n, v in enumerate(g)])
    return out[np.lexsort((-out, -np.abs(out)))]


def test_prefactor():
    assert prefactor(2) == pytest.approx(0.5)
    assert prefactor(3) == pytest.approx(math.pi / (2 * math.pi) ** 1.5)


@pytest.mark.parametrize("sym,d,nmax", [(gauss_symbol(1.0), 2, 6), (exp_symbol(), 3, 4),
                                        (indicator_symbol(1.0), 3, 3)])
def test_harmonic_matrix_is_diagonal_gamma(sym, d, nmax):
    H = build_harmonic(transform_of(sym, d), d, nmax).entries
    g = gamma_sequence(sym, d, nmax).gammas
    expected = np.concatenate([np.full(multiplicity(d, n), v) for n, v in enumerate(g)])
    np.testing.assert_allclose(np.diag(H), expected, atol=1e-9)
    off = H - np.diag(np.diag(H))
    assert np.max(np.abs(off)) < 1e-9


def test_nodal_spectrum_matches_diagonal_d2():
    a = exp_symbol()
    T = transform_of(a, 2)
    eig = eigen_hermitian(build_nodal(T, sphere_grid(2, 128)))
    assert eig.converged
    ref = with_multiplicity(gamma_sequence(a, 2, 20).gammas, 2)[:15]
    np.testing.assert_allclose(eig.values[:15], ref, rtol=1e-4)
    circ = with_multiplicity(circle_eigs(T, 20), 2)[:15]
    np.testing.assert_allclose(circ, ref, rtol=1e-8)
    assert T.reach.max_arg <= 2.0


def test_nodal_spectrum_matches_diagonal_d3():
    a = gauss_symbol(1.0)
    eig = eigen_hermitian(build_nodal(transform_of(a, 3), sphere_grid(3, 10)))
    ref = with_multiplicity(gamma_sequence(a, 3, 8).gammas, 3)[:9]
    np.testing.assert_allclose(eig.values[:9], ref, rtol=1e-4)


def test_singular_symbol_nodal_diagonal():
    # a = r^-2 in d=3: a_hat ~ 1/rho is integrable on the sphere, cap average used
    a = power_symbol(2.0)
    T = transform_of(a, 3)
    assert T.singular_exponent == pytest.approx(1.0)
    eig = eigen_hermitian(build_nodal(T, sphere_grid(3, 10)))
    ref = gamma_sequence(a, 3, 1).gammas
    assert eig.values[0] == pytest.approx(ref[0], rel=0.01)
    assert eig.values[1] == pytest.approx(ref[1], rel=0.01)


def test_non_integrable_diagonal_raises():
    T = SymbolTransform(3, profile=lambda s: np.asarray(s, dtype=float) ** -2.5,
                        singular_exponent=2.5)
    with pytest.raises(SingularDiagonalError):
        build_nodal(T, sphere_grid(3, 4))


def test_kernel_reach_enforced():
    T = transform_of(gauss_symbol(), 2)
    T.radial_values(np.array([0.0, 2.0]))
    with pytest.raises(KernelReachError):
        T.radial_values(np.array([2.5]))
    assert T.reach.max_arg == 2.5


def test_transform_validation():
    with pytest.raises(ValueError):
        SymbolTransform(2)
    with pytest.raises(ValueError):
        SymbolTransform(4, profile=lambda s: s)


def test_numeric_hankel_profile():
    # a symbol without closed-form transform goes through the tabulated Hankel path
    a = gauss_symbol(1.0)
    from dataclasses import replace
    b = replace(a, fourier=None)
    Tb = transform_of(b, 2)
    assert Tb.provenance == "hankel_numeric"
    s = np.linspace(0, 2, 9)
    np.testing.assert_allclose(Tb.radial_values(s), a.fourier(s, 2), atol=1e-10)


def test_point_mass_is_rank_one_and_hermitian():
    T = point_mass_transform([0.3, -0.2, 0.5])
    M = build_nodal(T, sphere_grid(3, 8))
    assert M.hermitian
    vals = eigen_hermitian(M).values
    assert abs(vals[1]) < 1e-10 * abs(vals[0])


def test_hermitian_iff_symbol_real():
    # a real  <=>  a_hat(-z) = conj a_hat(z)
    real = SymbolTransform(2, vector_eval=lambda z: 1j * z[:, 0])
    imag = SymbolTransform(2, vector_eval=lambda z: z[:, 0].astype(complex))
    g = sphere_grid(2, 16)
    assert build_nodal(real, g).hermitian
    assert not build_nodal(imag, g).hermitian


def test_two_path_harmonic_vs_nodal():
    a = indicator_symbol(1.0)
    T = transform_of(a, 2)
    g = sphere_grid(2, 64)
    H = eigen_hermitian(build_harmonic(T, 2, 12, grid=g)).values[:10]
    N = eigen_hermitian(build_nodal(T, g)).values[:10]
    np.testing.assert_allclose(H, N, rtol=1e-6)


def test_harmonic_grid_warning():
    with pytest.warns(RuntimeWarning):
        build_harmonic(transform_of(gauss_symbol(), 3), 3, 6, grid=sphere_grid(3, 8))


def test_operator_matrix_csv():
    M = OperatorMatrix(np.eye(2), "nodal")
    assert M.to_csv().count("\n") >= 2


@settings(max_examples=20)
@given(st.integers(1, 24), st.integers(0, 10_000), st.booleans())
def test_jacobi_matches_reference(n, seed, cplx):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n))
    if cplx:
        A = A + 1j * rng.normal(size=(n, n))
    A = 0.5 * (A + A.conj().T)
    res = eigen_hermitian(A, vectors=True)
    ref = np.linalg.eigvalsh(A)
    np.testing.assert_allclose(np.sort(res.values), ref, atol=1e-10 * max(1, np.abs(ref).max()))
    V = res.vectors
    np.testing.assert_allclose(A @ V, V * res.values, atol=1e-8 * max(1, np.abs(ref).max()))


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigen_hermitian(np.array([[1.0, 2.0], [0.0, 1.0]]))
    assert eigen_hermitian(np.empty((0, 0))).values.size == 0


def test_operator_norm_paths():
    rng = np.random.default_rng(2)
    A = rng.normal(size=(40, 40))
    A = A + A.T
    ref = np.linalg.norm(A, 2)
    assert operator_norm(A, method="eigen") == pytest.approx(ref, rel=1e-10)
    assert operator_norm(A, method="power") == pytest.approx(ref, rel=1e-5)
    big = np.diag(np.linspace(0, 3, 300))
    assert operator_norm(big) == pytest.approx(3.0, rel=1e-6)
    with pytest.raises(ValueError):
        operator_norm(A, method="svd")

"""Acceptance criteria 1-12 at their stated tolerances.

Each test prints one ``ACCEPTANCE #k PASS|FAIL`` line (visible with
``pytest -v``) and then asserts the criterion as stated.
"""

import math
import time

import numpy as np
import pytest

from herglotzlab.hconv import algebra_checks, sphere_symbol, verify_factorization
from herglotzlab.herglotz import (HerglotzField, far_field_residual, isometry_deviation,
                                  kernel_series, repro_kernel, reproduce, synth_integral,
                                  constants)
from herglotzlab.quad import sphere_grid
from herglotzlab.radial_toeplitz import (closed_form_ex44, closed_form_ex45,
                                         gamma_sequence, schatten_probe, slope_fit)
from herglotzlab.specfun import bessel_j, harmonic_indices, multiplicity
from herglotzlab.sphere_op import (build_harmonic, build_nodal, circle_eigs, eigen_hermitian,
                                   operator_norm, transform_of)
from herglotzlab.spherefn import SphereFunction
from herglotzlab.symbol_lab import (CutoffWindow, boundedness_constant, degenerate_part,
                                    form_quadrature, power_transform)
from herglotzlab.symbols import ex44_symbol, exp_symbol, gauss_symbol, indicator_symbol, \
    power_symbol

SF = SphereFunction


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE #{k} {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


def with_multiplicity(g, d):
    out = np.concatenate([np.full(multiplicity(d, n), v) for n, v in enumerate(g)])
    return out[np.argsort(-np.abs(out), kind="stable")]


def test_criterion_01_power_symbol_exactness(report):
    t0 = time.perf_counter()
    seq = gamma_sequence(power_symbol(2.0), 3, 20)
    elapsed = time.perf_counter() - t0
    ref = closed_form_ex45(3, 2.0, np.arange(21))
    err0 = abs(seq.gammas[0] - math.pi)
    rel = float(np.max(np.abs(seq.gammas - ref) / ref))
    ok = err0 <= 1e-8 and rel <= 1e-6 and elapsed <= 30
    assert report(1, ok, f"|gamma(0)-pi|={err0:.2e}, max rel={rel:.2e}, {elapsed:.2f}s")


def test_criterion_02_oscillatory_symbol(report):
    n = np.arange(13)
    t0 = time.perf_counter()
    seq = gamma_sequence(ex44_symbol(), 3, 12)
    elapsed = time.perf_counter() - t0
    stated = closed_form_ex44(3, n, variant="stated")
    corrected = closed_form_ex44(3, n, variant="corrected")
    rel_stated = float(np.max(np.abs(seq.gammas - stated) / np.abs(stated)))
    rel_corr = float(np.max(np.abs(seq.gammas - corrected) / np.abs(corrected)))
    ok = rel_stated <= 1e-6 and elapsed <= 60
    report(2, ok, f"vs stated closed form max rel={rel_stated:.2e}; "
                  f"vs corrected form (cos(2-pi*nu/2)) max rel={rel_corr:.2e}; {elapsed:.2f}s")
    # the companion check documents that the quadrature itself is accurate
    assert rel_corr <= 1e-6
    assert ok


def test_criterion_03_schatten_threshold(report):
    slopes = {}
    for mu in (1.5, 2.0, 2.5):
        seq = gamma_sequence(power_symbol(mu), 3, 256)
        slopes[mu] = slope_fit(seq, 64, 256)
    slope_ok = all(abs(s + (mu - 1)) <= 0.03 * (mu - 1) for mu, s in slopes.items())
    verdicts = {}
    for mu in (1.4, 1.8):
        seq = gamma_sequence(power_symbol(mu), 2, 256)
        for p in (1, 2, 4):
            verdicts[(mu, p)] = schatten_probe(seq, 2, p).member is (mu > (p + 1) / p)
    ok = slope_ok and all(verdicts.values())
    detail = ", ".join(f"mu={mu}: slope {s:.4f}" for mu, s in slopes.items())
    assert report(3, ok, f"{detail}; verdicts {sum(verdicts.values())}/6 match")


def test_criterion_04_reproducing_kernel(report):
    t = np.linspace(0.0, 20.0, 801)
    worst_closed = 0.0
    for d in (2, 3):
        nu = (d - 2) / 2
        tt = np.where(t > 0, t, 1.0)
        repr_formula = math.pi / (2 * math.pi) ** (d / 2) * np.where(
            t > 0, tt ** (-nu) * bessel_j(nu, tt), 1.0 / (2 ** nu * math.gamma(nu + 1)))
        closed = 0.5 * bessel_j(0, t) if d == 2 else np.sinc(t / math.pi) / (2 * math.pi)
        worst_closed = max(worst_closed, float(np.max(np.abs(closed - repr_formula))),
                           float(np.max(np.abs(repro_kernel(d, t) - repr_formula))))
    rng = np.random.default_rng(11)
    worst_series = 0.0
    for d in (2, 3):
        for _ in range(25):
            x, y = (rng.uniform(-1, 1, d) for _ in range(2))
            x *= 3 * rng.uniform() / np.linalg.norm(x)
            y *= 3 * rng.uniform() / np.linalg.norm(y)
            k = repro_kernel(d, float(np.linalg.norm(x - y)))
            worst_series = max(worst_series, abs(kernel_series(d, x, y, 40) - k))
    worst_repro = 0.0
    for d in (2, 3):
        pts = np.random.default_rng(5).uniform(-4, 4, size=(4, d))
        for idx in harmonic_indices(d, 6):
            phi = SF.basis(d, idx.n, idx.j)
            worst_repro = max(worst_repro, max(reproduce(phi, x) for x in pts))
    ok = worst_closed <= 1e-10 and worst_series <= 1e-8 and worst_repro <= 1e-8
    assert report(4, ok, f"closed forms {worst_closed:.1e}, series {worst_series:.1e}, "
                         f"reproducing identity {worst_repro:.1e}")


def test_criterion_04_kernel_is_sphere_fourier_transform():
    # independent check: kappa(t) = c_d^2 * integral over the sphere of exp(i t xi_1)
    for d, res in ((2, 96), (3, 48)):
        g = sphere_grid(d, res)
        c = constants(d).c_d
        for t in (0.0, 1.3, 7.0, 19.5):
            x = np.zeros(d)
            x[0] = t
            val = synth_integral(lambda p: np.full(p.shape[0], c), x, g)
            assert abs(val - repro_kernel(d, t)) <= 1e-10


def test_criterion_05_unitary_equivalence(report):
    t0 = time.perf_counter()
    a = exp_symbol()
    T = transform_of(a, 2)
    eig = eigen_hermitian(build_nodal(T, sphere_grid(2, 256)))
    diag = with_multiplicity(gamma_sequence(a, 2, 32).gammas, 2)[:20]
    circ = with_multiplicity(circle_eigs(T, 32), 2)[:20]
    nodal = np.asarray(eig.values)[:20]
    elapsed = time.perf_counter() - t0
    gaps = {name: float(np.max(np.abs(x - y) / np.abs(x)))
            for name, (x, y) in {"diag-nodal": (diag, nodal), "diag-circle": (diag, circ),
                                 "circle-nodal": (circ, nodal)}.items()}
    ok = eig.converged and max(gaps.values()) <= 1e-4 and elapsed <= 120
    detail = ", ".join(f"{k} {v:.1e}" for k, v in gaps.items())
    assert report(5, ok, f"{detail}; {elapsed:.1f}s")


def test_criterion_06_radial_symbol_diagonal(report):
    worst = 0.0
    for d in (2, 3):
        a = exp_symbol()
        H = build_harmonic(transform_of(a, d), d, 16).entries
        off = H - np.diag(np.diag(H))
        worst = max(worst, float(np.max(np.abs(off)) / np.max(np.abs(np.diag(H)))))
    assert report(6, worst <= 1e-8, f"off-diagonal / max|gamma| = {worst:.1e}")


def test_criterion_07_degeneracy(report):
    a = gauss_symbol(1.0)
    deg = degenerate_part(a, CutoffWindow(3.0), 2)
    l1 = a.l1_norm(2)
    fields = [HerglotzField(SF.basis(2, i.n, i.j)) for i in harmonic_indices(2, 4)]
    worst, best, tails = 0.0, 0.0, True
    for u in fields:
        for v in fields:
            fd = form_quadrature(deg, u, v, 60.0)
            fa = form_quadrature(a, u, v, 60.0)
            tails = tails and fd.tail_ok and fa.tail_ok
            worst = max(worst, abs(fd.value) / l1)
            best = max(best, abs(fa.value) / l1)
    ok = tails and worst <= 1e-4 and best >= 1e-2
    assert report(7, ok, f"max|F_deg|/L1={worst:.1e}, max|F_a|/L1={best:.2f}")


def test_criterion_08_indicator_nondegeneracy(report):
    parts, ok = [], True
    for d in (2, 3):
        g = gamma_sequence(indicator_symbol(1.0), d, 64).gammas
        positive = bool(np.all(g > 0))
        ratio = float(np.min(g) / np.max(g))
        ok = ok and positive and ratio >= 1e-12
        parts.append(f"d={d}: all positive={positive}, min/max={ratio:.1e}")
    assert report(8, ok, "; ".join(parts))


def test_criterion_08_positivity_part():
    # the strict-positivity half of the criterion, reported separately
    for d in (2, 3):
        g = gamma_sequence(indicator_symbol(1.0), d, 64)
        assert np.all(g.gammas > 0)
        assert np.all(g.error_bounds < g.gammas)


def test_criterion_09_boundedness_constant(report):
    T = power_transform(1.0, 3)
    b = boundedness_constant(T)
    err = abs(b.constant - 4 * math.pi) / (4 * math.pi)
    closed = 2 * math.pi * 2 ** (2 - 1.0) / (2 - 1.0)
    norm = operator_norm(build_nodal(T, sphere_grid(3, 20)))
    ratio = norm / b.prefactored
    ok = err <= 1e-6 and closed == pytest.approx(4 * math.pi) and ratio <= 1.001
    assert report(9, ok, f"constant rel err {err:.1e}, nodal norm / bound = {ratio:.4f}")


def test_criterion_10_isometry(report):
    worst_dev, worst_ratio = 0.0, 0.0
    for idx in harmonic_indices(2, 3):
        phi = SF.basis(2, idx.n, idx.j)
        dev = isometry_deviation(phi, 500.0)
        worst_dev = max(worst_dev, dev)
        worst_ratio = max(worst_ratio, isometry_deviation(phi, 1000.0) / dev)
    ok = worst_dev <= 0.02 and worst_ratio <= 0.7
    assert report(10, ok, f"max deviation at R=500 {worst_dev:.1e}, "
                          f"max ratio 2R/R {worst_ratio:.2f}")


def test_criterion_11_hconv_algebra(report):
    rep = algebra_checks(sphere_symbol("cos"), sphere_symbol("indicator"))
    idem = algebra_checks(sphere_symbol("indicator"), sphere_symbol("2+sin"))
    nodal = max(rep.nodal_commutator, rep.nodal_product_error, idem.nodal_commutator,
                idem.nodal_idempotence_error)
    u = HerglotzField(SF.basis(2, 0))
    fac = verify_factorization(u, u, (400.0, 800.0))
    ladder = [rep.norm_ladder[n] for n in (8, 16, 32)]
    increasing = ladder[0] < ladder[1] < ladder[2] <= 1.0 + 1e-10
    ok = (nodal <= 1e-12 and fac.residuals[0] <= 0.05 and 0.3 <= fac.ratios[0] <= 0.7
          and increasing)
    assert report(11, ok, f"nodal {nodal:.1e}, residual R=400 {fac.residuals[0]:.1e}, "
                          f"ratio {fac.ratios[0]:.3f}, norm ladder "
                          + ", ".join(f"{v:.4f}" for v in ladder))


def test_criterion_12_far_field(report):
    worst, floored = 0.0, []
    for d in (2, 3):
        for idx in harmonic_indices(d, 3):
            phi = SF.basis(d, idx.n, idx.j)
            r1, r2 = (far_field_residual(phi, R) for R in (100.0, 200.0))
            if r1 < 1e-12 * phi.norm() and r2 < 1e-12 * phi.norm():
                # the two-term expansion is exact; only round-off remains
                floored.append((d, idx.n, idx.j))
                continue
            worst = max(worst, r2 / r1)
    ok = worst <= 0.8
    assert report(12, ok, f"max ratio {worst:.3f}; at round-off floor: {floored}")

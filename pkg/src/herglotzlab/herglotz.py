"""The Herglotz space: synthesis, adjoint, basis, reproducing kernel.

Normalisations (d = 2, 3)::

    u(x) = (I phi)(x) = c_d \\int_S phi(xi) e^{i x.xi} dS(xi),    c_d = sqrt(pi) / (2 pi)^{d/2}
    e_{n,j}(x) = sqrt(pi) i^n J_{n+nu}(r) / r^nu  Y_{n,j}(x/r),   nu = (d-2)/2
    kappa(t)  = pi / (2 pi)^{d/2}  t^{-nu} J_nu(t)

``I`` is an isometry from L2(S) onto the space normed by
``lim R^{-1} \\int_{|x|<R} |u|^2``, and ``{e_{n,j}}`` is the image of the real
harmonics ``Y_{n,j}``.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .quad import SphereGrid, ball_average, sphere_grid
from .specfun import (bessel_j_ladder, gamma_fn, gauss_legendre, harmonic_indices, harmonic_matrix,
                      n_harmonics)
from .spherefn import SphereFunction

__all__ = [
    "Constants",
    "HerglotzField",
    "SphereFunction",
    "bessel_sq_average",
    "constants",
    "far_field_residual",
    "helmholtz_residual",
    "isometry_deviation",
    "istar",
    "istar_field",
    "kernel_series",
    "repro_kernel",
    "reproduce",
    "synth",
    "synth_integral",
]


@dataclass(frozen=True)
class Constants:
    """Normalising constants of the synthesis operator and the far field."""

    d: int
    c_d: float
    eps_plus: complex
    eps_minus: complex


def constants(d: int) -> Constants:
    """``c_d = sqrt(pi)/(2pi)^{d/2}`` and ``eps^{+-} = exp(+-i(d-1)pi/4)``."""
    if d not in (2, 3):
        raise ValueError("d must be 2 or 3")
    return Constants(d, math.sqrt(math.pi) / (2 * math.pi) ** (d / 2),
                     cmath.exp(1j * (d - 1) * math.pi / 4),
                     cmath.exp(-1j * (d - 1) * math.pi / 4))


def _radial_basis(d: int, nmax: int, r: np.ndarray) -> np.ndarray:
    """``J_{n+nu}(r) / r^nu`` for n = 0..nmax with the r -> 0 limit."""
    nu = (d - 2) / 2.0
    r = np.asarray(r, dtype=float)
    J = bessel_j_ladder(nu, nmax, r)
    if nu == 0:
        return J
    out = np.empty_like(J)
    pos = r > 0
    out[pos] = J[pos] / r[pos, None] ** nu
    out[~pos] = 0.0
    out[~pos, 0] = 1.0 / (2 ** nu * gamma_fn(nu + 1))
    return out


def _split(points, d):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != d:
        raise ValueError(f"points must have {d} coordinates")
    r = np.linalg.norm(pts, axis=1)
    safe = np.where(r > 0, r, 1.0)
    dirs = pts / safe[:, None]
    dirs[r == 0] = np.eye(d)[0]
    return r, dirs


@dataclass(frozen=True)
class HerglotzField:
    """``u = I phi`` for a band-limited ``phi``; callable on points of R^d."""

    source: SphereFunction

    @property
    def d(self) -> int:
        return self.source.d

    def __call__(self, points, chunk: int = 20000) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty(pts.shape[0], dtype=complex)
        for s in range(0, pts.shape[0], chunk):
            out[s:s + chunk] = self._eval(pts[s:s + chunk])
        return out

    def _eval(self, pts):
        phi = self.source
        d = self.d
        if not phi.coeffs:
            return np.zeros(pts.shape[0], dtype=complex)
        nmax = phi.max_degree
        r, dirs = _split(pts, d)
        rad = _radial_basis(d, nmax, r)
        Y = harmonic_matrix(d, nmax, dirs)
        c = phi.dense(nmax)
        deg = np.array([i.n for i in harmonic_indices(d, nmax)])
        w = math.sqrt(math.pi) * (1j ** deg) * c
        return np.sum(rad[:, deg] * Y * w[None, :], axis=1)

    def norm(self) -> float:
        """Norm in the Herglotz space (= ``||phi||``, by the isometry)."""
        return self.source.norm()

    def to_csv(self, points) -> str:
        """CSV rows ``x_1..x_d, re, im`` of the field at ``points``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vals = self(pts)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(self.d)] + ["re", "im"])
        for p, v in zip(pts, vals):
            w.writerow([repr(float(t)) for t in p] + [repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()


def synth(phi: SphereFunction, x) -> complex | np.ndarray:
    """``(I phi)(x)`` from the basis series; ``x`` a point or an ``(m, d)`` array."""
    x = np.asarray(x, dtype=float)
    vals = HerglotzField(phi)(x)
    return complex(vals[0]) if x.ndim == 1 else vals


def synth_integral(phi_eval: Callable, x, grid: SphereGrid) -> complex | np.ndarray:
    """``c_d sum_k w_k phi(xi_k) exp(i x.xi_k)`` on a sphere grid."""
    x = np.asarray(x, dtype=float)
    pts = np.atleast_2d(x)
    if pts.shape[1] != grid.d:
        raise ValueError("grid dimension does not match the point")
    c = constants(grid.d).c_d
    phis = np.asarray(phi_eval(grid.points), dtype=complex) * grid.weights
    vals = c * (np.exp(1j * pts @ grid.points.T) @ phis)
    return complex(vals[0]) if x.ndim == 1 else vals


# ---------------------------------------------------------------------------
# adjoint
# ---------------------------------------------------------------------------

def _istar_once(u_eval, xi, R, d, angular, n_radial):
    grid = sphere_grid(d, angular)
    c = constants(d).c_d
    xi = np.asarray(xi, dtype=float)
    f = lambda pts: np.asarray(u_eval(pts)) * np.exp(-1j * pts @ xi)
    return c * ball_average(f, R, grid, n_radial=n_radial)


def istar(u_eval: Callable, xi, R: float, *, richardson: bool = True,
          angular: Optional[int] = None, n_radial: Optional[int] = None, d: Optional[int] = None):
    """``c_d R^{-1} \\int_{|x|<R} u(x) e^{-i x.xi} dx`` on a ball grid.

    With ``richardson=True`` the values at ``R`` and ``2R`` are combined as
    ``2 v(2R) - v(R)`` to cancel the first-order term in ``1/R``.

    Parameters
    ----------
    u_eval : callable
        Field evaluator on ``(m, d)`` arrays.
    xi : array_like
        Unit vector.
    R : float
        Ball radius (``>= 50`` recommended).
    angular : int, optional
        Sphere-grid resolution; default ``ceil(radius) + 24`` resolves the
        plane-wave factor.
    """
    xi = np.asarray(xi, dtype=float)
    d = d or xi.size
    if abs(np.linalg.norm(xi) - 1) > 1e-12:
        raise ValueError("istar: xi must be a unit vector")

    def at(rad):
        ang = angular or int(math.ceil(rad)) + 24
        return _istar_once(u_eval, xi, rad, d, ang, n_radial)

    v1 = at(R)
    if not richardson:
        return complex(v1)
    v2 = at(2 * R)
    return complex(2 * v2 - v1)


def bessel_sq_average(d: int, nmax: int, R: float) -> np.ndarray:
    """``(pi/R) \\int_0^R J_{n+nu}(r)^2 r dr`` for n = 0..nmax (exact formula).

    Uses ``\\int_0^R J_v^2 r dr = R^2/2 (J_v(R)^2 - J_{v-1}(R) J_{v+1}(R))``.
    Tends to 1 like ``O(1/R)``.
    """
    nu = (d - 2) / 2.0
    J = bessel_j_ladder(nu, nmax + 1, np.array([float(R)]))[0]
    if nu == 0:
        jm1 = -J[1]
    else:  # nu = 1/2: J_{-1/2}(R) = sqrt(2/(pi R)) cos R
        jm1 = math.sqrt(2 / (math.pi * R)) * math.cos(R)
    prev = np.concatenate([[jm1], J[:nmax]])
    integral = 0.5 * R * R * (J[: nmax + 1] ** 2 - prev * J[1: nmax + 2])
    return math.pi / R * integral


def istar_field(u: HerglotzField, R: float) -> SphereFunction:
    """Exact finite-``R`` adjoint of a band-limited field.

    The angular integration is done analytically (plane-wave expansion), so
    coefficient ``(n, j)`` of the result is ``c_{n,j}`` times
    :func:`bessel_sq_average`.  As ``R -> inf`` this tends to ``phi``;
    ``R = inf`` returns ``phi`` itself (``I`` is an isometry onto B*).
    """
    phi = u.source
    if not phi.coeffs:
        return SphereFunction.zero(u.d)
    if math.isinf(R):
        return SphereFunction(u.d, dict(phi.coeffs))
    fac = bessel_sq_average(u.d, phi.max_degree, R)
    return SphereFunction(u.d, {k: v * fac[k.n] for k, v in phi.coeffs.items()})


# ---------------------------------------------------------------------------
# reproducing kernel
# ---------------------------------------------------------------------------

def repro_kernel(d: int, t):
    """``kappa(t) = pi (2pi)^{-d/2} t^{-(d-2)/2} J_{(d-2)/2}(t)`` with the t=0 limit."""
    if d not in (2, 3):
        raise ValueError("d must be 2 or 3")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("repro_kernel: t must be nonnegative")
    pref = math.pi / (2 * math.pi) ** (d / 2)
    out = pref * _radial_basis(d, 0, t.ravel())[:, 0].reshape(t.shape)
    return out if out.ndim else float(out)


def kernel_series(d: int, x, y, nmax: int) -> float:
    """Partial sum ``sum_{n<=nmax, j} e_{n,j}(x) conj(e_{n,j}(y))`` of the kernel.

    ``= pi sum_n J_{n+nu}(|x|) J_{n+nu}(|y|) / (|x||y|)^nu sum_j Y_{n,j}(x^) Y_{n,j}(y^)``.
    Symmetric in ``x, y`` bit for bit.
    """
    if nmax < 0:
        raise ValueError("kernel_series: nmax must be >= 0")
    (rx,), (dx,) = (lambda a: (a[0], a[1]))(_split(x, d))
    (ry,), (dy,) = (lambda a: (a[0], a[1]))(_split(y, d))
    rad = _radial_basis(d, nmax, np.array([rx, ry]))
    Y = harmonic_matrix(d, nmax, np.stack([dx, dy]))
    deg = np.array([i.n for i in harmonic_indices(d, nmax)])
    terms = (rad[0, deg] * rad[1, deg]) * (Y[0] * Y[1])
    return float(math.pi * np.sum(terms))


def reproduce(phi: SphereFunction, x, grid: Optional[SphereGrid] = None) -> float:
    """Residual ``|<u, kappa_x> - u(x)|`` for ``u = I phi``.

    The pairing is evaluated in the sphere representation, where
    ``kappa_x`` corresponds to ``Psi_x(xi) = c_d exp(-i x.xi)``, so
    ``<u, kappa_x> = \\int phi conj(Psi_x) dS``; ``u(x)`` comes from the series.
    """
    x = np.asarray(x, dtype=float)
    d = phi.d
    if grid is None:
        res = max(32, int(2 * (np.linalg.norm(x) + phi.max_degree)) + 24)
        grid = sphere_grid(d, res)
    c = constants(d).c_d
    psi = c * np.exp(-1j * grid.points @ x)
    pairing = np.sum(grid.weights * phi(grid.points) * np.conj(psi))
    return float(abs(pairing - synth(phi, x)))


# ---------------------------------------------------------------------------
# isometry and far field
# ---------------------------------------------------------------------------

def isometry_deviation(phi: SphereFunction, R: float, grid: Optional[SphereGrid] = None) -> float:
    """``|ball_average(|I phi|^2, R) - ||phi||^2| / ||phi||^2``."""
    nrm2 = phi.norm() ** 2
    if nrm2 == 0:
        return 0.0
    if grid is None:
        grid = sphere_grid(phi.d, max(8, 2 * phi.max_degree + 4))
    u = HerglotzField(phi)
    val = ball_average(lambda p: np.abs(u(p)) ** 2, R, grid)
    return float(abs(val - nrm2) / nrm2)


def far_field_residual(phi: SphereFunction, R: float, grid: Optional[SphereGrid] = None,
                       *, mode: str = "shell") -> float:
    """B*-style residual of the two-term far-field approximation.

    With ``v = u - c_d (2pi/|x|)^{(d-1)/2} (eps^- e^{i|x|} phi(x^) + eps^+ e^{-i|x|} phi(-x^))``
    the default (``mode="shell"``) returns

        ( R^{-1} \\int_{R<|x|<2R} |v|^2 dx )^{1/2},

    the dyadic-shell piece of the B* norm.  ``mode="sphere"`` returns the
    fixed-radius proxy ``R^{(d-1)/2} ||v(R .)||_{L2(S)}``.  Both are
    ``O(1/R)``; the sphere version carries an oscillating factor
    ``|sin(R - const)|`` and is therefore not monotone in ``R``.
    """
    if R < 20:
        raise ValueError("far_field_residual: R must be >= 20")
    if mode not in ("shell", "sphere"):
        raise ValueError("mode must be 'shell' or 'sphere'")
    d = phi.d
    if not phi.coeffs:
        return 0.0
    if grid is None:
        grid = sphere_grid(d, max(8, 2 * phi.max_degree + 4))
    k = constants(d)
    pts = grid.points
    ph_plus, ph_minus = phi(pts), phi(-pts)
    field = HerglotzField(phi)

    def sphere_sq(rad):
        u = field(rad * pts)
        amp = k.c_d * (2 * math.pi / rad) ** ((d - 1) / 2)
        v = u - amp * (k.eps_minus * cmath.exp(1j * rad) * ph_plus
                       + k.eps_plus * cmath.exp(-1j * rad) * ph_minus)
        return float(np.sum(grid.weights * np.abs(v) ** 2))

    if mode == "sphere":
        return float(R ** ((d - 1) / 2) * math.sqrt(sphere_sq(R)))
    n = int(math.ceil(R)) + 40
    x, w = gauss_legendre(n)
    radii = 1.5 * R + 0.5 * R * x
    wr = 0.5 * R * w
    total = sum(wi * ri ** (d - 1) * sphere_sq(ri) for ri, wi in zip(radii, wr))
    return float(math.sqrt(total / R))


def helmholtz_residual(phi: SphereFunction, x, h: float = 1e-3) -> float:
    """``|Delta u + u| / |u|`` at ``x`` by the second-order central stencil."""
    x = np.asarray(x, dtype=float)
    d = x.size
    pts = [x]
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        pts += [x + e, x - e]
    vals = synth(phi, np.array(pts))
    lap = (np.sum(vals[1:]) - 2 * d * vals[0]) / (h * h)
    return float(abs(lap + vals[0]) / max(abs(vals[0]), 1e-300))

"""Multiplication-type Toeplitz operators and the h-convolution.

For a bounded function ``a`` on the sphere the form
``F_a(u, v) = \\int_S a (I* u) conj(I* v) dS`` defines ``T = I a I*``, i.e.
multiplication by ``a`` in the sphere representation.  These operators
commute, and ``T_a T_b = T_{ab}``.

The h-convolution of two Herglotz fields is

    (u *_h v)(x) = c_d lim_R R^{-1} \\int_{|y|<R} u(x - y) v(y) dy

and satisfies ``I*(u *_h v) = (I* u)(I* v)``.  Here it is computed by an
explicit ladder of finite radii; the product identity is only used as the
oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .herglotz import HerglotzField, constants, istar_field
from .quad import SphereGrid, sphere_grid
from .specfun import bessel_j_ladder, gauss_legendre, harmonic_indices, harmonic_matrix
from .sphere_op import OperatorMatrix, eigen_hermitian, operator_norm
from .spherefn import SphereFunction

__all__ = [
    "AlgebraReport",
    "FactorizationResult",
    "HConvResult",
    "SphereSymbol",
    "algebra_checks",
    "hconvolve",
    "kernel_field",
    "mult_toeplitz_apply",
    "mult_toeplitz_matrix",
    "nodal_multiplier",
    "sphere_symbol",
    "verify_factorization",
]

_EDGE = 1e-12


# ---------------------------------------------------------------------------
# sphere symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereSymbol:
    """Bounded function ``a(xi)`` on the unit sphere.

    ``sup_abs`` bounds ``|a|`` everywhere; ``indicator`` marks 0/1-valued symbols.
    """

    func: Callable[[np.ndarray], np.ndarray]
    sup_abs: float
    name: str = "a"
    indicator: bool = False
    real: bool = True

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vals = np.asarray(self.func(pts))
        return vals.astype(float) if self.real else vals.astype(complex)

    def check(self, grid: SphereGrid) -> bool:
        """``|a| <= sup_abs`` on the grid."""
        return bool(np.all(np.abs(self(grid.points)) <= self.sup_abs * (1 + 1e-14)))


def _upper(pts):
    # half-open upper half: last coordinate > 0, ties broken by the first one
    last = pts[:, -1]
    return (last > _EDGE) | ((np.abs(last) <= _EDGE) & (pts[:, 0] > 0))


def sphere_symbol(spec: str, d: int = 2) -> SphereSymbol:
    """Sphere-symbol DSL: ``cos``, ``sin``, ``indicator``, ``2+sin``, ``const:c=...``.

    ``cos`` is ``cos(theta)`` (first coordinate for d=2, polar ``xi_3`` for
    d=3); ``indicator`` is the half-open upper hemisphere (semicircle
    ``0 <= theta < pi`` for d=2).
    """
    kind, _, rest = spec.strip().partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        k, eq, v = item.partition("=")
        if not eq:
            raise ValueError(f"malformed sphere-symbol parameter {item!r}")
        params[k.strip()] = float(v)
    allowed = {"const": {"c"}}.get(kind, set())
    if set(params) - allowed:
        raise ValueError(f"unknown keys for sphere:{kind}: {sorted(set(params) - allowed)}")
    polar = 0 if d == 2 else 2
    if kind == "cos":
        return SphereSymbol(lambda p: p[:, polar], 1.0, "cos")
    if kind == "sin":
        return SphereSymbol(lambda p: p[:, 1] if d == 2 else np.sqrt(1 - p[:, 2] ** 2), 1.0, "sin")
    if kind == "indicator":
        return SphereSymbol(lambda p: _upper(p).astype(float), 1.0, "indicator", indicator=True)
    if kind == "2+sin":
        return SphereSymbol(lambda p: 2.0 + p[:, 1], 3.0, "2+sin")
    if kind == "const":
        c = params.get("c", 1.0)
        return SphereSymbol(lambda p: np.full(p.shape[0], c), abs(c), f"const({c:g})",
                            indicator=c in (0.0, 1.0))
    raise ValueError(f"unknown sphere symbol {kind!r}")


# ---------------------------------------------------------------------------
# multiplication operators
# ---------------------------------------------------------------------------

def _grid_bandwidth(grid: SphereGrid) -> int:
    # largest degree K such that products of degree <= K harmonics are exact
    return (grid.resolution - 1) // 2 if grid.d == 2 else grid.resolution - 1


def mult_toeplitz_apply(a: SphereSymbol, phi: SphereFunction, grid: Optional[SphereGrid] = None,
                        nmax_out: Optional[int] = None, *, alias_tol: float = 1e-8
                        ) -> SphereFunction:
    """Sphere representation of ``T u``: multiply ``phi`` by ``a`` and project.

    The projection keeps degrees ``<= nmax_out`` (default
    ``phi.max_degree + 8``).  A ``RuntimeWarning`` signals aliasing: energy of
    ``a phi`` in the top quarter of the degrees the grid can resolve.
    """
    d = phi.d
    if grid is None:
        grid = sphere_grid(d, max(64, 4 * (phi.max_degree + 8)))
    K = _grid_bandwidth(grid)
    if nmax_out is None:
        nmax_out = min(K, phi.max_degree + 8)
    if nmax_out > K:
        raise ValueError(f"nmax_out={nmax_out} exceeds the grid bandwidth {K}")
    vals = a(grid.points) * phi(grid.points)
    H = harmonic_matrix(d, K, grid.points)
    coef = H.T @ (vals * grid.weights)
    deg = np.array([i.n for i in harmonic_indices(d, K)])
    top = np.sum(np.abs(coef[deg > (3 * K) // 4]) ** 2)
    total = np.sum(np.abs(coef) ** 2)
    if total > 0 and top > alias_tol ** 2 * total:
        warnings.warn("mult_toeplitz_apply: a*phi is not resolved by the grid (aliasing)",
                      RuntimeWarning, stacklevel=2)
    keep = deg <= nmax_out
    return SphereFunction.from_dense(d, coef[keep])


def mult_toeplitz_matrix(a: SphereSymbol, d: int, nmax: int,
                         grid: Optional[SphereGrid] = None) -> OperatorMatrix:
    """Harmonic-basis matrix ``<a Y_n, Y_m>`` (compression of multiplication by ``a``)."""
    if grid is None:
        grid = sphere_grid(d, max(8, 4 * nmax) if d == 2 else 2 * nmax + 8)
    if _grid_bandwidth(grid) < nmax:
        raise ValueError("grid too coarse for the requested nmax")
    Q = harmonic_matrix(d, nmax, grid.points) * np.sqrt(grid.weights)[:, None]
    vals = a(grid.points)
    M = Q.T @ (vals[:, None] * Q)
    if np.isrealobj(M):
        M = 0.5 * (M + M.T)
    return OperatorMatrix(M, "harmonic", grid=grid, nmax=nmax)


def nodal_multiplier(a: SphereSymbol, grid: SphereGrid) -> OperatorMatrix:
    """Nodal representation: the diagonal matrix of grid values."""
    return OperatorMatrix(np.diag(a(grid.points)), "nodal", grid=grid)


def kernel_field(a: SphereSymbol, d: int, nmax: int, grid: Optional[SphereGrid] = None
                 ) -> HerglotzField:
    """``K = I a`` (band-limited to ``nmax``), for plotting; ``T u = K *_h u``."""
    grid = grid or sphere_grid(d, max(8, 4 * nmax) if d == 2 else 2 * nmax + 8)
    return HerglotzField(SphereFunction.project(d, nmax, a(grid.points), grid))


# ---------------------------------------------------------------------------
# h-convolution ladder
# ---------------------------------------------------------------------------

def _edges(smax: float, marks: Sequence[float]) -> np.ndarray:
    e = np.arange(0.0, math.ceil(smax) + 1.0)
    return np.unique(np.concatenate([e[e < smax], [smax], np.asarray(marks, dtype=float)]))


def _adjoint_ladder_radial(v: HerglotzField, edges: np.ndarray) -> np.ndarray:
    """Coefficients of ``I*_s v`` at every edge ``s`` (angular part analytic).

    The angular integral of ``v(r .) e^{-i r . xi}`` is done with the
    plane-wave expansion, leaving ``(pi/s) \\int_0^s J_{n+nu}(r)^2 r dr``
    per degree, integrated numerically panel by panel.
    """
    psi = v.source
    d = psi.d
    nmax = psi.max_degree
    nu = (d - 2) / 2.0
    x, w = gauss_legendre(12)
    lo, hi = edges[:-1], edges[1:]
    r = (0.5 * (lo + hi))[:, None] + (0.5 * (hi - lo))[:, None] * x[None, :]
    J = bessel_j_ladder(nu, nmax, r.ravel()).reshape(r.shape + (nmax + 1,))
    panel = np.einsum("pk,pkn->pn", (0.5 * (hi - lo))[:, None] * w[None, :] * r, J * J)
    cum = np.vstack([np.zeros(nmax + 1), np.cumsum(panel, axis=0)])
    s = edges
    with np.errstate(divide="ignore", invalid="ignore"):
        fac = np.where(s[:, None] > 0, math.pi / np.where(s > 0, s, 1.0)[:, None] * cum, 0.0)
    dense = psi.dense(nmax)
    deg = np.array([i.n for i in harmonic_indices(d, nmax)])
    return fac[:, deg] * dense[None, :]


def _adjoint_ladder_spatial(v: HerglotzField, edges: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """``I*_s v (xi_k)`` at every edge ``s`` by full ball quadrature.

    Each radial Gauss node ``r`` gets its own sphere grid of resolution
    ``r + 4 r^{1/3} + n + 16``, which resolves ``v(r .) e^{-i r . xi}``.
    """
    d = v.d
    c = constants(d).c_d
    n = v.source.max_degree
    x, w = gauss_legendre(8)
    out = np.zeros((edges.size, xi.shape[0]), dtype=complex)
    acc = np.zeros(xi.shape[0], dtype=complex)
    cache: dict[int, SphereGrid] = {}
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        rs = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        ws = 0.5 * (hi - lo) * w * rs ** (d - 1)
        for r, wr in zip(rs, ws):
            res = int(math.ceil(r + 4 * r ** (1 / 3))) + n + 16
            if d == 3:
                res = res // 2 + 8
            g = cache.get(res)
            if g is None:
                g = cache[res] = sphere_grid(d, res)
            pts = r * g.points
            vals = v(pts) * g.weights
            acc = acc + wr * (np.exp(-1j * xi @ pts.T) @ vals)
        s = edges[i + 1]
        out[i + 1] = c * acc / s
    return out


@dataclass(frozen=True)
class HConvResult:
    """Output of :func:`hconvolve`."""

    field: HerglotzField
    densities: dict
    residual: float
    converged: bool
    method: str

    @property
    def density(self) -> SphereFunction:
        return self.field.source


def _product_grid(d: int, degree: int) -> SphereGrid:
    return sphere_grid(d, max(8, 2 * degree + 4) if d == 2 else degree + 4)


def _densities(u: HerglotzField, v: HerglotzField, s_values: Sequence[float], method: str):
    """Finite-radius densities ``phi * I*_s v`` for each ``s`` (as SphereFunctions)."""
    d = u.d
    phi = u.source
    deg_out = phi.max_degree + v.source.max_degree
    g = _product_grid(d, deg_out)
    s_values = np.asarray(sorted(set(float(s) for s in s_values)))
    edges = _edges(float(s_values[-1]), s_values)
    idx = np.searchsorted(edges, s_values)
    if method == "radial":
        coefs = _adjoint_ladder_radial(v, edges)[idx]
        H = harmonic_matrix(d, v.source.max_degree, g.points)
        adj = coefs @ H.T
    elif method == "spatial":
        adj = _adjoint_ladder_spatial(v, edges, g.points)[idx]
    else:
        raise ValueError("method must be 'radial' or 'spatial'")
    phivals = phi(g.points)
    out = {}
    for s, a in zip(s_values, adj):
        out[float(s)] = SphereFunction.project(d, deg_out, phivals * a, g)
    return out


def hconvolve(u: HerglotzField, v: HerglotzField, R_ladder: Sequence[float] = (200.0, 400.0),
              *, method: Optional[str] = None, rel_tol: float = 0.1) -> HConvResult:
    """h-convolution ``u *_h v`` from a ladder of finite radii.

    At each radius ``s`` the finite average equals ``I(phi * I*_s v)``
    (Fubini), so the ladder is carried as sphere densities.  The last two
    rungs are Richardson-extrapolated in ``1/s``.  ``residual`` is the
    norm of the extrapolation correction; the ladder is flagged
    non-convergent when it exceeds ``rel_tol`` times the result.

    Parameters
    ----------
    method : {"spatial", "radial"}, optional
        ``"spatial"`` integrates ``v(y) e^{-i y.xi}`` over the ball by
        quadrature; ``"radial"`` does the angular integral with the
        plane-wave expansion and only the radial integral numerically.
        Default: spatial for d=2, radial for d=3.
    """
    if u.d != v.d:
        raise ValueError("dimension mismatch")
    d = u.d
    if not u.source.coeffs or not v.source.coeffs:
        z = SphereFunction.zero(d)
        return HConvResult(HerglotzField(z), {float(s): z for s in R_ladder}, 0.0, True, "trivial")
    method = method or ("spatial" if d == 2 else "radial")
    ladder = sorted(float(s) for s in R_ladder)
    if not ladder or ladder[0] <= 0:
        raise ValueError("R_ladder must contain positive radii")
    dens = _densities(u, v, ladder, method)
    if len(ladder) == 1:
        final = dens[ladder[0]]
        return HConvResult(HerglotzField(final), dens, math.inf, False, method)
    r1, r2 = ladder[-2], ladder[-1]
    d1, d2 = dens[r1], dens[r2]
    final = d2.scale(r2 / (r2 - r1)) - d1.scale(r1 / (r2 - r1))
    resid = (final - d2).norm()
    return HConvResult(HerglotzField(final), dens, float(resid),
                       bool(resid <= rel_tol * max(final.norm(), 1e-300)), method)


@dataclass(frozen=True)
class FactorizationResult:
    """``||I*(u *_h v)_s - phi psi||`` per ladder radius."""

    radii: list
    residuals: list
    window: bool
    ratios: list = field(default_factory=list)

    def __float__(self):
        return float(self.residuals[0])

    def to_dict(self) -> dict:
        return {"radii": self.radii, "residuals": self.residuals, "ratios": self.ratios,
                "window": self.window}


def _product_target(u: HerglotzField, v: HerglotzField) -> SphereFunction:
    phi, psi = u.source, v.source
    deg = phi.max_degree + psi.max_degree
    g = _product_grid(u.d, deg)
    return SphereFunction.project(u.d, deg, phi(g.points) * psi(g.points), g)


def verify_factorization(u: HerglotzField, v: HerglotzField,
                         R_ladder: Sequence[float] = (400.0, 800.0), *, window: bool = True,
                         method: Optional[str] = None) -> FactorizationResult:
    """Residual of ``I*(u *_h v) = (I* u)(I* v)`` at finite radii.

    ``window=True`` (default) reports, for each ``R``, the root mean square
    of the finite-radius residual over ``s in [R, 2R]`` -- the dyadic
    piece of a B*-type norm.  The finite-radius residual is ``C/s`` plus an
    oscillating ``sin(2s + const)/s`` term, so its value at one radius is
    not monotone; the window average is.  ``window=False`` gives the
    residual at exactly ``R``.
    """
    d = u.d
    if not u.source.coeffs or not v.source.coeffs:
        radii = [float(R) for R in R_ladder]
        return FactorizationResult(radii, [0.0] * len(radii), window)
    method = method or ("spatial" if d == 2 else "radial")
    target = _product_target(u, v)
    radii = [float(R) for R in R_ladder]
    res = []
    for R in radii:
        if window:
            ss = np.arange(R, 2 * R + 0.5, 1.0)
        else:
            ss = np.array([R])
        dens = _densities(u, v, ss, method)
        vals = np.array([(istar_field(HerglotzField(dens[float(s)]), math.inf) - target).norm()
                         for s in ss])
        res.append(float(np.sqrt(np.mean(vals ** 2))))
    ratios = [res[i + 1] / res[i] if res[i] > 0 else 0.0 for i in range(len(res) - 1)]
    return FactorizationResult(radii, res, window, ratios)


# ---------------------------------------------------------------------------
# algebra checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraReport:
    nodal_commutator: float
    nodal_product_error: float
    nodal_idempotence_error: Optional[float]
    harmonic_commutators: dict
    truncated_commutators: dict
    norm_ladder: dict
    sup_abs: float
    spectrum_distance: dict
    hull_distance: dict
    hermitian: dict

    def to_dict(self) -> dict:
        return {
            "nodal_commutator": self.nodal_commutator,
            "nodal_product_error": self.nodal_product_error,
            "nodal_idempotence_error": self.nodal_idempotence_error,
            "commutator_norms": {str(k): v for k, v in self.harmonic_commutators.items()},
            "truncated_commutator_norms": {str(k): v
                                           for k, v in self.truncated_commutators.items()},
            "norm_ladder": {str(k): v for k, v in self.norm_ladder.items()},
            "sup_abs": self.sup_abs,
            "spectrum_points": {str(k): v for k, v in self.spectrum_distance.items()},
            "hull_distance": {str(k): v for k, v in self.hull_distance.items()},
            "hermitian": {str(k): v for k, v in self.hermitian.items()},
        }


def _range_distance(eigs: np.ndarray, samples: np.ndarray, merge: float = 0.1) -> float:
    """Largest distance from an eigenvalue to the sampled range of ``a``.

    The sampled range is closed up by merging gaps shorter than ``merge``
    times its span (grid spacing), so a continuous symbol gives an interval
    and an indicator gives ``{0, 1}``.
    """
    s = np.sort(samples)
    span = max(s[-1] - s[0], 1e-300)
    cut = np.flatnonzero(np.diff(s) > merge * span)
    lo = np.concatenate([[s[0]], s[cut + 1]])
    hi = np.concatenate([s[cut], [s[-1]]])
    dist = 0.0
    for lam in eigs:
        d_in = np.maximum(0.0, np.maximum(lo - lam, lam - hi))
        dist = max(dist, float(np.min(d_in)))
    return dist


def _hull_distance(eigs: np.ndarray, samples: np.ndarray) -> float:
    lo, hi = float(np.min(samples)), float(np.max(samples))
    return float(np.max(np.maximum(0.0, np.maximum(lo - eigs, eigs - hi)), initial=0.0))


def algebra_checks(a: SphereSymbol, b: SphereSymbol, d: int = 2,
                   nmax_list: Sequence[int] = (8, 16, 32),
                   grid: Optional[SphereGrid] = None) -> AlgebraReport:
    """Commutativity, product rule, idempotence and norm ladder.

    Nodal checks use ``grid`` (default resolution 128 for d=2, 24 for d=3).
    Harmonic checks use :func:`mult_toeplitz_matrix` at each ``nmax``.

    ``commutator_norms`` is ``||P_N (T_a T_b - T_b T_a) P_N||`` with the
    products formed at degree ``2N`` (compression of the operator
    commutator, which vanishes); ``truncated_commutator_norms`` is the
    commutator of the degree-``N`` matrices themselves, which keeps an
    O(1) finite-rank contribution from the top degree and does not vanish.

    Two spectral checks are reported per ``nmax``: ``hull_distance`` (the
    eigenvalues of a compression lie in the convex hull of the range of
    ``a``; a theorem, so ~0) and ``spectrum_distance`` to the sampled range
    itself.  The latter tends to 0 for continuous symbols but not for an
    indicator, whose truncations have eigenvalues throughout ``(0, 1)``.
    """
    grid = grid or sphere_grid(d, 128 if d == 2 else 24)
    A = nodal_multiplier(a, grid).entries
    B = nodal_multiplier(b, grid).entries
    ab = SphereSymbol(lambda p: a(p) * b(p), a.sup_abs * b.sup_abs, f"{a.name}*{b.name}")
    AB = nodal_multiplier(ab, grid).entries
    comm = float(np.max(np.abs(A @ B - B @ A)))
    prod = float(np.max(np.abs(A @ B - AB)))
    idem = float(np.max(np.abs(A @ A - A))) if a.indicator else None
    samples = a(grid.points)
    hc, tc, norms, dist, hull, herm = {}, {}, {}, {}, {}, {}
    for n in nmax_list:
        Ha = mult_toeplitz_matrix(a, d, n)
        Hb = mult_toeplitz_matrix(b, d, n)
        tc[n] = float(np.linalg.norm(Ha.entries @ Hb.entries - Hb.entries @ Ha.entries, 2))
        k = Ha.size
        A2 = mult_toeplitz_matrix(a, d, 2 * n).entries
        B2 = mult_toeplitz_matrix(b, d, 2 * n).entries
        hc[n] = float(np.linalg.norm((A2 @ B2 - B2 @ A2)[:k, :k], 2))
        herm[n] = Ha.hermitian
        eig = eigen_hermitian(Ha).values if Ha.hermitian else None
        norms[n] = float(np.max(np.abs(eig))) if eig is not None else operator_norm(Ha)
        if eig is not None:
            dist[n] = _range_distance(eig, samples)
            hull[n] = _hull_distance(eig, samples)
    return AlgebraReport(comm, prod, idem, hc, tc, norms, a.sup_abs, dist, hull, herm)

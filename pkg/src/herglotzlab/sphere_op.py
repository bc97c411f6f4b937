"""The sphere-side operator ``T_breve_a`` unitarily equivalent to ``T_a``.

For a symbol ``a`` on ``R^d`` with unitary Fourier transform
``a_hat(zeta) = (2 pi)^{-d/2} \\int a(x) e^{-i x.zeta} dx``::

    (T_breve phi)(eta) = pi / (2 pi)^{d/2} \\int_S a_hat(eta - xi) phi(xi) dS(xi)

Only values of ``a_hat`` on the closed ball of radius 2 ever enter; the
nodal assembly asserts this (kernel-reach instrumentation).
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .quad import QuadResult, TailPolicy, _origin_cell, gl_panels, integrate_semiaxis
from .quad import SphereGrid, sphere_grid
from .specfun import bessel_j, gamma_fn, harmonic_matrix
from .symbols import RadialSymbol

__all__ = [
    "EigenResult",
    "KernelReachError",
    "OperatorMatrix",
    "SingularDiagonalError",
    "SymbolTransform",
    "build_harmonic",
    "build_nodal",
    "circle_eigs",
    "eigen_hermitian",
    "fourier_radial",
    "hankel_transform",
    "operator_norm",
    "point_mass_transform",
    "prefactor",
    "transform_of",
]

REACH = 2.0
REACH_EPS = 1e-12


class KernelReachError(AssertionError):
    """``a_hat`` was requested outside the closed ball of radius 2."""


class SingularDiagonalError(ValueError):
    """``a_hat`` is too singular at the origin for a Nystrom diagonal."""


def prefactor(d: int) -> float:
    """``pi / (2 pi)^{d/2}``."""
    return math.pi / (2 * math.pi) ** (d / 2)


# ---------------------------------------------------------------------------
# radial Fourier transform
# ---------------------------------------------------------------------------

def hankel_transform(f: Callable, d: int, rho: float, *, support: float = math.inf,
                     breakpoints=(), policy: Optional[TailPolicy] = None) -> QuadResult:
    """``rho^{-nu} \\int_0^inf f(r) J_nu(rho r) r^{d/2} dr`` with ``nu = (d-2)/2``.

    Evaluated in the scaled form ``rho^{-d} \\int f(u/rho) J_nu(u) u^{d/2} du``
    so that the oscillation period is ``pi`` regardless of ``rho``.
    At ``rho = 0`` the limit ``\\int f r^{d-1} dr / (2^nu Gamma(nu+1))`` is used.
    """
    nu = (d - 2) / 2.0
    rho = float(rho)
    if rho < 0:
        raise ValueError("hankel_transform: rho must be >= 0")
    if rho == 0.0:
        g = lambda r: f(r) * r ** (d - 1)
        res = (integrate_semiaxis(g, support=support, breakpoints=breakpoints)
               if math.isfinite(support) else
               integrate_semiaxis(g, policy or TailPolicy(acceleration="sequence-extrapolation"),
                                  breakpoints=breakpoints))
        scale = 1.0 / (2 ** nu * gamma_fn(nu + 1))
        return QuadResult(res.value * scale, res.error * scale, res.converged, res.n_evals)

    def g(u):
        u = np.asarray(u, dtype=float)
        return f(u / rho) * bessel_j(nu, u) * u ** (d / 2)

    bps = tuple(b * rho for b in breakpoints)
    if math.isfinite(support):
        res = integrate_semiaxis(g, support=support * rho, breakpoints=bps)
    else:
        res = integrate_semiaxis(g, policy or TailPolicy(acceleration="sequence-extrapolation",
                                                         transition=8.0),
                                 breakpoints=bps)
    s = rho ** (-d)
    return QuadResult(res.value * s, res.error * s, res.converged, res.n_evals, res.info)


def fourier_radial(a: RadialSymbol, d: int, rho):
    """Radial Fourier transform ``a_hat(rho)`` (unitary normalisation).

    Uses the closed form attached to the symbol when present, otherwise
    :func:`hankel_transform`.  Vectorised over ``rho``.

    Raises
    ------
    ArithmeticError
        If the numerical transform does not converge (divergence flag).
    """
    if d not in (2, 3):
        raise ValueError("d must be 2 or 3")
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise ValueError("fourier_radial: rho must be >= 0")
    if a.is_zero:
        out = np.zeros_like(rho_arr)
    elif a.fourier is not None:
        out = np.asarray(a.fourier(rho_arr, d), dtype=float)
    else:
        out = np.empty(rho_arr.size)
        for i, r in enumerate(rho_arr.ravel()):
            res = hankel_transform(a, d, r, support=a.support_radius, breakpoints=a.breakpoints)
            if not np.isfinite(res.value) or not res.converged and res.error > 1e-6 * abs(res.value):
                raise ArithmeticError(f"Hankel transform did not converge at rho={r}")
            out[i] = res.value
        out = out.reshape(rho_arr.shape)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# symbol transforms
# ---------------------------------------------------------------------------

@dataclass
class _Reach:
    max_arg: float = 0.0
    calls: int = 0


@dataclass(frozen=True)
class SymbolTransform:
    """``a_hat`` as seen by the sphere operator.

    Attributes
    ----------
    d : int
        Dimension.
    profile : callable or None
        ``rho -> a_hat(rho)`` for radial symbols.
    provenance : str
        ``"closed_form"``, ``"hankel_numeric"`` or ``"supplied"``.
    vector_eval : callable or None
        ``zeta (m, d) -> a_hat(zeta)`` for non-radial symbols.
    singular_exponent : float or None
        ``beta`` if ``a_hat(rho) ~ rho^{-beta}`` at the origin.
    """

    d: int
    profile: Optional[Callable] = None
    provenance: str = "supplied"
    vector_eval: Optional[Callable] = None
    singular_exponent: Optional[float] = None
    name: str = "a_hat"
    reach: _Reach = field(default_factory=_Reach, compare=False, repr=False)

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("SymbolTransform: d must be 2 or 3")
        if (self.profile is None) == (self.vector_eval is None):
            raise ValueError("exactly one of profile / vector_eval is required")
        if self.provenance not in ("closed_form", "hankel_numeric", "supplied"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def radial(self) -> bool:
        return self.profile is not None

    def _record(self, size):
        size = float(np.max(size)) if np.size(size) else 0.0
        self.reach.calls += 1
        self.reach.max_arg = max(self.reach.max_arg, size)
        if size > REACH + REACH_EPS:
            raise KernelReachError(f"a_hat evaluated at |zeta| = {size!r} > 2")

    def radial_values(self, s) -> np.ndarray:
        """Instrumented ``a_hat(s)`` for ``0 <= s <= 2``."""
        s = np.asarray(s, dtype=float)
        self._record(s)
        return np.asarray(self.profile(s), dtype=float)

    def vector_values(self, zeta) -> np.ndarray:
        """Instrumented ``a_hat(zeta)`` for ``|zeta| <= 2``."""
        zeta = np.atleast_2d(np.asarray(zeta, dtype=float))
        self._record(np.linalg.norm(zeta, axis=1))
        return np.asarray(self.vector_eval(zeta), dtype=complex)


def _chebyshev_profile(f: Callable, degree: int = 64) -> Callable:
    """Chebyshev interpolant of ``f`` on ``[0, 2]`` (used for numeric transforms)."""
    k = np.arange(degree + 1)
    x = np.cos(math.pi * (k + 0.5) / (degree + 1))
    vals = np.asarray(f(1.0 + x), dtype=float)
    coef = np.polynomial.chebyshev.chebfit(x, vals, degree)

    def interp(s):
        return np.polynomial.chebyshev.chebval(np.asarray(s, dtype=float) - 1.0, coef)

    interp.coefficients = coef
    return interp


def transform_of(a: RadialSymbol, d: int, *, tabulate: bool = True) -> SymbolTransform:
    """The :class:`SymbolTransform` of a radial symbol.

    Closed forms are used directly.  Otherwise ``a_hat`` is computed by
    :func:`hankel_transform`; with ``tabulate=True`` it is sampled once at
    Chebyshev nodes on ``[0, 2]`` and interpolated (smooth ``a_hat`` only).
    """
    beta = None
    if a.closed_form_tag and a.closed_form_tag[0] == "ex45":
        beta = d - a.closed_form_tag[1]
    if a.is_zero:
        return SymbolTransform(d, profile=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
                               provenance="closed_form", name="0")
    if a.fourier is not None:
        return SymbolTransform(d, profile=lambda s: a.fourier(s, d), provenance="closed_form",
                               singular_exponent=beta if beta and beta > 0 else None,
                               name=f"hat({a.name})")
    direct = lambda s: fourier_radial(a, d, s)
    prof = _chebyshev_profile(direct) if tabulate else direct
    return SymbolTransform(d, profile=prof, provenance="hankel_numeric", name=f"hat({a.name})")


def point_mass_transform(x0, d: Optional[int] = None) -> SymbolTransform:
    """Transform of the point mass at ``x0``: ``(2pi)^{-d/2} exp(-i x0.zeta)``.

    The resulting sphere operator is rank one,
    ``<T phi, psi> = u(x0) conj(v(x0))`` with ``u = I phi``, ``v = I psi``.
    """
    x0 = np.asarray(x0, dtype=float)
    d = d or x0.size
    c = (2 * math.pi) ** (-d / 2)
    return SymbolTransform(d, vector_eval=lambda z: c * np.exp(-1j * z @ x0),
                           provenance="closed_form", name=f"delta({x0.tolist()})")


# ---------------------------------------------------------------------------
# operator matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator matrix in the nodal or harmonic representation."""

    entries: np.ndarray
    basis: str
    grid: Optional[SphereGrid] = None
    nmax: Optional[int] = None

    def __post_init__(self):
        if self.basis not in ("nodal", "harmonic"):
            raise ValueError("basis must be 'nodal' or 'harmonic'")
        e = np.asarray(self.entries)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("entries must be a square matrix")

    @property
    def hermitian(self) -> bool:
        e = self.entries
        scale = max(float(np.max(np.abs(e))) if e.size else 0.0, 1e-300)
        return bool(np.max(np.abs(e - e.conj().T), initial=0.0) <= 1e-12 * scale)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def to_csv(self) -> str:
        """CSV rows ``row, col, re, im`` of the nonzero entries."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for (i, j), v in np.ndenumerate(self.entries):
            if v != 0:
                w.writerow([i, j, repr(float(np.real(v))), repr(float(np.imag(v)))])
        return buf.getvalue()


def _cap_average(T: SymbolTransform, w: float) -> float:
    """Average of ``a_hat(|eta - xi|)`` over a geodesic cap of area ``w`` around ``eta``."""
    d = T.d
    beta = T.singular_exponent or 0.0
    if beta >= d - 1:
        raise SingularDiagonalError(
            f"a_hat ~ rho^-{beta:g} is not integrable on S^{d - 1}")
    if d == 3:
        cos_c = max(-1.0, 1.0 - w / (2 * math.pi))
        s_c = math.sqrt(2.0 - 2.0 * cos_c)
        res = integrate_semiaxis(lambda s: T.radial_values(s) * s, support=s_c)
        return 2 * math.pi * float(res.value) / w
    half = min(w / 2.0, math.pi)
    res = integrate_semiaxis(lambda t: T.radial_values(2.0 * np.sin(0.5 * t)), support=half)
    return 2.0 * float(res.value) / w


def _diagonal_values(T: SymbolTransform, grid: SphereGrid) -> np.ndarray:
    if not T.radial:
        return T.vector_values(np.zeros((1, T.d)))[0] * np.ones(grid.size, dtype=complex)
    if T.singular_exponent is None:
        with np.errstate(all="ignore"):
            v0 = float(T.radial_values(np.array([0.0]))[0])
        if np.isfinite(v0):
            return np.full(grid.size, v0)
    uniq, inv = np.unique(grid.weights, return_inverse=True)
    caps = np.array([_cap_average(T, w) for w in uniq])
    return caps[inv]


def _kernel_rows(T: SymbolTransform, grid: SphereGrid, rows: slice, diag: np.ndarray):
    pts = grid.points
    sw = np.sqrt(grid.weights)
    blk = pts[rows]
    idx = np.arange(grid.size)[rows]
    if T.radial:
        dist = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * np.clip(blk @ pts.T, -1.0, 1.0)))
        dist[np.arange(idx.size), idx] = 0.0
        with np.errstate(divide="ignore"):
            vals = T.radial_values(dist).astype(complex if np.iscomplexobj(diag) else float)
    else:
        zeta = (blk[:, None, :] - pts[None, :, :]).reshape(-1, T.d)
        vals = T.vector_values(zeta).reshape(idx.size, grid.size)
    vals[np.arange(idx.size), idx] = diag[idx]
    return prefactor(T.d) * vals * sw[idx, None] * sw[None, :]


def build_nodal(T: SymbolTransform, grid: SphereGrid, *, chunk: int = 512) -> OperatorMatrix:
    """Symmetrised Nystrom matrix ``pi/(2pi)^{d/2} a_hat(|xi_k - xi_l|) sqrt(w_k w_l)``.

    The diagonal uses ``a_hat(0)`` when finite and the cap average of
    ``a_hat`` over a geodesic cap of area ``w_k`` otherwise.  Every
    ``a_hat`` evaluation is checked to lie in ``|zeta| <= 2``.

    Raises
    ------
    SingularDiagonalError
        When ``a_hat`` is not integrable on the sphere.
    KernelReachError
        When ``a_hat`` is requested beyond radius 2 (cannot happen for unit vectors).
    """
    if grid.d != T.d:
        raise ValueError("grid dimension does not match the transform")
    diag = _diagonal_values(T, grid)
    N = grid.size
    out = None
    for s in range(0, N, chunk):
        blk = _kernel_rows(T, grid, slice(s, min(N, s + chunk)), diag)
        if out is None:
            out = np.empty((N, N), dtype=blk.dtype)
        out[s:s + blk.shape[0]] = blk
    if np.isrealobj(out):
        out = 0.5 * (out + out.T)
    elif np.all(np.isreal(diag)):
        herm = 0.5 * (out + out.conj().T)
        if np.allclose(herm, out, rtol=0, atol=1e-13 * max(np.max(np.abs(out)), 1e-300)):
            out = herm
    return OperatorMatrix(out, "nodal", grid=grid)


def build_harmonic(T: SymbolTransform, d: int, nmax: int, grid: Optional[SphereGrid] = None,
                   *, chunk: int = 512) -> OperatorMatrix:
    """Harmonic-basis matrix ``H[m, n] = <T_breve Y_n, Y_m>`` by double sphere quadrature.

    ``H = Q^T M Q`` with ``M`` the nodal matrix and ``Q = diag(sqrt(w)) Y``;
    the nodal matrix is streamed in row blocks and never stored.

    The default grid has resolution ``4 * nmax`` for d=2 and ``2 * nmax + 8``
    for d=3 (a warning is issued below the exactness threshold ``2 * nmax + 2``).
    """
    if d != T.d:
        raise ValueError("dimension mismatch")
    if grid is None:
        grid = sphere_grid(d, max(8, 4 * nmax) if d == 2 else 2 * nmax + 8)
    need = 4 * nmax if d == 2 else 2 * nmax + 2
    if grid.resolution < need:
        warnings.warn(f"grid resolution {grid.resolution} < {need}: harmonic products "
                      "are not integrated exactly", RuntimeWarning, stacklevel=2)
    Q = harmonic_matrix(d, nmax, grid.points) * np.sqrt(grid.weights)[:, None]
    diag = _diagonal_values(T, grid)
    H = None
    for s in range(0, grid.size, chunk):
        sl = slice(s, min(grid.size, s + chunk))
        blk = _kernel_rows(T, grid, sl, diag)
        part = Q[sl].T @ (blk @ Q)
        H = part if H is None else H + part
    if np.isrealobj(H):
        H = 0.5 * (H + H.T)
    return OperatorMatrix(H, "harmonic", grid=grid, nmax=nmax)


def circle_eigs(T: SymbolTransform, nmax: int, *, order: int = 24) -> np.ndarray:
    """Eigenvalues of the circular convolution (d=2).

    ``lambda_n = 1/2 \\int_0^{2pi} a_hat(2|sin(tau/2)|) cos(n tau) dtau
    = \\int_0^pi a_hat(2 sin(tau/2)) cos(n tau) dtau`` for ``n = 0..nmax``.
    """
    if T.d != 2 or not T.radial:
        raise ValueError("circle_eigs needs a radial transform in d=2")
    n = np.arange(nmax + 1)

    def f(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            v = T.radial_values(2.0 * np.sin(0.5 * t))
        return v[..., None] * np.cos(t[..., None] * n)

    h = math.pi / (2 * nmax + 16)
    geo = h * 2.0 ** (-np.arange(50, -1, -1, dtype=float))
    edges = np.concatenate([geo, np.linspace(h, math.pi, 2 * nmax + 16)[1:]])
    cell, _ = _origin_cell(f, geo[0])
    return np.asarray(gl_panels(f, edges, order) + cell, dtype=float)


# ---------------------------------------------------------------------------
# eigensolver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenResult:
    """Output of :func:`eigen_hermitian` (eigenvalues sorted by decreasing ``|lambda|``)."""

    values: np.ndarray
    vectors: Optional[np.ndarray]
    sweeps: int
    off_norm: float
    converged: bool


def _round_robin(n: int):
    """Brent-Luk style schedule: n-1 rounds of n/2 disjoint pairs (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        p = np.array(players[: n // 2])
        q = np.array(players[n // 2:][::-1])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(A: np.ndarray) -> float:
    B = A.copy()
    np.fill_diagonal(B, 0.0)
    return float(np.linalg.norm(B))


def _jacobi_real(A: np.ndarray, want_vectors: bool, tol: float, max_sweeps: int):
    n = A.shape[0]
    pad = n % 2
    if pad:
        A = np.pad(A, ((0, 1), (0, 1)))
    m = A.shape[0]
    V = np.eye(m) if want_vectors else None
    rounds = _round_robin(m)
    scale = max(np.linalg.norm(A), 1e-300)
    sweeps = 0
    off = _off_norm(A)
    while off > tol * scale and sweeps < max_sweeps:
        for p, q in rounds:
            apq = A[p, q]
            active = np.abs(apq) > 1e-300
            if not np.any(active):
                continue
            app, aqq = A[p, p], A[q, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                tau = np.where(active, (aqq - app) / (2.0 * np.where(active, apq, 1.0)), 0.0)
                t = np.where(active, np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), 0.0)
            t = np.where(active & (tau == 0), 1.0, t)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            Ap, Aq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c[:, None] * Ap - s[:, None] * Aq
            A[q, :] = s[:, None] * Ap + c[:, None] * Aq
            Ap, Aq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = Ap * c[None, :] - Aq * s[None, :]
            A[:, q] = Ap * s[None, :] + Aq * c[None, :]
            A[p, q] = 0.0
            A[q, p] = 0.0
            if V is not None:
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = Vp * c[None, :] - Vq * s[None, :]
                V[:, q] = Vp * s[None, :] + Vq * c[None, :]
        sweeps += 1
        off = _off_norm(A)
    vals = np.diag(A)[:n].copy()
    if V is not None:
        V = V[:n, :n]
    return vals, V, sweeps, off / scale


def eigen_hermitian(M, *, vectors: bool = False, tol: float = 1e-12,
                    max_sweeps: int = 60) -> EigenResult:
    """Cyclic Jacobi eigensolver for Hermitian matrices.

    Real symmetric input is diagonalised directly with a parallel
    (round-robin) ordering, one vectorised batch of disjoint rotations at a
    time.  Complex Hermitian input ``A + iB`` is diagonalised through its
    real embedding ``[[A, -B], [B, A]]``, whose spectrum is that of the
    input with every eigenvalue doubled.

    Parameters
    ----------
    M : OperatorMatrix or ndarray
    vectors : bool
        Also return eigenvectors (columns, same order as the values).
    tol : float
        Stop when the off-diagonal Frobenius mass is ``<= tol * ||M||_F``.

    Returns
    -------
    EigenResult
        ``converged`` is False if the sweep limit was hit.
    """
    A = np.asarray(M.entries if isinstance(M, OperatorMatrix) else M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("eigen_hermitian: square matrix required")
    n = A.shape[0]
    if n == 0:
        return EigenResult(np.empty(0), np.empty((0, 0)) if vectors else None, 0, 0.0, True)
    scale = max(float(np.max(np.abs(A))), 1e-300)
    if np.max(np.abs(A - A.conj().T)) > 1e-10 * scale:
        raise ValueError("eigen_hermitian: matrix is not Hermitian")
    if np.iscomplexobj(A) and np.any(A.imag != 0):
        Ar, Ai = A.real, A.imag
        E = np.block([[Ar, -Ai], [Ai, Ar]])
        E = 0.5 * (E + E.T)
        vals, V, sweeps, off = _jacobi_real(E, vectors, tol, max_sweeps)
        order = np.argsort(vals, kind="stable")
        vals = vals[order]
        keep = order[0::2]
        vals = vals[0::2]
        vecs = None
        if vectors:
            # pick, for each doubled eigenvalue, the embedded vector [x; y] -> x + i y
            W = V[:, order]
            vecs = W[:n, 0::2] + 1j * W[n:, 0::2]
            vecs /= np.linalg.norm(vecs, axis=0, keepdims=True)
        del keep
    else:
        Ar = np.array(A.real, dtype=float)
        Ar = 0.5 * (Ar + Ar.T)
        vals, V, sweeps, off = _jacobi_real(Ar, vectors, tol, max_sweeps)
        vecs = V
    order = np.lexsort((-vals, -np.abs(vals)))
    vals = vals[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return EigenResult(vals, vecs, sweeps, float(off), bool(off <= tol))


def operator_norm(M, *, method: str = "auto", tol: float = 1e-13, max_iter: int = 20000) -> float:
    """Spectral norm.

    ``method="eigen"`` returns ``max |lambda|`` from :func:`eigen_hermitian`
    (Hermitian input); ``"power"`` runs power iteration on ``M^H M`` with a
    Rayleigh-quotient stopping rule; ``"auto"`` uses the eigen path up to
    256 rows and power iteration above.
    """
    A = np.asarray(M.entries if isinstance(M, OperatorMatrix) else M)
    n = A.shape[0]
    if n == 0:
        return 0.0
    if method == "auto":
        method = "eigen" if n <= 256 else "power"
    if method == "eigen":
        return float(np.max(np.abs(eigen_hermitian(A).values)))
    if method != "power":
        raise ValueError("method must be 'auto', 'eigen' or 'power'")
    x = np.ones(n, dtype=A.dtype) + 0.1 * np.cos(np.arange(n))
    x = x / np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = A.conj().T @ (A @ x)
        new = float(np.real(np.vdot(x, y)))
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0
        x = y / ny
        if abs(new - lam) <= tol * abs(new):
            lam = new
            break
        lam = new
    return math.sqrt(max(lam, 0.0))

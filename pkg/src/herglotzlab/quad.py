"""Quadrature engines.

* :func:`integrate_semiaxis` -- integrals over ``(0, inf)`` of integrands that
  are singular-but-integrable at the origin and oscillatory or decaying at
  infinity (spectral sequences, Hankel transforms).
* :func:`sphere_grid` -- product rules on the unit circle and unit sphere.
* :func:`ball_average` -- ``R^{-1} \\int_{|x|<R} f dx`` on a tensor ball grid.

The semi-axis integral is split in three parts:

``head``
    ``[0, transition]`` on geometrically graded Gauss-Legendre panels (plus
    any user breakpoints).  The innermost cell ``[0, h]`` is closed with a
    local power-law fit, which is exact for integrands ``~ C r^alpha``.
``blocks``
    one-period panels ``[t_k, t_k + period]`` beyond the transition; their
    partial sums are smooth (the oscillation integrates out over each block),
    which is the regime where the Levin u-transform is most effective.
``tail``
    depending on :class:`TailPolicy.acceleration`: nothing (plain truncation at
    ``r_max``), the Levin u-transform of the block partial sums, or a smooth
    taper (for chirp-like integrands whose local period shrinks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .specfun import gauss_legendre

__all__ = [
    "ACCELERATIONS",
    "QuadResult",
    "SphereGrid",
    "TailPolicy",
    "ball_average",
    "ball_grid",
    "gl_panels",
    "integrate_semiaxis",
    "integrate_tail",
    "levin_u",
    "smooth_step",
    "sphere_grid",
]

ACCELERATIONS = ("none", "sequence-extrapolation", "smooth-cutoff")


@lru_cache(maxsize=64)
def _gl(n: int):
    x, w = gauss_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t)."""
    t = np.asarray(t, dtype=float)
    inner = (t > 0) & (t < 1)
    out = np.where(t >= 1, 1.0, 0.0)
    ti = t[inner]
    a = np.exp(-1.0 / ti)
    b = np.exp(-1.0 / (1.0 - ti))
    out[inner] = a / (a + b)
    return out


# ---------------------------------------------------------------------------
# panel quadrature
# ---------------------------------------------------------------------------

def gl_panels(f: Callable, edges, order: int = 20, *, return_panels: bool = False):
    """Integrate ``f`` over consecutive panels ``[edges[i], edges[i+1]]``.

    ``f`` is called once on the concatenated node array and may return
    either a 1-d array or an array with trailing value dimensions.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = _gl(order)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x[None, :]).ravel()
    wts = (half * w[None, :]).ravel()
    vals = np.asarray(f(nodes))
    tail = vals.shape[1:]
    contrib = vals * wts.reshape((-1,) + (1,) * len(tail))
    panels = contrib.reshape((len(edges) - 1, order) + tail).sum(axis=1)
    return panels if return_panels else panels.sum(axis=0)


# ---------------------------------------------------------------------------
# sequence acceleration
# ---------------------------------------------------------------------------

def levin_u(partial_sums, beta: float = 1.0, start: int = 0):
    """Levin u-transform of a sequence of partial sums.

    Parameters
    ----------
    partial_sums : array_like
        ``S_start, S_{start+1}, ...``; vector-valued sequences are handled
        componentwise along trailing axes.
    beta : float
        Levin's shift parameter.
    start : int
        Index of the first supplied partial sum within the full sequence,
        so that the remainder model ``(beta + k)`` uses the true position.
    """
    s = np.asarray(partial_sums)
    n = s.shape[0] - 1
    if n < 2:
        return s[-1]
    a = np.diff(s, axis=0)  # a[j-1] = s[j] - s[j-1]
    s = s[1:]
    n = s.shape[0] - 1
    if np.all(np.abs(a[-3:]) <= 1e-17 * np.abs(s[-1]) + 1e-300):
        return s[-1]
    j = np.arange(n + 1, dtype=float)
    beta = beta + start + 1
    omega = (j + beta).reshape((-1,) + (1,) * (s.ndim - 1)) * a
    tiny = np.abs(omega) < 1e-300
    if np.any(tiny):
        omega = np.where(tiny, 1e-300, omega)
    binom = np.array([math.comb(n, int(k)) for k in j], dtype=float)
    coef = (-1.0) ** j * binom * ((beta + j) / (beta + n)) ** (n - 1)
    coef = coef.reshape((-1,) + (1,) * (s.ndim - 1))
    num = np.sum(coef * s / omega, axis=0)
    den = np.sum(coef / omega, axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = num / den
    return np.where(np.isfinite(out), out, s[-1])


# ---------------------------------------------------------------------------
# semi-axis integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailPolicy:
    """How the infinite tail of a semi-axis integral is treated.

    Attributes
    ----------
    r_max : float
        Hard cutoff; never integrate past it.
    blocks : int
        Minimum number of period blocks before convergence is judged
        (and the number of trailing partial sums fed to the extrapolator).
    acceleration : str
        One of ``'none'``, ``'sequence-extrapolation'``, ``'smooth-cutoff'``.
    period : float
        Asymptotic oscillation period of the integrand.
    transition : float
        End of the graded head region.
    tol : float
        Absolute tolerance used by the convergence test.
    order : int
        Gauss-Legendre nodes per panel.
    """

    r_max: float = 400.0 * math.pi
    blocks: int = 16
    acceleration: str = "sequence-extrapolation"
    period: float = math.pi
    transition: float = 8.0
    tol: float = 1e-13
    order: int = 20

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError("TailPolicy: r_max must be positive")
        if self.blocks < 4:
            raise ValueError("TailPolicy: need at least 4 blocks")
        if self.acceleration not in ACCELERATIONS:
            raise ValueError(f"TailPolicy: unknown acceleration {self.acceleration!r}")
        if not self.period > 0 or not self.transition > 0:
            raise ValueError("TailPolicy: period and transition must be positive")


@dataclass
class QuadResult:
    """Value of an integral together with a (conservative) error estimate."""

    value: float | np.ndarray
    error: float | np.ndarray
    converged: bool
    n_evals: int = 0
    info: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)


def _head_edges(transition: float, breakpoints: Sequence[float], depth: int, step: float):
    inner = min(1.0, transition)
    geo = inner * 2.0 ** (-np.arange(depth, -1, -1, dtype=float))
    if transition > inner:
        nstep = max(1, int(math.ceil((transition - inner) / step)))
        lin = np.linspace(inner, transition, nstep + 1)[1:]
    else:
        lin = np.empty(0)
    edges = np.concatenate([geo, lin])
    bps = [b for b in breakpoints if 0 < b < transition]
    if bps:
        edges = np.unique(np.concatenate([edges, bps]))
    return edges


def _origin_cell(f, h: float):
    """Integral of f over [0, h] from a local power-law fit C r^alpha."""
    r = np.array([h / 4, h / 2, h])
    v = np.asarray(f(r))
    f4, f2, f1 = v[0], v[1], v[2]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = f1 / f2
        alpha = np.log2(np.abs(ratio))
        alpha_prev = np.log2(np.abs(f2 / f4))
        ok = (ratio > 0) & (alpha > -1.0) & np.isfinite(alpha)
        est = np.where(ok, h * f1 / (alpha + 1.0), h * f1)
        err = np.where(ok, np.abs(est) * np.minimum(1.0, np.abs(alpha - alpha_prev)) + 1e-300,
                       np.abs(h * f1))
    return est, err


def integrate_semiaxis(f: Callable, policy: TailPolicy | None = None, *,
                       breakpoints: Sequence[float] = (), support: float | None = None,
                       head_depth: int = 50) -> QuadResult:
    """Integrate ``f`` over ``(0, inf)``.

    Parameters
    ----------
    f : callable
        Vectorised integrand ``r -> f(r)``; may be vector valued (trailing
        dimensions are integrated componentwise).
    policy : TailPolicy, optional
        Tail handling; defaults to ``TailPolicy()``.
    breakpoints : sequence of float
        Points where ``f`` is not smooth (kinks, jumps); panels are split there.
    support : float, optional
        If given, ``f`` vanishes beyond it and no tail treatment is needed.
    head_depth : int
        Number of geometric halvings towards the origin.

    Returns
    -------
    QuadResult
        ``value``, ``error`` (a conservative bound estimate) and a
        ``converged`` flag (False when the Cauchy test failed at ``policy.tol``).
    """
    pol = policy or TailPolicy()
    order = pol.order
    if support is not None:
        upper = float(support)
        edges = _head_edges(upper, list(breakpoints), head_depth, pol.period / 2)
        return _finite(f, edges, order)

    if pol.acceleration == "smooth-cutoff":
        return _taper(f, pol, breakpoints, head_depth)

    edges = _head_edges(pol.transition, list(breakpoints), head_depth, pol.period / 2)
    head = _finite(f, edges, order)
    half = pol.period
    total_blocks = int(math.floor((pol.r_max - pol.transition) / half))
    if total_blocks < 1:
        return head
    extra_bps = sorted(b for b in breakpoints if b > pol.transition)

    if pol.acceleration == "none":
        nb = total_blocks
    else:
        nb = min(total_blocks, max(pol.blocks, _LEVIN_MAX + 2))
    bedges = pol.transition + half * np.arange(nb + 1)
    block_vals, used = _block_sums(f, bedges, extra_bps, order)
    n_evals = head.n_evals + used
    partial = np.concatenate([np.asarray(head.value)[None, ...],
                              np.asarray(head.value)[None, ...] + np.cumsum(block_vals, axis=0)])
    done = nb
    if pol.acceleration == "none" or nb < 4:
        err = np.abs(partial[-1] - partial[-3]) if nb >= 2 else np.abs(partial[-1] - partial[0])
        value = partial[-1]
    else:
        value, err = _levin_best(partial, beta=pol.transition / pol.period + 1.0)
    converged = bool(np.all(err <= pol.tol + 1e-12 * np.abs(value)))
    total_err = np.asarray(err) + np.asarray(head.error)
    return QuadResult(value=_scalar(value), error=_scalar(total_err), converged=converged,
                      n_evals=n_evals,
                      info={"blocks": done, "r_end": pol.transition + half * done})


_LEVIN_MAX = 22


def integrate_tail(f: Callable, start: float, period: float = math.pi, *, order: int = 20,
                   nblocks: int = _LEVIN_MAX + 2, tol: float = 1e-13,
                   max_blocks: int = 400) -> QuadResult:
    """``\\int_start^inf f`` for an oscillatory ``f`` by Levin-accelerated period blocks.

    ``f`` should be free of a non-oscillatory mean (split it off first).
    The first blocks can change sign irregularly; they are summed directly
    and the u-transform is started after the last sign change, where the
    block sums decay smoothly.
    """
    total = nblocks + 16
    while True:
        bedges = start + period * np.arange(total + 1)
        vals = gl_panels(f, bedges, order, return_panels=True)
        flat = vals.reshape(vals.shape[0], -1)
        sign = np.sign(flat)
        change = np.nonzero(np.any(sign[1:] != sign[:-1], axis=1))[0]
        m0 = int(change[-1]) + 1 if change.size else 0
        # only sign changes in the leading part matter; persistent
        # alternation means the integrand still oscillates blockwise
        if total - m0 >= nblocks or total >= max_blocks:
            break
        total = min(max_blocks, 2 * total)
    if total - m0 < nblocks:
        m0 = max(0, total - nblocks)
    offset = vals[:m0].sum(axis=0)
    zero = np.zeros_like(vals[0])
    partial = np.concatenate([zero[None, ...], np.cumsum(vals[m0:], axis=0)]) + offset
    t = start + period * np.arange(m0, total + 1)
    value, err = _remainder_fit(partial, t)
    converged = bool(np.all(err <= tol + 1e-12 * np.abs(value)))
    return QuadResult(value=_scalar(value), error=_scalar(err), converged=converged,
                      n_evals=order * total, info={"r_end": float(bedges[-1]), "levin_start": m0})


def _remainder_fit(partial, t, degrees=(1, 2, 3, 4, 5)):
    """Levin-type extrapolation posed as a small least-squares problem.

    Model: ``S_k = S + omega_k P(1/t_k)`` with ``omega_k = t_k (S_k - S_{k-1})``
    and ``P`` a polynomial written in Chebyshev form on the window, which keeps
    the fit well conditioned even when the window sits far out on the axis
    (where the classical recursion loses all digits).  The degree whose
    estimate agrees best with the next lower degree is kept.
    """
    s = np.asarray(partial)
    shape = s.shape[1:]
    s = s.reshape(s.shape[0], -1)
    a = np.diff(s, axis=0)
    s1 = s[1:]
    tt = np.asarray(t, dtype=float)[1:]
    x = 1.0 / tt
    span = x.max() - x.min()
    xi = (2.0 * x - (x.max() + x.min())) / span if span > 0 else np.zeros_like(x)
    value = np.empty(s.shape[1])
    error = np.empty(s.shape[1])
    for c in range(s.shape[1]):
        om = tt * a[:, c]
        if np.all(np.abs(a[-3:, c]) <= 1e-17 * abs(s1[-1, c]) + 1e-300):
            value[c], error[c] = s1[-1, c], abs(a[-1, c])
            continue
        ests = []
        for m in degrees:
            if len(tt) < m + 4:
                break
            T = np.polynomial.chebyshev.chebvander(xi, m - 1)
            A = np.hstack([np.ones((len(tt), 1)), om[:, None] * T])
            sc = np.abs(A).max(axis=0)
            sc[sc == 0] = 1.0
            sol = np.linalg.lstsq(A / sc, s1[:, c], rcond=None)[0]
            ests.append(sol[0] / sc[0])
        if len(ests) < 2:
            value[c], error[c] = s1[-1, c], abs(a[-1, c]) * len(tt)
            continue
        d = np.abs(np.diff(ests))
        k = int(np.argmin(d))
        value[c] = ests[k + 1]
        error[c] = 2.0 * d[k] + 1e-15 * abs(ests[k + 1])
    return value.reshape(shape), error.reshape(shape)


def _block_sums(f, bedges, extra_bps, order):
    inside = [b for b in extra_bps if bedges[0] < b < bedges[-1]]
    if not inside:
        return gl_panels(f, bedges, order, return_panels=True), order * (len(bedges) - 1)
    # fold breakpoints into the blocks they fall in
    sums = []
    used = 0
    for lo, hi in zip(bedges[:-1], bedges[1:]):
        sub = [lo] + [b for b in inside if lo < b < hi] + [hi]
        sums.append(gl_panels(f, sub, order))
        used += order * (len(sub) - 1)
    return np.array(sums), used


def _levin_best(partial, beta):
    """Levin estimates on growing prefixes; keep the most self-consistent one.

    The u-transform is applied to ``S_0..S_n`` for increasing ``n``; round-off
    eventually spoils high orders, so the order whose neighbours agree best
    is selected and the spread over those neighbours is the error estimate.
    """
    top = min(partial.shape[0] - 1, _LEVIN_MAX)
    ests = [levin_u(partial[: n + 1], beta=beta - 1.0) for n in range(3, top + 1)]
    ests = np.asarray(ests)
    if ests.shape[0] < 3:
        return ests[-1], np.abs(partial[-1] - partial[-2])
    diffs = np.abs(np.diff(ests, axis=0))
    flat = diffs.reshape(diffs.shape[0], -1).max(axis=1)
    score = np.maximum(flat[:-1], flat[1:])
    k = int(np.argmin(score))
    value = ests[k + 1]
    err = 2.0 * np.maximum(diffs[k], diffs[k + 1])
    return value, err


def _scalar(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


FINITE_REL_TOL = 1e-14   # per-component panel error target (relative to the component's mass)
FINITE_MAX_LEVELS = 8    # bisection levels for under-resolved panels


def _finite(f, edges, order) -> QuadResult:
    """Panel Gauss-Legendre on ``edges`` with adaptive bisection.

    Each panel is integrated with ``order`` and ``order - 6`` nodes; panels
    whose two values disagree by more than ``FINITE_REL_TOL`` of the
    component's absolute mass are bisected (up to ``FINITE_MAX_LEVELS``
    times).  The reported error is the summed disagreement.
    """
    h = edges[0]
    cell, cell_err = _origin_cell(f, h)
    low = max(4, order - 6)
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    hi = gl_panels(f, edges, order, return_panels=True)
    lo = gl_panels(f, edges, low, return_panels=True)
    n_evals = (order + low) * a.size + 3
    done_hi, done_lo = [], []
    for _ in range(FINITE_MAX_LEVELS):
        err = np.abs(hi - lo).reshape(a.size, -1)
        mass = np.abs(hi).sum(axis=0).reshape(-1)
        for p in done_hi:
            mass = mass + np.abs(p).sum(axis=0).reshape(-1)
        bad = np.any(err > FINITE_REL_TOL * mass[None, :] + 1e-300, axis=1)
        if not np.any(bad):
            break
        done_hi.append(hi[~bad])
        done_lo.append(lo[~bad])
        ab, bb = a[bad], b[bad]
        mid = 0.5 * (ab + bb)
        a = np.concatenate([ab, mid])
        b = np.concatenate([mid, bb])
        sub = np.stack([a, b])
        hi = _panel_pairs(f, sub, order)
        lo = _panel_pairs(f, sub, low)
        n_evals += (order + low) * a.size
    done_hi.append(hi)
    done_lo.append(lo)
    hi_sum = sum(p.sum(axis=0) for p in done_hi)
    lo_sum = sum(p.sum(axis=0) for p in done_lo)
    err = sum(np.abs(ph - pl).sum(axis=0) for ph, pl in zip(done_hi, done_lo)) + cell_err
    err = np.maximum(err, np.abs(hi_sum - lo_sum))
    value = hi_sum + cell
    return QuadResult(value=_scalar(value), error=_scalar(err), converged=True, n_evals=n_evals)


def _panel_pairs(f, ab, order):
    """Per-panel integrals over the (not necessarily contiguous) panels ``ab[0] -> ab[1]``."""
    x, w = _gl(order)
    a, b = ab[0][:, None], ab[1][:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x[None, :]).ravel()
    wts = (half * w[None, :]).ravel()
    vals = np.asarray(f(nodes))
    tail = vals.shape[1:]
    contrib = vals * wts.reshape((-1,) + (1,) * len(tail))
    return contrib.reshape((ab.shape[1], order) + tail).sum(axis=1)


def _taper(f, pol: TailPolicy, breakpoints, head_depth) -> QuadResult:
    """Smooth-cutoff evaluation for chirp-like integrands.

    The integrand is multiplied by ``1 - s((r - R)/R)`` (``s`` the smooth
    step) and integrated to ``2R``.  For integrands whose phase derivative
    grows, the tapered integral converges super-algebraically in ``R``; the
    estimate is compared for ``R`` and ``1.5 R`` to produce the error.
    """
    def tapered(R):
        g = lambda r: _apply_window(f, r, R)
        step = min(pol.period / 2, 2.0 * math.pi / (R / 2.0 + 2.0) / 2.0)
        top = 2.0 * R
        edges = _head_edges(pol.transition, list(breakpoints), head_depth, pol.period / 2)
        n = int(math.ceil((top - edges[-1]) / step))
        edges = np.concatenate([edges, np.linspace(edges[-1], top, n + 1)[1:]])
        bps = [b for b in breakpoints if edges[0] < b < top]
        if bps:
            edges = np.unique(np.concatenate([edges, bps]))
        return _finite(g, edges, pol.order)

    R = max(4.0 * pol.transition, 40.0)
    prev = tapered(R)
    val = None
    converged = False
    while 2.0 * R <= pol.r_max:
        R *= 1.5
        cur = tapered(R)
        diff = np.abs(np.asarray(cur.value) - np.asarray(prev.value))
        val = cur
        if np.all(diff <= pol.tol + 1e-13 * np.abs(cur.value)):
            converged = True
            break
        prev = cur
    if val is None:
        val, diff = prev, np.asarray(prev.error)
    err = np.asarray(diff) + np.asarray(val.error)
    return QuadResult(value=val.value, error=_scalar(err), converged=converged,
                      n_evals=val.n_evals, info={"taper_radius": R})


def _apply_window(f, r, R):
    v = np.asarray(f(r))
    w = 1.0 - smooth_step((r - R) / R)
    return v * w.reshape((-1,) + (1,) * (v.ndim - 1))


# ---------------------------------------------------------------------------
# sphere and ball grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature rule on the unit sphere ``S^{d-1}``.

    Attributes
    ----------
    d : int
        Ambient dimension.
    points : ndarray, shape (n, d)
        Unit vectors.
    weights : ndarray, shape (n,)
        Positive weights summing to ``|S^{d-1}|``.
    resolution : int
        Resolution parameter the grid was built from.
    """

    d: int
    points: np.ndarray
    weights: np.ndarray
    resolution: int = 0

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def integrate(self, values):
        """Quadrature of sampled values (leading axis = grid points)."""
        v = np.asarray(values)
        return np.tensordot(self.weights, v, axes=(0, 0))


def sphere_grid(d: int, resolution: int) -> SphereGrid:
    """Quadrature grid on the unit circle (d=2) or unit sphere (d=3).

    d=2: ``resolution`` equispaced angles with equal weights (exact for
    trigonometric polynomials of degree < resolution).
    d=3: ``resolution`` Gauss-Legendre nodes in ``cos(theta)`` times
    ``2*resolution`` equispaced azimuths (exact for polynomials of degree
    < 2*resolution, in particular products of harmonics of degree < resolution).
    """
    if d not in (2, 3):
        raise ValueError("sphere_grid: d must be 2 or 3")
    if resolution < 4:
        raise ValueError("sphere_grid: resolution must be >= 4")
    if d == 2:
        th = 2.0 * math.pi * np.arange(resolution) / resolution
        pts = np.stack([np.cos(th), np.sin(th)], axis=1)
        w = np.full(resolution, 2.0 * math.pi / resolution)
        return SphereGrid(2, pts, w, resolution)
    ct, wt = gauss_legendre(resolution)
    nphi = 2 * resolution
    ph = 2.0 * math.pi * np.arange(nphi) / nphi
    st = np.sqrt(1.0 - ct * ct)
    pts = np.stack([
        (st[:, None] * np.cos(ph)[None, :]).ravel(),
        (st[:, None] * np.sin(ph)[None, :]).ravel(),
        np.repeat(ct, nphi),
    ], axis=1)
    w = np.repeat(wt, nphi) * (2.0 * math.pi / nphi)
    return SphereGrid(3, pts, w, resolution)


def ball_grid(R: float, grid: SphereGrid, n_radial: int | None = None):
    """Radial Gauss-Legendre nodes on [0, R] and their measure weights.

    Returns ``(radii, radial_weights)`` with ``radial_weights`` including the
    ``r^{d-1}`` Jacobian.  ``n_radial`` defaults to ``ceil(4R)`` capped at
    8192 (and at least 32), enough for unit-wavelength oscillations.
    """
    if n_radial is None:
        n_radial = min(8192, max(32, int(math.ceil(4 * R))))
    x, w = gauss_legendre(n_radial) if n_radial <= 4096 else _composite(n_radial)
    r = 0.5 * R * (x + 1.0)
    wr = 0.5 * R * w * r ** (grid.d - 1)
    return r, wr


def _composite(n):
    # two-panel split when more than 4096 nodes are requested
    m = n // 2
    x, w = gauss_legendre(m)
    xs = np.concatenate([0.5 * (x - 1.0), 0.5 * (x + 1.0)])
    ws = np.concatenate([0.5 * w, 0.5 * w])
    return xs, ws


def ball_average(f: Callable, R: float, grid: SphereGrid, *, n_radial: int | None = None,
                 chunk: int = 256):
    """``R^{-1} \\int_{|x|<R} f(x) dx`` on a radial x sphere tensor grid.

    ``f`` receives an ``(m, d)`` array of points and returns ``m`` values.
    """
    if not R > 0:
        raise ValueError("ball_average: R must be positive")
    r, wr = ball_grid(R, grid, n_radial)
    total = 0.0
    for start in range(0, r.size, chunk):
        rr = r[start:start + chunk]
        pts = (rr[:, None, None] * grid.points[None, :, :]).reshape(-1, grid.d)
        vals = np.asarray(f(pts)).reshape(rr.size, grid.size)
        total = total + np.sum(wr[start:start + chunk] * (vals @ grid.weights))
    return total / R

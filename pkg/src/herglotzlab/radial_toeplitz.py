"""Spectral sequences of Toeplitz operators with radial symbols.

For a radial symbol ``a`` the Toeplitz operator is diagonal in the basis
``e_{n,j}`` with eigenvalue

.. math:: \\gamma_a(n) = \\pi \\int_0^\\infty a(r) J_{n+(d-2)/2}(r)^2 \\, r\\, dr

on every function of degree ``n`` (multiplicity ``N_{n,d}``).  This module
evaluates the sequence, compares it with the closed forms for
``a = sin(r^2/4)`` and ``a = r^{-mu}``, and derives spectral diagnostics
(sup, compactness, Schatten membership, numerical rank).

Evaluation strategies (chosen from the symbol's metadata)
---------------------------------------------------------
``continuation``
    ``a = Im g`` with ``g`` decaying on a ray ``z = t e^{i theta}``:
    :math:`\\gamma = \\pi\\, \\mathrm{Im}[e^{2i\\theta}\\int_0^\\infty g J^2(t e^{i\\theta}) t\\,dt]`.
    No cancellation, so tiny eigenvalues keep full relative accuracy.
``compact``
    Gauss-Legendre on ``[0, support]``.
``split``
    head ``[0, R_t]`` with ``R_t = max(25, 2 nu_max)``; beyond it
    ``J^2 = M^2/2 + (J^2 - M^2/2)`` where ``M^2 = J^2 + Y^2`` is smooth.  The
    smooth part is integrated on an exponential grid, the oscillatory part
    with extrapolated block sums over whole periods of the Bessel phase,
    starting at a zero of the oscillatory part.
``taper``
    oscillatory symbols without a continuation: smooth cutoff.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .quad import (QuadResult, TailPolicy, gl_panels, integrate_semiaxis)
from .specfun import (bessel_j, bessel_j_complex_ladder, bessel_j_ladder, bessel_modulus_sq,
                      gammaln, multiplicity)
from .spherefn import SphereFunction
from .symbols import RadialSymbol

__all__ = [
    "SpectralSequence",
    "closed_form_ex44",
    "closed_form_ex45",
    "diag_apply",
    "finite_rank_probe",
    "gamma_sequence",
    "schatten_probe",
    "slope_fit",
    "spectrum_summary",
]


@dataclass
class SpectralSequence:
    """``gamma_a(0..nmax)`` in dimension ``d`` with per-entry error bounds."""

    d: int
    gammas: np.ndarray
    error_bounds: np.ndarray
    converged: np.ndarray = None
    method: str = ""
    symbol: str = ""

    def __post_init__(self):
        self.gammas = np.asarray(self.gammas, dtype=float)
        self.error_bounds = np.asarray(self.error_bounds, dtype=float)
        if self.converged is None:
            self.converged = np.ones(self.gammas.shape, dtype=bool)
        if self.gammas.shape != self.error_bounds.shape:
            raise ValueError("gammas and error_bounds must have the same length")
        if not np.all(np.isfinite(self.gammas)):
            raise ValueError("spectral sequence contains non-finite entries")

    @property
    def nmax(self) -> int:
        return self.gammas.size - 1

    @classmethod
    def constant(cls, d: int, value: float, nmax: int) -> "SpectralSequence":
        return cls(d, np.full(nmax + 1, float(value)), np.zeros(nmax + 1), method="given")

    @classmethod
    def from_values(cls, d: int, values) -> "SpectralSequence":
        v = np.asarray(values, dtype=float)
        return cls(d, v, np.zeros_like(v), method="given")

    def to_csv(self, oracle=None) -> str:
        """CSV text with columns ``n, gamma, error_bound`` (+ ``oracle``)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["n", "gamma", "error_bound"] + (["oracle"] if oracle is not None else [])
        w.writerow(head)
        for n, (g, e) in enumerate(zip(self.gammas, self.error_bounds)):
            row = [n, repr(float(g)), repr(float(e))]
            if oracle is not None:
                row.append(repr(float(oracle[n])))
            w.writerow(row)
        return buf.getvalue()


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def closed_form_ex44(d: int, n, variant: str = "stated"):
    """Closed form of ``gamma_a(n)`` for ``a(r) = sin(r^2/4)``.

    ``variant='stated'`` evaluates ``2 pi cos(1 - pi nu/2) J_nu(2)`` exactly as
    commonly stated; ``variant='corrected'`` evaluates
    ``2 pi cos(2 - pi nu/2) J_nu(2)``, which follows from
    ``int e^{-p x^2} J_nu^2 x dx = e^{-1/2p} I_nu(1/2p) / 2p`` at ``p = -i/4``
    and agrees with the quadrature.  ``nu = n + (d-2)/2``.
    """
    if variant not in ("stated", "corrected"):
        raise ValueError("variant must be 'stated' or 'corrected'")
    n = np.asarray(n)
    nu = n + (d - 2) / 2.0
    shift = 1.0 if variant == "stated" else 2.0
    out = 2 * math.pi * np.cos(shift - math.pi * nu / 2) * bessel_j(nu, 2.0)
    return out if np.ndim(out) else float(out)


def closed_form_ex45(d: int, mu: float, n):
    """``gamma_a(n)`` for ``a(r) = r^{-mu}``, ``1 < mu < d``.

    ``pi Gamma(mu-1) Gamma(n+(d-mu)/2) / (2^{mu-1} Gamma(mu/2)^2 Gamma(n+(d+mu)/2-1))``,
    evaluated through log-Gamma so large ``n`` does not overflow.
    """
    if not 1 < mu < d:
        raise ValueError(f"closed_form_ex45 requires 1 < mu < d (mu={mu}, d={d})")
    n = np.asarray(n, dtype=float)
    logv = (math.log(math.pi) + gammaln(mu - 1) + gammaln(n + (d - mu) / 2)
            - (mu - 1) * math.log(2) - 2 * gammaln(mu / 2) - gammaln(n + (d + mu) / 2 - 1))
    out = np.exp(logv)
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# gamma_sequence
# ---------------------------------------------------------------------------

def _check_convergent(a: RadialSymbol, d: int):
    if a.closed_form_tag and a.closed_form_tag[0] == "ex45":
        mu = a.closed_form_tag[1]
        if mu >= d:
            raise ValueError(
                f"gamma_sequence: a(r)=r^-{mu:g} is not integrable at 0 against J^2 r "
                f"for n=0 in d={d} (needs mu < d)")
        if mu <= 1:
            raise ValueError(
                f"gamma_sequence: a(r)=r^-{mu:g} decays too slowly; the integral "
                f"defining gamma diverges at infinity (needs mu > 1)")


def gamma_sequence(a: RadialSymbol, d: int, nmax: int, policy: Optional[TailPolicy] = None,
                   method: Optional[str] = None) -> SpectralSequence:
    """Spectral sequence ``gamma_a(n)``, ``n = 0..nmax``.

    Parameters
    ----------
    a : RadialSymbol
    d : int
        Dimension, 2 or 3.
    nmax : int
    policy : TailPolicy, optional
        Controls tail handling for the ``split`` and ``taper`` strategies.
    method : str, optional
        Force one of ``'continuation'``, ``'compact'``, ``'split'``, ``'taper'``.

    Raises
    ------
    ValueError
        For symbols whose defining integral diverges.
    """
    if d not in (2, 3):
        raise ValueError("gamma_sequence: d must be 2 or 3")
    if nmax < 0:
        raise ValueError("gamma_sequence: nmax must be nonnegative")
    if a.is_zero:
        z = np.zeros(nmax + 1)
        return SpectralSequence(d, z, z.copy(), method="zero", symbol=a.name)
    _check_convergent(a, d)
    pol = policy or TailPolicy()
    if method is None:
        if a.continuation is not None:
            method = "continuation"
        elif math.isfinite(a.support_radius):
            method = "compact"
        elif a.decay_tag == "oscillatory":
            method = "taper"
        else:
            method = "split"
    nu0 = (d - 2) / 2.0
    if method == "continuation":
        vals, errs, conv = _gamma_continuation(a, nu0, nmax)
    elif method == "compact":
        vals, errs, conv = _gamma_compact(a, nu0, nmax, pol)
    elif method == "split":
        vals, errs, conv = _gamma_split(a, nu0, nmax, pol)
    elif method == "taper":
        vals, errs, conv = _gamma_taper(a, nu0, nmax, pol)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectralSequence(d, vals, errs, conv, method=method, symbol=a.name)


def _integrand(a, nu0, nmax):
    def f(r):
        J = bessel_j_ladder(nu0, nmax, r)
        return math.pi * (a(r) * r)[:, None] * J * J
    return f


def _gamma_compact(a, nu0, nmax, pol):
    res = integrate_semiaxis(_integrand(a, nu0, nmax), pol, support=a.support_radius,
                             breakpoints=a.breakpoints)
    err = np.asarray(res.error) + 1e-15 * np.abs(res.value)
    return np.asarray(res.value), err, np.ones(nmax + 1, dtype=bool)


def _gamma_split(a, nu0, nmax, pol):
    nu_max = nu0 + nmax
    r_t = _tail_start(nu_max, nmax)
    f = _integrand(a, nu0, nmax)
    head = integrate_semiaxis(f, pol, support=r_t, breakpoints=a.breakpoints)
    orders = nu0 + np.arange(nmax + 1)

    # smooth mean part on r = r_t e^s
    def mean_part(r):
        M2 = np.stack([bessel_modulus_sq(nu, r) for nu in orders], axis=1)
        return 0.5 * math.pi * (a(r) * r)[:, None] * M2

    s_max = _mean_extent(a, r_t)
    edges = np.linspace(0.0, s_max, int(math.ceil(s_max / 0.5)) + 1)
    g = lambda s: mean_part(r_t * np.exp(s)) * (r_t * np.exp(s))[:, None]
    mean_hi = gl_panels(g, edges, 24)
    mean_lo = gl_panels(g, edges, 16)

    osc_vals, osc_errs = _phase_block_tail(a, orders, r_t, pol.order)
    vals = np.asarray(head.value) + mean_hi + osc_vals
    errs = (np.asarray(head.error) + np.abs(mean_hi - mean_lo) + osc_errs
            + 1e-14 * np.abs(vals))
    conv = osc_errs <= 1e-8 * np.maximum(np.abs(vals), 1e-300) + 1e-14
    return vals, errs, conv


TAIL_BLOCKS = 64   # phase periods per fit window
TAIL_SHIFT = 16    # offset of the second, independent window


def _phase_rate(nu, r):
    # derivative of the Bessel phase theta_nu(r) = atan(Y/J): 2 / (pi r M^2)
    return 2.0 / (math.pi * r * bessel_modulus_sq(nu, r))


def _phase_edges(orders: np.ndarray, start, nblocks: int) -> np.ndarray:
    """Radii ``r_k`` (per order) with ``theta_nu(r_k) - theta_nu(start) = k pi``.

    Blocks between consecutive edges contain exactly one period of
    ``J^2 - M^2/2 = (M^2/2) cos(2 theta)``, whatever the phase drift
    ``~ nu^2 / 2r``; the increments are solved by Newton's method with the
    phase integral done by 16-point Gauss-Legendre.
    """
    from .specfun import gauss_legendre
    x, w = gauss_legendre(16)
    edges = np.empty((orders.size, nblocks + 1))
    cur = np.broadcast_to(np.asarray(start, dtype=float), orders.shape).copy()
    edges[:, 0] = cur
    for k in range(nblocks):
        r = cur + math.pi / _phase_rate(orders, cur)
        for _ in range(8):
            mid, half = 0.5 * (r + cur), 0.5 * (r - cur)
            nodes = mid[:, None] + half[:, None] * x[None, :]
            phase = half * np.sum(w[None, :] * _phase_rate(orders[:, None], nodes), axis=1)
            step = (phase - math.pi) / _phase_rate(orders, r)
            r = r - step
            if np.all(np.abs(step) <= 1e-14 * r):
                break
        edges[:, k + 1] = r
        cur = r
    return edges


def _osc_rows(nu0: float, idx: np.ndarray, r: np.ndarray) -> np.ndarray:
    """``J^2 - M^2/2`` with row ``i`` of ``r`` evaluated at order ``nu0 + idx[i]``."""
    lad = bessel_j_ladder(nu0, int(idx.max()), r.ravel()).reshape(r.shape + (-1,))
    J = np.take_along_axis(lad, np.broadcast_to(idx[:, None, None], r.shape + (1,)), axis=2)[..., 0]
    return J * J - 0.5 * bessel_modulus_sq((nu0 + idx)[:, None], r)


def _tail_zeros(nu0: float, idx: np.ndarray, r_t: float) -> np.ndarray:
    """First zero of ``J^2 - M^2/2`` at or beyond ``r_t`` for every order.

    Starting the period blocks there makes the leading term of every block
    sum (proportional to ``sin 2 theta`` at the start) maximal, so the block
    sums follow the smooth remainder model from the first block on.
    Zeros are at most ``pi / (2 theta')`` apart with ``theta' >= 0.86`` for
    ``r >= 2 nu``, so a grid over ``1.1 pi`` always brackets one.
    """
    grid = r_t + np.linspace(0.0, 1.1 * math.pi, 67)
    rr = np.broadcast_to(grid, (idx.size, grid.size))
    h = _osc_rows(nu0, idx, rr)
    flip = np.signbit(h[:, 1:]) != np.signbit(h[:, :-1])
    first = np.argmax(flip, axis=1)
    lo, hi = grid[first], grid[first + 1]
    flo = h[np.arange(idx.size), first]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = _osc_rows(nu0, idx, mid[:, None])[:, 0]
        same = np.signbit(fm) == np.signbit(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
        if np.all(hi - lo <= 1e-13 * hi):
            break
    return 0.5 * (lo + hi)


def _phase_block_tail(a, orders: np.ndarray, r_t: float, order: int):
    """``pi int_{r_t}^inf a r (J_nu^2 - M_nu^2/2) dr`` for every order.

    The stretch up to the first zero of the integrand is integrated
    directly; beyond it, block sums over whole phase periods are
    extrapolated with the remainder fit of :mod:`quad`.  A second fit on a
    window shifted by ``TAIL_SHIFT`` periods gives an independent estimate,
    and their spread enters the error.
    """
    from .quad import _remainder_fit
    from .specfun import gauss_legendre
    nu0 = float(orders[0])
    idx = np.rint(orders - nu0).astype(int)
    x, w = gauss_legendre(order)
    zeros = _tail_zeros(nu0, idx, r_t)
    pmid, phalf = 0.5 * (zeros + r_t), 0.5 * (zeros - r_t)
    pnodes = pmid[:, None] + phalf[:, None] * x[None, :]
    pre = phalf * np.sum(w[None, :] * math.pi * np.asarray(a(pnodes)) * pnodes
                         * _osc_rows(nu0, idx, pnodes), axis=1)
    nb = TAIL_BLOCKS + TAIL_SHIFT
    edges = _phase_edges(orders, zeros, nb)
    vals = np.empty(orders.size)
    errs = np.empty(orders.size)
    for i, (nu, n) in enumerate(zip(orders, idx)):
        e = edges[i]
        mid, half = 0.5 * (e[1:] + e[:-1]), 0.5 * (e[1:] - e[:-1])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        J = bessel_j_ladder(nu0, int(n), nodes)[:, n]
        f = math.pi * np.asarray(a(nodes)) * nodes * (J * J - 0.5 * bessel_modulus_sq(nu, nodes))
        blocks = np.sum(f.reshape(half.size, order) * w[None, :], axis=1) * half
        partial = np.concatenate([[0.0], np.cumsum(blocks)])
        v1, e1 = _remainder_fit(partial[:TAIL_BLOCKS + 1], e[:TAIL_BLOCKS + 1])
        v2, e2 = _remainder_fit(partial[TAIL_SHIFT:], e[TAIL_SHIFT:])
        vals[i] = pre[i] + v1
        errs[i] = max(e1, e2) + abs(v1 - v2)
    return vals, errs


SPLIT_BUDGET = 6.0e6   # ladder entries (nodes x orders) allowed in the head


def _tail_start(nu_max: float, nmax: int) -> float:
    """Where the oscillatory tail starts.

    The Bessel phase deviates from ``r`` by about ``nu^2 / 2r``; phase-period
    block sums are smoothest once ``r >> nu^2``.  Aim for ``4 nu^2`` but stay
    within a node budget (about 13 nodes per unit length).
    """
    want = max(25.0, 2.0 * nu_max, 4.0 * nu_max ** 2)
    cap = max(25.0, 2.0 * nu_max + 50.0, SPLIT_BUDGET / (13.0 * (nmax + 1)))
    return float(min(want, cap))


def _mean_extent(a, r_t):
    """Length in ``s = log(r/r_t)`` after which ``|a(r)| r`` is negligible."""
    s = np.arange(0.0, 700.0, 1.0)
    r = r_t * np.exp(s)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        mag = np.abs(a(r)) * r
    ref = mag[0] if mag[0] > 0 else 1.0
    small = np.nonzero(~(mag > 1e-18 * ref))[0]
    return float(s[small[0]] + 1.0) if small.size else 699.0


def _gamma_taper(a, nu0, nmax, pol):
    from dataclasses import replace
    tp = replace(pol, acceleration="smooth-cutoff")
    res = integrate_semiaxis(_integrand(a, nu0, nmax), tp, breakpoints=a.breakpoints)
    conv = np.full(nmax + 1, res.converged)
    return np.asarray(res.value), np.asarray(res.error), conv


def _gamma_continuation(a, nu0, nmax):
    cont = a.continuation
    w = complex(math.cos(cont.theta), math.sin(cont.theta))

    def f(t):
        g = np.asarray(cont.on_ray(t), dtype=complex)
        J2 = bessel_j_complex_ladder(nu0, nmax, t * w)
        return (g * t)[:, None] * J2

    # integrand is entire along the ray; finite upper limit where g is negligible
    tt = np.linspace(0.0, 200.0, 2001)[1:]
    with np.errstate(over="ignore", under="ignore"):
        gm = np.abs(np.asarray(cont.on_ray(tt))) * np.exp(2.0 * tt * abs(math.sin(cont.theta))) * tt
    big = np.nonzero(gm > 1e-20 * np.max(gm))[0]
    upper = float(tt[big[-1]]) + 2.0 if big.size else 20.0
    edges = np.linspace(0.0, upper, int(math.ceil(upper / 0.5)) + 1)
    hi = gl_panels(f, edges, 24)
    lo = gl_panels(f, edges, 18)
    vals = math.pi * np.imag(w * w * hi)
    errs = math.pi * np.abs(hi - lo) + 1e-15 * np.abs(vals)
    return vals, errs, np.ones(nmax + 1, dtype=bool)


# ---------------------------------------------------------------------------
# diagonal action and diagnostics
# ---------------------------------------------------------------------------

def diag_apply(seq: SpectralSequence, phi: SphereFunction) -> SphereFunction:
    """Apply the diagonal operator: coefficient ``(n, j)`` times ``gamma(n)``.

    Raises
    ------
    ValueError
        On dimension mismatch or when ``phi`` has degrees beyond ``seq.nmax``.
    """
    if phi.d != seq.d:
        raise ValueError("diag_apply: dimension mismatch")
    if phi.max_degree > seq.nmax and any(c != 0 for c in phi.coeffs.values()):
        raise ValueError(f"diag_apply: phi has degree {phi.max_degree} beyond nmax={seq.nmax}"
                         " (truncation)")
    return SphereFunction(phi.d, {k: seq.gammas[k.n] * v for k, v in phi.coeffs.items()})


def slope_fit(seq: SpectralSequence, n_lo: int, n_hi: int) -> float:
    """Least-squares slope of ``log|gamma(n)|`` against ``log(n + d/2 - 1)``."""
    n = np.arange(n_lo, n_hi + 1)
    x = np.log(n + seq.d / 2.0 - 1.0)
    y = np.log(np.abs(seq.gammas[n_lo:n_hi + 1]))
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class SpectrumSummary:
    sup_abs: float
    limit_point: Optional[float]
    compact: bool
    spec_points: list
    decay: str = ""

    def to_dict(self) -> dict:
        return {"sup_abs": self.sup_abs, "limit_point": self.limit_point,
                "compact": self.compact, "spec_points": self.spec_points, "decay": self.decay}


def spectrum_summary(seq: SpectralSequence, rel_tol: float = 1e-12) -> SpectrumSummary:
    """Sup, compactness verdict and (closure of) the point spectrum.

    Compactness is decided from the tail: the last quarter of the sequence
    must shrink relative to the sup and fit a decaying trend (algebraic or
    faster).  Distinct values are merged within ``rel_tol * sup``.
    """
    g = seq.gammas
    sup = float(np.max(np.abs(g))) if g.size else 0.0
    if sup == 0.0:
        return SpectrumSummary(0.0, 0.0, True, [0.0], decay="zero")
    pts: list[float] = []
    for v in g:
        if not any(abs(v - p) <= rel_tol * sup for p in pts):
            pts.append(float(v))
    n = np.arange(g.size)
    q = max(4, g.size // 4)
    tail = np.abs(g[-q:])
    compact = False
    decay = "none"
    limit = None
    if g.size >= 8:
        nz = tail > 0
        if np.all(tail <= 1e-13 * sup):
            compact, decay = True, "finite/super-exponential"
        elif np.sum(nz) >= 3:
            x = np.log(n[-q:][nz] + 1.0)
            y = np.log(tail[nz])
            slope = np.polyfit(x, y, 1)[0]
            shrink = tail[-1] < 0.5 * np.max(np.abs(g[: g.size - q]))
            if slope < -0.2 and shrink:
                compact = True
                decay = "algebraic" if slope > -20 else "super-algebraic"
        if not compact:
            limit = float(g[-1])
    if compact:
        limit = 0.0
        if not any(abs(p) <= rel_tol * sup for p in pts):
            pts.append(0.0)
    return SpectrumSummary(sup, limit, compact, pts, decay)


@dataclass
class SchattenVerdict:
    p: float
    ladder: list
    partial_sums: list
    member: Optional[bool]
    inconclusive: bool
    ratios: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"p": self.p, "ladder": self.ladder, "partial_sums": self.partial_sums,
                "member": self.member, "inconclusive": self.inconclusive, "ratios": self.ratios}


# increments of the doubling ladder: ratio q of successive increments
MEMBER_RATIO = 0.9       # q <= 0.9 persistently: the series converges
NONMEMBER_RATIO = 0.97   # q >= 0.97 persistently: increments do not shrink


def schatten_probe(seq: SpectralSequence, d: Optional[int] = None, p: float = 2.0,
                   n0: int = 4) -> SchattenVerdict:
    """Schatten-p membership from partial sums on a doubling ladder.

    ``S_N = sum_{n <= N} N_{n,d} |gamma(n)|^p`` for ``N = n0, 2 n0, ...``.
    For ``|gamma| ~ n^{-s}`` the increment over ``[N, 2N]`` scales like
    ``2^{(d-1) - s p}``; the verdict uses the ratio of the last two increments.
    """
    if p < 1 and not p > 0:
        raise ValueError("schatten_probe: p must be positive")
    d = d or seq.d
    g = np.abs(seq.gammas) ** p
    mult = np.array([multiplicity(d, n) for n in range(g.size)], dtype=float)
    terms = mult * g
    csum = np.cumsum(terms)
    ladder = []
    N = n0
    while N <= seq.nmax:
        ladder.append(N)
        N *= 2
    partial = [float(csum[N]) for N in ladder]
    total = float(csum[-1])
    if total == 0.0 or np.count_nonzero(terms) == 0:
        return SchattenVerdict(p, ladder, partial, True, False)
    last_nz = int(np.nonzero(terms > 1e-300)[0][-1])
    if ladder and last_nz < ladder[0]:
        return SchattenVerdict(p, ladder, partial, True, False)
    if len(ladder) < 4:
        return SchattenVerdict(p, ladder, partial, None, True)
    inc = np.diff(partial)
    ratios = [float(inc[i + 1] / inc[i]) if inc[i] > 0 else 0.0 for i in range(len(inc) - 1)]
    tail = ratios[-2:]
    if all(q <= MEMBER_RATIO for q in tail):
        member, inc_flag = True, False
    elif all(q >= NONMEMBER_RATIO for q in tail):
        member, inc_flag = False, False
    else:
        member, inc_flag = None, True
    return SchattenVerdict(p, ladder, partial, member, inc_flag, ratios)


@dataclass
class RankReport:
    min_abs_gamma: float
    max_abs_gamma: float
    numerical_rank: Optional[int]
    threshold: float
    verdict: bool


RANK_THRESHOLD = 1e-13


def finite_rank_probe(a: RadialSymbol, d: int, nmax: int) -> RankReport:
    """Smallest ``|gamma_a(n)|`` and count of degrees above ``1e-13 max|gamma|``.

    The rank verdict is only issued for nonnegative symbols (sign-indefinite
    symbols may have isolated zeros without contradicting anything).
    """
    if not math.isfinite(a.support_radius):
        raise ValueError("finite_rank_probe: symbol must have compact support")
    if a.is_zero:
        return RankReport(0.0, 0.0, 0, RANK_THRESHOLD, True)
    seq = gamma_sequence(a, d, nmax)
    g = np.abs(seq.gammas)
    mx = float(g.max())
    rank = int(np.sum(g > RANK_THRESHOLD * mx))
    if not a.nonnegative:
        return RankReport(float(g.min()), mx, None, RANK_THRESHOLD, False)
    return RankReport(float(g.min()), mx, rank, RANK_THRESHOLD, bool(np.all(seq.gammas > 0)))

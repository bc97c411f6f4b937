"""Symbol-level constructions and diagnostics.

* the degenerate part ``a_deg`` of a symbol: the inverse transform of
  ``a_hat (1 - omega)``, whose Toeplitz operator vanishes because
  ``a_hat_deg`` is zero on the ball of radius 2;
* direct spatial quadrature of the sesquilinear form ``F_a(u, v) = \\int a u conj(v)``;
* the boundedness constant ``sup_xi \\int_{S_xi} |a_hat|``;
* homogeneous-decay (HD) and admissible-radial-gauge checks;
* a compactness probe for compactly supported radial symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .herglotz import HerglotzField
from .quad import SphereGrid, gl_panels, integrate_semiaxis, smooth_step, sphere_grid
from .radial_toeplitz import SpectralSequence, gamma_sequence
from .specfun import bessel_j_ladder, gauss_legendre, multiplicity
from .sphere_op import (SymbolTransform, fourier_radial, hankel_transform, point_mass_transform,
                        prefactor)
from .symbols import RadialSymbol

__all__ = [
    "ArgfResult",
    "BoundResult",
    "CompactnessReport",
    "CutoffWindow",
    "FormResult",
    "HDResult",
    "argf_check",
    "boundedness_constant",
    "compactness_probe",
    "cutoff_part",
    "degenerate_part",
    "form_quadrature",
    "hd_check",
    "point_mass_transform",
    "power_transform",
    "radial_eval",
]


# ---------------------------------------------------------------------------
# cut-off window and degenerate part
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CutoffWindow:
    """Smooth radial window: ``omega = 1`` on ``[0, 2]`` and ``0`` on ``[R0, inf)``.

    The transition is the ``exp(-1/t)`` ramp.  ``R0 = inf`` means ``omega = 1``.
    """

    R0: float = 3.0

    def __post_init__(self):
        if not self.R0 > 2.0:
            raise ValueError("CutoffWindow: R0 must exceed 2")

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        if math.isinf(self.R0):
            return np.ones_like(rho)
        return 1.0 - smooth_step((rho - 2.0) / (self.R0 - 2.0))


DECAY_FLOOR = 1e-17       # |a_hat| relative level treated as zero
DECAY_HORIZON = 80.0      # a_hat must reach the floor before this radius


def _fourier_extent(a: RadialSymbol, d: int) -> float:
    """Smallest radius beyond which ``|a_hat| < DECAY_FLOOR * |a_hat|_max``."""
    rho = np.linspace(0.0, DECAY_HORIZON, 801)
    vals = np.abs(fourier_radial(a, d, rho))
    top = float(np.max(vals))
    if top == 0.0:
        return 0.0
    above = np.nonzero(vals > DECAY_FLOOR * top)[0]
    if above[-1] == rho.size - 1:
        raise ValueError("degenerate_part: a_hat decays too slowly for the inverse transform")
    return float(rho[min(above[-1] + 1, rho.size - 1)])


def _inverse_radial(profile: Callable, d: int, lo: float, hi: float, r: np.ndarray,
                    breakpoints=()) -> np.ndarray:
    """``r^{-nu} \\int_lo^hi profile(rho) J_nu(r rho) rho^{d/2} drho`` on a dense GL grid."""
    nu = (d - 2) / 2.0
    r = np.asarray(r, dtype=float)
    rmax = float(np.max(r)) if r.size else 0.0
    h = min(0.05, math.pi / (4.0 * max(rmax, 1.0)))
    cuts = sorted({lo, hi, *[b for b in breakpoints if lo < b < hi]})
    xs, ws = [], []
    x20, w20 = gauss_legendre(20)
    for a_, b_ in zip(cuts[:-1], cuts[1:]):
        n = max(1, int(math.ceil((b_ - a_) / h)))
        e = np.linspace(a_, b_, n + 1)
        mid, half = 0.5 * (e[1:] + e[:-1]), 0.5 * (e[1:] - e[:-1])
        xs.append((mid[:, None] + half[:, None] * x20[None, :]).ravel())
        ws.append((half[:, None] * w20[None, :]).ravel())
    rho = np.concatenate(xs)
    w = np.concatenate(ws) * np.asarray(profile(rho), dtype=float) * rho ** (d / 2)
    out = np.empty(r.shape)
    flat = r.ravel()
    res = out.ravel()
    for s in range(0, flat.size, 64):
        rr = flat[s:s + 64]
        J = bessel_j_ladder(nu, 0, (rr[:, None] * rho[None, :]))[..., 0]
        vals = J @ w
        pos = rr > 0
        lim = 1.0 / (2 ** nu * math.gamma(nu + 1))
        scale = np.where(pos, np.where(pos, rr, 1.0) ** (-nu), 1.0)
        zero_val = lim * np.sum(w * rho ** nu) if np.any(~pos) else 0.0
        res[s:s + 64] = np.where(pos, vals * scale, zero_val)
    return res.reshape(r.shape)


SPATIAL_FLOOR = 1e-15     # |a_deg| relative level beyond which it is set to zero
SPATIAL_HORIZON = 4096.0  # largest radius searched for that level


class _SpatialInverse:
    """Pointwise inverse radial transform with a numerical spatial extent.

    ``a_deg`` decays only like ``exp(-c sqrt(r))`` (the window is Gevrey,
    not analytic), and evaluating the inverse transform costs ``O(r)`` per
    point.  Beyond the first dyadic window ``[R, 2R]`` on which ``|a_deg|``
    stays below ``SPATIAL_FLOOR`` times its size near the origin, the value
    is taken to be zero.  The extent is located on first use beyond ``r = 40``.
    """

    def __init__(self, prof, d, lo, hi, bps):
        self.prof, self.d, self.lo, self.hi, self.bps = prof, d, lo, hi, bps
        self._extent = None

    def raw(self, r):
        return _inverse_radial(self.prof, self.d, self.lo, self.hi, r, self.bps)

    @property
    def extent(self) -> float:
        if self._extent is None:
            ref = float(np.max(np.abs(self.raw(np.linspace(0.0, 10.0, 64)))))
            R = 40.0
            while R < SPATIAL_HORIZON:
                win = float(np.max(np.abs(self.raw(np.linspace(R, 2 * R, 32)))))
                if win <= SPATIAL_FLOOR * ref:
                    break
                R *= 2
            self._extent = R
        return self._extent

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if r.size == 0 or float(np.max(r)) <= 40.0:
            return self.raw(r)
        inside = r <= self.extent
        out = np.zeros(r.shape)
        if np.any(inside):
            out[inside] = self.raw(r[inside])
        return out


def degenerate_part(a: RadialSymbol, w: CutoffWindow = CutoffWindow(), d: int = 2) -> RadialSymbol:
    """The symbol ``a_deg`` with transform ``a_hat (1 - omega)``.

    Evaluated pointwise by the inverse radial transform (the radial Hankel
    transform is its own inverse in the unitary normalisation).  By
    construction ``a_hat_deg`` vanishes on the closed ball of radius 2, so
    its Toeplitz operator on the Herglotz space is zero.  Far from the
    origin the value is set to zero once it falls below ``1e-15`` of its
    size near the origin (see :class:`_SpatialInverse`).

    Raises
    ------
    ValueError
        If ``a_hat`` does not decay below ``1e-17`` of its maximum before
        radius 80 (slow-decay rejection).
    """
    if a.is_zero or math.isinf(w.R0):
        return _zero_like(f"deg({a.name})")
    top = _fourier_extent(a, d)
    if top <= 2.0:
        return _zero_like(f"deg({a.name})")
    prof = lambda rho: fourier_radial(a, d, rho) * (1.0 - w(rho))
    bps = (w.R0,) if w.R0 < top else ()
    func = _SpatialInverse(prof, d, 2.0, top, bps)
    return RadialSymbol(func=func, name=f"deg({a.name}; R0={w.R0:g})", decay_tag="other",
                        fourier=lambda rho, dd: prof(rho) if dd == d else _wrong_dim(d, dd),
                        meta={"parent": a.name, "R0": w.R0, "d": d, "fourier_extent": top})


def cutoff_part(a: RadialSymbol, w: CutoffWindow = CutoffWindow(), d: int = 2) -> RadialSymbol:
    """``a_omega = a - a_deg``: spatial values ``a - a_deg``, transform ``a_hat * omega``.

    The spatial evaluator subtracts the numerically inverted degenerate
    part; the attached transform is the defining product ``a_hat * omega``
    (so ``a_omega`` and ``a`` have the same transform on the ball of radius 2).
    """
    deg = degenerate_part(a, w, d)
    f = a.func
    prof = lambda rho, dd: (fourier_radial(a, dd, rho) * w(rho)) if dd == d else _wrong_dim(d, dd)
    return RadialSymbol(func=lambda r: f(r) - deg.func(r), name=f"cut({a.name}; R0={w.R0:g})",
                        decay_tag="L1", fourier=prof,
                        meta={"parent": a.name, "R0": w.R0, "d": d})


def _wrong_dim(d, dd):
    raise ValueError(f"this degenerate part was built for d={d}, not d={dd}")


def _zero_like(name):
    return RadialSymbol(func=lambda r: np.zeros_like(np.asarray(r, dtype=float)), name=name,
                        support_radius=0.0, decay_tag="compact",
                        fourier=lambda rho, d: np.zeros_like(np.asarray(rho, dtype=float)),
                        is_zero=True)


# ---------------------------------------------------------------------------
# spatial form quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormResult:
    """Ball-truncated value of ``F_a(u, v)`` and a bound on the neglected tail."""

    value: complex
    tail_bound: float
    R: float
    tail_ok: bool
    n_nodes: int

    def __complex__(self):
        return complex(self.value)

    def to_dict(self) -> dict:
        return {"re": self.value.real, "im": self.value.imag, "tail_bound": self.tail_bound,
                "R": self.R, "tail_ok": self.tail_ok, "n_nodes": self.n_nodes}


def _tail_bound(a_eval: Callable, R: float, d: int, norm_uv: float) -> tuple[float, bool]:
    # \int_S |u v| r^{d-1} dS <= 2 ||phi|| ||psi|| (1 + o(1)) on |x| = r, so the
    # tail is at most 2 ||phi|| ||psi|| \int_R^inf |a(r e)| dr (radial majorant
    # sampled along the axes).
    x, w = gauss_legendre(64)
    total = 0.0
    for lo in (R, 2 * R, 4 * R):
        r = lo + 0.5 * lo * (x + 1.0)
        pts = np.zeros((r.size, d))
        pts[:, 0] = r
        total += 0.5 * lo * float(np.sum(w * np.abs(np.asarray(a_eval(pts)))))
    pts = np.zeros((1, d))
    pts[0, 0] = 8 * R
    last = float(np.abs(np.asarray(a_eval(pts)))[0]) * 8 * R
    ok = last <= 0.1 * max(total, 1e-300) or last < 1e-14
    return 2.0 * norm_uv * (total + last), ok


def form_quadrature(a_eval: Callable, u: HerglotzField, v: HerglotzField, R: float = 60.0,
                    grid_density: float = 12.0, *, angular: Optional[int] = None) -> FormResult:
    """``\\int_{|x|<R} a(x) u(x) conj(v(x)) dx`` on a radial x sphere tensor grid.

    Parameters
    ----------
    a_eval : callable or RadialSymbol
        Symbol evaluated on ``(m, d)`` point arrays; a :class:`RadialSymbol`
        is evaluated once per radial node.
    u, v : HerglotzField
    R : float
        Truncation radius.
    grid_density : float
        Radial Gauss nodes per unit length.
    angular : int, optional
        Sphere-grid resolution; by default enough for the harmonic content of
        ``u conj(v)``.

    Returns
    -------
    FormResult
        ``tail_ok`` is False (tail-bound failure) when ``a`` is not seen to
        decay beyond ``R``.
    """
    d = u.d
    if v.d != d:
        raise ValueError("dimension mismatch")
    if not u.source.coeffs or not v.source.coeffs:
        return FormResult(0j, 0.0, R, True, 0)
    if angular is None:
        angular = max(8, 2 * (u.source.max_degree + v.source.max_degree) + 8)
    grid = sphere_grid(d, angular)
    n_rad = max(32, int(math.ceil(grid_density * R)))
    edges = np.linspace(0.0, R, max(1, n_rad // 20) + 1)
    if isinstance(a_eval, RadialSymbol):
        cuts = [b for b in (*a_eval.breakpoints, a_eval.support_radius) if 0 < b < R]
        if cuts:
            edges = np.unique(np.concatenate([edges, cuts]))
    x, w = gauss_legendre(20)
    mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * (edges[1:] - edges[:-1])
    r = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wr = (half[:, None] * w[None, :]).ravel() * r ** (d - 1)
    radial = isinstance(a_eval, RadialSymbol)
    if radial:
        sym = a_eval
        a_r = _radial_values_cached(sym, R, r.size, lambda: np.asarray(sym(r), dtype=float))
        a_eval = radial_eval(sym)
    total = 0j
    for s in range(0, r.size, 128):
        rr = r[s:s + 128]
        pts = (rr[:, None, None] * grid.points[None, :, :]).reshape(-1, d)
        uv = (u(pts) * np.conj(v(pts))).reshape(rr.size, grid.size)
        if radial:
            vals = a_r[s:s + 128, None] * uv
        else:
            vals = np.asarray(a_eval(pts)).reshape(rr.size, grid.size) * uv
        total += np.sum(wr[s:s + 128] * (vals @ grid.weights))
    if radial:
        tb, ok = _radial_values_cached(sym, -R, 0, lambda: _tail_bound(a_eval, R, d, 1.0))
        tb *= u.norm() * v.norm()
    else:
        tb, ok = _tail_bound(a_eval, R, d, u.norm() * v.norm())
    return FormResult(complex(total), tb, R, ok, r.size * grid.size)


_RADIAL_CACHE: dict = {}


def _radial_values_cached(sym, R, n, compute):
    # repeated form evaluations with one symbol share the radial nodes
    key = (id(sym.func), float(R), int(n))
    hit = _RADIAL_CACHE.get(key)
    if hit is not None and hit[0] is sym.func:
        return hit[1]
    vals = compute()
    if len(_RADIAL_CACHE) > 16:
        _RADIAL_CACHE.clear()
    _RADIAL_CACHE[key] = (sym.func, vals)
    return vals


def radial_eval(a: RadialSymbol) -> Callable:
    """Adapter: a radial symbol as a function of points in ``R^d``."""
    def f(pts):
        r = np.linalg.norm(np.atleast_2d(pts), axis=1)
        uniq, inv = np.unique(r, return_inverse=True)
        return np.asarray(a(uniq))[inv]
    return f


# ---------------------------------------------------------------------------
# boundedness constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundResult:
    """``C = sup_xi \\int_{S_xi} |a_hat|`` in both normalisations."""

    constant: float
    prefactored: float
    divergent: bool
    d: int

    def to_dict(self) -> dict:
        return {"constant": self.constant, "prefactored": self.prefactored,
                "divergent": self.divergent, "d": self.d}


def power_transform(beta: float, d: int, scale: float = 1.0) -> SymbolTransform:
    """``a_hat(zeta) = scale * |zeta|^{-beta}`` supplied directly on the Fourier side."""
    return SymbolTransform(d, profile=lambda s: scale * np.asarray(s, dtype=float) ** (-beta),
                           provenance="supplied",
                           singular_exponent=beta if beta > 0 else None,
                           name=f"|zeta|^-{beta:g}")


def boundedness_constant(T: SymbolTransform, d: Optional[int] = None,
                         grid: Optional[SphereGrid] = None) -> BoundResult:
    """Boundedness constant of the sphere operator.

    For radial ``a_hat`` the integral over the shifted sphere ``S_xi`` (which
    passes through the origin) does not depend on ``xi``; with
    ``|zeta| = 2 sin(psi/2)``::

        d = 3:  C = 2 pi \\int_0^2 |a_hat(s)| s ds
        d = 2:  C = 2 \\int_0^pi |a_hat(2 sin(psi/2))| dpsi

    A singularity ``|zeta|^{-beta}`` with ``beta >= d - 1`` is flagged
    divergent.  Non-radial transforms use ``grid`` for both the sup and the
    inner integral.
    """
    d = d or T.d
    pref = prefactor(d)
    beta = T.singular_exponent or 0.0
    if beta >= d - 1:
        return BoundResult(math.inf, math.inf, True, d)
    if T.radial:
        if d == 3:
            res = integrate_semiaxis(lambda s: np.abs(T.radial_values(s)) * s, support=2.0)
            C = 2 * math.pi * float(res.value)
        else:
            res = integrate_semiaxis(lambda p: np.abs(T.radial_values(2 * np.sin(0.5 * p))),
                                     support=math.pi)
            C = 2.0 * float(res.value)
        return BoundResult(C, pref * C, not math.isfinite(C), d)
    grid = grid or sphere_grid(d, 32)
    best = 0.0
    for xi in grid.points:
        vals = np.abs(T.vector_values(grid.points - xi[None, :]))
        best = max(best, float(np.sum(grid.weights * vals)))
    return BoundResult(best, pref * best, False, d)


# ---------------------------------------------------------------------------
# HD and admissible gauge checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HDResult:
    bounded: bool
    A: float
    lam: float
    lam_in_range: bool
    bounded_operator: bool

    def __bool__(self):
        return self.bounded

    def to_dict(self) -> dict:
        return {"bounded": self.bounded, "A": self.A, "lambda": self.lam,
                "lambda_in_range": self.lam_in_range, "bounded_operator": self.bounded_operator}


def hd_check(a: RadialSymbol, lam: float, d: int = 3, *, samples: int = 4001) -> HDResult:
    """Is ``|a(r)| <= A r^lam`` on ``[10, 1e4]``?

    The ratio ``|a(r)| / r^lam`` is sampled on a log grid; it counts as
    bounded when its maximum over the top decade does not exceed 1.1 times
    its maximum over ``[10, 1000]`` (an unbounded ratio keeps growing).
    ``bounded_operator`` additionally requires ``-d < lam < -1``.
    """
    r = np.logspace(1, 4, samples)
    ratio = np.abs(a(r)) / r ** lam
    lower = float(np.max(ratio[r <= 1000.0]))
    upper = float(np.max(ratio[r >= 1000.0]))
    bounded = bool(np.all(np.isfinite(ratio)) and upper <= 1.1 * lower)
    in_range = -d < lam < -1
    return HDResult(bounded, float(np.max(ratio)), float(lam), in_range, bounded and in_range)


@dataclass(frozen=True)
class ArgfResult:
    integral: float
    admissible: bool
    inconclusive: bool
    decay_power: float
    shells: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"integral": self.integral, "admissible": self.admissible,
                "inconclusive": self.inconclusive, "decay_power": self.decay_power}


def argf_check(phi_gauge: Callable, d: int = 3, grid_density: int = 8, *,
               levels: int = 40) -> ArgfResult:
    """Hyperplane disk integral of ``|phi_hat|`` for a radial gauge ``phi``.

    Computes ``\\int_{|x'| <= 2} |phi_hat(0, x')| dx'`` over the
    ``(d-1)``-dimensional disk as a ladder of dyadic shells
    ``2^{-k-1} < |x'| < 2^{-k}`` (k = -1..levels).  Shell contributions
    ``c_k`` must decay geometrically or like ``k^{-p}`` with ``p > 1.2``
    (admissible); ``p < 0.8`` is non-admissible; otherwise inconclusive.
    The reported integral includes a tail estimate.
    """
    sym = phi_gauge if isinstance(phi_gauge, RadialSymbol) else RadialSymbol(
        func=phi_gauge, name="gauge")
    x, w = gauss_legendre(grid_density)

    def hat(rho):
        return abs(hankel_transform(sym, d, float(rho), support=sym.support_radius,
                                    breakpoints=sym.breakpoints).value)

    weight = (lambda rho: 2 * math.pi * rho) if d == 3 else (lambda rho: 2.0)
    shells = []
    for k in range(-1, levels):
        lo, hi = 2.0 ** (-k - 1), 2.0 ** (-k)
        rho = lo + 0.5 * (hi - lo) * (x + 1.0)
        vals = np.array([hat(p) * weight(p) for p in rho])
        shells.append(0.5 * (hi - lo) * float(np.sum(w * vals)))
    c = np.array(shells)
    total = float(np.sum(c))
    tail_k = np.arange(levels // 2, levels + 1)
    tail_c = c[tail_k]
    if np.all(tail_c > 0):
        slope = np.polyfit(np.log(tail_k.astype(float)), np.log(tail_c), 1)[0]
        ratios = tail_c[1:] / tail_c[:-1]
    else:
        slope, ratios = -np.inf, np.zeros(1)
    p = float(-slope)
    geometric = bool(np.all(ratios <= 0.9))
    if geometric:
        q = float(np.max(ratios))
        tail = c[-1] * q / (1 - q)
        return ArgfResult(total + tail, True, False, p, shells)
    kmax = float(levels)
    if p > 1.2:
        tail = c[-1] * kmax / (p - 1.0)
        return ArgfResult(total + tail, True, False, p, shells)
    if p < 0.8:
        return ArgfResult(math.inf, False, False, p, shells)
    return ArgfResult(total, False, True, p, shells)


# ---------------------------------------------------------------------------
# compactness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompactnessReport:
    singular_values: np.ndarray
    multiplicities: np.ndarray
    schatten_traces: dict
    decay_exponent: float
    superpolynomial: bool

    def to_dict(self) -> dict:
        return {"schatten_traces": {str(k): v for k, v in self.schatten_traces.items()},
                "decay_exponent": self.decay_exponent, "superpolynomial": self.superpolynomial,
                "singular_values": [float(s) for s in self.singular_values]}


def compactness_probe(a: RadialSymbol, d: int, nmax: int,
                      seq: Optional[SpectralSequence] = None) -> CompactnessReport:
    """Singular values ``|gamma_a(n)|`` (with multiplicity) and Schatten sums.

    ``decay_exponent`` is minus the log-log slope of ``|gamma|`` over
    ``n in [8, nmax]``; ``superpolynomial`` records that the local slope
    keeps steepening (it is more negative on the upper half of the range).
    """
    if not math.isfinite(a.support_radius) and not a.is_zero:
        raise ValueError("compactness_probe: compact support required")
    if seq is None:
        seq = gamma_sequence(a, d, nmax)
    s = np.abs(seq.gammas)
    mult = np.array([multiplicity(d, n) for n in range(nmax + 1)])
    traces = {p: float(np.sum(mult * s ** p)) for p in (0.5, 1.0, 2.0)}
    if a.is_zero or not np.any(s > 0):
        return CompactnessReport(s, mult, traces, math.inf, True)
    n = np.arange(nmax + 1)
    lo = min(8, nmax // 2)
    mid = (lo + nmax) // 2
    pos = s > 0

    def slope(i, j):
        sel = (n >= i) & (n <= j) & pos
        if sel.sum() < 2:
            return -math.inf
        return float(np.polyfit(np.log(n[sel]), np.log(s[sel]), 1)[0])

    whole, first, second = slope(lo, nmax), slope(lo, mid), slope(mid, nmax)
    return CompactnessReport(s, mult, traces, -whole, bool(second < first - 1.0))

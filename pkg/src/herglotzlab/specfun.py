"""Special functions used throughout the package.

Everything here is deterministic, pure and vectorised over the argument
``x``.  The Bessel routines are the workhorse of the whole library: the
spectral sequences, the basis of Herglotz waves and the Hankel transforms
all reduce to evaluations of :math:`J_\\nu` on long arrays, usually for a
whole ladder of orders :math:`\\nu_0, \\nu_0 + 1, \\dots` at once.

Regimes used by :func:`bessel_j_ladder`
--------------------------------------
* ``x <= SERIES_MAX``: ascending power series, one per order.
* ``x >= ASYMPTOTIC_MIN`` and ``x`` well above the highest order: Hankel
  asymptotic expansion for the two lowest orders followed by forward
  recurrence (stable while the order stays below ``x``).
* otherwise: Miller's backward recurrence, normalised with the Neumann sum
  :math:`(x/2)^{\\nu_0} = \\sum_k (\\nu_0+2k)\\Gamma(\\nu_0+k)/k!\\,J_{\\nu_0+2k}(x)`
  or, when ``x`` is large, by least squares against the asymptotic values
  of the two lowest orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HarmonicIndex",
    "bessel_j",
    "bessel_j_ladder",
    "bessel_j_complex_ladder",
    "bessel_modulus_sq",
    "gamma_fn",
    "gammaln",
    "gauss_legendre",
    "harmonic_indices",
    "harmonic_matrix",
    "multiplicity",
    "n_harmonics",
    "sph_harmonic",
]

SERIES_MAX = 4.0
ASYMPTOTIC_MIN = 25.0
# forward recurrence is used only when x > FORWARD_RATIO * (highest order) + FORWARD_PAD
FORWARD_RATIO = 1.1
FORWARD_PAD = 10.0

_RESCALE_AT = 1e200
_RESCALE_BY = 1e-200

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_log(x: np.ndarray) -> np.ndarray:
    # log Gamma(x) for x >= 0.5
    z = x - 1.0
    s = np.full_like(z, _LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        s = s + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (z + 0.5) * np.log(t) - t + np.log(s)


def gammaln(x):
    """Natural log of the Gamma function for ``x > 0``.

    Uses the Lanczos approximation (g=7, 9 terms) with the reflection
    formula below 1/2.  Relative accuracy is about 1e-15 on (0, 50].
    """
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise ValueError("gammaln: argument must be positive")
    small = xa < 0.5
    out = np.empty_like(xa)
    if np.any(~small):
        out[~small] = _lanczos_log(xa[~small])
    if np.any(small):
        xs = xa[small]
        # Gamma(x) Gamma(1-x) = pi / sin(pi x)
        out[small] = np.log(math.pi / np.sin(math.pi * xs)) - _lanczos_log(1.0 - xs)
    return out if out.ndim else float(out)


def gamma_fn(x):
    """Gamma function for ``x > 0``.

    Lanczos evaluation of ``log Gamma`` exponentiated; positive integers up
    to 23 are returned exactly as factorials.  Raises :class:`OverflowError`
    beyond the double range (x > 171.6).
    """
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise ValueError("gamma_fn: argument must be positive")
    if np.any(xa > 171.6):
        raise OverflowError("gamma_fn: result overflows double precision")
    flat = xa.ravel()
    out = np.exp(np.atleast_1d(gammaln(flat)))
    for i, v in enumerate(flat):
        if v == round(v) and v <= 23:
            out[i] = float(math.factorial(int(v) - 1))
    out = out.reshape(xa.shape)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Bessel functions of the first kind
# ---------------------------------------------------------------------------

def _hankel_pq(nu: float, x: np.ndarray, maxterms: int = 60):
    """Hankel's P and Q for order ``nu`` (x >= ~25)."""
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    done = np.zeros(x.shape, dtype=bool)
    last = np.full_like(x, np.inf)
    for k in range(1, maxterms):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        # asymptotic series: stop once terms start growing or are negligible
        done |= (mag > last) | (mag < 1e-17)
        if np.all(done):
            break
        t = np.where(done, 0.0, term)
        if k % 2 == 1:
            q += t * (1.0 if (k // 2) % 2 == 0 else -1.0)
        else:
            p += t * (1.0 if (k // 2) % 2 == 0 else -1.0)
        last = np.where(done, last, mag)
    return p, q


def _bessel_asymptotic(nu: float, x: np.ndarray) -> np.ndarray:
    p, q = _hankel_pq(nu, x)
    # chi = x - (nu/2 + 1/4) pi, expanded so the large argument is not shifted
    c = (0.5 * nu + 0.25) * math.pi
    cos_chi = np.cos(x) * math.cos(c) + np.sin(x) * math.sin(c)
    sin_chi = np.sin(x) * math.cos(c) - np.cos(x) * math.sin(c)
    return np.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def _series_ladder(nu0: float, nmax: int, x: np.ndarray) -> np.ndarray:
    orders = nu0 + np.arange(nmax + 1)
    xx = x[:, None]
    half = 0.5 * xx
    # log(x) - log 2 rather than log(x/2): x/2 underflows for subnormal x
    loghalf = np.log(xx) - math.log(2.0)
    logpref = (np.where(orders[None, :] == 0, 0.0, orders[None, :] * loghalf)
               - np.asarray(gammaln(orders + 1.0))[None, :])
    term = np.exp(logpref)
    total = term.copy()
    z = -half * half
    for k in range(1, 80):
        term = term * z / (k * (orders[None, :] + k))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _neumann_coefficients(nu0: float, kmax: int) -> np.ndarray:
    """c[k] multiplying J_{nu0+k} in (x/2)^nu0 = sum c[k] J_{nu0+k}; zero for odd k."""
    c = np.zeros(kmax + 1)
    if nu0 == 0.0:
        c[0] = 1.0
        c[2::2] = 2.0
        return c
    # g_m = Gamma(nu0+m)/m!, built in log space to stay finite for large m
    m = np.arange(kmax // 2 + 1)
    logg = np.asarray(gammaln(nu0 + m)) - np.asarray(gammaln(m + 1.0))
    c[0: 2 * len(m): 2] = (nu0 + 2 * m) * np.exp(logg)
    return c


def _miller_ladder(nu0: float, nmax: int, x: np.ndarray) -> np.ndarray:
    top = np.maximum(x, nu0 + nmax)
    start = np.ceil(top + 20.0 + 8.0 * np.cbrt(top)).astype(int)
    start += start % 2
    kmax = int(start.max())
    use_asym = x >= ASYMPTOTIC_MIN
    coef = _neumann_coefficients(nu0, kmax + 1)

    npts = x.size
    out = np.zeros((npts, nmax + 1))
    f_next = np.zeros(npts)
    f_cur = np.zeros(npts)
    norm = np.zeros(npts)
    for k in range(kmax, -1, -1):
        f_cur = np.where(start == k, 1e-30, f_cur)
        if k <= nmax:
            out[:, k] = f_cur
        if coef[k] != 0.0:
            norm += coef[k] * f_cur
        if k == 0:
            break
        f_prev = (2.0 * (nu0 + k) / x) * f_cur - f_next
        big = np.abs(f_prev) > _RESCALE_AT
        if np.any(big):
            f_prev[big] *= _RESCALE_BY
            f_cur[big] *= _RESCALE_BY
            norm[big] *= _RESCALE_BY
            if k <= nmax + 1:
                out[big, k:] *= _RESCALE_BY
        f_next, f_cur = f_cur, f_prev

    scale = np.empty(npts)
    small = ~use_asym
    if np.any(small):
        scale[small] = (0.5 * x[small]) ** nu0 / norm[small]
    if np.any(use_asym):
        xa = x[use_asym]
        j0 = _bessel_asymptotic(nu0, xa)
        j1 = _bessel_asymptotic(nu0 + 1.0, xa)
        f0 = out[use_asym, 0]
        if nmax >= 1:
            f1 = out[use_asym, 1]
        else:
            # order nu0+1 was not stored; recover it from the tail of the recurrence
            f1 = f_next[use_asym]
        m = np.maximum(np.abs(f0), np.abs(f1))
        g0, g1 = f0 / m, f1 / m
        scale[use_asym] = (j0 * g0 + j1 * g1) / (g0 * g0 + g1 * g1) / m
    return out * scale[:, None]


def _forward_ladder(nu0: float, nmax: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((x.size, nmax + 1))
    out[:, 0] = _bessel_asymptotic(nu0, x)
    if nmax >= 1:
        out[:, 1] = _bessel_asymptotic(nu0 + 1.0, x)
    for k in range(1, nmax):
        out[:, k + 1] = (2.0 * (nu0 + k) / x) * out[:, k] - out[:, k - 1]
    return out


def bessel_j_ladder(nu0: float, nmax: int, x) -> np.ndarray:
    """Return ``J_{nu0+k}(x)`` for ``k = 0..nmax``.

    Parameters
    ----------
    nu0 : float
        Lowest order, ``nu0 >= 0``.
    nmax : int
        Number of additional integer steps in the order.
    x : array_like
        Nonnegative finite arguments.

    Returns
    -------
    ndarray
        Shape ``np.shape(x) + (nmax + 1,)``.
    """
    if nu0 < 0 or nmax < 0:
        raise ValueError("bessel_j_ladder: order must be nonnegative")
    if nu0 >= 1.0:
        # the regimes below seed from order nu0 with expansions valid only for
        # small orders; start from the fractional part and drop the low rungs
        k0 = int(math.floor(nu0))
        return bessel_j_ladder(nu0 - k0, nmax + k0, x)[..., k0:]
    xa = np.asarray(x, dtype=float)
    shape = xa.shape
    xf = xa.ravel()
    if np.any(xf < 0) or np.any(~np.isfinite(xf)):
        raise ValueError("bessel_j_ladder: x must be finite and nonnegative")
    out = np.zeros((xf.size, nmax + 1))

    zero = xf == 0.0
    if np.any(zero) and nu0 == 0.0:
        out[zero, 0] = 1.0
    ser = (~zero) & (xf <= SERIES_MAX)
    fwd = (xf >= ASYMPTOTIC_MIN) & (xf > FORWARD_RATIO * (nu0 + nmax) + FORWARD_PAD)
    mil = ~(zero | ser | fwd)
    if np.any(ser):
        out[ser] = _series_ladder(nu0, nmax, xf[ser])
    if np.any(fwd):
        out[fwd] = _forward_ladder(nu0, nmax, xf[fwd])
    if np.any(mil):
        out[mil] = _miller_ladder(nu0, nmax, xf[mil])
    return out.reshape(shape + (nmax + 1,))


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for real ``nu, x >= 0``.

    Accurate to about 1e-13 relative to ``max(|J_nu(x)|, envelope)`` for
    ``x <= 50`` and ``nu <= 100``; see the module docstring for the regimes.

    Raises
    ------
    ValueError
        On negative or non-finite arguments.
    """
    nua = np.asarray(nu, dtype=float)
    xa = np.asarray(x, dtype=float)
    if np.any(nua < 0) or np.any(~np.isfinite(nua)):
        raise ValueError("bessel_j: order must be finite and nonnegative")
    if np.any(xa < 0) or np.any(~np.isfinite(xa)):
        raise ValueError("bessel_j: argument must be finite and nonnegative")
    nub, xb = np.broadcast_arrays(nua, xa)
    out = np.empty(xb.shape)
    for v in np.unique(nub):
        sel = nub == v
        n_int = int(math.floor(v))
        nu0 = v - n_int
        out[sel] = bessel_j_ladder(nu0, n_int, xb[sel])[..., n_int]
    if np.any(~np.isfinite(out)):
        raise OverflowError("bessel_j: non-finite result")
    return out if out.ndim else float(out)


def bessel_modulus_sq(nu: float, x) -> np.ndarray:
    """Asymptotic ``J_nu(x)^2 + Y_nu(x)^2`` for ``x`` large against ``nu``.

    ``nu`` and ``x`` broadcast against each other.

    Non-oscillatory; used to split the mean part off Bessel-squared tails.
    Accurate once ``x >= max(25, 2 nu)``.
    """
    xa, mu = np.broadcast_arrays(np.asarray(x, dtype=float),
                                 4.0 * np.asarray(nu, dtype=float) ** 2)
    xa = xa.astype(float)
    s = np.ones_like(xa)
    term = np.ones_like(xa)
    inv = 1.0 / (2.0 * xa) ** 2
    last = np.full_like(xa, np.inf)
    done = np.zeros(xa.shape, dtype=bool)
    for k in range(1, 200):
        term = term * (2 * k - 1) / (2 * k) * (mu - (2 * k - 1) ** 2) * inv
        mag = np.abs(term)
        done |= (mag > last) | (mag < 1e-17)
        if np.all(done):
            break
        s += np.where(done, 0.0, term)
        last = np.where(done, last, mag)
    return 2.0 / (math.pi * xa) * s


def bessel_j_complex_ladder(nu0: float, nmax: int, z) -> np.ndarray:
    """``J_{nu0+k}(z)^2`` for complex ``z`` by the ascending series.

    Returned squared so half-integer orders carry no branch ambiguity.
    Intended for moderate ``|z|`` (below ~40) on rotated integration rays.
    """
    za = np.asarray(z, dtype=complex).ravel()
    orders = nu0 + np.arange(nmax + 1)
    zz = za[:, None]
    half = 0.5 * zz
    with np.errstate(divide="ignore", invalid="ignore"):
        logh = np.log(half)
    w = -half * half
    term = np.ones((za.size, nmax + 1), dtype=complex) / np.exp(np.asarray(gammaln(orders + 1.0)))[None, :]
    total = term.copy()
    for k in range(1, 400):
        term = term * w / (k * (orders[None, :] + k))
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    with np.errstate(invalid="ignore", over="ignore"):
        pref = np.exp(2.0 * orders[None, :] * logh)
    out = pref * total * total
    zero = za == 0
    if np.any(zero):
        out[zero] = 0.0
        if nu0 == 0.0:
            out[zero, 0] = 1.0
    return out


# ---------------------------------------------------------------------------
# Gauss-Legendre
# ---------------------------------------------------------------------------

def gauss_legendre(n: int):
    """Gauss-Legendre nodes and weights on [-1, 1], ascending.

    Newton iteration on the three-term recurrence from Tricomi's initial
    guesses; vectorised over the nodes.
    """
    if not 1 <= n <= 4096:
        raise ValueError("gauss_legendre: need 1 <= n <= 4096")
    m = (n + 1) // 2
    k = np.arange(1, m + 1)
    theta = math.pi * (k - 0.25) / (n + 0.5)
    x = np.cos(theta) * (1.0 - (n - 1.0) / (8.0 * n ** 3))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        if n == 1:
            p0, p1 = np.zeros_like(x), x.copy()
        dp = n * (x * p1 - p0) / (x * x - 1.0) if n > 1 else np.ones_like(x)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    # final derivative at converged nodes
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    if n == 1:
        x = np.zeros(1)
        w = np.array([2.0])
    else:
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
    nodes = np.concatenate([-x, x[::-1][n % 2:]]) if n > 1 else x
    weights = np.concatenate([w, w[::-1][n % 2:]]) if n > 1 else w
    if n % 2 == 1 and n > 1:
        nodes[m - 1] = 0.0
    return nodes, weights


# ---------------------------------------------------------------------------
# Real spherical harmonics, d = 2 and 3
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HarmonicIndex:
    """Index (d, n, j) of the real harmonic ``Y_{n,j}`` on ``S^{d-1}``.

    ``j`` runs over ``1..N_{n,d}``.  For d=2, j=1 is the cosine and j=2 the
    sine.  For d=3, j=1 is the zonal harmonic, j=2m the ``cos(m phi)`` and
    j=2m+1 the ``sin(m phi)`` harmonic of order m.
    """

    d: int
    n: int
    j: int

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("only d = 2, 3 are supported")
        if self.n < 0 or not 1 <= self.j <= multiplicity(self.d, self.n):
            raise ValueError(f"harmonic index out of range: {self}")

    @property
    def flat(self) -> int:
        """Position in the dense coefficient vector."""
        if self.d == 2:
            return 0 if self.n == 0 else 2 * self.n - 2 + self.j
        return self.n * self.n + self.j - 1


def multiplicity(d: int, n: int) -> int:
    """Dimension ``N_{n,d}`` of degree-n spherical harmonics on ``S^{d-1}``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return 1
    return (2 * n + d - 2) * math.factorial(n + d - 3) // (math.factorial(n) * math.factorial(d - 2))


def n_harmonics(d: int, nmax: int) -> int:
    """Number of harmonics of degree ``<= nmax``."""
    return 2 * nmax + 1 if d == 2 else (nmax + 1) ** 2


def harmonic_indices(d: int, nmax: int) -> list[HarmonicIndex]:
    """All indices of degree ``<= nmax`` in dense-vector order."""
    return [HarmonicIndex(d, n, j) for n in range(nmax + 1)
            for j in range(1, multiplicity(d, n) + 1)]


def _normalized_legendre(nmax: int, ct: np.ndarray) -> np.ndarray:
    """Fully normalised associated Legendre functions, no Condon-Shortley phase.

    ``out[..., n, m]`` is ``sqrt((2n+1)/(4pi) (n-m)!/(n+m)!) P_n^m(ct)``
    times sqrt(2) for m > 0, so that with ``cos(m phi)``/``sin(m phi)`` the
    real harmonics are orthonormal on S^2.
    """
    st = np.sqrt(np.clip(1.0 - ct * ct, 0.0, None))
    out = np.zeros(ct.shape + (nmax + 1, nmax + 1))
    pmm = np.full(ct.shape, math.sqrt(1.0 / (4 * math.pi)))
    for m in range(nmax + 1):
        if m > 0:
            pmm = pmm * st * math.sqrt((2 * m + 1) / (2.0 * m))
        out[..., m, m] = pmm
        if m < nmax:
            out[..., m + 1, m] = math.sqrt(2 * m + 3) * ct * pmm
        for n in range(m + 2, nmax + 1):
            a = math.sqrt((4 * n * n - 1) / (n * n - m * m))
            b = math.sqrt(((n - 1) ** 2 - m * m) / (4 * (n - 1) ** 2 - 1))
            out[..., n, m] = a * (ct * out[..., n - 1, m] - b * out[..., n - 2, m])
    out[..., :, 1:] *= math.sqrt(2.0)
    return out


def harmonic_matrix(d: int, nmax: int, points) -> np.ndarray:
    """Values of all real harmonics of degree ``<= nmax`` at unit vectors.

    Returns an array of shape ``(npoints, n_harmonics(d, nmax))`` whose
    columns follow :func:`harmonic_indices`.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != d:
        raise ValueError("points have the wrong dimension")
    npts = pts.shape[0]
    out = np.empty((npts, n_harmonics(d, nmax)))
    if d == 2:
        th = np.arctan2(pts[:, 1], pts[:, 0])
        out[:, 0] = 1.0 / math.sqrt(2 * math.pi)
        for n in range(1, nmax + 1):
            out[:, 2 * n - 1] = np.cos(n * th) / math.sqrt(math.pi)
            out[:, 2 * n] = np.sin(n * th) / math.sqrt(math.pi)
        return out
    ct = np.clip(pts[:, 2], -1.0, 1.0)
    ph = np.arctan2(pts[:, 1], pts[:, 0])
    plm = _normalized_legendre(nmax, ct)
    for n in range(nmax + 1):
        base = n * n
        out[:, base] = plm[:, n, 0]
        for m in range(1, n + 1):
            out[:, base + 2 * m - 1] = plm[:, n, m] * np.cos(m * ph)
            out[:, base + 2 * m] = plm[:, n, m] * np.sin(m * ph)
    return out


def sph_harmonic(idx: HarmonicIndex, xi) -> float:
    """Value of ``Y_{n,j}`` at the unit vector ``xi``."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (idx.d,):
        raise ValueError("xi has the wrong dimension")
    if abs(np.linalg.norm(xi) - 1.0) > 1e-12:
        raise ValueError("xi must be a unit vector")
    return float(harmonic_matrix(idx.d, idx.n, xi[None, :])[0, idx.flat])

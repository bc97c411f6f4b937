"""Radial symbols ``a(r)`` and their metadata.

A :class:`RadialSymbol` carries, besides the evaluator, everything the
quadrature layer needs to pick a strategy: where the symbol is supported,
where it is not smooth, how it decays, whether a closed form for its
spectral sequence or its Fourier transform is known, and -- for some
oscillatory symbols -- an analytic continuation along a ray of the complex
plane on which the symbol decays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .specfun import bessel_j, gamma_fn

__all__ = [
    "Continuation",
    "DECAY_TAGS",
    "RadialSymbol",
    "exp_symbol",
    "ex44_symbol",
    "from_spec",
    "gauss_symbol",
    "indicator_symbol",
    "power_symbol",
    "zero_symbol",
]

DECAY_TAGS = ("compact", "L1", "power", "oscillatory", "other")


@dataclass(frozen=True)
class Continuation:
    """``a(r) = Im g(r)`` with ``g`` analytic and decaying along ``e^{i theta}``.

    ``on_ray(t)`` must return ``g(t e^{i theta})`` for real ``t >= 0``.
    """

    theta: float
    on_ray: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RadialSymbol:
    """Radial symbol ``a(|x|)`` with quadrature metadata.

    Attributes
    ----------
    func : callable
        Vectorised ``r -> a(r)`` for ``r > 0``.
    name : str
        Short human readable description (also used in reports).
    support_radius : float
        ``a`` vanishes for ``r > support_radius`` (``inf`` if not compact).
    decay_tag : str
        One of :data:`DECAY_TAGS`.
    decay_exponent : float or None
        ``lambda`` for power decay ``|a(r)| ~ r^lambda``.
    closed_form_tag : tuple or None
        ``('ex45', mu)``, ``('ex44',)`` or ``('indicator', rho)``.
    breakpoints : tuple of float
        Radii where ``a`` is not smooth.
    continuation : Continuation or None
        Complex-ray representation for oscillatory symbols.
    fourier : callable or None
        Closed-form radial Fourier transform ``(rho, d) -> a_hat(rho)``.
    nonnegative : bool
        Whether ``a >= 0`` is known.
    """

    func: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"
    support_radius: float = math.inf
    decay_tag: str = "other"
    decay_exponent: Optional[float] = None
    closed_form_tag: Optional[tuple] = None
    breakpoints: tuple = ()
    continuation: Optional[Continuation] = None
    fourier: Optional[Callable] = None
    nonnegative: bool = False
    is_zero: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.decay_tag not in DECAY_TAGS:
            raise ValueError(f"unknown decay tag {self.decay_tag!r}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.asarray(self.func(r), dtype=float)
        if math.isfinite(self.support_radius):
            out = np.where(r <= self.support_radius, out, 0.0)
        return out

    # algebra ------------------------------------------------------------
    def scaled(self, alpha: float) -> "RadialSymbol":
        """``alpha * a`` with metadata carried over."""
        f = self.func
        four = self.fourier
        cont = self.continuation
        return replace(
            self,
            func=lambda r: alpha * f(r),
            name=f"{alpha:g}*({self.name})",
            fourier=None if four is None else (lambda rho, d: alpha * four(rho, d)),
            continuation=None if cont is None else Continuation(
                cont.theta, lambda t: alpha * cont.on_ray(t)),
            closed_form_tag=None,
            nonnegative=self.nonnegative and alpha >= 0,
            is_zero=self.is_zero or alpha == 0,
        )

    def __add__(self, other: "RadialSymbol") -> "RadialSymbol":
        f, g = self.func, other.func
        sf, so = self.support_radius, other.support_radius

        def h(r):
            r = np.asarray(r, dtype=float)
            a = np.where(r <= sf, f(r), 0.0) if math.isfinite(sf) else f(r)
            b = np.where(r <= so, g(r), 0.0) if math.isfinite(so) else g(r)
            return a + b

        four = None
        if self.fourier is not None and other.fourier is not None:
            four = lambda rho, d: self.fourier(rho, d) + other.fourier(rho, d)
        rank = {"compact": 0, "L1": 1, "power": 2, "other": 3, "oscillatory": 4}
        tag = max(self.decay_tag, other.decay_tag, key=rank.get)
        bps = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)
                           | ({sf} if math.isfinite(sf) else set())
                           | ({so} if math.isfinite(so) else set())))
        exps = [e for e in (self.decay_exponent, other.decay_exponent) if e is not None]
        return RadialSymbol(
            func=h, name=f"({self.name})+({other.name})",
            support_radius=max(sf, so), decay_tag=tag,
            decay_exponent=max(exps) if exps else None,
            breakpoints=bps, fourier=four,
            nonnegative=self.nonnegative and other.nonnegative,
            is_zero=self.is_zero and other.is_zero,
        )

    def l1_norm(self, d: int) -> float:
        """``||a||_{L1(R^d)}`` (numerical unless trivially known)."""
        from .quad import TailPolicy, integrate_semiaxis
        area = 2 * math.pi if d == 2 else 4 * math.pi
        if self.is_zero:
            return 0.0
        g = lambda r: np.abs(self(r)) * r ** (d - 1)
        if math.isfinite(self.support_radius):
            res = integrate_semiaxis(g, support=self.support_radius,
                                     breakpoints=self.breakpoints)
        else:
            res = integrate_semiaxis(g, TailPolicy(acceleration="sequence-extrapolation"),
                                     breakpoints=self.breakpoints)
        return area * float(res.value)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def zero_symbol() -> RadialSymbol:
    """The symbol ``a = 0``."""
    return RadialSymbol(func=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                        name="zero", support_radius=0.0, decay_tag="compact",
                        fourier=lambda rho, d: np.zeros_like(np.asarray(rho, dtype=float)),
                        nonnegative=True, is_zero=True)


def power_symbol(mu: float) -> RadialSymbol:
    """``a(r) = r^{-mu}``.

    The radial Fourier transform in ``R^d`` (for ``0 < mu < d``) is
    ``C rho^{mu-d}`` with ``C = 2^{d/2-mu} Gamma((d-mu)/2) / Gamma(mu/2)``.
    """
    mu = float(mu)

    def four(rho, d):
        if not 0 < mu < d:
            raise ValueError("power symbol: Fourier transform needs 0 < mu < d")
        c = 2.0 ** (d / 2 - mu) * gamma_fn((d - mu) / 2) / gamma_fn(mu / 2)
        return c * np.asarray(rho, dtype=float) ** (mu - d)

    return RadialSymbol(func=lambda r: np.asarray(r, dtype=float) ** (-mu),
                        name=f"r^-{mu:g}", decay_tag="power", decay_exponent=-mu,
                        closed_form_tag=("ex45", mu), fourier=four, nonnegative=True)


def gauss_symbol(s: float = 1.0) -> RadialSymbol:
    """``a(r) = exp(-r^2 / (2 s^2))``; transform ``s^d exp(-s^2 rho^2 / 2)``."""
    s = float(s)
    return RadialSymbol(
        func=lambda r: np.exp(-0.5 * (np.asarray(r, dtype=float) / s) ** 2),
        name=f"gauss(s={s:g})", decay_tag="L1",
        fourier=lambda rho, d: s ** d * np.exp(-0.5 * (s * np.asarray(rho, dtype=float)) ** 2),
        nonnegative=True, meta={"s": s})


def exp_symbol() -> RadialSymbol:
    """``a(r) = exp(-r)``; transform ``2^{d/2} Gamma((d+1)/2)/sqrt(pi) (1+rho^2)^{-(d+1)/2}``."""
    def four(rho, d):
        c = 2.0 ** (d / 2) * gamma_fn((d + 1) / 2) / math.sqrt(math.pi)
        return c * (1.0 + np.asarray(rho, dtype=float) ** 2) ** (-(d + 1) / 2)

    return RadialSymbol(func=lambda r: np.exp(-np.asarray(r, dtype=float)), name="exp",
                        decay_tag="L1", fourier=four, nonnegative=True)


def indicator_symbol(rho0: float = 1.0) -> RadialSymbol:
    """``a = indicator of [0, rho0]``; transform ``rho0^{d/2} J_{d/2}(rho rho0)/rho^{d/2}``."""
    rho0 = float(rho0)

    def four(rho, d):
        rho = np.asarray(rho, dtype=float)
        safe = np.where(rho > 0, rho, 1.0)
        val = rho0 ** (d / 2) * bessel_j(d / 2, safe * rho0) / safe ** (d / 2)
        lim = rho0 ** d / (2.0 ** (d / 2) * gamma_fn(d / 2 + 1))
        return np.where(rho > 0, val, lim)

    return RadialSymbol(func=lambda r: np.ones_like(np.asarray(r, dtype=float)),
                        name=f"indicator(rho={rho0:g})", support_radius=rho0,
                        decay_tag="compact", closed_form_tag=("indicator", rho0),
                        breakpoints=(rho0,), fourier=four, nonnegative=True)


def ex44_symbol() -> RadialSymbol:
    """``a(r) = sin(r^2/4)``, oscillatory and not integrable.

    ``a = Im exp(i z^2/4)`` and on the ray ``z = t e^{i pi/4}`` the
    exponential becomes ``exp(-t^2/4)``.
    """
    return RadialSymbol(
        func=lambda r: np.sin(0.25 * np.asarray(r, dtype=float) ** 2),
        name="sin(r^2/4)", decay_tag="oscillatory", closed_form_tag=("ex44",),
        continuation=Continuation(math.pi / 4,
                                  lambda t: np.exp(-0.25 * np.asarray(t, dtype=float) ** 2)
                                  .astype(complex)))


# ---------------------------------------------------------------------------
# flat DSL: "power:mu=2", "gauss:s=1", "indicator:rho=1", "exp", "ex44"
# ---------------------------------------------------------------------------

_CONSTRUCTORS = {
    "power": (power_symbol, {"mu"}),
    "gauss": (gauss_symbol, {"s"}),
    "indicator": (indicator_symbol, {"rho"}),
    "exp": (exp_symbol, set()),
    "ex44": (ex44_symbol, set()),
    "zero": (zero_symbol, set()),
}


def parse_spec(spec: str) -> tuple[str, dict]:
    """Split ``"kind:key=val,key=val"`` into the kind and a float dict."""
    kind, _, rest = spec.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"malformed symbol parameter {item!r}")
            params[key.strip()] = float(val)
    return kind.strip(), params


def from_spec(spec: str) -> RadialSymbol:
    """Build a radial symbol from the flat DSL; unknown kinds or keys raise."""
    kind, params = parse_spec(spec)
    if kind not in _CONSTRUCTORS:
        raise ValueError(f"unknown radial symbol kind {kind!r}")
    ctor, keys = _CONSTRUCTORS[kind]
    unknown = set(params) - keys
    if unknown:
        raise ValueError(f"unknown keys for {kind}: {sorted(unknown)}")
    if kind == "power":
        return ctor(params.get("mu", 2.0))
    if kind == "gauss":
        return ctor(params.get("s", 1.0))
    if kind == "indicator":
        return ctor(params.get("rho", 1.0))
    return ctor()

"""Functions on the unit sphere stored as sparse harmonic expansions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .specfun import HarmonicIndex, harmonic_indices, harmonic_matrix, n_harmonics

__all__ = ["SphereFunction"]


@dataclass(frozen=True)
class SphereFunction:
    """Finite real-harmonic expansion ``phi = sum c_{n,j} Y_{n,j}`` on ``S^{d-1}``.

    Coefficients may be complex.  ``evaluator`` optionally overrides pointwise
    evaluation (for functions that are not band limited, e.g. indicators);
    the coefficients are then its projection.
    """

    d: int
    coeffs: Mapping[HarmonicIndex, complex] = field(default_factory=dict)
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("SphereFunction: d must be 2 or 3")
        for idx in self.coeffs:
            if idx.d != self.d:
                raise ValueError("SphereFunction: coefficient index of wrong dimension")

    # constructors --------------------------------------------------------
    @classmethod
    def zero(cls, d: int) -> "SphereFunction":
        return cls(d, {})

    @classmethod
    def basis(cls, d: int, n: int, j: int = 1, coeff: complex = 1.0) -> "SphereFunction":
        """The single harmonic ``coeff * Y_{n,j}``."""
        return cls(d, {HarmonicIndex(d, n, j): complex(coeff)})

    @classmethod
    def from_dense(cls, d: int, vec, tol: float = 0.0) -> "SphereFunction":
        """Inverse of :meth:`dense`; entries with ``|c| <= tol`` are dropped."""
        vec = np.asarray(vec)
        nmax = 0
        while n_harmonics(d, nmax) < vec.size:
            nmax += 1
        if n_harmonics(d, nmax) != vec.size:
            raise ValueError("dense vector length does not match a full degree range")
        idxs = harmonic_indices(d, nmax)
        return cls(d, {i: complex(c) for i, c in zip(idxs, vec) if abs(c) > tol})

    @classmethod
    def project(cls, d: int, nmax: int, values, grid, tol: float = 0.0) -> "SphereFunction":
        """Harmonic coefficients (degree <= nmax) of samples on a sphere grid."""
        H = harmonic_matrix(d, nmax, grid.points)
        vec = H.T @ (np.asarray(values) * grid.weights)
        return cls.from_dense(d, vec, tol)

    # queries -------------------------------------------------------------
    @property
    def max_degree(self) -> int:
        return max((i.n for i, c in self.coeffs.items() if c != 0), default=0)

    def norm(self) -> float:
        """``||phi||_{L2(S)}`` (orthonormal basis, so the coefficient 2-norm)."""
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values())))

    def dense(self, nmax: Optional[int] = None) -> np.ndarray:
        """Dense coefficient vector of length ``n_harmonics(d, nmax)``."""
        if nmax is None:
            nmax = self.max_degree
        vec = np.zeros(n_harmonics(self.d, nmax), dtype=complex)
        for idx, c in self.coeffs.items():
            if idx.n > nmax:
                raise ValueError(f"coefficient of degree {idx.n} exceeds nmax={nmax}")
            vec[idx.flat] = c
        return vec

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.evaluator is not None:
            return np.asarray(self.evaluator(pts), dtype=complex)
        if not self.coeffs:
            return np.zeros(pts.shape[0], dtype=complex)
        nmax = self.max_degree
        return harmonic_matrix(self.d, nmax, pts) @ self.dense(nmax)

    # algebra -------------------------------------------------------------
    def __add__(self, other: "SphereFunction") -> "SphereFunction":
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return SphereFunction(self.d, out)

    def __sub__(self, other: "SphereFunction") -> "SphereFunction":
        return self + other.scale(-1.0)

    def scale(self, alpha: complex) -> "SphereFunction":
        return SphereFunction(self.d, {k: alpha * v for k, v in self.coeffs.items()})

    def inner(self, other: "SphereFunction") -> complex:
        """``<self, other>`` linear in the first slot, conjugate on the second."""
        return complex(sum(c * np.conj(other.coeffs.get(k, 0.0)) for k, c in self.coeffs.items()))

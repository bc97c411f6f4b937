"""One operator, three matrices.

The Toeplitz operator of a(r) = exp(-r) on the circle (d=2) is computed three
ways: as the diagonal of gamma(n), as a Nystrom matrix on 256 quadrature nodes
(kernel a_hat(|eta - xi|)), and from the Fourier coefficients of the circle
convolution kernel.  The three spectra must coincide.
"""

from __future__ import annotations

import numpy as np

from herglotzlab.quad import sphere_grid
from herglotzlab.radial_toeplitz import gamma_sequence
from herglotzlab.specfun import multiplicity
from herglotzlab.sphere_op import build_nodal, circle_eigs, eigen_hermitian, transform_of
from herglotzlab.symbols import exp_symbol


def spread(values, d):
    out = np.concatenate([np.full(multiplicity(d, n), v) for n, v in enumerate(values)])
    return out[np.argsort(-np.abs(out), kind="stable")]


def main() -> None:
    a = exp_symbol()
    T = transform_of(a, 2)
    diag = spread(gamma_sequence(a, 2, 32).gammas, 2)[:20]
    circ = spread(circle_eigs(T, 32), 2)[:20]
    nodal = eigen_hermitian(build_nodal(T, sphere_grid(2, 256))).values[:20]
    print(" k   diagonal            circle              nodal")
    for k in range(0, 20, 3):
        print(f"{k:2d}  {diag[k]:.15f}  {circ[k]:.15f}  {nodal[k]:.15f}")
    print(f"max relative gap diag/nodal: {np.max(np.abs(diag - nodal) / diag):.1e}")
    print(f"largest argument |eta - xi| seen by the kernel: {T.reach.max_arg:.6f} (<= 2)")


if __name__ == "__main__":
    main()

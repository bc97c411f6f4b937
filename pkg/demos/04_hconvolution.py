"""Multiplication on the sphere side, convolution on the field side.

Multiplying sphere densities by a bounded function a gives a commutative
algebra of Toeplitz operators.  On the field side the product of densities
becomes the h-convolution, a radially averaged convolution over growing balls.
This demo checks the algebra on matrices and computes u *_h v by an explicit
ladder of ball radii, comparing with the product of the densities.
"""

from __future__ import annotations

from herglotzlab.hconv import algebra_checks, hconvolve, sphere_symbol, verify_factorization
from herglotzlab.herglotz import HerglotzField
from herglotzlab.quad import sphere_grid
from herglotzlab.spherefn import SphereFunction


def main() -> None:
    rep = algebra_checks(sphere_symbol("cos"), sphere_symbol("indicator"))
    print(f"nodal commutator {rep.nodal_commutator:.1e}, product rule {rep.nodal_product_error:.1e}")
    for n, v in rep.norm_ladder.items():
        print(f"  ||T_cos|| at Nmax={n:2d}: {v:.6f}  (sup|cos| = 1)")

    u = HerglotzField(SphereFunction.basis(2, 1, 1))
    v = HerglotzField(SphereFunction.basis(2, 2, 2))
    conv = hconvolve(u, v, (200.0, 400.0))
    g = sphere_grid(2, 32)
    target = SphereFunction.project(2, 3, u.source(g.points) * v.source(g.points), g)
    print(f"u *_h v via ladder (200, 400): extrapolation residual {conv.residual:.1e}, "
          f"error vs product of densities {(conv.density - target).norm():.1e}")

    f = verify_factorization(HerglotzField(SphereFunction.basis(2, 0)),
                             HerglotzField(SphereFunction.basis(2, 0)), (100.0, 200.0, 400.0))
    for R, r in zip(f.radii, f.residuals):
        print(f"  factorization residual at R={R:5.0f}: {r:.2e}")
    print(f"  ratios under doubling: {[round(x, 3) for x in f.ratios]}")


if __name__ == "__main__":
    main()

"""How a Herglotz wave looks from far away.

The field u = I phi has B*-norm equal to ||phi||: ball averages of |u|^2
converge to ||phi||^2 like 1/R.  Along rays u is a pair of spherical waves
whose amplitudes are phi(x/|x|) and phi(-x/|x|); the remainder decays one
order faster, which the dyadic-shell residual makes visible.
"""

from __future__ import annotations

from herglotzlab.herglotz import far_field_residual, isometry_deviation
from herglotzlab.spherefn import SphereFunction


def main() -> None:
    phi = SphereFunction.basis(2, 2, 1)
    print("isometry deviation |avg_R |u|^2 - ||phi||^2| (d=2, n=2):")
    for R in (125.0, 250.0, 500.0, 1000.0):
        print(f"  R={R:6.0f}: {isometry_deviation(phi, R):.2e}")
    print("  (an oscillating term makes single radii non-monotone; the trend is 1/R)")
    for d in (2, 3):
        phi = SphereFunction.basis(d, 1, 1)
        vals = [far_field_residual(phi, R) for R in (50.0, 100.0, 200.0, 400.0)]
        print(f"far-field shell residual, d={d}, n=1: "
              + ", ".join(f"{v:.2e}" for v in vals))


if __name__ == "__main__":
    main()

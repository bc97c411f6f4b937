"""A nonzero symbol with a zero operator.

Only the values of a_hat on the ball |zeta| <= 2 enter the operator.  Removing
them with a smooth window leaves a "degenerate part" a_deg whose Fourier
transform vanishes on that ball: a_deg is a perfectly good nonzero function,
yet every matrix element of its Toeplitz operator is zero.
"""

from __future__ import annotations

from herglotzlab.herglotz import HerglotzField
from herglotzlab.spherefn import SphereFunction
from herglotzlab.symbol_lab import CutoffWindow, degenerate_part, form_quadrature
from herglotzlab.symbols import gauss_symbol


def main() -> None:
    a = gauss_symbol(1.0)
    deg = degenerate_part(a, CutoffWindow(3.0), 2)
    l1 = a.l1_norm(2)
    print(f"a(r) = exp(-r^2/2), ||a||_1 = {l1:.6f}")
    print(f"a_deg(0) = {float(deg(0.0)):.6f}, a_deg(1.5) = {float(deg(1.5)):.6f}  (not zero)")
    print(" n  m   |F_deg(e_n, e_m)|/||a||_1   |F_a(e_n, e_m)|/||a||_1")
    for n in range(3):
        for m in range(3):
            u = HerglotzField(SphereFunction.basis(2, n, 1))
            v = HerglotzField(SphereFunction.basis(2, m, 1))
            fd = form_quadrature(deg, u, v, 60.0).value
            fa = form_quadrature(a, u, v, 60.0).value
            print(f" {n}  {m}   {abs(fd) / l1:.2e}                  {abs(fa) / l1:.2e}")


if __name__ == "__main__":
    main()

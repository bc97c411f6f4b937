"""herglotzlab: Toeplitz operators on Herglotz wave-function spaces.

Modules
-------
specfun          Bessel functions, Gamma, Gauss-Legendre, real spherical harmonics.
quad             Oscillatory semi-axis quadrature, sphere and ball grids.
symbols          Radial symbols and the symbol DSL.
spherefn         Functions on the sphere as harmonic expansions.
herglotz         Herglotz fields, the adjoint, reproducing kernel, isometry, far field.
radial_toeplitz  Spectral sequences of radial symbols.
sphere_op        Sphere-side operators, nodal/harmonic matrices, Jacobi eigensolver.
symbol_lab       Degenerate symbols, form quadrature, boundedness and growth checks.
hconv            Multiplication-type operators and the h-convolution.
cli              ``herglotz-lab`` command line.
"""

__version__ = "0.1.0"

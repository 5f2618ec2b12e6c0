"""Orthogonal structure on double cones and hyperboloids.

Bases, reproducing kernels (by summation, addition-formula integrals, and
closed forms), Fourier orthogonal series with a convolution structure, and a
registry of the associated second-order differential operators.
"""

__version__ = "0.1.0"

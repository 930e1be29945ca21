"""gammapoly: exact and arbitrary-precision tools around sinc-kernel Hankel
determinants.

Subpackages:
  exactpoly  exact-rational piecewise polynomials and the gamma_k family
  hankel     high-precision determinant D_k(t), Painleve V / Toda residuals
  toda       exact log-series coefficients of D_k and the Gaussian centre law
  gammaft    numeric Fourier pipeline: I_k(u), gamma values, table recovery
  aliquot    semicircle-convolution integrals I(d), continued fractions,
             GL2 local factors
  divisor    divisor-sum sieves, residue main terms, variance experiments
  cli        command-line front end
"""

__version__ = "0.1.0"

"""Exact symbolic workbench for quantized nilradicals of parabolic
subalgebras of sl(n), quantum matrix algebras and their coinvariants.

All coefficient arithmetic is exact, over the field of rational functions
in q with rational coefficients.  Every algebraic identity exposed here is
checked against an independent brute-force oracle in the test suite.
"""

__version__ = "0.1.0"

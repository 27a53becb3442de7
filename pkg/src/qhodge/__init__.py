"""Exact checks relating quantum potentials on graded Frobenius algebras
to the asymptotic data of polarized variations of Hodge structure."""

__version__ = "0.1.0"

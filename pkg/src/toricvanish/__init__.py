"""Exact toric geometry engine: fans, divisors, the divisor-directed minimal
model program, and combinatorial sheaf cohomology over the rationals and over
prime fields, with a verification suite for the vanishing statements."""

__version__ = "0.1.0"

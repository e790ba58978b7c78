"""Counting binary overlap-free words and bounding their growth exponents.

``u_n`` is computed exactly from a linear recurrence on integer 30-vectors,
and the exponents governing its growth are bounded through spectral
quantities of a pair of 20x20 nonnegative matrices:

* ``alpha`` (slowest growth) via the lower spectral radius, :mod:`.lsr`
* ``beta`` (fastest growth) via the joint spectral radius, :mod:`.jsr`
* ``sigma`` (growth for almost all ``n``) via the Lyapunov exponent, :mod:`.lyapunov`
"""

__version__ = "0.1.0"

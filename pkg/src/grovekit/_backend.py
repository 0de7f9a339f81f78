"""Rational arithmetic backend for the dense kernels.

The kernels in :mod:`grovekit.exact` convert their inputs to the backend's
rational type, run the elimination there, and convert back to
:class:`fractions.Fraction`.  gmpy2 (GMP) is used when importable; the pure
Python ``fractions`` module is the fallback.  Set ``GROVEKIT_BACKEND=python``
to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction

_forced = os.environ.get("GROVEKIT_BACKEND", "").lower()

try:
    if _forced == "python":
        raise ImportError
    import gmpy2

    mpq = gmpy2.mpq
    mpz = gmpy2.mpz
    NAME = "gmpy2"
except ImportError:  # pragma: no cover - depends on environment
    gmpy2 = None
    mpq = Fraction
    mpz = int
    NAME = "python"


def use(name: str) -> None:
    """Switch backend at runtime ("gmpy2" or "python"); used by the benchmark."""
    global mpq, mpz, NAME
    if name == "python":
        mpq, mpz, NAME = Fraction, int, "python"
    elif name == "gmpy2":
        if gmpy2 is None:
            raise ImportError("gmpy2 is not installed")
        mpq, mpz, NAME = gmpy2.mpq, gmpy2.mpz, "gmpy2"
    else:
        raise ValueError(f"unknown backend {name!r}")


def to_q(x):
    if isinstance(x, int):
        return mpq(x)
    return mpq(x.numerator, x.denominator)


def from_q(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))

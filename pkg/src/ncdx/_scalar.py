"""Exact rational scalars.

The compiled ``gmpy2.mpq`` type is used when it is importable; otherwise the
pure-Python :class:`fractions.Fraction` is used.  Set ``NCDX_SCALAR=python``
to force the fallback (the benchmark script does this to compare the two).
"""

import os
from fractions import Fraction

BACKEND = "python"
Rat = Fraction

if os.environ.get("NCDX_SCALAR", "").strip().lower() != "python":
    try:
        from gmpy2 import mpq as Rat  # noqa: F811
        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        pass

RAT_TYPES = (int, Fraction, type(Rat(0)))


def Q(value, den=None):
    """Coerce ``value`` (int, rational, or a ``"p/q"`` string) to a Rat."""
    if den is not None:
        return Rat(int(value), int(den))
    if isinstance(value, str):
        return Rat(Fraction(value.strip()))
    if isinstance(value, Fraction) and Rat is not Fraction:
        return Rat(value.numerator, value.denominator)
    return Rat(value)


def rat_text(r):
    r = Q(r)
    if r.denominator == 1:
        return str(int(r.numerator))
    return "%d/%d" % (int(r.numerator), int(r.denominator))

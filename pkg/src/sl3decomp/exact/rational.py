"""Exact rational scalars.

``fractions.Fraction`` already keeps values in lowest terms with a positive
denominator, so it is the scalar type used throughout the package.
"""
from fractions import Fraction
from numbers import Integral

Rational = Fraction


def rat(x):
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: nothing in this package is allowed to round.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_str(q):
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"

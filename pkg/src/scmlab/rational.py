"""Text form for exact probabilities: always "num/den", even for integers."""

from fractions import Fraction

from .errors import OracleFormatError

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def frac_str(x: Fraction) -> str:
    """Render in lowest terms with an explicit denominator, e.g. "1/1"."""
    return f"{x.numerator}/{x.denominator}"


def frac_parse(text: str) -> Fraction:
    """Parse "num/den"; reject anything not already in lowest terms."""
    num_s, sep, den_s = text.partition("/")
    if not sep or not num_s.isdigit() or not den_s.isdigit():
        raise OracleFormatError(f"malformed fraction {text!r}")
    num, den = int(num_s), int(den_s)
    if den == 0:
        raise OracleFormatError(f"zero denominator in {text!r}")
    value = Fraction(num, den)
    if (value.numerator, value.denominator) != (num, den):
        raise OracleFormatError(f"fraction {text!r} is not in lowest terms")
    return value

"""Exact arithmetic in Q(q) with the valuation at q=0.

RatFunc values are quotients of integer polynomials kept in a normal
form: coprime numerator and denominator, denominator with a positive
lowest-degree coefficient, zero stored as 0/1. Equal values therefore
have identical normal forms and compare structurally.

The ring A of functions regular at q=0 is the set of RatFunc with
valuation >= 0; its units have valuation exactly 0.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Union

from sympy import fraction, together
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

POLY_RING, _Q = ring("q", ZZ)
_ONE = POLY_RING.one
_ZERO = POLY_RING.zero

_PARSE_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class Ord(enum.Enum):
    """Valuation of the zero element."""

    INFINITY = "+inf"

    def __str__(self) -> str:
        return self.value


ORD_INFINITY = Ord.INFINITY


def _trailing_degree(p: PolyElement) -> int:
    return min(m[0] for m in p.itermonoms())


def _trailing_coeff(p: PolyElement) -> int:
    return p[(_trailing_degree(p),)]


def _format_poly(p: PolyElement) -> str:
    if not p:
        return "0"
    parts = []
    for (k,), c in sorted(p.terms(), key=lambda t: -t[0][0]):
        if k == 0:
            term = str(c)
        else:
            power = "q" if k == 1 else f"q^{k}"
            if c == 1:
                term = power
            elif c == -1:
                term = f"-{power}"
            else:
                term = f"{c}*{power}"
        if not parts:
            parts.append(term)
        elif term.startswith("-"):
            parts.append(f"- {term[1:]}")
        else:
            parts.append(f"+ {term}")
    return " ".join(parts)


@dataclass(frozen=True, eq=False)
class RatFunc:
    """An element of Q(q) in normal form.

    Attributes:
        num: Numerator, an element of ZZ[q].
        den: Denominator, a nonzero element of ZZ[q].
    """

    num: PolyElement
    den: PolyElement

    def __post_init__(self) -> None:
        num, den = self.num, self.den
        if not den:
            raise ZeroDivisionError("RatFunc with zero denominator")
        if not num:
            object.__setattr__(self, "num", _ZERO)
            object.__setattr__(self, "den", _ONE)
            return
        _, num, den = num.cofactors(den)
        if _trailing_coeff(den) < 0:
            num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_int(cls, value: Union[int, Fraction]) -> "RatFunc":
        """The constant rational function with the given value."""
        value = Fraction(value)
        return cls(POLY_RING(value.numerator), POLY_RING(value.denominator))

    @classmethod
    def q_power(cls, k: int) -> "RatFunc":
        """q^k for any integer k."""
        if k >= 0:
            return cls(_Q**k, _ONE)
        return cls(_ONE, _Q ** (-k))

    @classmethod
    def coerce(cls, value: Any) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.from_int(value)
        raise TypeError(f"Cannot coerce {type(value).__name__} to RatFunc")

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        """Parse the textual form produced by str(), or any rational expression in q.

        Raises:
            ValueError: If the text is not a rational function of q with
                rational coefficients.
        """
        q_symbol = POLY_RING.symbols[0]
        try:
            expr = parse_expr(
                text,
                local_dict={"q": q_symbol},
                transformations=_PARSE_TRANSFORMATIONS,
            )
        except Exception as e:
            raise ValueError(f"Cannot parse rational function {text!r}: {e}") from e

        if not expr.free_symbols <= {q_symbol}:
            raise ValueError(f"Unexpected symbols in {text!r}: {expr.free_symbols}")

        num_expr, den_expr = fraction(together(expr))
        try:
            num_fr = _to_integer_poly(num_expr)
            den_fr = _to_integer_poly(den_expr)
        except Exception as e:
            raise ValueError(f"Cannot parse rational function {text!r}: {e}") from e

        (num, num_scale), (den, den_scale) = num_fr, den_fr
        return cls(num * POLY_RING(den_scale), den * POLY_RING(num_scale))

    # ------------------------------------------------------------------
    # Predicates and valuation data
    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    def valuation(self) -> int:
        """Order of vanishing at q=0.

        Raises:
            ValueError: For the zero element, whose order is ORD_INFINITY.
        """
        if self.is_zero:
            raise ValueError("valuation of zero is infinite")
        return _trailing_degree(self.num) - _trailing_degree(self.den)

    def in_ring(self) -> bool:
        """True if the value lies in A (regular at q=0)."""
        return self.is_zero or self.valuation() >= 0

    def is_unit(self) -> bool:
        """True if the value is a unit of A."""
        return not self.is_zero and self.valuation() == 0

    def leading_coeff(self) -> Fraction:
        """Coefficient of q^ord in the power-series expansion; 0 for zero."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(int(_trailing_coeff(self.num)), int(_trailing_coeff(self.den)))

    def value_at_zero(self) -> Fraction:
        """Residue of an element of A in A/qA = Q.

        Raises:
            ValueError: If the value is not regular at q=0.
        """
        if self.is_zero:
            return Fraction(0)
        v = self.valuation()
        if v < 0:
            raise ValueError(f"{self} is not regular at q=0")
        return self.leading_coeff() if v == 0 else Fraction(0)

    def unit_part(self) -> "RatFunc":
        """x * q^(-ord x), a unit of A."""
        return self * RatFunc.q_power(-self.valuation())

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    # ------------------------------------------------------------------
    # Field operations
    # ------------------------------------------------------------------

    def __add__(self, other: Any) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: Any) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other: Any) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return ZERO
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: Any) -> "RatFunc":
        return RatFunc.coerce(other) / self

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent >= 0:
            return RatFunc(self.num**exponent, self.den**exponent)
        if self.is_zero:
            raise ZeroDivisionError("negative power of zero")
        return RatFunc(self.den ** (-exponent), self.num ** (-exponent))

    def inverse(self) -> "RatFunc":
        return ONE / self

    def __eq__(self, other: Any) -> bool:
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.leading_coeff())
        return hash((tuple(sorted(self.num.terms())), tuple(sorted(self.den.terms()))))

    def __bool__(self) -> bool:
        return not self.is_zero

    # ------------------------------------------------------------------
    # Text
    # ------------------------------------------------------------------

    def __str__(self) -> str:
        num = _format_poly(self.num)
        if self.den == _ONE:
            return num
        den = _format_poly(self.den)
        # single terms stay bare, except a coefficient product below the bar
        if len(self.num.terms()) > 1:
            num = f"({num})"
        if len(self.den.terms()) > 1 or "*" in den or den.startswith("-"):
            den = f"({den})"
        return f"{num} / {den}"

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


def _to_integer_poly(expr):
    """Convert a polynomial expression with rational coefficients.

    Returns:
        (p, s) with p in ZZ[q] and s a positive integer such that expr = p / s.
    """
    qq_ring = POLY_RING.clone(domain=ZZ.get_field())
    p = qq_ring.from_expr(expr)
    scale = 1
    for _, c in p.terms():
        scale = scale * int(c.denominator) // math.gcd(scale, int(c.denominator))
    scaled = p * scale
    return POLY_RING.from_dict({m: int(c) for m, c in scaled.terms()}), int(scale)


ZERO = RatFunc(_ZERO, _ONE)
ONE = RatFunc(_ONE, _ONE)
Q = RatFunc(_Q, _ONE)


# ----------------------------------------------------------------------
# Valuation report
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class QScalarReport:
    """Valuation data of a scalar.

    Attributes:
        ord: Valuation at q=0, or ORD_INFINITY for zero.
        in_A: Whether the scalar lies in A.
        is_unit_A: Whether the scalar is a unit of A.
        leading_coeff: Coefficient of q^ord in the expansion at q=0.
    """

    ord: Union[int, Ord]
    in_A: bool
    is_unit_A: bool
    leading_coeff: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ord": str(self.ord) if isinstance(self.ord, Ord) else self.ord,
            "in_A": self.in_A,
            "is_unit_A": self.is_unit_A,
            "leading_coeff": str(self.leading_coeff),
        }


def ord_q(x: RatFunc) -> QScalarReport:
    """Valuation report of x at q=0."""
    if x.is_zero:
        return QScalarReport(ORD_INFINITY, True, False, Fraction(0))
    v = x.valuation()
    return QScalarReport(v, v >= 0, v == 0, x.leading_coeff())


# ----------------------------------------------------------------------
# q-combinatorics
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def q_int(n: int) -> RatFunc:
    """Quantum integer [n] = (q^n - q^-n) / (q - q^-1)."""
    if n == 0:
        return ZERO
    if n < 0:
        return -q_int(-n)
    num = POLY_RING.from_dict({(2 * i,): 1 for i in range(n)})
    return RatFunc(num, _Q ** (n - 1))


@lru_cache(maxsize=None)
def q_factorial(n: int) -> RatFunc:
    """[n]! for n >= 0; [-k]! = [-1][-2]...[-k] = (-1)^k [k]! for negative arguments."""
    if n < 0:
        value = q_factorial(-n)
        return -value if n % 2 else value
    result = ONE
    for k in range(1, n + 1):
        result = result * q_int(k)
    return result


@lru_cache(maxsize=None)
def q_binomial(m: int, n: int) -> RatFunc:
    """[m][m-1]...[m-n+1] / [n]! for any integer m and n >= 0."""
    if n < 0:
        raise ValueError(f"q_binomial needs n >= 0, got {n}")
    result = ONE
    for j in range(n):
        result = result * q_int(m - j)
    return result / q_factorial(n)


def q_ratio_unit(i: int, n: int) -> RatFunc:
    """Unit a with 1/(1 + q^-(i-n-1)) = q^max(0, i-n-1) * a."""
    d = i - n - 1
    x = ONE / (ONE + RatFunc.q_power(-d))
    return x * RatFunc.q_power(-max(0, d))

"""
Exact integer polynomials in q and Laurent polynomials in v, q = v^2.

Coefficients are kept as plain int tuples (ascending powers) so values hash,
compare and serialize trivially; multiplication, division and interpolation
go through sympy's exact polynomial arithmetic.
"""

import logging
from typing import Iterable, Sequence, Tuple

import attrs
from sympy import Poly, Rational, Symbol, cancel, interpolate

from .errors import InexactDivisionError, InterpolationError, NotAPolynomialError

__all__ = ["IntPolyQ", "LaurentPolyV", "Q", "V", "interpolate_exact"]

logger = logging.getLogger(__name__)

Q = Symbol("q")
V = Symbol("v")


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    coeffs = [int(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@attrs.frozen(order=False)
class IntPolyQ:
    """Integer polynomial in q; ``coeffs[k]`` is the coefficient of q^k."""

    coeffs: Tuple[int, ...] = attrs.field(converter=_trim, default=())

    @classmethod
    def constant(cls, c: int) -> "IntPolyQ":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPolyQ":
        return cls((0,) * k + (c,))

    @classmethod
    def from_poly(cls, poly: Poly) -> "IntPolyQ":
        coeffs = poly.all_coeffs()[::-1]
        for c in coeffs:
            if not c.is_integer:
                raise InterpolationError(f"non-integer coefficient {c} in {poly.as_expr()}")
        return cls(int(c) for c in coeffs)

    def to_poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)) or [0], Q, domain="ZZ")

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * x + c
        return value

    def __add__(self, other: "IntPolyQ") -> "IntPolyQ":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolyQ(x + y for x, y in zip(a, b))

    def __neg__(self) -> "IntPolyQ":
        return IntPolyQ(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolyQ") -> "IntPolyQ":
        return self + (-other)

    def __mul__(self, other: "IntPolyQ") -> "IntPolyQ":
        if self.is_zero() or other.is_zero():
            return IntPolyQ()
        return IntPolyQ.from_poly(self.to_poly() * other.to_poly())

    def __pow__(self, k: int) -> "IntPolyQ":
        result = IntPolyQ.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def exact_div(self, other: "IntPolyQ") -> "IntPolyQ":
        """
        Quotient in Z[q].

        :raises InexactDivisionError: on a nonzero remainder.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return IntPolyQ()
        quotient, remainder = self.to_poly().div(other.to_poly())
        if not remainder.is_zero or not all(c.is_integer for c in quotient.all_coeffs()):
            raise InexactDivisionError(f"{self} is not divisible by {other} in Z[q]")
        return IntPolyQ.from_poly(quotient)

    def to_laurent(self) -> "LaurentPolyV":
        """Substitute q = v^2."""
        coeffs = []
        for c in self.coeffs:
            coeffs.extend((c, 0))
        return LaurentPolyV(0, coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                mono = "q" if k == 1 else f"q^{k}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _laurent_converter(inst_low: int, coeffs: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    coeffs = [int(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    start = 0
    while start < len(coeffs) and coeffs[start] == 0:
        start += 1
    if start == len(coeffs):
        return 0, ()
    return inst_low + start, tuple(coeffs[start:])


@attrs.frozen(init=False)
class LaurentPolyV:
    """
    Laurent polynomial sum_k coeffs[k] v^(low + k), normalized so that the
    first and last coefficients are nonzero (the zero polynomial has low 0).
    """

    low: int
    coeffs: Tuple[int, ...]

    def __init__(self, low: int = 0, coeffs: Sequence[int] = ()):
        low, coeffs = _laurent_converter(int(low), coeffs)
        self.__attrs_init__(low, coeffs)

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "LaurentPolyV":
        return cls(k, (c,))

    @classmethod
    def one(cls) -> "LaurentPolyV":
        return cls(0, (1,))

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self):
        return [(self.low + k, c) for k, c in enumerate(self.coeffs) if c]

    def __add__(self, other: "LaurentPolyV") -> "LaurentPolyV":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        out = [0] * (high - low + 1)
        for k, c in self.terms() + other.terms():
            out[k - low] += c
        return LaurentPolyV(low, out)

    def __neg__(self) -> "LaurentPolyV":
        return LaurentPolyV(self.low, [-c for c in self.coeffs])

    def __sub__(self, other: "LaurentPolyV") -> "LaurentPolyV":
        return self + (-other)

    def __mul__(self, other: "LaurentPolyV") -> "LaurentPolyV":
        if self.is_zero() or other.is_zero():
            return LaurentPolyV()
        a = Poly(list(reversed(self.coeffs)), V, domain="ZZ")
        b = Poly(list(reversed(other.coeffs)), V, domain="ZZ")
        product = (a * b).all_coeffs()[::-1]
        return LaurentPolyV(self.low + other.low, [int(c) for c in product])

    def shift(self, k: int) -> "LaurentPolyV":
        """Multiply by v^k."""
        if self.is_zero():
            return self
        return LaurentPolyV(self.low + k, self.coeffs)

    def bar(self) -> "LaurentPolyV":
        """The involution v -> v^-1."""
        if self.is_zero():
            return self
        return LaurentPolyV(-self.high, tuple(reversed(self.coeffs)))

    def to_int_poly_q(self) -> IntPolyQ:
        """
        Inverse of q = v^2.

        :raises NotAPolynomialError: if a negative or odd power of v occurs.
        """
        out = {}
        for k, c in self.terms():
            if k < 0 or k % 2:
                raise NotAPolynomialError(f"{self} is not a polynomial in q = v^2")
            out[k // 2] = c
        if not out:
            return IntPolyQ()
        return IntPolyQ(out.get(i, 0) for i in range(max(out) + 1))

    def to_expr(self):
        return sum((c * V ** k for k, c in self.terms()), Rational(0))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in reversed(self.terms()):
            mono = "1" if k == 0 else ("v" if k == 1 else f"v^{k}")
            if k == 0:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def interpolate_exact(points: Sequence[Tuple[int, int]]) -> IntPolyQ:
    """
    The unique polynomial of degree < len(points) through ``points``.

    :raises InterpolationError: if a coefficient is not an integer.
    """
    if len(points) == 1:
        return IntPolyQ.constant(points[0][1])
    expr = cancel(interpolate([(int(x), int(y)) for x, y in points], Q))
    poly = Poly(expr, Q, domain="QQ")
    return IntPolyQ.from_poly(poly)

"""Exact scalar arithmetic: rationals and quadratic extensions Q(sqrt(d)).

A Scalar is either a rational number or an element a + b*sqrt(d) of a real
or imaginary quadratic field, with d a squarefree integer other than 0 and 1
(d = -1 gives the complex computations, d = 2, 5, ... give real square-root
scalings).  All components are `fractions.Fraction`, so arithmetic is exact
with big-integer backing and no overflow.

Only one quadratic extension is in play at a time: combining scalars with
two different d values raises IncompatibleFieldError.  Rationals promote
silently into whatever extension they meet.

Text format (used by the CLI file formats): "p/q" for rationals and
"p/q+r/s*sqrt(d)" for quadratics, minus signs inline, no whitespace.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class ScalarError(ArithmeticError):
    """Base class for exact-scalar arithmetic errors."""


class IncompatibleFieldError(ScalarError):
    """Two quadratic scalars with different d were combined."""


class ScalarParseError(ValueError):
    """A scalar string did not match the exact-scalar text format."""


def is_squarefree(d: int) -> bool:
    """True iff the integer d is squarefree (no repeated prime factor)."""
    n = abs(d)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1
    return True


def _check_d(d: int) -> None:
    if d in (0, 1) or not is_squarefree(d):
        raise ScalarError(f"d must be a squarefree integer other than 0 and 1, got {d}")


class Scalar:
    """Exact element of Q or Q(sqrt(d)), immutable and hashable.

    Canonical form: a rational value always has d = None (so Rational(x)
    and Quadratic(x, 0, d) compare equal, hash equal, and print the same).
    """

    __slots__ = ("a", "b", "d")

    a: Fraction
    b: Fraction
    d: int | None

    def __init__(self, a, b=0, d: int | None = None):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            d = None
        else:
            if d is None:
                raise ScalarError("a nonzero sqrt coefficient needs a value of d")
            _check_d(d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, num, den=1) -> Scalar:
        return cls(Fraction(num, den))

    @classmethod
    def quadratic(cls, a, b, d: int) -> Scalar:
        _check_d(d)
        return cls(Fraction(a), Fraction(b), d)

    @classmethod
    def zero(cls) -> Scalar:
        return _ZERO

    @classmethod
    def one(cls) -> Scalar:
        return _ONE

    @classmethod
    def sqrt_d(cls, d: int) -> Scalar:
        """The generator sqrt(d) itself."""
        return cls(0, 1, d)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ScalarError(f"{self} is not rational")
        return self.a

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Scalar | None:
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return None

    def _join_d(self, other: Scalar) -> int | None:
        if self.d is None:
            return other.d
        if other.d is None or other.d == self.d:
            return self.d
        raise IncompatibleFieldError(
            f"cannot combine sqrt({self.d}) with sqrt({other.d})"
        )

    def __add__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._join_d(other)
        return Scalar(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Scalar:
        return (-self) + other

    def __mul__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._join_d(other)
        if d is None:
            return Scalar(self.a * other.a)
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return Scalar(a, b, d)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        """Exact multiplicative inverse; raises on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero scalar")
        if self.b == 0:
            return Scalar(1 / self.a)
        # 1/(a+b*sqrt(d)) = (a-b*sqrt(d))/(a^2-d*b^2); the norm is nonzero
        # because d is not a perfect square.
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ScalarError(f"zero norm for {self}; d={self.d} is not squarefree?")
        return Scalar(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> Scalar:
        return self.inv() * other

    def conjugate(self) -> Scalar:
        return Scalar(self.a, -self.b, self.d)

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.b == 0 and other.b == 0:
            return self.a == other.a
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    # -- text format -------------------------------------------------------

    def __str__(self) -> str:
        a = f"{self.a.numerator}/{self.a.denominator}"
        if self.b == 0:
            return a
        sign = "+" if self.b > 0 else "-"
        babs = abs(self.b)
        return f"{a}{sign}{babs.numerator}/{babs.denominator}*sqrt({self.d})"

    def __repr__(self) -> str:
        return f"Scalar({self})"

    @classmethod
    def parse(cls, text: str) -> Scalar:
        """Parse the exact-scalar text format ("p/q" or "p/q+r/s*sqrt(d)")."""
        s = text.strip()
        if not s:
            raise ScalarParseError("empty scalar string")
        if "sqrt" in s:
            star = s.find("*sqrt(")
            if star < 0 or not s.endswith(")"):
                raise ScalarParseError(f"malformed quadratic scalar {text!r}")
            d_text = s[star + 6 : -1]
            try:
                d = int(d_text)
            except ValueError:
                raise ScalarParseError(f"bad d in {text!r}") from None
            head = s[:star]
            # split head into rational part and sqrt coefficient at the last
            # +/- that is not a leading sign
            cut = -1
            for i in range(1, len(head)):
                if head[i] in "+-" and head[i - 1] not in "+-/*":
                    cut = i
            if cut < 0:
                a_text, b_text = "0", head
            else:
                a_text, b_text = head[:cut], head[cut:]
            try:
                a = Fraction(a_text)
                b = Fraction(b_text.lstrip("+"))
            except (ValueError, ZeroDivisionError):
                raise ScalarParseError(f"bad coefficients in {text!r}") from None
            try:
                return cls(a, b, d)
            except ScalarError as exc:
                raise ScalarParseError(str(exc)) from None
        try:
            return cls(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ScalarParseError(f"bad rational scalar {text!r}") from None


_ZERO = Scalar(0)
_ONE = Scalar(1)


def rational_is_square(q: Fraction) -> bool:
    """True iff the nonnegative rational q is the square of a rational."""
    if q < 0:
        return False
    n, m = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(m) ** 2 == m


def squarefree_split(n: int) -> tuple[int, int]:
    """Write n = s * m^2 with s squarefree; returns (s, m).  n must be nonzero."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, m = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2 == 1:
            s *= p
        m *= p ** (e // 2)
        p += 1
    s *= n
    return sign * s, m


def sqrt_as_scalar(q: Fraction) -> Scalar:
    """An exact square root of the rational q, as a Scalar.

    Returns a rational Scalar when q is a perfect square, otherwise an
    element of Q(sqrt(s)) with s the squarefree part of q.  For negative q
    the result lives in an imaginary quadratic field.
    """
    if q == 0:
        return Scalar(0)
    # q = (n*m)/m^2, sqrt(q) = sqrt(n*m)/m
    nm = q.numerator * q.denominator
    s, m = squarefree_split(nm)
    coeff = Fraction(m, q.denominator)
    if s == 1:
        return Scalar(coeff)
    return Scalar(0, coeff, s)

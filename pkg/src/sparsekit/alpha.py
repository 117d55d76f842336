"""Exact arithmetic in Q(alpha), alpha the real cube root of 2.

Every element is ``a + b*alpha + c*alpha**2`` with rational ``a, b, c``.
Ordering is decided by interval evaluation at increasing precision; the loop
terminates because a nonzero element has nonzero field norm.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import total_ordering
from typing import Mapping, Union

__all__ = ["AlphaExpr", "Ordering", "alpha_compare", "alpha_pow", "ALPHA", "ONE", "ZERO", "C1", "C2"]

Number = Union[int, Fraction]


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _icbrt(x: int) -> int:
    """floor(cbrt(x)) for x >= 0."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + 2) // 3)
    while True:
        s = (2 * r + x // (r * r)) // 3
        if s >= r:
            break
        r = s
    while r * r * r > x:
        r -= 1
    while (r + 1) ** 3 <= x:
        r += 1
    return r


@total_ordering
class AlphaExpr:
    """Immutable element of Q(2^(1/3))."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a: Number = 0, b: Number = 0, c: Number = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "c", Fraction(c))

    def __setattr__(self, name, value):
        raise AttributeError("AlphaExpr is immutable")

    @classmethod
    def from_terms(cls, terms: Mapping[int, Number]) -> "AlphaExpr":
        """Sum of ``coef * alpha**exp`` over a finite map exp -> coef."""
        acc = [Fraction(0)] * 3
        for e, coef in terms.items():
            q, r = divmod(e, 3)
            acc[r] += Fraction(coef) * (Fraction(2) ** q)
        return cls(*acc)

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c)

    def dyadic_form(self) -> tuple[int, int, int, int]:
        """Integers (a, b, c, m) with value (a + b*alpha + c*alpha^2) * 2^m.

        Raises ValueError when some coefficient has a non power-of-two
        denominator.  ``a, b, c`` are not all even unless zero.
        """
        if self.is_zero():
            return (0, 0, 0, 0)
        m = 0
        for f in self.coeffs:
            d = f.denominator
            if d & (d - 1):
                raise ValueError(f"{self} is not dyadic")
            m = min(m, -(d.bit_length() - 1))
        ints = [int(f * Fraction(2) ** (-m)) for f in self.coeffs]
        while all(x % 2 == 0 for x in ints):
            ints = [x // 2 for x in ints]
            m += 1
        return (ints[0], ints[1], ints[2], m)

    def slack_string(self) -> str:
        try:
            a, b, c, m = self.dyadic_form()
            return f"({a},{b},{c},{m})"
        except ValueError:
            return "(" + ",".join(str(f) for f in self.coeffs) + ")"

    def norm(self) -> Fraction:
        """Field norm a^3 + 2b^3 + 4c^3 - 6abc; zero iff the element is zero."""
        a, b, c = self.coeffs
        return a ** 3 + 2 * b ** 3 + 4 * c ** 3 - 6 * a * b * c

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _lift(x) -> "AlphaExpr":
        if isinstance(x, AlphaExpr):
            return x
        if isinstance(x, (int, Fraction)):
            return AlphaExpr(x)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlphaExpr(self.a + o.a, self.b + o.b, self.c + o.c)

    __radd__ = __add__

    def __neg__(self):
        return AlphaExpr(-self.a, -self.b, -self.c)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b, c = self.coeffs
        d, e, f = o.coeffs
        # alpha^3 = 2, alpha^4 = 2 alpha
        return AlphaExpr(a * d + 2 * (b * f + c * e),
                         a * e + b * d + 2 * c * f,
                         a * f + b * e + c * d)

    __rmul__ = __mul__

    def inverse(self) -> "AlphaExpr":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(alpha)")
        a, b, c = self.coeffs
        # adjugate of multiplication-by-x; x * adj = norm
        adj = AlphaExpr(a * a - 2 * b * c, 2 * c * c - a * b, b * b - a * c)
        return adj * (1 / self.norm())

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ----------------------------------------------------------

    def sign(self) -> int:
        if self.is_zero():
            return 0
        a, b, c = self.coeffs
        p = 16
        while True:
            scale = 1 << p
            lo = _icbrt(2 << (3 * p))  # alpha in [lo, lo+1] / scale
            hi = lo + 1
            lo_f = Fraction(lo, scale)
            hi_f = Fraction(hi, scale)
            # b*alpha over the interval
            bl, bh = sorted((b * lo_f, b * hi_f))
            cl, ch = sorted((c * lo_f * lo_f, c * hi_f * hi_f))  # alpha^2 monotone on alpha > 0
            low = a + bl + cl
            high = a + bh + ch
            if low > 0:
                return 1
            if high < 0:
                return -1
            p *= 2

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __float__(self) -> float:
        al = 2.0 ** (1.0 / 3.0)
        return float(self.a) + float(self.b) * al + float(self.c) * al * al

    def decimal(self, places: int = 4) -> str:
        """Correctly rounded decimal string (exact, not via float)."""
        scale = 10 ** places
        # floor(x * scale) by exact comparison
        approx = math.floor(float(self) * scale)
        while AlphaExpr(Fraction(approx, scale)) > self:
            approx -= 1
        while AlphaExpr(Fraction(approx + 1, scale)) <= self:
            approx += 1
        # round half up using the midpoint
        if self - AlphaExpr(Fraction(2 * approx + 1, 2 * scale)) >= ZERO:
            approx += 1
        s = f"{abs(approx) // scale}.{abs(approx) % scale:0{places}d}" if places else str(abs(approx))
        return ("-" if approx < 0 else "") + s

    def __repr__(self) -> str:
        parts = []
        for coef, mono in zip(self.coeffs, ("", "α", "α²")):
            if coef:
                parts.append(f"{coef}{('*' + mono) if mono else ''}")
        return "AlphaExpr(" + (" + ".join(parts) if parts else "0") + ")"


def alpha_pow(e: int) -> AlphaExpr:
    q, r = divmod(e, 3)
    coeffs = [0, 0, 0]
    coeffs[r] = Fraction(2) ** q
    return AlphaExpr(*coeffs)


def alpha_compare(x, y) -> Ordering:
    x = AlphaExpr._lift(x)
    y = AlphaExpr._lift(y)
    return Ordering((x - y).sign())


ZERO = AlphaExpr(0)
ONE = AlphaExpr(1)
ALPHA = AlphaExpr(0, 1)
C1 = alpha_pow(-2) + alpha_pow(-7)
C2 = alpha_pow(-3) + alpha_pow(-4)

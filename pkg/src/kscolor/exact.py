"""Exact arithmetic over Q and Q(sqrt2), plus 3-vectors over that field.

Rationals are :class:`fractions.Fraction`.  Every value here is immutable, so
scalars and vectors can be shared freely.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

__all__ = [
    "Rational",
    "ExactScalar",
    "ExactVec3",
    "ParallelVectorsError",
    "scalar_arith",
    "dot",
    "cross",
    "parse_scalar",
    "format_scalar",
    "SQRT2",
]

Rational = Fraction
SQRT2 = math.sqrt(2.0)

Number = Union[int, Fraction, "ExactScalar"]


def _sign(x: int | Fraction) -> int:
    return (x > 0) - (x < 0)


class ExactScalar:
    """An element ``rat + irr*sqrt2`` of Q(sqrt2)."""

    __slots__ = ("rat", "irr")

    rat: Fraction
    irr: Fraction

    def __init__(self, rat: int | Fraction = 0, irr: int | Fraction = 0) -> None:
        object.__setattr__(self, "rat", Fraction(rat))
        object.__setattr__(self, "irr", Fraction(irr))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def coerce(cls, value: Number) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        raise TypeError(f"cannot convert {type(value).__name__} to ExactScalar")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Number) -> "ExactScalar":
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactScalar(self.rat + o.rat, self.irr + o.irr)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "ExactScalar":
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactScalar(self.rat - o.rat, self.irr - o.irr)

    def __rsub__(self, other: Number) -> "ExactScalar":
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other: Number) -> "ExactScalar":
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.rat, self.irr, o.rat, o.irr
        return ExactScalar(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.rat, -self.irr)

    def __pos__(self) -> "ExactScalar":
        return self

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.rat, -self.irr)

    def norm(self) -> Fraction:
        """Field norm ``rat**2 - 2*irr**2``; zero only for the zero element."""
        return self.rat * self.rat - 2 * self.irr * self.irr

    def inverse(self) -> "ExactScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt2)")
        return ExactScalar(self.rat / n, -self.irr / n)

    def __truediv__(self, other: Number) -> "ExactScalar":
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> "ExactScalar":
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    # -- comparison ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.rat == 0 and self.irr == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return self.irr == 0

    def sign(self) -> int:
        """Exact sign, decided by comparing ``rat**2`` with ``2*irr**2``."""
        sa, sb = _sign(self.rat), _sign(self.irr)
        if sa >= 0 and sb >= 0:
            return 1 if (sa or sb) else 0
        if sa <= 0 and sb <= 0:
            return -1
        # opposite signs: the larger magnitude wins
        diff = self.rat * self.rat - 2 * self.irr * self.irr
        return sa * _sign(diff)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.irr == 0 and self.rat == other
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.rat == other.rat and self.irr == other.irr

    def __hash__(self) -> int:
        if self.irr == 0:
            return hash(self.rat)
        return hash((self.rat, self.irr))

    def __lt__(self, other: Number) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: Number) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: Number) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: Number) -> bool:
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        a, b = self.rat, self.irr
        if _sign(a) * _sign(b) >= 0:
            return float(a) + float(b) * SQRT2
        # a + b*sqrt2 == (a^2 - 2b^2) / (a - b*sqrt2), and the denominator
        # has no cancellation when a and b have opposite signs
        return float(a * a - 2 * b * b) / (float(a) - float(b) * SQRT2)

    def __repr__(self) -> str:
        return f"ExactScalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = ExactScalar(0)
ONE = ExactScalar(1)


def scalar_arith(a: Number, b: Number, op: str) -> ExactScalar:
    """Apply ``op`` (one of add, sub, mul, div) exactly."""
    a = ExactScalar.coerce(a)
    b = ExactScalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return a / b
    raise ValueError(f"unknown operation {op!r}; expected add, sub, mul or div")


# -- textual format -----------------------------------------------------------

_RAT = r"[+-]?\s*\d+(?:\s*/\s*\d+)?"
_IRR = r"[+-]?\s*(?:\d+(?:\s*/\s*\d+)?\s*\*\s*)?sqrt2"
_SCALAR_RE = re.compile(
    rf"^\s*(?:(?P<both_r>{_RAT})\s*(?P<both_i>[+-]\s*(?:\d+(?:\s*/\s*\d+)?\s*\*\s*)?sqrt2)"
    rf"|(?P<irr>{_IRR})|(?P<rat>{_RAT}))\s*$"
)


def _parse_rat(text: str) -> Fraction:
    text = text.replace(" ", "")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError("zero denominator")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def _parse_irr(text: str) -> Fraction:
    text = text.replace(" ", "")
    coeff = text[: -len("sqrt2")].rstrip("*")
    if coeff in ("", "+"):
        return Fraction(1)
    if coeff == "-":
        return Fraction(-1)
    return _parse_rat(coeff)


def parse_scalar(text: str) -> ExactScalar:
    """Parse ``"p/q"``, ``"r/s*sqrt2"`` or ``"p/q+r/s*sqrt2"`` (integers allowed)."""
    m = _SCALAR_RE.match(text)
    if m is None:
        raise ValueError(f"malformed scalar {text!r}")
    if m.group("both_r") is not None:
        return ExactScalar(_parse_rat(m.group("both_r")), _parse_irr(m.group("both_i")))
    if m.group("irr") is not None:
        return ExactScalar(0, _parse_irr(m.group("irr")))
    return ExactScalar(_parse_rat(m.group("rat")), 0)


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(s: Number) -> str:
    s = ExactScalar.coerce(s)
    if s.irr == 0:
        return _fmt_rat(s.rat)
    mag = abs(s.irr)
    irr = "sqrt2" if mag == 1 else f"{_fmt_rat(mag)}*sqrt2"
    if s.rat == 0:
        return irr if s.irr > 0 else "-" + irr
    return f"{_fmt_rat(s.rat)}{'+' if s.irr > 0 else '-'}{irr}"


# -- vectors ------------------------------------------------------------------


class ParallelVectorsError(ValueError):
    """Raised when a cross product of parallel vectors is requested."""


@dataclass(frozen=True)
class ExactVec3:
    x: ExactScalar
    y: ExactScalar
    z: ExactScalar

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, ExactScalar.coerce(getattr(self, name)))

    @classmethod
    def of(cls, x: Number, y: Number, z: Number) -> "ExactVec3":
        return cls(ExactScalar.coerce(x), ExactScalar.coerce(y), ExactScalar.coerce(z))

    def __iter__(self) -> Iterator[ExactScalar]:
        yield self.x
        yield self.y
        yield self.z

    def __neg__(self) -> "ExactVec3":
        return ExactVec3(-self.x, -self.y, -self.z)

    def scale(self, s: Number) -> "ExactVec3":
        s = ExactScalar.coerce(s)
        return ExactVec3(self.x * s, self.y * s, self.z * s)

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero() and self.z.is_zero()

    def to_float(self) -> tuple[float, float, float]:
        return (float(self.x), float(self.y), float(self.z))

    def __str__(self) -> str:
        return f"({format_scalar(self.x)}, {format_scalar(self.y)}, {format_scalar(self.z)})"


def dot(u: ExactVec3, v: ExactVec3) -> ExactScalar:
    return u.x * v.x + u.y * v.y + u.z * v.z


def _cross(u: ExactVec3, v: ExactVec3) -> ExactVec3:
    return ExactVec3(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )


def cross(u: ExactVec3, v: ExactVec3) -> ExactVec3:
    """Cross product; raises :class:`ParallelVectorsError` for parallel inputs."""
    w = _cross(u, v)
    if w.is_zero():
        raise ParallelVectorsError(f"vectors {u} and {v} are parallel")
    return w

"""Exact rational multiples of powers of pi.

Every closed-form capacity and action in this package is a rational number
times ``pi**p``. :class:`ExactQuantity` keeps the rational part as a
:class:`fractions.Fraction` and the power of pi as a small integer, so equality
and ordering are exact.

Canonical string forms::

    0        zero (any unit)
    3        integer, no pi
    3/2      rational, no pi
    4pi      integer multiple of pi
    1/2pi    rational multiple of pi
    2pi^2    multiples of pi**2 (volumes)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DomainError, UnitError

# Certified enclosure of pi: 60 correct decimals, so PI_LO < pi < PI_HI.
_PI_DIGITS = "3.141592653589793238462643383279502884197169399375105820974944"
PI_LO = Fraction(_PI_DIGITS)
PI_HI = PI_LO + Fraction(1, 10**60)

_QUANTITY_RE = re.compile(
    r"""^\s*
    (?P<sign>[-+])?
    (?P<num>\d+)?
    (?:/(?P<den>\d+))?
    (?P<pi>pi(?:\^(?P<pow>\d+))?)?
    \s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class ExactQuantity:
    """A value ``coeff * pi**pi_power`` with ``coeff`` rational.

    Zero is normalised to ``pi_power == 0`` and is unit-compatible with
    everything, so ``0 <= 4pi`` is a legal comparison.
    """

    coeff: Fraction
    pi_power: int = 0

    def __post_init__(self) -> None:
        coeff = self.coeff
        if not isinstance(coeff, Fraction):
            if not isinstance(coeff, (int, Rational, str)):
                raise DomainError(f"coefficient must be rational, got {coeff!r}")
            coeff = Fraction(coeff)
            object.__setattr__(self, "coeff", coeff)
        if not isinstance(self.pi_power, int) or self.pi_power < 0:
            raise DomainError(f"pi_power must be a nonnegative integer, got {self.pi_power!r}")
        if coeff == 0 and self.pi_power != 0:
            object.__setattr__(self, "pi_power", 0)

    # -- construction -----------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "ExactQuantity":
        """Parse a canonical string such as ``"4pi"``, ``"201/100pi"`` or ``"7"``.

        A bare ``"pi"`` is accepted as ``1pi``.
        """
        m = _QUANTITY_RE.match(text)
        if m is None or (m["num"] is None and m["pi"] is None):
            raise DomainError(f"cannot parse exact quantity {text!r}")
        if m["num"] is None and m["den"] is not None:
            raise DomainError(f"cannot parse exact quantity {text!r}")
        num = int(m["num"]) if m["num"] is not None else 1
        den = int(m["den"]) if m["den"] is not None else 1
        if den == 0:
            raise DomainError(f"zero denominator in {text!r}")
        if m["sign"] == "-":
            num = -num
        power = 0
        if m["pi"]:
            power = int(m["pow"]) if m["pow"] else 1
        return cls(Fraction(num, den), power)

    @classmethod
    def from_json(cls, obj: dict) -> "ExactQuantity":
        return cls(Fraction(int(obj["num"]), int(obj["den"])), int(obj["pi"]))

    # -- accessors --------------------------------------------------------

    @property
    def numerator(self) -> int:
        return self.coeff.numerator

    @property
    def denominator(self) -> int:
        return self.coeff.denominator

    def is_zero(self) -> bool:
        return self.coeff == 0

    def to_json(self) -> dict:
        return {"num": self.coeff.numerator, "den": self.coeff.denominator, "pi": self.pi_power}

    def __float__(self) -> float:
        return float(self.coeff) * math.pi**self.pi_power

    def __str__(self) -> str:
        if self.coeff == 0:
            return "0"
        c = self.coeff
        body = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        if self.pi_power == 0:
            return body
        if self.pi_power == 1:
            return body + "pi"
        return f"{body}pi^{self.pi_power}"

    def __repr__(self) -> str:
        return f"ExactQuantity({str(self)!r})"

    def __hash__(self) -> int:
        return hash((self.coeff, self.pi_power))

    # -- arithmetic -------------------------------------------------------

    def _unit_with(self, other: "ExactQuantity") -> int:
        if self.pi_power == other.pi_power or other.coeff == 0:
            return self.pi_power
        if self.coeff == 0:
            return other.pi_power
        raise UnitError(f"unit mismatch: {self} vs {other}")

    def __add__(self, other: QuantityLike) -> "ExactQuantity":
        other = as_quantity(other)
        return ExactQuantity(self.coeff + other.coeff, self._unit_with(other))

    __radd__ = __add__

    def __neg__(self) -> "ExactQuantity":
        return ExactQuantity(-self.coeff, self.pi_power)

    def __sub__(self, other: QuantityLike) -> "ExactQuantity":
        return self + (-as_quantity(other))

    def __rsub__(self, other: QuantityLike) -> "ExactQuantity":
        return as_quantity(other) - self

    def __mul__(self, other: QuantityLike) -> "ExactQuantity":
        other = as_quantity(other)
        return ExactQuantity(self.coeff * other.coeff, self.pi_power + other.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other: QuantityLike) -> "ExactQuantity":
        other = as_quantity(other)
        if other.coeff == 0:
            raise ZeroDivisionError("division by exact zero")
        if self.coeff == 0:
            return ExactQuantity(0)
        power = self.pi_power - other.pi_power
        if power < 0:
            raise UnitError(f"negative power of pi in {self} / {other}")
        return ExactQuantity(self.coeff / other.coeff, power)

    # -- ordering (same unit only) -----------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactQuantity(other)
        if not isinstance(other, ExactQuantity):
            return NotImplemented
        return self.coeff == other.coeff and self.pi_power == other.pi_power

    def _cmp_key(self, other: QuantityLike) -> tuple[Fraction, Fraction]:
        other = as_quantity(other)
        self._unit_with(other)
        return self.coeff, other.coeff

    def __lt__(self, other: QuantityLike) -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other: QuantityLike) -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other: QuantityLike) -> bool:
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other: QuantityLike) -> bool:
        a, b = self._cmp_key(other)
        return a >= b


QuantityLike = Union[ExactQuantity, int, Fraction]

ZERO = ExactQuantity(Fraction(0))
ONE = ExactQuantity(Fraction(1))
PI = ExactQuantity(Fraction(1), 1)


def as_quantity(value: QuantityLike | str) -> ExactQuantity:
    """Coerce ints, Fractions and canonical strings to :class:`ExactQuantity`."""
    if isinstance(value, ExactQuantity):
        return value
    if isinstance(value, str):
        return ExactQuantity.parse(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return ExactQuantity(Fraction(value))
    raise DomainError(f"not an exact quantity: {value!r}")


def _pi_power_bounds(n: int) -> tuple[Fraction, Fraction]:
    return PI_LO**n, PI_HI**n


def mixed_cmp(a: QuantityLike, b: QuantityLike) -> int:
    """Exact three-way comparison even across different powers of pi.

    Uses a certified rational enclosure of pi. Because pi is transcendental,
    ``p*pi**s == q*pi**t`` with ``s != t`` only when both sides vanish, so the
    enclosure always separates the two values unless they are astronomically
    close, in which case :class:`UnitError` is raised.
    """
    a, b = as_quantity(a), as_quantity(b)
    if a.pi_power == b.pi_power or a.is_zero() or b.is_zero():
        lhs, rhs = a.coeff, b.coeff
        return (lhs > rhs) - (lhs < rhs)
    # shift so the smaller power is zero; compare a.coeff*pi^d against b.coeff
    if a.pi_power > b.pi_power:
        return -mixed_cmp(b, a)
    d = b.pi_power - a.pi_power
    lo, hi = _pi_power_bounds(d)
    b_lo, b_hi = sorted((b.coeff * lo, b.coeff * hi))
    if a.coeff < b_lo:
        return -1
    if a.coeff > b_hi:
        return 1
    raise UnitError(f"cannot separate {a} and {b} with the available pi enclosure")


def exact_sqrt(value: ExactQuantity) -> ExactQuantity | None:
    """Square root if it is again an exact quantity, else ``None``."""
    if value.coeff < 0 or value.pi_power % 2:
        return None
    num, den = value.coeff.numerator, value.coeff.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return ExactQuantity(Fraction(rn, rd), value.pi_power // 2)

"""Lazily enumerated ECH capacity sequences.

The basic object is ``N(a, b)``: every value ``m*a + n*b`` with ``m, n >= 0``,
listed with multiplicity in nondecreasing order starting at index 0. The disk
cotangent bundles of the round sphere and projective plane have capacities

    D*S^2  : 2pi * (multiples of 2 in N(1, 1))
    D*RP^2 :  pi * (multiples of 4 in N(1, 1))

All sequences share an append-only prefix cache, so repeated random access
does not redo the enumeration.
"""

from __future__ import annotations

import heapq
import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DomainError, ExhaustionError, UnitError
from .exact import PI, ExactQuantity, QuantityLike, as_quantity

__all__ = [
    "CapacitySequence",
    "Combos",
    "Filtered",
    "Scaled",
    "Explicit",
    "combos",
    "nseq_prefix",
    "nseq_kth",
    "filter_multiples",
    "scale_seq",
    "ellipsoid_capacities",
    "ball_capacities",
    "dstar_capacities",
    "SURFACES",
]

SURFACES = ("S2", "RP2")


class CapacitySequence:
    """Nondecreasing sequence ``c_0 = 0 <= c_1 <= ...`` with a grow-only cache.

    Subclasses implement :meth:`_grow`, which appends at least one term to
    ``self._cache`` or raises :class:`ExhaustionError`. Reads below the cached
    length never take the lock; growth is serialised.
    """

    rule = "abstract"

    def __init__(self) -> None:
        self._cache: list[ExactQuantity] = []
        self._lock = threading.Lock()

    def _grow(self, n: int) -> None:
        raise NotImplementedError

    def _ensure(self, n: int) -> None:
        if len(self._cache) >= n:
            return
        with self._lock:
            while len(self._cache) < n:
                before = len(self._cache)
                self._grow(n)
                if len(self._cache) == before:
                    raise ExhaustionError(f"{self!r} has only {before} terms")

    def term(self, k: int) -> ExactQuantity:
        if k < 0:
            raise DomainError(f"index must be nonnegative, got {k}")
        self._ensure(k + 1)
        return self._cache[k]

    def prefix(self, n: int) -> list[ExactQuantity]:
        if n < 0:
            raise DomainError(f"count must be nonnegative, got {n}")
        self._ensure(n)
        return self._cache[:n]

    def __getitem__(self, k: int) -> ExactQuantity:
        return self.term(k)

    def __iter__(self) -> Iterator[ExactQuantity]:
        k = 0
        while True:
            try:
                yield self.term(k)
            except ExhaustionError:
                return
            k += 1

    @property
    def materialized(self) -> int:
        """Number of cached terms."""
        return len(self._cache)

    @property
    def pi_power(self) -> int:
        """Unit of the nonzero terms (taken from ``term(1)``)."""
        return self.term(1).pi_power


class Combos(CapacitySequence):
    """``N(a, b)`` by a lazy k-way merge of the rows ``{m*a + n*b : n >= 0}``.

    Values are mapped to integers over a common denominator so the heap
    compares plain ints. Row ``m + 1`` is activated only when the head of row
    ``m`` is popped, so the heap never holds more than ``O(k)`` entries. Ties
    are broken by ``(m, n)`` lexicographically.
    """

    rule = "combos"

    def __init__(self, a: QuantityLike, b: QuantityLike) -> None:
        super().__init__()
        a, b = as_quantity(a), as_quantity(b)
        if a.coeff <= 0 or b.coeff <= 0:
            raise DomainError(f"N(a, b) needs a, b > 0, got a={a}, b={b}")
        if a.pi_power != b.pi_power:
            raise UnitError(f"N(a, b) needs a common unit, got a={a}, b={b}")
        self.a, self.b = a, b
        den = math.lcm(a.denominator, b.denominator)
        self._den = den
        self._step_a = a.numerator * (den // a.denominator)
        self._step_b = b.numerator * (den // b.denominator)
        self._unit = a.pi_power
        self._heap: list[tuple[int, int, int]] = [(0, 0, 0)]
        # (m, n) pair that produced each cached term
        self.indices: list[tuple[int, int]] = []
        self._values: dict[int, ExactQuantity] = {}

    def _grow(self, n: int) -> None:
        heap, cache, indices, values = self._heap, self._cache, self.indices, self._values
        sa, sb, den, unit = self._step_a, self._step_b, self._den, self._unit
        pop, push = heapq.heappop, heapq.heappush
        while len(cache) < n:
            v, m, k = pop(heap)
            push(heap, (v + sb, m, k + 1))
            if k == 0:
                push(heap, (v + sa, m + 1, 0))
            q = values.get(v)
            if q is None:
                q = values[v] = ExactQuantity(Fraction(v, den), unit)
            cache.append(q)
            indices.append((m, k))

    def __repr__(self) -> str:
        return f"N({self.a}, {self.b})"


class Filtered(CapacitySequence):
    """Subsequence of the terms of ``base`` that are integer multiples of ``j``.

    Only defined when every term of ``base`` has an integer coefficient; the
    divisibility test is made on that integer.
    """

    rule = "filtered"

    def __init__(self, base: CapacitySequence, j: int) -> None:
        super().__init__()
        if not isinstance(j, int) or j < 1:
            raise DomainError(f"filter modulus must be a positive integer, got {j!r}")
        self.base, self.j = base, j
        self._cursor = 0

    def _grow(self, n: int) -> None:
        base, j, cache = self.base, self.j, self._cache
        chunk = 64 + j * (n - len(cache))
        while len(cache) < n:
            try:
                base._ensure(self._cursor + chunk)
            except ExhaustionError:
                pass
            window = base._cache[self._cursor : self._cursor + chunk]
            if not window:
                return
            for value in window:
                self._cursor += 1
                if value.denominator != 1:
                    raise DomainError(f"cannot filter non-integral term {value} of {base!r}")
                if value.numerator % j == 0:
                    cache.append(value)
                    if len(cache) == n:
                        return

    def __repr__(self) -> str:
        return f"M_{self.j}({self.base!r})"


class Scaled(CapacitySequence):
    """Term-wise product ``lam * base``."""

    rule = "scaled"

    def __init__(self, base: CapacitySequence, lam: QuantityLike) -> None:
        super().__init__()
        lam = as_quantity(lam)
        if lam.coeff <= 0:
            raise DomainError(f"scale factor must be positive, got {lam}")
        self.base, self.lam = base, lam
        self._products: dict[ExactQuantity, ExactQuantity] = {}

    def _grow(self, n: int) -> None:
        self.base._ensure(n)
        products, lam = self._products, self.lam
        for v in self.base._cache[len(self._cache) : n]:
            q = products.get(v)
            if q is None:
                q = products[v] = v * lam
            self._cache.append(q)

    def __repr__(self) -> str:
        return f"{self.lam}*{self.base!r}"


class Explicit(CapacitySequence):
    """A finite, user-supplied nondecreasing list starting at 0."""

    rule = "explicit"

    def __init__(self, values: Sequence[QuantityLike]) -> None:
        super().__init__()
        vals = [as_quantity(v) for v in values]
        if not vals or not vals[0].is_zero():
            raise DomainError("an explicit capacity list must start with 0")
        for k in range(len(vals) - 1):
            if vals[k] > vals[k + 1]:
                raise DomainError(f"explicit list decreases at index {k}")
        self._values = vals

    def _grow(self, n: int) -> None:
        self._cache[:] = self._values

    def __repr__(self) -> str:
        return f"Explicit({[str(v) for v in self._values]})"


@lru_cache(maxsize=None)
def _combos_cached(a: ExactQuantity, b: ExactQuantity) -> Combos:
    return Combos(a, b)


def combos(a: QuantityLike, b: QuantityLike) -> Combos:
    """Shared ``N(a, b)`` instance (one prefix cache per distinct pair)."""
    a, b = as_quantity(a), as_quantity(b)
    if a.coeff <= 0 or b.coeff <= 0:
        raise DomainError(f"N(a, b) needs a, b > 0, got a={a}, b={b}")
    if a.pi_power != b.pi_power:
        raise UnitError(f"N(a, b) needs a common unit, got a={a}, b={b}")
    return _combos_cached(a, b)


def nseq_prefix(a: QuantityLike, b: QuantityLike, n: int) -> list[ExactQuantity]:
    """First ``n`` terms of ``N(a, b)``, with multiplicity."""
    if n < 1:
        raise DomainError(f"count must be at least 1, got {n}")
    return combos(a, b).prefix(n)


def nseq_kth(a: QuantityLike, b: QuantityLike, k: int) -> ExactQuantity:
    """``N(a, b)_k`` in ``O(k log k)`` time and ``O(k)`` memory."""
    return combos(a, b).term(k)


def filter_multiples(base: CapacitySequence, j: int, n: int) -> list[ExactQuantity]:
    return Filtered(base, j).prefix(n)


def scale_seq(base: CapacitySequence, lam: QuantityLike) -> Scaled:
    return Scaled(base, lam)


def ellipsoid_capacities(a: QuantityLike, b: QuantityLike) -> Combos:
    """ECH capacities of the ellipsoid ``E(a, b)``, which are ``N(a, b)``."""
    return combos(a, b)


def ball_capacities(a: QuantityLike) -> Combos:
    return combos(a, a)


def dstar_capacities(surface: str) -> CapacitySequence:
    """Capacities of the unit disk cotangent bundle of ``"S2"`` or ``"RP2"``.

    Aliases such as ``"dstar-s2"`` resolve to the same shared instance.
    """
    key = surface.upper().replace("*", "").replace("DSTAR-", "").replace("-", "")
    if key not in SURFACES:
        raise DomainError(f"unknown surface {surface!r}; expected one of {SURFACES}")
    return _dstar_cached(key)


@lru_cache(maxsize=None)
def _dstar_cached(key: str) -> CapacitySequence:
    unit = combos(1, 1)
    if key == "S2":
        return Scaled(Filtered(unit, 2), 2 * PI)
    return Scaled(Filtered(unit, 4), PI)

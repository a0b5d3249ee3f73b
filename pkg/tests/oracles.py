"""Independent reference implementations used only by the tests.

Everything here is deliberately naive: plain sorting, box enumeration and
closed forms, sharing no code with the package.
"""

from __future__ import annotations

import math
from fractions import Fraction


def brute_combos(a: Fraction, b: Fraction, n: int) -> list[Fraction]:
    """First ``n`` values of ``{m*a + k*b}`` by enumerating a box and sorting."""
    a, b = Fraction(a), Fraction(b)
    # every value <= cutoff needs m <= cutoff/a and k <= cutoff/b; grow until n fit
    cutoff = max(a, b)
    while True:
        vals = [m * a + k * b for m in range(int(cutoff / a) + 1) for k in range(int(cutoff / b) + 1)]
        vals = sorted(v for v in vals if v <= cutoff)
        if len(vals) >= n:
            return vals[:n]
        cutoff *= 2


def brute_multiples(values: list[Fraction], j: int) -> list[Fraction]:
    return [v for v in values if v.denominator == 1 and v.numerator % j == 0]


def count_up_to(t: int) -> int:
    """``#{(m, n) : m + n <= t}``."""
    return (t + 1) * (t + 2) // 2


def grading_s3(m1: int, m2: int) -> int:
    return (m1 + m2) ** 2 + m1 + 3 * m2


def grading_sstar_s2(m1: int, m2: int) -> Fraction:
    return Fraction((m1 + m2) ** 2, 2) + 2 * m2


def grading_sstar_rp2(m1: int, m2: int) -> Fraction:
    return Fraction((m1 + m2) ** 2, 4) - Fraction(m1, 2) + Fraction(3 * m2, 2)


GRADINGS = {"S3": (grading_s3, 1), "SstarS2": (grading_sstar_s2, 2), "SstarRP2": (grading_sstar_rp2, 4)}


def brute_generators(model: str, max_grading: int, box: int = 80) -> list[tuple[int, int]]:
    """Nullhomologous ``(m1, m2)`` in a box, sorted by (grading, m2), grading capped."""
    fn, mod = GRADINGS[model]
    gens = [(fn(m1, m2), m2, (m1, m2)) for m1 in range(box) for m2 in range(box) if (m1 + m2) % mod == 0]
    gens = [g for g in gens if g[0] <= max_grading]
    gens.sort()
    return [g[2] for g in gens]


def unperturbed_roots(h: float, j: float) -> tuple[float, float]:
    sh, d = math.sqrt(h), math.sqrt(h - j * j)
    return (sh - d) / abs(j), (sh + d) / abs(j)


def unperturbed_action(h: float, j: float) -> float:
    return 2.0 * math.pi * (math.sqrt(h) - abs(j))


def hemisphere_action(j: float) -> float:
    return math.pi * (1.0 - abs(j))


def chebyshev_signed(n: int = 33) -> list[float]:
    """``(-1)^k cos((2k-1) pi / (4n))`` for ``k = 1..n``: positive Chebyshev nodes with alternating sign."""
    return [(-1) ** k * math.cos((2 * k - 1) * math.pi / (4 * n)) for k in range(1, n + 1)]

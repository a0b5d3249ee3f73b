"""Capacity obstructions and Gromov widths of the disk cotangent bundles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .capseq import CapacitySequence, ball_capacities, combos, dstar_capacities
from .errors import CertificateError, DomainError, UnitError
from .exact import PI, ExactQuantity, QuantityLike, as_quantity, exact_sqrt, mixed_cmp

__all__ = [
    "Dominance",
    "CapacityBound",
    "Embedding",
    "WidthCertificate",
    "EMBEDDINGS",
    "VOLUMES",
    "dominates",
    "gromov_width_capacity_bound",
    "gromov_width_volume_bound",
    "exact_volume_bound",
    "gromov_width",
    "volume_from_capacities",
]

DEFAULT_K = 100


@dataclass(frozen=True)
class Dominance:
    """Outcome of a term-by-term capacity comparison.

    Truthy when every inner term is at most the outer one; otherwise ``k`` is
    the smallest witness index.
    """

    holds: bool
    k: int | None = None
    inner: ExactQuantity | None = None
    outer: ExactQuantity | None = None

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        if self.holds:
            return "holds"
        return f"fails_at k={self.k}: {self.inner} > {self.outer}"


def _nonzero_unit(seq: CapacitySequence, upto: int) -> int | None:
    for k in range(1, upto + 1):
        v = seq.term(k)
        if not v.is_zero():
            return v.pi_power
    return None


def dominates(
    inner: CapacitySequence,
    outer: CapacitySequence,
    K: int,
    *,
    mixed_units: bool = False,
) -> Dominance:
    """Check ``inner.term(k) <= outer.term(k)`` for ``0 <= k <= K``.

    This is the necessary condition for a symplectic embedding
    ``inner -> outer``. Sequences in different units (say ``N(7, 7)`` against
    multiples of pi) raise :class:`UnitError` unless ``mixed_units`` is set, in
    which case terms are compared exactly through a certified enclosure of pi.
    """
    if K < 1:
        raise DomainError(f"K must be at least 1, got {K}")
    ui, uo = _nonzero_unit(inner, K), _nonzero_unit(outer, K)
    if not mixed_units and ui is not None and uo is not None and ui != uo:
        raise UnitError(f"{inner!r} is in pi^{ui} but {outer!r} is in pi^{uo}")
    for k in range(K + 1):
        a, b = inner.term(k), outer.term(k)
        if mixed_cmp(a, b) > 0:
            return Dominance(False, k, a, b)
    return Dominance(True)


class CapacityBound(NamedTuple):
    value: ExactQuantity
    k: int


def gromov_width_capacity_bound(target: CapacitySequence, K: int = DEFAULT_K) -> CapacityBound:
    """Upper bound ``min_{1<=k<=K} c_k(target) / N(1,1)_k`` for the Gromov width.

    Since ``c_k(B(a)) = a * N(1,1)_k``, a ball ``B(a)`` embedding into the
    target forces ``a`` below every ratio. The smallest ``k`` attaining the
    minimum is reported.
    """
    if K < 1:
        raise DomainError(f"K must be at least 1, got {K}")
    unit = combos(1, 1)
    best: CapacityBound | None = None
    for k in range(1, K + 1):
        ratio = target.term(k) / unit.term(k)
        if best is None or ratio < best.value:
            best = CapacityBound(ratio, k)
    return best


def gromov_width_volume_bound(volume: QuantityLike | float) -> float:
    """``sqrt(2 * volume)``: the largest ball with volume ``a^2 / 2`` that fits."""
    v = float(volume)
    if v <= 0:
        raise DomainError(f"volume must be positive, got {volume}")
    return math.sqrt(2.0 * v)


def exact_volume_bound(volume: QuantityLike) -> ExactQuantity | None:
    """Exact ``sqrt(2 * volume)`` when it is a rational multiple of a power of pi."""
    return exact_sqrt(2 * as_quantity(volume))


# Symplectic volumes (= areas of the moment images): the square [0, 2pi]^2 for
# the punctured sphere and half of it for RP^2.
VOLUMES: dict[str, ExactQuantity] = {
    "S2": ExactQuantity(Fraction(4), 2),
    "RP2": ExactQuantity(Fraction(2), 2),
}


@dataclass(frozen=True)
class Embedding:
    """A known embedding ``int(source) -> D*target``."""

    label: str
    kind: str  # "ball", "ellipsoid" or "polydisk"
    params: tuple[ExactQuantity, ...]
    target: str
    reason: str


_2PI, _4PI = 2 * PI, 4 * PI

EMBEDDINGS: tuple[Embedding, ...] = (
    Embedding("hemisphere-ball", "ball", (_2PI,), "S2", "D* of an open hemisphere is symplectomorphic to int B(2pi)"),
    Embedding("hemisphere-ball-rp2", "ball", (_2PI,), "RP2", "D* of an open hemisphere embeds in D*RP2 (volume filling)"),
    Embedding("ellipsoid-via-polydisk", "ellipsoid", (_2PI, _4PI), "S2", "int E(2pi,4pi) -> int P(2pi,2pi) -> D*S2"),
    Embedding("punctured-sphere-polydisk", "polydisk", (_2PI, _2PI), "S2", "D* of the punctured sphere is symplectomorphic to int P(2pi,2pi)"),
)


@dataclass(frozen=True)
class WidthCertificate:
    surface: str
    value: ExactQuantity
    upper: ExactQuantity
    upper_method: str
    upper_k: int | None
    lower: ExactQuantity
    lower_source: Embedding

    def lines(self) -> list[str]:
        if self.upper_method == "capacity":
            upper = f"upper: c_{self.upper_k} ratio at k={self.upper_k}"
        else:
            upper = f"upper: volume sqrt(2*{VOLUMES[self.surface]}) = {self.upper}"
        lower = f"lower: int B({self.lower}) embeds ({self.lower_source.label})"
        return [str(self.value), upper, lower]


def _normalize_surface(surface: str) -> str:
    key = surface.upper().replace("DSTAR-", "").replace("*", "").replace("-", "")
    if key not in VOLUMES:
        raise DomainError(f"unknown surface {surface!r}")
    return key


def gromov_width(surface: str, K: int = DEFAULT_K) -> WidthCertificate:
    """Gromov width of ``D*surface`` with matching upper and lower certificates.

    Upper bound: the capacity ratio for S2 (attained at k = 3), the volume
    bound for RP2. Lower bound: the largest registered ball embedding.
    """
    key = _normalize_surface(surface)
    if key == "S2":
        bound = gromov_width_capacity_bound(dstar_capacities(key), K)
        upper, method, upper_k = bound.value, "capacity", bound.k
    else:
        upper = exact_volume_bound(VOLUMES[key])
        method, upper_k = "volume", None
        if upper is None:
            raise CertificateError(f"volume bound for {key} is not exact")
    balls = [e for e in EMBEDDINGS if e.target == key and e.kind == "ball"]
    if not balls:
        raise CertificateError(f"no registered ball embedding into D*{key}")
    source = max(balls, key=lambda e: e.params[0])
    lower = source.params[0]
    if upper != lower:
        raise CertificateError(f"D*{key}: upper bound {upper} != lower bound {lower}")
    return WidthCertificate(key, upper, upper, method, upper_k, lower, source)


def volume_from_capacities(seq: CapacitySequence, k: int) -> float:
    """``c_k^2 / (4k)``, which tends to the symplectic volume as ``k -> oo``."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    return float(seq.term(k)) ** 2 / (4 * k)

"""Combinatorial ECH chain complexes of three Zoll contact manifolds.

After a Morse-Bott perturbation with a perfect Morse function on the orbit
space, each model has two elliptic orbits ``g1``, ``g2`` (minimum and maximum)
and chain generators ``g1^m1 g2^m2``. All generators are elliptic, so the
differential vanishes and ECH is the chain complex itself. The three models
differ only in a handful of constants:

=========  ========  ===========  =======  ==========================
model      CZ slope  action unit  H_1      grading  I(a, empty)
=========  ========  ===========  =======  ==========================
S3         4         1            0        (m1+m2)^2 + m1 + 3 m2
S*S2       2         2pi          Z/2      (m1+m2)^2 / 2 + 2 m2
S*RP2      2         pi           Z/4      (m1+m2)^2 / 4 - m1/2 + 3 m2/2
=========  ========  ===========  =======  ==========================

The index is computed twice: assembled from relative Chern, self-intersection and Conley-Zehnder sums, and
from the closed form. :func:`ech_index` insists they agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    GradingUndefinedError,
    HomologyMismatchError,
    ModelConsistencyError,
)
from .exact import PI, ExactQuantity

__all__ = [
    "OrbitSet",
    "ZollModel",
    "IndexPair",
    "S3",
    "SSTAR_S2",
    "SSTAR_RP2",
    "MODELS",
    "get_model",
    "homology_class",
    "cz_total",
    "index_components",
    "closed_form_index",
    "ech_index",
    "grading",
    "action",
    "generators_by_grading",
    "u_map",
    "spectrum",
]

EMPTY_NAME = "1"


@dataclass(frozen=True, order=True)
class OrbitSet:
    """Orbit set ``g1^m1 g2^m2``; ``(0, 0)`` is the empty set."""

    m1: int
    m2: int

    def __post_init__(self) -> None:
        for m in (self.m1, self.m2):
            if not isinstance(m, int) or m < 0:
                raise DomainError(f"multiplicities must be nonnegative integers, got {self}")

    @classmethod
    def of(cls, value: "OrbitSet | tuple[int, int] | str") -> "OrbitSet":
        if isinstance(value, OrbitSet):
            return value
        if isinstance(value, str):
            try:
                m1, m2 = (int(p) for p in value.split(","))
            except ValueError:
                raise DomainError(f"orbit set must look like 'm1,m2', got {value!r}") from None
            return cls(m1, m2)
        m1, m2 = value
        return cls(int(m1), int(m2))

    @property
    def total(self) -> int:
        return self.m1 + self.m2

    def is_empty(self) -> bool:
        return self.m1 == 0 and self.m2 == 0

    def __iter__(self):
        yield self.m1
        yield self.m2

    def __str__(self) -> str:
        if self.is_empty():
            return EMPTY_NAME
        parts = []
        for name, m in (("g1", self.m1), ("g2", self.m2)):
            if m == 1:
                parts.append(name)
            elif m > 1:
                parts.append(f"{name}^{m}")
        return " ".join(parts)


@dataclass(frozen=True)
class ZollModel:
    """Constants selecting one of the three chain-complex models.

    ``grading_form = (A, B, C)`` gives ``I(a, empty) = A*M^2 + B*m1 + C*m2``
    with ``M = m1 + m2``. ``chern_slope`` and ``self_intersection_form = (s, x)`` give
    ``chern_term = chern_slope * (M - N)`` and
    ``self_intersection_term = q(alpha) - q(beta)`` with ``q(m) = s*(m1^2 + m2^2) + x*m1*m2``.
    ``u_drop`` is the multiplicity lost when ``U`` turns ``g1^i`` into
    ``g2^(i - u_drop)``.
    """

    name: str
    cz_slope: int
    action_unit: ExactQuantity
    homology_modulus: int
    grading_form: tuple[Fraction, Fraction, Fraction]
    chern_slope: Fraction
    self_intersection_form: tuple[Fraction, Fraction]
    u_drop: int

    def __str__(self) -> str:
        return self.name


F = Fraction

S3 = ZollModel(
    name="S3",
    cz_slope=4,
    action_unit=ExactQuantity(1),
    homology_modulus=1,
    grading_form=(F(1), F(1), F(3)),
    chern_slope=F(0),
    self_intersection_form=(F(-1), F(2)),
    u_drop=1,
)
SSTAR_S2 = ZollModel(
    name="SstarS2",
    cz_slope=2,
    action_unit=2 * PI,
    homology_modulus=2,
    grading_form=(F(1, 2), F(0), F(2)),
    chern_slope=F(0),
    self_intersection_form=(F(-1, 2), F(1)),
    u_drop=2,
)
SSTAR_RP2 = ZollModel(
    name="SstarRP2",
    cz_slope=2,
    action_unit=PI,
    homology_modulus=4,
    grading_form=(F(1, 4), F(-1, 2), F(3, 2)),
    chern_slope=F(-1, 2),
    self_intersection_form=(F(-3, 4), F(1, 2)),
    u_drop=4,
)

MODELS = {m.name: m for m in (S3, SSTAR_S2, SSTAR_RP2)}
_ALIASES = {
    "s3": S3,
    "sstars2": SSTAR_S2,
    "sstar-s2": SSTAR_S2,
    "s*s2": SSTAR_S2,
    "sstarrp2": SSTAR_RP2,
    "sstar-rp2": SSTAR_RP2,
    "s*rp2": SSTAR_RP2,
}


def get_model(model: "ZollModel | str") -> ZollModel:
    if isinstance(model, ZollModel):
        return model
    try:
        return _ALIASES[model.lower()]
    except KeyError:
        raise DomainError(f"unknown model {model!r}; expected s3, sstar-s2 or sstar-rp2") from None


def homology_class(model: ZollModel | str, alpha) -> int:
    model, alpha = get_model(model), OrbitSet.of(alpha)
    return alpha.total % model.homology_modulus


def cz_total(model: ZollModel | str, alpha) -> int:
    """``sum_k CZ(g1^k) + sum_k CZ(g2^k)`` with ``CZ(g1^k) = s*k - 1``, ``CZ(g2^k) = s*k + 1``."""
    model, alpha = get_model(model), OrbitSet.of(alpha)
    s = model.cz_slope
    return sum(s * k - 1 for k in range(1, alpha.m1 + 1)) + sum(
        s * k + 1 for k in range(1, alpha.m2 + 1)
    )


def _cz_closed(model: ZollModel, alpha: OrbitSet) -> int:
    s, m1, m2 = model.cz_slope, alpha.m1, alpha.m2
    return s * (m1 * (m1 + 1) + m2 * (m2 + 1)) // 2 - m1 + m2


@dataclass(frozen=True)
class IndexPair:
    """The four terms whose signed sum ``chern + self_intersection + CZ(alpha) - CZ(beta)`` is the index."""

    chern_term: Fraction
    self_intersection_term: Fraction
    cz_sum_alpha: int
    cz_sum_beta: int

    @property
    def total(self) -> Fraction:
        return self.chern_term + self.self_intersection_term + self.cz_sum_alpha - self.cz_sum_beta

    @property
    def index(self) -> int:
        total = self.total
        if total.denominator != 1:
            raise ModelConsistencyError(f"assembled ECH index {total} is not an integer")
        return total.numerator


def _check_same_class(model: ZollModel, alpha: OrbitSet, beta: OrbitSet) -> None:
    mod = model.homology_modulus
    ca, cb = alpha.total % mod, beta.total % mod
    if ca != cb:
        raise HomologyMismatchError(
            f"{alpha} (class {ca}) and {beta} (class {cb}) are not homologous in {model}"
        )


def _q(model: ZollModel, m: OrbitSet) -> Fraction:
    sq, cross = model.self_intersection_form
    return sq * (m.m1**2 + m.m2**2) + cross * m.m1 * m.m2


def _scaled_coeffs(model: ZollModel) -> tuple[int, ...]:
    """All rational model constants times 4, as ints (every denominator divides 4)."""
    vals = (model.chern_slope, *model.self_intersection_form, *model.grading_form)
    scaled = tuple(4 * v for v in vals)
    if any(v.denominator != 1 for v in scaled):
        raise ModelConsistencyError(f"{model}: constants are not quarter-integers")
    return tuple(v.numerator for v in scaled)


_SCALED: dict[str, tuple[int, ...]] = {}


def _index_times_four(model: ZollModel, alpha: OrbitSet, beta: OrbitSet) -> tuple[int, int]:
    """``(4 * assembled index, 4 * closed form)`` in integer arithmetic."""
    k = _SCALED.get(model.name)
    if k is None:
        k = _SCALED[model.name] = _scaled_coeffs(model)
    c4, s4, x4, a4, b4, cc4 = k
    m1, m2, n1, n2 = alpha.m1, alpha.m2, beta.m1, beta.m2
    d = m1 + m2 - n1 - n2
    assembled = (
        c4 * d
        + s4 * (m1 * m1 + m2 * m2 - n1 * n1 - n2 * n2)
        + x4 * (m1 * m2 - n1 * n2)
        + 4 * (_cz_closed(model, alpha) - _cz_closed(model, beta))
    )
    closed = a4 * d * d + 2 * a4 * d * (n1 + n2) + b4 * (m1 - n1) + cc4 * (m2 - n2)
    return assembled, closed


def index_components(model: ZollModel | str, alpha, beta) -> IndexPair:
    """The terms of the index, with the CZ sums taken term by term."""
    model = get_model(model)
    alpha, beta = OrbitSet.of(alpha), OrbitSet.of(beta)
    _check_same_class(model, alpha, beta)
    return IndexPair(
        chern_term=model.chern_slope * (alpha.total - beta.total),
        self_intersection_term=_q(model, alpha) - _q(model, beta),
        cz_sum_alpha=cz_total(model, alpha),
        cz_sum_beta=cz_total(model, beta),
    )


def closed_form_index(model: ZollModel | str, alpha, beta) -> Fraction:
    """``A (M-N)^2 + 2A (M-N) N + B (m1-n1) + C (m2-n2)`` in the model's coefficients."""
    model = get_model(model)
    alpha, beta = OrbitSet.of(alpha), OrbitSet.of(beta)
    a, b, c = model.grading_form
    d = alpha.total - beta.total
    return a * d * d + 2 * a * d * beta.total + b * (alpha.m1 - beta.m1) + c * (alpha.m2 - beta.m2)


def ech_index(model: ZollModel | str, alpha, beta) -> int:
    """``I(alpha, beta)``, assembled from its terms and checked against the closed form.

    The CZ sums here use their closed form; :func:`cz_total` keeps the literal
    sum and the test suite ties the two together.
    """
    model = get_model(model)
    alpha, beta = OrbitSet.of(alpha), OrbitSet.of(beta)
    _check_same_class(model, alpha, beta)
    assembled, closed = _index_times_four(model, alpha, beta)
    if assembled != closed:
        raise ModelConsistencyError(
            f"{model}: assembled index {Fraction(assembled, 4)} != closed form {Fraction(closed, 4)} for ({alpha}, {beta})"
        )
    if assembled % 4:
        raise ModelConsistencyError(f"{model}: index {Fraction(assembled, 4)} of ({alpha}, {beta}) is not an integer")
    return assembled // 4


def grading(model: ZollModel | str, alpha) -> int:
    """Absolute grading ``|alpha| = I(alpha, empty)`` on the class of the empty set."""
    model, alpha = get_model(model), OrbitSet.of(alpha)
    if homology_class(model, alpha) != 0:
        raise GradingUndefinedError(f"{alpha} is not nullhomologous in {model}")
    a, b, c = model.grading_form
    value = a * alpha.total**2 + b * alpha.m1 + c * alpha.m2
    if value.denominator != 1 or value < 0 or value % 2:
        raise ModelConsistencyError(f"{model}: grading of {alpha} is {value}, not a nonnegative even integer")
    return value.numerator


def action(model: ZollModel | str, alpha) -> ExactQuantity:
    model, alpha = get_model(model), OrbitSet.of(alpha)
    return model.action_unit * alpha.total


def generators_by_grading(model: ZollModel | str, max_grading: int) -> list[OrbitSet]:
    """Nullhomologous generators with grading ``<= max_grading``, in grading order.

    Enumerates by total multiplicity ``M`` (a multiple of the homology modulus)
    and checks that the gradings hit every even number exactly once.
    """
    model = get_model(model)
    if max_grading < 0 or max_grading % 2:
        raise DomainError(f"max_grading must be a nonnegative even integer, got {max_grading}")
    a, b, _ = model.grading_form
    found: list[tuple[int, int, OrbitSet]] = []
    total = 0
    # the lowest grading with total M is A*M^2 + B*M (all in g1), increasing in M
    while a * total * total + b * total <= max_grading:
        for m2 in range(total + 1):
            alpha = OrbitSet(total - m2, m2)
            g = grading(model, alpha)
            if g <= max_grading:
                found.append((g, m2, alpha))
        total += model.homology_modulus
    found.sort(key=lambda t: (t[0], t[1]))
    gradings = [g for g, _, _ in found]
    expected = list(range(0, max_grading + 1, 2))
    if gradings != expected:
        raise ModelConsistencyError(
            f"{model}: gradings {gradings[:12]}... are not a bijection onto 0, 2, ..., {max_grading}"
        )
    return [alpha for _, _, alpha in found]


def u_map(model: ZollModel | str, alpha) -> OrbitSet:
    """The U map on nullhomologous generators; lowers grading by 2.

    ``g1^i g2^j -> g1^(i+1) g2^(j-1)`` when ``j > 0`` and
    ``g1^i -> g2^(i - u_drop)`` otherwise. For S3 the drop is 1: this is the
    map forced by the grading order ``1, g1, g2, g1^2, g1 g2, g2^2, ...``.
    """
    model, alpha = get_model(model), OrbitSet.of(alpha)
    if homology_class(model, alpha) != 0:
        raise GradingUndefinedError(f"U is only modelled on the nullhomologous class; got {alpha}")
    if alpha.is_empty():
        raise DomainError("U is not defined on the empty orbit set")
    if alpha.m2 > 0:
        return OrbitSet(alpha.m1 + 1, alpha.m2 - 1)
    return OrbitSet(0, alpha.m1 - model.u_drop)


def spectrum(model: ZollModel | str, n: int) -> list[ExactQuantity]:
    """``c_k`` for ``k < n``: the action of the unique generator of grading ``2k``."""
    model = get_model(model)
    if n < 1:
        raise DomainError(f"count must be at least 1, got {n}")
    return [action(model, alpha) for alpha in generators_by_grading(model, 2 * (n - 1))]

"""Action coordinates of the perturbed geodesic flow on the round sphere.

In stereographic coordinates ``x`` with momenta ``y`` the system is

    H(x, y) = |y|^2 (1 + |x|^2)^2 / 4 + eps / (barrier - |x|^2)
    J(x, y) = x1*y2 - x2*y1

and the two commute. On the level ``H = h`` with ``J = j`` the radial motion
is governed by the effective potential

    V(r) = j^2 (1 + r^2)^2 / (4 r^2) + eps / (barrier - r^2),

and the two action coordinates are a radial action plus a winding term that
depends only on the sign of ``j``. Sweeping ``j`` over ``(-1, 1)`` at ``h = 1``
traces the boundary of the moment image. As ``eps -> 0`` the image tends to
the square ``[0, 2pi]^2`` when ``barrier = 1/sqrt(eps)`` and to the triangle under
``x + y = 2pi`` when ``barrier = 1``.

Radial quantities are worked out in ``u = r^2``, where ``V`` is convex.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, GeometryError, NoRootError, NumericalInstabilityError

__all__ = [
    "PerturbParams",
    "PhasePoint",
    "CurveSample",
    "PlanarCurve",
    "ConvergenceReport",
    "SampleConvergence",
    "DEFAULT_LADDER",
    "hamiltonian",
    "angular_momentum",
    "poisson_bracket_check",
    "potential_minimum",
    "radial_roots",
    "radial_action",
    "winding_term",
    "band_edge",
    "boundary_point",
    "boundary_coordinate",
    "boundary_curve",
    "default_j_grid",
    "limit_j_grid",
    "limit_domain",
    "toric_area",
    "square_distance",
    "segment_distance",
    "analytic_radial_roots",
    "analytic_radial_action",
    "radial_antiderivative",
    "curve_to_csv",
    "curve_from_csv",
    "curve_to_records",
    "curve_to_json",
    "curve_from_json",
]

TWO_PI = 2.0 * math.pi
DEFAULT_LADDER = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
# Absolute tolerance asked of the radial quadrature.
QUAD_EPSABS = 1e-11
QUAD_LIMIT = 500


class JZeroWarning(UserWarning):
    """The winding term was evaluated at ``j = 0``, where it is extended by 0."""


@dataclass(frozen=True)
class PerturbParams:
    """Perturbation strength ``epsilon`` and squared barrier radius ``barrier``.

    ``variant`` is ``"full"`` (``barrier = 1/sqrt(epsilon)``), ``"hemisphere"``
    (``barrier = 1``) or ``"custom"``.
    """

    epsilon: float
    barrier: float
    variant: str = "custom"

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon < 1.0):
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.barrier >= 1.0:
            raise DomainError(f"barrier must be at least 1, got {self.barrier}")
        expected = {"full": 1.0 / math.sqrt(self.epsilon), "hemisphere": 1.0}.get(self.variant)
        if self.variant not in ("full", "hemisphere", "custom"):
            raise DomainError(f"unknown variant {self.variant!r}")
        if expected is not None and abs(self.barrier - expected) > 1e-12 * max(1.0, expected):
            raise DomainError(f"{self.variant} variant needs barrier = {expected}, got {self.barrier}")

    @classmethod
    def full(cls, epsilon: float) -> "PerturbParams":
        return cls(epsilon, 1.0 / math.sqrt(epsilon), "full")

    @classmethod
    def hemisphere(cls, epsilon: float) -> "PerturbParams":
        return cls(epsilon, 1.0, "hemisphere")

    @classmethod
    def custom(cls, epsilon: float, barrier: float) -> "PerturbParams":
        return cls(epsilon, barrier, "custom")

    @classmethod
    def of_variant(cls, variant: str, epsilon: float) -> "PerturbParams":
        if variant == "full":
            return cls.full(epsilon)
        if variant == "hemisphere":
            return cls.hemisphere(epsilon)
        raise DomainError(f"variant must be 'full' or 'hemisphere', got {variant!r}")


@dataclass(frozen=True)
class PhasePoint:
    x: tuple[float, float]
    y: tuple[float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", (float(self.x[0]), float(self.x[1])))
        object.__setattr__(self, "y", (float(self.y[0]), float(self.y[1])))

    def as_array(self) -> np.ndarray:
        return np.array([*self.x, *self.y])

    @classmethod
    def from_array(cls, z: Sequence[float]) -> "PhasePoint":
        return cls((z[0], z[1]), (z[2], z[3]))


# -- the two commuting functions -------------------------------------------


def _h_array(params: PerturbParams, z: np.ndarray) -> float:
    r2 = z[0] ** 2 + z[1] ** 2
    if r2 >= params.barrier:
        raise DomainError(f"|x|^2 = {r2} is not below the barrier {params.barrier}")
    return (z[2] ** 2 + z[3] ** 2) * (1.0 + r2) ** 2 / 4.0 + params.epsilon / (params.barrier - r2)


def _j_array(z: np.ndarray) -> float:
    return z[0] * z[3] - z[1] * z[2]


def hamiltonian(params: PerturbParams, p: PhasePoint) -> float:
    return float(_h_array(params, p.as_array()))


def angular_momentum(p: PhasePoint) -> float:
    return float(_j_array(p.as_array()))


def _gradient(f, z: np.ndarray, h: float) -> np.ndarray:
    g = np.empty(4)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        g[i] = (f(z + e) - f(z - e)) / (2.0 * h)
    return g


def poisson_bracket_check(params: PerturbParams, p: PhasePoint, h: float = 1e-5) -> float:
    """Central-difference estimate of ``{H, J}`` at ``p``.

    ``{H, J} = dH/dx . dJ/dy - dH/dy . dJ/dx``. Raises :class:`DomainError`
    when a stencil point leaves ``|x|^2 < barrier``.
    """
    if not (0.0 < h <= 1e-3):
        raise DomainError(f"step must lie in (0, 1e-3], got {h}")
    z = p.as_array()
    r = math.hypot(z[0], z[1]) + h
    if r * r >= params.barrier:
        raise DomainError(f"point too close to the barrier |x|^2 = {params.barrier}")
    gh = _gradient(lambda w: _h_array(params, w), z, h)
    gj = _gradient(_j_array, z, h)
    return float(gh[0] * gj[2] + gh[1] * gj[3] - gh[2] * gj[0] - gh[3] * gj[1])


# -- radial reduction -------------------------------------------------------


def _potential_u(params: PerturbParams, j: float, u: float) -> float:
    return j * j * (1.0 + u) ** 2 / (4.0 * u) + params.epsilon / (params.barrier - u)


def _potential_u_slope(params: PerturbParams, j: float, u: float) -> float:
    return j * j * (u * u - 1.0) / (4.0 * u * u) + params.epsilon / (params.barrier - u) ** 2


def potential_minimum(params: PerturbParams, j: float) -> tuple[float, float]:
    """Minimum of the effective potential over ``u = r^2 in (0, barrier)``.

    Returns ``(value, argmin_u)``. The potential is convex in ``u`` and its
    slope changes sign inside ``(0, min(1, barrier))``, so the minimiser is the
    bracketed root of the slope. At ``j = 0`` the infimum ``eps/barrier`` is approached
    as ``u -> 0`` and ``(eps/barrier, 0.0)`` is returned.
    """
    if not math.isfinite(j):
        raise DomainError(f"j must be finite, got {j}")
    if j == 0.0:
        return params.epsilon / params.barrier, 0.0
    # the slope is positive at u = 1 when barrier > 1 and blows up as u -> barrier
    hi = 1.0 if params.barrier > 1.0 else params.barrier * (1.0 - 1e-9)
    while _potential_u_slope(params, j, hi) <= 0.0:
        hi = 0.5 * (hi + params.barrier)
        if hi >= params.barrier:
            raise NumericalInstabilityError(f"cannot bracket the potential minimum at j = {j}")
    lo = 0.5 * hi
    while _potential_u_slope(params, j, lo) >= 0.0:
        lo *= 0.5
    u = optimize.brentq(lambda t: _potential_u_slope(params, j, t), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return _potential_u(params, j, u), u


def radial_roots(params: PerturbParams, h: float, j: float) -> tuple[float, float]:
    """Turning radii ``r_min < r_max`` of the level ``V(r) = h`` inside ``(0, sqrt barrier)``.

    Raises :class:`NoRootError` below the minimum. Within ``1e-12`` of the
    minimum both radii are returned equal to ``sqrt(argmin_u)``.
    """
    if j == 0.0:
        raise DomainError("turning radii need j != 0")
    vmin, ustar = potential_minimum(params, j)
    if h < vmin - 1e-12:
        raise NoRootError(f"h = {h} is below the potential minimum {vmin} at j = {j}")
    if h <= vmin + 1e-12:
        r = math.sqrt(ustar)
        return r, r

    def f(u: float) -> float:
        return _potential_u(params, j, u) - h

    # V(u) >= j^2/(4u), so any u below j^2/(4h) is above the level.
    lo = min(ustar, j * j / (4.0 * h)) * 0.5
    while f(lo) <= 0.0:
        lo *= 0.5
    # Both terms blow up at the right: pick a point past either threshold.
    hi = min(params.barrier - params.epsilon / (2.0 * h), 8.0 * h / (j * j))
    hi = max(hi, ustar)
    while f(hi) <= 0.0:
        hi = 0.5 * (hi + params.barrier)
    tol = dict(xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    u_lo = optimize.brentq(f, lo, ustar, **tol)
    u_hi = optimize.brentq(f, ustar, hi, **tol)
    return math.sqrt(u_lo), math.sqrt(u_hi)


def radial_action(params: PerturbParams, h: float, j: float) -> tuple[float, float]:
    """``2 * integral of p_r dr`` between the turning radii, with an error estimate.

    The momentum ``p_r = 2 sqrt(h - V(r)) / (1 + r^2)`` vanishes like a square
    root at both ends; ``r = r_min + L sin^2(t)`` turns the integrand smooth
    on ``t in [0, pi/2]`` before adaptive Gauss-Kronrod quadrature.
    """
    r0, r1 = radial_roots(params, h, j)
    span = r1 - r0
    if span <= 0.0:
        return 0.0, 0.0
    eps, barrier, jj = params.epsilon, params.barrier, j * j

    def integrand(t: float) -> float:
        s, c = math.sin(t), math.cos(t)
        r = r0 + span * s * s
        u = r * r
        gap = h - jj * (1.0 + u) ** 2 / (4.0 * u) - eps / (barrier - u)
        if gap <= 0.0:
            return 0.0
        return 2.0 * math.sqrt(gap) / (1.0 + u) * 2.0 * span * s * c

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(integrand, 0.0, math.pi / 2.0, epsabs=QUAD_EPSABS, epsrel=0.0, limit=QUAD_LIMIT)
        except integrate.IntegrationWarning as exc:
            raise NumericalInstabilityError(f"radial quadrature failed at h={h}, j={j}: {exc}") from exc
    return 2.0 * value, 2.0 * err


def winding_term(i: int, j: float) -> float:
    """Winding contribution to the ``i``-th action coordinate.

    ``2 pi j`` for ``i = 2, j > 0``; ``-2 pi j`` for ``i = 1, j < 0``; 0
    otherwise. At ``j = 0`` it is extended by continuity to 0 and a
    :class:`JZeroWarning` is issued.
    """
    if i not in (1, 2):
        raise DomainError(f"coordinate index must be 1 or 2, got {i}")
    if j == 0.0:
        warnings.warn("winding term evaluated at j = 0; using the continuous extension 0", JZeroWarning, stacklevel=2)
        return 0.0
    if i == 2 and j > 0:
        return TWO_PI * j
    if i == 1 and j < 0:
        return -TWO_PI * j
    return 0.0


def band_edge(params: PerturbParams) -> float:
    """Largest ``|j|`` with ``potential_minimum(j) <= 1``; the level ``H = 1`` is empty beyond it."""
    f = lambda j: potential_minimum(params, j)[0] - 1.0  # noqa: E731
    if f(1.0) <= 0.0:
        hi = 1.0
        while f(hi) <= 0.0:
            hi *= 2.0
        return optimize.brentq(f, hi / 2.0, hi, xtol=1e-15)
    # potential_minimum -> eps/barrier < 1 as j -> 0, so a tiny j is always inside the band
    return optimize.brentq(f, 1e-6, 1.0, xtol=1e-15)


def boundary_point(params: PerturbParams, j: float) -> tuple[float, float, float]:
    """``(rho_1, rho_2, err)`` on the level ``H = 1``."""
    if j == 0.0:
        raise DomainError("boundary samples need j != 0")
    radial, err = radial_action(params, 1.0, j)
    return radial + winding_term(1, j), radial + winding_term(2, j), err


def boundary_coordinate(params: PerturbParams, i: int, j_grid: Iterable[float]) -> list[tuple[float, float, float]]:
    """One action coordinate as ``(j, rho_i(j), err)`` triples."""
    out = []
    for j in j_grid:
        radial, err = radial_action(params, 1.0, j)
        out.append((j, radial + winding_term(i, j), err))
    return out


# -- curves -----------------------------------------------------------------


class CurveSample(NamedTuple):
    j: float
    x: float
    y: float
    err: float


@dataclass(frozen=True)
class PlanarCurve:
    """Samples ``(j, x, y, err)`` strictly increasing in ``j``.

    ``synthetic`` lists the ``j`` values of points that were not computed
    directly but filled in by continuity (``j = 0``, ``j = +-1``) or are axis
    endpoints of a finite-``eps`` curve.
    """

    samples: tuple[CurveSample, ...]
    synthetic: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        samples = tuple(CurveSample(*map(float, s)) for s in self.samples)
        object.__setattr__(self, "samples", samples)
        for a, b in zip(samples, samples[1:]):
            if not b.j > a.j:
                raise DomainError(f"curve samples must increase in j: {a.j} then {b.j}")
        for s in samples:
            if not s.err >= 0.0:
                raise DomainError(f"negative error bar at j = {s.j}")
            if not -1.0 <= s.j <= 1.0:
                raise DomainError(f"sample j = {s.j} outside [-1, 1]")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def js(self) -> np.ndarray:
        return np.array([s.j for s in self.samples])

    @property
    def points(self) -> np.ndarray:
        return np.array([[s.x, s.y] for s in self.samples]).reshape(-1, 2)

    def sample_at(self, j: float) -> CurveSample | None:
        for s in self.samples:
            if s.j == j:
                return s
        return None

    def interior(self) -> "PlanarCurve":
        """The directly computed samples only."""
        keep = tuple(s for s in self.samples if s.j not in self.synthetic)
        return PlanarCurve(keep)


def default_j_grid(n: int) -> list[float]:
    """``n`` midpoints of equal cells of ``(-1, 1)``; ``n`` must be even so 0 is skipped."""
    if n < 2 or n % 2:
        raise DomainError(f"sample count must be an even integer >= 2, got {n}")
    return [-1.0 + (2 * k + 1) / n for k in range(n)]


def limit_j_grid(step: float = 0.05, cutoff: float = 0.15) -> list[float]:
    """Symmetric grid ``+-{cutoff, cutoff + step, ..., 1 - step}`` for limit curves.

    Small ``|j|`` is left out: there the outer turning radius ``~2/|j|`` runs
    into the barrier at ``sqrt barrier`` and the ladder has not converged yet.
    """
    count = int(round((1.0 - cutoff) / step))
    pos = [round(cutoff + k * step, 12) for k in range(count)]
    pos = [p for p in pos if p < 1.0]
    return [-p for p in reversed(pos)] + pos


def _run_grid(fn, items: Sequence[float], workers: int | None) -> list:
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _extend(p: CurveSample, q: CurveSample, j: float) -> tuple[float, float, float]:
    """Straight-line continuation through ``p`` and ``q`` to parameter ``j``."""
    t = (j - p.j) / (q.j - p.j)
    x = p.x + t * (q.x - p.x)
    y = p.y + t * (q.y - p.y)
    return x, y, max(p.err, q.err) * (1.0 + abs(t))


def _close_at_zero(samples: list[CurveSample]) -> tuple[CurveSample, float] | None:
    neg = [s for s in samples if s.j < 0]
    pos = [s for s in samples if s.j > 0]
    if len(neg) < 2 or len(pos) < 2:
        return None
    xl, yl, el = _extend(neg[-2], neg[-1], 0.0)
    xr, yr, er = _extend(pos[1], pos[0], 0.0)
    gap = math.hypot(xl - xr, yl - yr)
    return CurveSample(0.0, 0.5 * (xl + xr), 0.5 * (yl + yr), max(el, er) + 0.5 * gap), gap


def close_limit_curve(samples: Sequence[CurveSample]) -> PlanarCurve:
    """Complete a limit curve at ``j = 0`` and ``j = +-1``.

    ``j = 0`` is filled by continuity from the two nearest samples on each
    side. At ``j = +-1`` the level set is a single circle, so the radial
    action vanishes and only the winding term is left: ``(2pi, 0)`` and
    ``(0, 2pi)``.
    """
    out = sorted(samples, key=lambda s: s.j)
    synthetic = []
    zero = _close_at_zero(out)
    if zero is not None:
        out.append(zero[0])
        synthetic.append(0.0)
    js = {s.j for s in out}
    if -1.0 not in js:
        out.append(CurveSample(-1.0, TWO_PI, 0.0, 0.0))
        synthetic.append(-1.0)
    if 1.0 not in js:
        out.append(CurveSample(1.0, 0.0, TWO_PI, 0.0))
        synthetic.append(1.0)
    out.sort(key=lambda s: s.j)
    return PlanarCurve(tuple(out), tuple(sorted(synthetic)))


def boundary_curve(
    params: PerturbParams,
    j_grid: Sequence[float] | None = None,
    *,
    close: bool = True,
    workers: int | None = None,
) -> PlanarCurve:
    """Boundary of the moment image at ``H = 1`` sampled on ``j_grid``.

    Grid points at or beyond the band edge are dropped. With ``close`` the
    curve is completed by the two axis endpoints ``(0, 2pi j_max)`` and
    ``(2pi j_max, 0)``, where the radial action vanishes, and by a continuity
    fill at ``j = 0``.
    """
    grid = sorted(default_j_grid(64) if j_grid is None else j_grid)
    if any(j == 0.0 or not -1.0 < j < 1.0 for j in grid):
        raise DomainError("j grid must lie in (-1, 1) and exclude 0")
    edge = band_edge(params)
    grid = [j for j in grid if abs(j) < edge]
    points = _run_grid(lambda j: boundary_point(params, j), grid, workers)
    samples = [CurveSample(j, x, y, e) for j, (x, y, e) in zip(grid, points)]
    if not close:
        return PlanarCurve(tuple(samples))
    synthetic = []
    zero = _close_at_zero(samples)
    if zero is not None:
        samples.append(zero[0])
        synthetic.append(0.0)
    if edge < 1.0:
        samples.append(CurveSample(-edge, TWO_PI * edge, 0.0, 0.0))
        samples.append(CurveSample(edge, 0.0, TWO_PI * edge, 0.0))
        synthetic += [-edge, edge]
    samples.sort(key=lambda s: s.j)
    return PlanarCurve(tuple(samples), tuple(sorted(synthetic)))


# -- epsilon ladders --------------------------------------------------------


@dataclass(frozen=True)
class SampleConvergence:
    j: float
    values: tuple[tuple[float, float], ...]  # (x, y) per rung where defined
    increments: tuple[tuple[float, float], ...]
    limit: tuple[float, float]
    err: float
    monotone: bool


@dataclass(frozen=True)
class ConvergenceReport:
    variant: str
    ladder: tuple[float, ...]
    samples: tuple[SampleConvergence, ...]
    nested: bool
    nesting_violations: tuple[tuple[float, float, float], ...]  # (eps_coarse, eps_fine, j)
    ratios: tuple[float, ...]  # successive increment ratios, pooled over samples

    @property
    def stable(self) -> bool:
        return self.nested and all(s.monotone for s in self.samples)

    def summary_lines(self) -> list[str]:
        lines = [f"variant {self.variant}, ladder {', '.join(f'{e:g}' for e in self.ladder)}"]
        lines.append(f"nested: {'yes' if self.nested else 'no'}")
        bad = [s.j for s in self.samples if not s.monotone]
        lines.append(f"monotone samples: {len(self.samples) - len(bad)}/{len(self.samples)}")
        if self.ratios:
            lines.append(f"median increment ratio per rung: {float(np.median(self.ratios)):.6g}")
        worst = max((s.err for s in self.samples), default=0.0)
        lines.append(f"largest extrapolation error bar: {worst:.3e}")
        return lines


def _extrapolate(eps: Sequence[float], vals: Sequence[float]) -> tuple[float, float]:
    """Linear-in-eps extrapolation to 0 from the last two rungs, with a discrepancy bar."""
    if len(vals) == 1:
        return vals[-1], 0.0
    e1, e2 = eps[-2], eps[-1]
    f1, f2 = vals[-2], vals[-1]
    lim = f2 + (f2 - f1) * e2 / (e1 - e2)
    return lim, abs(lim - f2)


def limit_domain(
    variant: str,
    epsilon_ladder: Sequence[float] = DEFAULT_LADDER,
    j_grid: Sequence[float] | None = None,
    *,
    workers: int | None = None,
    strict: bool = False,
) -> tuple[PlanarCurve, ConvergenceReport]:
    """Moment-image boundary in the limit ``eps -> 0`` along a ladder.

    Each rung yields a boundary curve. Per sample the coordinates must grow as
    ``eps`` decreases (nesting of the images) beyond twice the quadrature
    error; the limit is the last rung plus a linear-in-``eps`` correction whose
    size is the error bar. A one-rung ladder returns that rung's boundary curve
    unchanged. With ``strict`` a nesting failure raises
    :class:`NumericalInstabilityError`; otherwise it is recorded in the report.
    """
    ladder = tuple(float(e) for e in epsilon_ladder)
    if not ladder:
        raise DomainError("epsilon ladder is empty")
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise DomainError("epsilon ladder must be strictly decreasing")
    grid = sorted(limit_j_grid() if j_grid is None else j_grid)
    rungs = [PerturbParams.of_variant(variant, e) for e in ladder]
    if len(rungs) == 1:
        curve = boundary_curve(rungs[0], grid, workers=workers)
        report = ConvergenceReport(variant, ladder, (), True, (), ())
        return curve, report

    tables: list[dict[float, CurveSample]] = []
    for params in rungs:
        curve = boundary_curve(params, grid, close=False, workers=workers)
        tables.append({s.j: s for s in curve.samples})

    samples: list[SampleConvergence] = []
    violations: list[tuple[float, float, float]] = []
    ratios: list[float] = []
    limit_samples: list[CurveSample] = []
    for j in grid:
        present = [(e, t[j]) for e, t in zip(ladder, tables) if j in t]
        if not present or present[-1][0] != ladder[-1]:
            continue
        eps = [e for e, _ in present]
        xs = [s.x for _, s in present]
        ys = [s.y for _, s in present]
        errs = [s.err for _, s in present]
        incs = []
        monotone = True
        for k in range(1, len(present)):
            dx, dy = xs[k] - xs[k - 1], ys[k] - ys[k - 1]
            slack = 2.0 * (errs[k] + errs[k - 1])
            incs.append((dx, dy))
            if dx < -slack or dy < -slack:
                monotone = False
                violations.append((eps[k - 1], eps[k], j))
        for a, b in zip(incs, incs[1:]):
            # radial part drives both coordinates identically
            if abs(a[0]) > 1e-11 and abs(b[0]) > 1e-13:
                ratios.append(b[0] / a[0])
        lx, ex = _extrapolate(eps, xs)
        ly, ey = _extrapolate(eps, ys)
        err = max(ex, ey) + errs[-1]
        samples.append(SampleConvergence(j, tuple(zip(xs, ys)), tuple(incs), (lx, ly), err, monotone))
        limit_samples.append(CurveSample(j, lx, ly, err))

    report = ConvergenceReport(variant, ladder, tuple(samples), not violations, tuple(violations), tuple(ratios))
    if strict and not report.stable:
        raise NumericalInstabilityError(f"{len(violations)} nesting violations along the ladder: {violations[:3]}")
    return close_limit_curve(limit_samples), report


# -- areas and reference shapes --------------------------------------------


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 1e-14) - (v < -1e-14)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def toric_area(curve: PlanarCurve) -> float:
    """Area of the region cut out by the axes and the curve.

    The polygon is ``(0, 0) -> (x_first, 0) -> samples -> (0, y_last)``,
    evaluated with the shoelace formula. A path that crosses itself raises
    :class:`GeometryError`.
    """
    if len(curve) < 2:
        raise GeometryError("need at least two samples to enclose an area")
    pts = [(float(x), float(y)) for x, y in curve.points]
    poly = [(0.0, 0.0), (pts[0][0], 0.0), *pts, (0.0, pts[-1][1])]
    # drop consecutive duplicates so degenerate edges do not count as crossings
    clean = [poly[0]]
    for p in poly[1:]:
        if p != clean[-1]:
            clean.append(p)
    if clean[-1] == clean[0]:
        clean.pop()
    n = len(clean)
    for a in range(n):
        for b in range(a + 2, n):
            if a == 0 and b == n - 1:
                continue
            if _segments_cross(clean[a], clean[(a + 1) % n], clean[b], clean[(b + 1) % n]):
                raise GeometryError(f"sample path crosses itself between edges {a} and {b}")
    xs = np.array([p[0] for p in clean])
    ys = np.array([p[1] for p in clean])
    return float(0.5 * abs(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))


def square_distance(curve: PlanarCurve, side: float = TWO_PI) -> float:
    """Sup over samples of the distance to the corner path ``{x = side} u {y = side}``."""
    worst = 0.0
    for s in curve.samples:
        cx = min(max(s.x, 0.0), side)
        cy = min(max(s.y, 0.0), side)
        d_top = math.hypot(s.x - cx, s.y - side)
        d_right = math.hypot(s.x - side, s.y - cy)
        worst = max(worst, min(d_top, d_right))
    return worst


def segment_distance(curve: PlanarCurve, total: float = TWO_PI) -> float:
    """Sup over samples of the distance to the segment ``x + y = total`` in the first quadrant."""
    worst = 0.0
    for s in curve.samples:
        t = min(max((s.x - s.y + total) / 2.0, 0.0), total)
        worst = max(worst, math.hypot(s.x - t, s.y - (total - t)))
    return worst


# -- eps = 0 closed forms ---------------------------------------------------


def analytic_radial_roots(h: float, j: float) -> tuple[float, float]:
    """Turning radii without perturbation: roots of ``|j| (1 + r^2) = 2 sqrt(h) r``."""
    if j == 0.0:
        raise DomainError("turning radii need j != 0")
    if h < j * j:
        raise NoRootError(f"h = {h} is below j^2 = {j * j}")
    sh, disc = math.sqrt(h), math.sqrt(max(h - j * j, 0.0))
    aj = abs(j)
    # the smaller root via the product r_min * r_max = 1 avoids cancellation
    r_max = (sh + disc) / aj
    return 1.0 / r_max, r_max


def radial_antiderivative(r: float, j: float) -> float:
    """Antiderivative in ``r`` of ``2 p_r`` on the unperturbed level ``H = 1``."""
    aj, jj = abs(j), j * j
    s = math.sqrt(1.0 - jj)
    r2 = r * r

    def asin(v: float) -> float:
        return math.asin(min(1.0, max(-1.0, v)))

    return (
        2.0 * asin((r2 - 1.0) / (s * (r2 + 1.0)))
        - aj * asin((jj * r2 + jj - 2.0) / (2.0 * s))
        + aj * asin((jj + jj * r2 - 2.0 * r2) / (2.0 * s * r2))
    )


def analytic_radial_action(h: float, j: float, upper: float | None = None) -> float:
    """Unperturbed radial action, from the antiderivative.

    The level ``H = h`` rescales to ``H = 1`` with ``j -> j / sqrt(h)``; the
    action scales by ``sqrt(h)``. ``upper`` caps the outer radius (``upper = 1``
    gives the hemisphere, where the barrier sits at ``r = 1``).
    """
    if h <= 0.0:
        raise DomainError(f"h must be positive, got {h}")
    sh = math.sqrt(h)
    jn = j / sh
    if abs(jn) >= 1.0:
        if abs(jn) == 1.0:
            return 0.0
        raise NoRootError(f"h = {h} is below j^2 = {j * j}")
    r0, r1 = analytic_radial_roots(1.0, jn)
    if upper is not None:
        r1 = min(r1, upper)
    return sh * (radial_antiderivative(r1, jn) - radial_antiderivative(r0, jn))


# -- curve files ------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(v, ".15g")


def curve_to_csv(curve: PlanarCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "x", "y", "err"])
    for s in curve.samples:
        w.writerow([_fmt(s.j), _fmt(s.x), _fmt(s.y), _fmt(s.err)])
    return buf.getvalue()


def curve_from_csv(text: str) -> PlanarCurve:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["j", "x", "y", "err"]:
        raise DomainError("curve CSV must start with the header j,x,y,err")
    return PlanarCurve(tuple(CurveSample(*map(float, r)) for r in rows[1:] if r))


def curve_to_records(curve: PlanarCurve) -> list[dict]:
    return [{"j": float(_fmt(s.j)), "x": float(_fmt(s.x)), "y": float(_fmt(s.y)), "err": float(_fmt(s.err))} for s in curve.samples]


def curve_to_json(curve: PlanarCurve, **meta) -> str:
    doc = {"schema": "zoll-ech/1", **meta, "samples": curve_to_records(curve)}
    return json.dumps(doc, indent=2) + "\n"


def curve_from_json(text: str) -> PlanarCurve:
    doc = json.loads(text)
    records = doc["samples"] if isinstance(doc, dict) else doc
    return PlanarCurve(tuple(CurveSample(r["j"], r["x"], r["y"], r["err"]) for r in records))

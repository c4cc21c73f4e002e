"""Boundedness certification for one-variable reductions of 4-point cochains.

For an invariant alternating 4-point cochain f, F(x) = f(inf, 0, 1, x) turns
the coboundary of f into the five-term expression

    F(x) - F(y) + F(y/x) - F((1-y)/(1-x)) + F(x(1-y)/(y(1-x))).

Substituting y = x^2 gives the doubling defect

    2F(x) - F(x^2) - F(1+x) + F((1+x)/x),

whose boundedness yields |F(x) - F(x^2)/2| <= C/2 near 1 with
C = B_defect + 2 M_near2.  Squaring k+1 times walks any x in [1-delta, 1)
down to the base interval [(1-delta)^2, 1-delta], the geometric series of
increments stays below C, and the certificate reports the (slightly rounder)
bound |F| <= M_base + 2C on the target region.  The same
recursion runs on a complex sector at 1 inside the closed unit disc, and
the alternation relations F(x) = -F(1/x) = -F(1-x) extend a bound near 1 to
neighborhoods of 0 and infinity and hence, with a compact-set supremum, to
a global bound.

Suprema are measured on grids and labeled `empirical`; callers may supply
`analytic` values instead.  Target grids include a dyadic tail toward their
open endpoint so divergent inputs are refused rather than certified.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (DegenerateArguments, IterationOverflow,
                     MissingAlternation, UnboundedDefect)

ARG_TOL = 1e-12            # distance to the excluded points 0, 1
DEFAULT_BLOWUP = 1e6       # defect level at which certification is refused
DEFAULT_GRID_POINTS = 10_000
DEFAULT_DYADIC_DEPTH = 48


@dataclass(frozen=True)
class ScalarFunction:
    """Real-valued function on the field (R or C) minus {0, 1}.

    `from_alternating` declares that the function is induced by an
    alternating invariant 4-point cochain, which licenses the symmetry
    extension F(x) = -F(1/x) = -F(1-x).
    """

    evaluator: Callable[..., float]
    field_tag: str = "real"
    from_alternating: bool = False
    name: str = ""

    def __call__(self, x) -> float:
        return float(self.evaluator(x))


@dataclass(frozen=True)
class RegionSpec:
    """Certified region: its kind, the delta parameter, and set descriptions.

    `near2` records the concrete neighborhood of 2 used for M_near2, since
    the recursion only needs *some* compact set catching 1+x and (1+x)/x.
    """

    kind: str            # real_interval | complex_sector | annulus | real_global | complex_global
    delta: float
    target: str
    base: str
    near2: str = ""


@dataclass(frozen=True)
class BoundCertificate:
    """Output of the doubling recursion.

    For certificates produced by `certify_interval` and
    `certify_complex_region`, certified_bound = M_base + 2 C with
    C = B_defect + 2 M_near2, reconstructible exactly from `inputs`.
    Symmetry-extended certificates instead record the near-1 bound and the
    compact-complement supremum they combine.
    """

    region: RegionSpec
    certified_bound: float
    inputs: dict
    k_max: int
    provenance: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GridConfig:
    """Resolution of the empirical grids."""

    points_per_region: int = DEFAULT_GRID_POINTS
    dyadic_depth: int = DEFAULT_DYADIC_DEPTH


def _check_away_from(value, excluded, tol=ARG_TOL):
    for bad in excluded:
        if abs(value - bad) <= tol:
            raise DegenerateArguments(
                f"argument {value!r} too close to excluded point {bad!r}")


def five_term_defect(F: ScalarFunction, x, y) -> float:
    """F(x) - F(y) + F(y/x) - F((1-y)/(1-x)) + F(x(1-y)/(y(1-x))).

    Equals the coboundary of the inducing 4-point cochain evaluated at
    (inf, 0, 1, x, y); identically the constant c for F = c.
    """
    _check_away_from(x, (0.0, 1.0))
    _check_away_from(y, (0.0, 1.0))
    if abs(x - y) <= ARG_TOL:
        raise DegenerateArguments("five-term defect needs x != y")
    return (F(x) - F(y) + F(y / x) - F((1 - y) / (1 - x))
            + F(x * (1 - y) / (y * (1 - x))))


def doubling_defect(F: ScalarFunction, x) -> float:
    """2F(x) - F(x^2) - F(1+x) + F((1+x)/x); equals five_term_defect(F, x, x^2)."""
    _check_away_from(x, (0.0, 1.0, -1.0))
    return 2.0 * F(x) - F(x * x) - F(1.0 + x) + F((1.0 + x) / x)


# ---------------------------------------------------------------------------
# grids


def _effective_depth(delta: float, cfg: GridConfig) -> int:
    """Dyadic depth clamped so tail points stay clear of the excluded point 1."""
    return min(cfg.dyadic_depth, int(math.log2(delta / (8.0 * ARG_TOL))))


def _real_target_grid(delta: float, cfg: GridConfig) -> np.ndarray:
    """Grid on [1-delta, 1): uniform plus a dyadic tail toward the open end."""
    uniform = 1.0 - delta + delta * np.arange(cfg.points_per_region) / cfg.points_per_region
    dyadic = 1.0 - delta * 0.5 ** np.arange(1, _effective_depth(delta, cfg) + 1)
    return np.unique(np.concatenate([uniform, dyadic]))


def _closed_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _sup_abs(F: ScalarFunction, values) -> float:
    return max(abs(F(v)) for v in values)


def _k_real(x: float, delta: float, cap: int) -> int:
    k = 0
    while x > 1.0 - delta:
        x = x * x
        k += 1
        if k > cap:
            raise IterationOverflow(f"squaring iteration exceeded cap {cap}")
    return k


def _resolve_inputs(empirical: dict, overrides: Optional[dict]):
    overrides = overrides or {}
    unknown = set(overrides) - set(empirical)
    if unknown:
        raise ValueError(f"unknown override keys: {sorted(unknown)}")
    inputs = dict(empirical)
    provenance = {key: "empirical" for key in empirical}
    for key, value in overrides.items():
        inputs[key] = float(value)
        provenance[key] = "analytic"
    return inputs, provenance


def certify_interval(F: ScalarFunction, delta: float = 0.125,
                     grid: Optional[GridConfig] = None,
                     blowup_threshold: float = DEFAULT_BLOWUP,
                     overrides: Optional[dict] = None) -> BoundCertificate:
    """Certify |F| on [1-delta, 1) by the doubling recursion.

    M_base bounds |F| on the base interval [(1-delta)^2, 1-delta]; M_near2
    bounds it on [2-delta, max(2+delta, 2/(1-delta))], where 1+x and
    (1+x)/x land for x in the target; B_defect bounds the doubling defect
    on the target.  All three come from grids unless overridden with
    analytic values.  Raises UnboundedDefect when the grid defect exceeds
    `blowup_threshold`.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    cfg = grid or GridConfig()
    overrides = overrides or {}
    target = _real_target_grid(delta, cfg)
    cap = cfg.dyadic_depth + 16 + max(0, math.ceil(math.log2(1.0 / delta)))
    k_max = max(_k_real(float(x), delta, cap) for x in target)

    empirical = {}
    if "B_defect" in overrides:
        empirical["B_defect"] = float(overrides["B_defect"])
    else:
        worst = 0.0
        for x in target:
            d = abs(doubling_defect(F, float(x)))
            if d > blowup_threshold:
                raise UnboundedDefect(
                    f"doubling defect {d:.3e} at x = {x!r} exceeds threshold "
                    f"{blowup_threshold:.1e}")
            worst = max(worst, d)
        empirical["B_defect"] = worst
    base_lo = (1.0 - delta) ** 2
    empirical["M_base"] = (float(overrides["M_base"]) if "M_base" in overrides
                           else _sup_abs(F, _closed_grid(base_lo, 1.0 - delta,
                                                         cfg.points_per_region)))
    near2_hi = max(2.0 + delta, 2.0 / (1.0 - delta))
    empirical["M_near2"] = (float(overrides["M_near2"]) if "M_near2" in overrides
                            else _sup_abs(F, _closed_grid(2.0 - delta, near2_hi,
                                                          cfg.points_per_region)))

    inputs, provenance = _resolve_inputs(empirical, overrides)
    c_value = inputs["B_defect"] + 2.0 * inputs["M_near2"]
    bound = inputs["M_base"] + 2.0 * c_value
    region = RegionSpec(kind="real_interval", delta=delta,
                        target=f"[{1 - delta}, 1)",
                        base=f"[{base_lo}, {1 - delta}]",
                        near2=f"[{2 - delta}, {near2_hi}]")
    return BoundCertificate(region=region, certified_bound=bound,
                            inputs=inputs, k_max=k_max, provenance=provenance)


# ---------------------------------------------------------------------------
# complex sector at 1


def _in_sector(z: complex, delta: float) -> bool:
    """Membership in U = {z != 1 : 1-delta < |z| <= 1, |arg z| < delta}."""
    if z == 1.0:
        return False
    r = abs(z)
    return (1.0 - delta < r <= 1.0 + 1e-12) and abs(cmath.phase(z)) < delta


def _sector_grid(delta: float, cfg: GridConfig) -> list:
    """Grid on U: uniform polar plus dyadic tails toward z = 1."""
    m = max(2, math.isqrt(cfg.points_per_region))
    m += m % 2  # even angular count keeps arg = 0 off the uniform grid
    moduli = 1.0 - delta + delta * np.arange(1, m + 1) / m
    args = -delta + 2.0 * delta * (np.arange(m) + 0.5) / m
    points = [complex(r * math.cos(t), r * math.sin(t))
              for r in moduli for t in args]
    for j in range(1, _effective_depth(delta, cfg) + 1):
        eps = delta * 0.5 ** j
        points.append(cmath.rect(1.0, eps))       # unit modulus, small arg
        points.append(cmath.rect(1.0, -eps))
        points.append(complex(1.0 - eps, 0.0))    # real approach to 1
    return points


def _base_sector_grids(delta: float, cfg: GridConfig) -> list:
    """Closure of {(1-delta)^2 < |w| <= 1, |arg w| < 2 delta} minus U."""
    m = max(2, math.isqrt(cfg.points_per_region // 2))
    inner_moduli = np.linspace((1.0 - delta) ** 2, 1.0 - delta, m)
    wide_args = np.linspace(-2.0 * delta, 2.0 * delta, m)
    points = [cmath.rect(r, t) for r in inner_moduli for t in wide_args]
    outer_moduli = np.linspace(1.0 - delta + delta / m, 1.0, m)
    side_args = np.concatenate([np.linspace(-2.0 * delta, -delta, m // 2),
                                np.linspace(delta, 2.0 * delta, m // 2)])
    points += [cmath.rect(r, t) for r in outer_moduli for t in side_args]
    return points


def _near2_radius(delta: float) -> float:
    """Radius around 2 covering 1+z and (1+z)/z for all z in the sector."""
    corner = 1.0 - (1.0 - delta) * cmath.exp(1j * delta)
    return abs(corner) / (1.0 - delta)


def _near2_disk_grid(delta: float, cfg: GridConfig) -> list:
    """Polar grid on the disk around 2 where 1+z and (1+z)/z land for z in U."""
    radius = _near2_radius(delta)
    m = max(2, math.isqrt(cfg.points_per_region))
    points = [complex(2.0, 0.0)]
    for r in np.linspace(radius / m, radius, m):
        for t in np.linspace(0.0, 2.0 * math.pi, m, endpoint=False):
            points.append(2.0 + cmath.rect(r, t))
    return points


def certify_complex_region(F: ScalarFunction, delta: float = 0.1,
                           grid: Optional[GridConfig] = None,
                           blowup_threshold: float = DEFAULT_BLOWUP,
                           overrides: Optional[dict] = None) -> BoundCertificate:
    """Certify |F| on the sector U = {1-delta < |z| <= 1, |arg z| < delta}.

    Repeated squaring sends each grid point of U into the closure of the
    doubled sector {(1-delta)^2 < |w| <= 1, |arg w| < 2 delta} minus U (in
    at most k_max steps, recorded); the recursion then gives
    certified_bound = M_base + 2 C exactly as in the real case.
    """
    if not 0.0 < delta < 0.25:
        raise ValueError("delta must lie in (0, 1/4)")
    if F.field_tag != "complex":
        raise ValueError("complex certification needs a complex-field function")
    cfg = grid or GridConfig()
    overrides = overrides or {}
    sector = _sector_grid(delta, cfg)

    arg_min = delta * 0.5 ** cfg.dyadic_depth
    cap = (math.ceil(math.log2(2.0 * delta / arg_min)) + cfg.dyadic_depth
           + 16 + max(0, math.ceil(math.log2(1.0 / delta))))
    k_max = 0
    for z in sector:
        k = 0
        w = z
        while _in_sector(w, delta):
            w = w * w
            k += 1
            if k > cap:
                raise IterationOverflow(f"squaring iteration exceeded cap {cap}")
        k_max = max(k_max, k)

    empirical = {}
    if "B_defect" in overrides:
        empirical["B_defect"] = float(overrides["B_defect"])
    else:
        worst = 0.0
        for z in sector:
            d = abs(doubling_defect(F, z))
            if d > blowup_threshold:
                raise UnboundedDefect(
                    f"doubling defect {d:.3e} at z = {z!r} exceeds threshold "
                    f"{blowup_threshold:.1e}")
            worst = max(worst, d)
        empirical["B_defect"] = worst
    empirical["M_base"] = (float(overrides["M_base"]) if "M_base" in overrides
                           else _sup_abs(F, _base_sector_grids(delta, cfg)))
    empirical["M_near2"] = (float(overrides["M_near2"]) if "M_near2" in overrides
                            else _sup_abs(F, _near2_disk_grid(delta, cfg)))

    inputs, provenance = _resolve_inputs(empirical, overrides)
    c_value = inputs["B_defect"] + 2.0 * inputs["M_near2"]
    bound = inputs["M_base"] + 2.0 * c_value
    region = RegionSpec(kind="complex_sector", delta=delta,
                        target=f"{{1-{delta} < |z| <= 1, |arg z| < {delta}}}",
                        base="closure of doubled sector minus target",
                        near2=f"disk(2, {_near2_radius(delta):.6g})")
    return BoundCertificate(region=region, certified_bound=bound,
                            inputs=inputs, k_max=k_max, provenance=provenance)


# ---------------------------------------------------------------------------
# symmetry extension


def extend_by_symmetry(cert_near_1: BoundCertificate, F: ScalarFunction,
                       grid: Optional[GridConfig] = None) -> BoundCertificate:
    """Globalize a near-1 bound using F(x) = -F(1/x) and F(x) = -F(1-x).

    The reflections transport the near-1 bound to punctured neighborhoods
    of 0 and infinity with the same constant; a grid supremum over the
    remaining compact region completes a bound on the whole punctured
    domain.  Requires the caller to have declared alternating provenance.
    """
    if not F.from_alternating:
        raise MissingAlternation(
            "symmetry extension needs a function declared as induced by an "
            "alternating cochain")
    cfg = grid or GridConfig()
    delta = cert_near_1.region.delta
    near_bound = cert_near_1.certified_bound
    n = cfg.points_per_region

    if F.field_tag == "real":
        pieces = [_closed_grid(-1.0 / delta, -delta, n),
                  _closed_grid(delta, 1.0 - delta, n),
                  _closed_grid(1.0 / (1.0 - delta), 1.0 / delta, n)]
        compact_sup = max(_sup_abs(F, piece) for piece in pieces)
        kind, target = "real_global", "R minus {0, 1}"
    else:
        rho = delta / 2.0
        m = max(2, math.isqrt(n))
        points = []
        for r in np.linspace(rho, 2.0 / delta, m):
            for t in np.linspace(0.0, 2.0 * math.pi, m, endpoint=False):
                z = cmath.rect(r, t)
                if abs(z - 1.0) >= rho:
                    points.append(z)
        compact_sup = _sup_abs(F, points)
        kind, target = "complex_global", "C minus {0, 1}"

    inputs = dict(cert_near_1.inputs)
    inputs["near_1_bound"] = near_bound
    inputs["compact_sup"] = compact_sup
    provenance = dict(cert_near_1.provenance)
    provenance["near_1_bound"] = "inherited"
    provenance["compact_sup"] = "empirical"
    region = RegionSpec(kind=kind, delta=delta, target=target,
                        base=cert_near_1.region.target)
    return BoundCertificate(region=region,
                            certified_bound=max(near_bound, compact_sup),
                            inputs=inputs, k_max=cert_near_1.k_max,
                            provenance=provenance)


# ---------------------------------------------------------------------------
# named test functions


def const_function(c: float = 1.0, field_tag: str = "real") -> ScalarFunction:
    return ScalarFunction(evaluator=lambda x: c, field_tag=field_tag,
                          from_alternating=False, name=f"const({c})")


def pole_function(field_tag: str = "real") -> ScalarFunction:
    """F(x) = Re(1/(1-x)): continuous on the punctured domain but unbounded."""

    def ev(x):
        return complex(1.0 / (1.0 - x)).real

    return ScalarFunction(evaluator=ev, field_tag=field_tag, name="pole")


def vol3_slice() -> ScalarFunction:
    """F(z) = Vol_3(inf, 0, 1, z): a bounded cocycle slice on C minus {0,1}."""
    from .volume import vol3_from_cross_ratio
    return ScalarFunction(evaluator=vol3_from_cross_ratio, field_tag="complex",
                          from_alternating=True, name="vol3-slice")


def alternating_bump_function(center: float = 0.3) -> ScalarFunction:
    """Bounded real function with the full six-fold alternation symmetry.

    Antisymmetrizes a rational bump over the cross-ratio orbit
    {x, 1/x, 1-x, 1/(1-x), (x-1)/x, x/(x-1)} with the sign of the inducing
    permutation, so F(x) = -F(1/x) = -F(1-x) holds identically.
    """

    def bump(t: float) -> float:
        return 1.0 / (1.0 + (t - center) ** 2)

    def ev(x: float) -> float:
        return (bump(x) - bump(1.0 / x) - bump(1.0 - x)
                + bump(1.0 / (1.0 - x)) + bump((x - 1.0) / x)
                - bump(x / (x - 1.0)))

    return ScalarFunction(evaluator=ev, field_tag="real",
                          from_alternating=True, name="bump")

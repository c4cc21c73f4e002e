"""Seeded samplers for boundary tuples, model points and test cochains.

A tuple sampler is a callable `sampler(rng) -> tuple | None`; None marks a
rejected (non-generic) draw.  `draw_tuples` runs the rejection loop with the
standard 100x budget.  Master seeds expand into independent substreams with
`substream`, a counter-based split, so parallel tasks stay deterministic.
"""

from __future__ import annotations

import math

import numpy as np

from .cochains import Cochain
from .errors import SamplerExhausted
from .flags import is_generic_triple, random_flag
from .hyperbolic import (ComplexBoundaryPoint, HyperbolicPoint,
                         RealBoundaryPoint, boundary_to_chart,
                         is_generic_tuple, lorentz_product)
from .projective import EPS_DIST


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent deterministic generator for a (seed, task-key) pair."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def draw_tuples(sampler, rng, n: int, budget_factor: int = 100) -> list:
    """Collect n accepted tuples; raise SamplerExhausted past the budget."""
    out = []
    draws = 0
    budget = budget_factor * n
    while len(out) < n:
        if draws >= budget:
            raise SamplerExhausted(
                f"{draws} draws produced only {len(out)}/{n} generic tuples")
        draws += 1
        candidate = sampler(rng)
        if candidate is not None:
            out.append(candidate)
    return out


# ---------------------------------------------------------------------------
# point and tuple samplers


def unit_vector(rng, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_boundary_point(rng, dim: int) -> RealBoundaryPoint:
    return RealBoundaryPoint(unit_vector(rng, dim))


def random_complex_boundary_point(rng, n: int) -> ComplexBoundaryPoint:
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return ComplexBoundaryPoint.from_ball_direction(w / np.linalg.norm(w))


def random_hyperbolic_point(rng, dim: int, spread: float = 1.0) -> HyperbolicPoint:
    v = spread * rng.standard_normal(dim)
    return HyperbolicPoint(np.append(v, math.sqrt(1.0 + v @ v)))


def sphere_tuple_sampler(dim: int, size: int, tol: float = EPS_DIST):
    """Tuples of pairwise-distinct points on the boundary sphere of H^dim."""

    def sample(rng):
        points = tuple(random_boundary_point(rng, dim) for _ in range(size))
        return points if is_generic_tuple(points, tol) else None

    return sample


def circle_tuple_sampler(size: int, tol: float = EPS_DIST):
    return sphere_tuple_sampler(2, size, tol)


def complex_tuple_sampler(n: int, size: int, tol: float = EPS_DIST):
    """Tuples of pairwise-distinct points of the boundary of H^n_C."""

    def sample(rng):
        points = tuple(random_complex_boundary_point(rng, n) for _ in range(size))
        return points if is_generic_tuple(points, tol) else None

    return sample


def chart_tuple_sampler(size: int, tol: float = EPS_DIST):
    """Tuples of P^1(C) points drawn uniformly on S^2 through the chart."""
    base = sphere_tuple_sampler(3, size, tol)

    def sample(rng):
        points = base(rng)
        if points is None:
            return None
        return tuple(boundary_to_chart(p) for p in points)

    return sample


def flag_triple_sampler(tol: float = 1e-9):
    """Generic flag triples by rejection over Haar-random frames."""

    def sample(rng):
        triple = tuple(random_flag(rng) for _ in range(3))
        return triple if is_generic_triple(*triple, tol=tol) else None

    return sample


# ---------------------------------------------------------------------------
# random test cochains


def random_smooth_cochain(arity: int, rng, dim: int = 2) -> Cochain:
    """Smooth boundary cochain: random combination of pairwise-dot features."""
    pairs = [(i, j) for i in range(arity) for j in range(i + 1, arity)]
    weights = rng.standard_normal(len(pairs))
    scales = rng.uniform(0.5, 1.5, len(pairs))
    anchors = [unit_vector(rng, dim) for _ in range(arity)]
    linear = rng.standard_normal(arity)

    def ev(*points):
        total = 0.0
        for w, s, (i, j) in zip(weights, scales, pairs):
            total += w * math.exp(s * float(points[i].direction @ points[j].direction))
        for c, anchor, p in zip(linear, anchors, points):
            total += c * float(anchor @ p.direction)
        return total

    return Cochain(arity=arity, evaluator=ev, domain_tag=f"sphere({dim})")


def coordinate_cochain(index: int = 0) -> Cochain:
    """f(x) = coordinate `index` of the single boundary argument."""
    return Cochain(arity=1, evaluator=lambda p: float(p.direction[index]))


def random_mixed_cochain(model_arity: int, boundary_arity: int, rng,
                         dim: int = 2, invariant: bool = False) -> Cochain:
    """Smooth cochain with model and boundary slots.

    Built from radial-basis terms in the pairwise hyperbolic distances of
    the model points and from model-boundary Lorentz pairings.  With
    `invariant=True` only isometry-invariant features (distances and pairing
    ratios) are used, so the cochain is invariant under the ambient group.
    """
    mm_pairs = [(i, j) for i in range(model_arity) for j in range(i + 1, model_arity)]
    mm_w = rng.standard_normal(len(mm_pairs))
    mm_s = rng.uniform(0.2, 0.8, len(mm_pairs))
    mb_pairs = [(i, k) for i in range(model_arity) for k in range(boundary_arity)]
    mb_w = rng.standard_normal(len(mb_pairs))
    mb_s = rng.uniform(0.2, 0.8, len(mb_pairs))
    ratio_w = rng.standard_normal(boundary_arity)

    def ev(models, boundary):
        total = 0.0
        for w, s, (i, j) in zip(mm_w, mm_s, mm_pairs):
            d = math.acosh(max(1.0, -lorentz_product(models[i].lift, models[j].lift)))
            total += w * math.exp(-s * d)
        if invariant:
            if model_arity >= 2:
                for w, k in zip(ratio_w, range(boundary_arity)):
                    lift = boundary[k].lift()
                    r = (lorentz_product(models[0].lift, lift)
                         / lorentz_product(models[1].lift, lift))
                    total += w * math.log(r)
        else:
            for w, s, (i, k) in zip(mb_w, mb_s, mb_pairs):
                pairing = -lorentz_product(models[i].lift, boundary[k].lift())
                total += w * math.exp(-s * pairing)
        return total

    if model_arity > 0 and boundary_arity > 0:
        evaluator = ev
    elif model_arity > 0:
        evaluator = lambda *models: ev(models, ())
    else:
        evaluator = lambda *boundary: ev((), boundary)
    return Cochain(arity=boundary_arity, evaluator=evaluator,
                   model_arity=model_arity, domain_tag=f"hyperbolic({dim})")

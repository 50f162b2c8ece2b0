"""Seeded random angle vectors, one sampler per signature regime."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .angles import CLOSED, AngleVector

__all__ = ["random_angles", "random_resonant", "regime_sample", "REGIMES"]

# keep sampled angles this far from 0 and pi; 1/sin stays below ~20
ANGLE_MARGIN = 0.05
# keep non-resonant totals this far from the nearest resonance
OMEGA_MARGIN = 0.05

REGIMES = ("below", "resonant1", "between", "resonant2", "above")


def random_angles(rng: np.random.Generator, count: int, omega: float,
                  mode: str = CLOSED, margin: float = ANGLE_MARGIN,
                  max_tries: int = 1000) -> AngleVector:
    """``count`` angles in (margin, pi - margin) summing to ``omega`` (float)."""
    if not count * margin < omega < count * (math.pi - margin):
        raise ValueError(f"cannot fit omega={omega} into {count} angles")
    for _ in range(max_tries):
        u = rng.uniform(0.2, 1.0, size=count)
        a = omega * u / u.sum()
        if a.min() > margin and a.max() < math.pi - margin:
            # put the rounding defect of the sum on the largest entry
            a[np.argmax(a)] += omega - math.fsum(a)
            return AngleVector(tuple(a), mode)
    # fall back to a small perturbation of equal angles
    base = np.full(count, omega / count)
    jitter = rng.uniform(-1, 1, size=count)
    jitter -= jitter.mean()
    room = min(base[0] - margin, math.pi - margin - base[0])
    a = base + 0.5 * room * jitter / max(1.0, np.abs(jitter).max())
    a[np.argmax(a)] += omega - math.fsum(a)
    return AngleVector(tuple(a), mode)


def random_resonant(rng: np.random.Generator, count: int, multiple: Fraction | int,
                    mode: str = CLOSED, denominator: int | None = None) -> AngleVector:
    """Angles that are exact rational multiples of pi summing to ``multiple * pi``."""
    total = Fraction(multiple)
    for _ in range(1000):
        q = denominator or int(rng.integers(24, 181))
        target = total * q
        if target.denominator != 1:
            continue
        target = int(target)
        if not count <= target <= count * (q - 1):
            continue
        u = rng.uniform(0.2, 1.0, size=count)
        p = np.maximum(1, np.floor(target * u / u.sum()).astype(int))
        p = np.minimum(p, q - 1)
        deficit = target - int(p.sum())
        order = rng.permutation(count)
        i = 0
        while deficit != 0 and i < 10 * count * q:
            k = order[i % count]
            if deficit > 0 and p[k] < q - 1:
                p[k] += 1
                deficit -= 1
            elif deficit < 0 and p[k] > 1:
                p[k] -= 1
                deficit += 1
            i += 1
        if deficit == 0:
            fr = [Fraction(int(v), q) for v in p]
            # reject angles too close to 0 or pi
            if min(fr) * math.pi > ANGLE_MARGIN / 2 and max(fr) * math.pi < math.pi - ANGLE_MARGIN / 2:
                return AngleVector.from_pi_fractions(fr, mode)
    raise ValueError(f"could not sample {count} rational angles summing to {total} pi")


def regime_sample(rng: np.random.Generator, regime: str, mode: str = CLOSED,
                  max_size: int = 50) -> AngleVector:
    """Draw one angle vector from a regime relative to the resonance period.

    Regimes (period P = 2 pi closed, pi dirichlet): ``below`` (0, P),
    ``resonant1`` = P exactly, ``between`` (P, 2P), ``resonant2`` = 2P
    exactly, ``above`` > 2P. ``max_size`` bounds the matrix dimension.
    """
    per = 2 if mode == CLOSED else 1
    extra = 0 if mode == CLOSED else 1       # dirichlet has n + 1 angles
    lo_size = 3 if mode == CLOSED else 1

    def count_for(omega_pi: float) -> int:
        # need average angle <= 0.85 pi for the sampler to succeed quickly
        need = max(lo_size + extra, math.floor(omega_pi / 0.85) + 1)
        hi = max_size + extra
        return int(rng.integers(need, hi + 1))

    if regime == "below":
        count = int(rng.integers(lo_size + extra, max_size + extra + 1))
        omega = rng.uniform(0.25 * per * math.pi, per * math.pi - OMEGA_MARGIN)
        margin = min(ANGLE_MARGIN, 0.25 * omega / count)
        return random_angles(rng, count, omega, mode, margin=margin)
    if regime == "resonant1":
        return random_resonant(rng, count_for(per), per, mode)
    if regime == "between":
        omega = rng.uniform(per * math.pi + OMEGA_MARGIN, 2 * per * math.pi - OMEGA_MARGIN)
        return random_angles(rng, count_for(omega / math.pi), omega, mode)
    if regime == "resonant2":
        return random_resonant(rng, count_for(2 * per), 2 * per, mode)
    if regime == "above":
        count = count_for(2 * per + 0.1)
        cap = min(count * 0.85 * math.pi, 5 * per * math.pi)
        # stay clear of every resonance above 2P
        while True:
            omega = rng.uniform(2 * per * math.pi + OMEGA_MARGIN, cap)
            r = omega / (per * math.pi)
            if abs(r - round(r)) * per * math.pi > OMEGA_MARGIN:
                break
        return random_angles(rng, count, omega, mode)
    raise ValueError(f"unknown regime {regime!r}")
